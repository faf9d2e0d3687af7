#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "glctkit/errors.hpp"
#include "glctkit/graph.hpp"

using namespace glctkit;

namespace {

Graph parse(const std::string& text) {
    std::istringstream in(text);
    return parse_graph(in);
}

}  // namespace

TEST(LoadGraph, ParsesFourCycle) {
    const Graph g = parse("4 undirected\n0 1 1.0\n1 2 1.0\n2 3 1.0\n3 0 1.0\n");
    EXPECT_EQ(g.size(), 4);
    EXPECT_FALSE(g.directed());
    EXPECT_EQ(g.edges().size(), 4u);
    const CMatrix a = adjacency(g);
    EXPECT_EQ(a, adjacency(cycle_graph(4)));
}

TEST(LoadGraph, CommentsAndBlankLines) {
    const Graph g = parse("# header follows\n\n3 directed  # trailing\n0 1 2.5 # edge\n\n");
    EXPECT_TRUE(g.directed());
    ASSERT_EQ(g.edges().size(), 1u);
    EXPECT_EQ(g.edges()[0], (Edge{0, 1, 2.5}));
}

TEST(LoadGraph, EmptyEdgeSection) {
    const Graph g = parse("3 undirected\n");
    EXPECT_EQ(g.size(), 3);
    EXPECT_TRUE(g.edges().empty());
    EXPECT_EQ(adjacency(g), CMatrix::Zero(3, 3));
}

TEST(LoadGraph, SelfLoopIsValidationError) {
    try {
        parse("2 undirected\n0 0 1.0\n");
        FAIL() << "expected ValidationError";
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("self-loop"), std::string::npos);
    }
}

TEST(LoadGraph, IndexBeyondDeclaredSizeIsValidationError) {
    EXPECT_THROW(parse("3 undirected\n0 3 1.0\n"), ValidationError);
}

TEST(LoadGraph, MalformedLineNamesLineNumber) {
    try {
        parse("3 undirected\n0 1 1.0\n1 two 1.0\n");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3u);
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
    }
    EXPECT_THROW(parse("3 sideways\n"), ParseError);
    EXPECT_THROW(parse("# only a comment\n"), ParseError);
    EXPECT_THROW(parse("3 undirected\n0 1 nan\n"), ValidationError);
}

TEST(LoadGraph, MissingFile) {
    EXPECT_THROW(load_graph("/nonexistent/graph.txt"), ValidationError);
}

TEST(GraphInvariants, DuplicateUndirectedPairRejected) {
    EXPECT_THROW(Graph(3, {{0, 1, 1.0}, {1, 0, 1.0}}, false), ValidationError);
    EXPECT_NO_THROW(Graph(3, {{0, 1, 1.0}, {1, 0, 1.0}}, true));
    EXPECT_THROW(Graph(3, {{0, 1, INFINITY}}, false), ValidationError);
}

TEST(WriteGraph, RoundTripsExactly) {
    const Graph g(5, {{0, 1, 0.1}, {1, 2, 1.0 / 3.0}, {3, 4, -2.75e-7}, {0, 4, 1e300}}, false);
    std::stringstream buf;
    write_graph(g, buf);
    EXPECT_EQ(parse_graph(buf), g);

    const Graph d(3, {{0, 1, 2.0}, {2, 1, 0.5}}, true);
    const auto path = std::filesystem::temp_directory_path() / "glctkit_roundtrip_graph.txt";
    write_graph(d, path);
    EXPECT_EQ(load_graph(path), d);
    std::filesystem::remove(path);
}

TEST(CycleGraph, Triangle) {
    const Graph g = cycle_graph(3);
    EXPECT_EQ(g.edges().size(), 3u);
    CMatrix expected(3, 3);
    expected << 0, 1, 1, 1, 0, 1, 1, 1, 0;
    EXPECT_EQ(adjacency(g), expected);
}

TEST(CycleGraph, ThirtyTwoVerticesDegreeTwo) {
    const Graph g = cycle_graph(32);
    EXPECT_EQ(g.edges().size(), 32u);
    const CMatrix a = adjacency(g);
    for (int i = 0; i < 32; ++i) {
        EXPECT_EQ(a.row(i).sum(), Complex(2.0, 0.0));
    }
}

TEST(CycleGraph, FourCycleSpectrum) {
    const Eigen::SelfAdjointEigenSolver<RMatrix> es(adjacency(cycle_graph(4)).real());
    const RVector ev = es.eigenvalues();  // ascending
    EXPECT_NEAR(ev(0), -2.0, 1e-12);
    EXPECT_NEAR(ev(1), 0.0, 1e-12);
    EXPECT_NEAR(ev(2), 0.0, 1e-12);
    EXPECT_NEAR(ev(3), 2.0, 1e-12);
}

TEST(CycleGraph, RejectsSmallN) { EXPECT_THROW(cycle_graph(2), ValidationError); }

TEST(CycleGraph, DirectedVariant) {
    const Graph g = cycle_graph(5, true);
    const CMatrix a = adjacency(g);
    EXPECT_EQ(a(0, 1), Complex(1.0, 0.0));
    EXPECT_EQ(a(1, 0), Complex(0.0, 0.0));
    EXPECT_EQ(a(4, 0), Complex(1.0, 0.0));
}

TEST(RandomGeometricGraph, TwoPointsMaxRadius) {
    for (std::uint64_t seed : {0u, 1u, 99u}) {
        const GeometricGraph g = random_geometric_graph(2, std::sqrt(2.0), seed);
        EXPECT_EQ(g.graph.edges().size(), 1u);
        EXPECT_FALSE(g.disconnected);
    }
}

TEST(RandomGeometricGraph, GoldenEdgeCount) {
    const GeometricGraph g = random_geometric_graph(100, 0.2, 7);
    EXPECT_EQ(g.graph.edges().size(), 480u);
    EXPECT_FALSE(g.disconnected);
    // Independent recount from the returned coordinates.
    std::size_t count = 0;
    for (int i = 0; i < 100; ++i) {
        for (int j = i + 1; j < 100; ++j) {
            const double dx = g.points[i][0] - g.points[j][0];
            const double dy = g.points[i][1] - g.points[j][1];
            count += std::hypot(dx, dy) < 0.2 ? 1 : 0;
        }
    }
    EXPECT_EQ(count, 480u);
}

TEST(RandomGeometricGraph, DeterministicAndValidated) {
    EXPECT_EQ(random_geometric_graph(50, 0.3, 4).graph, random_geometric_graph(50, 0.3, 4).graph);
    EXPECT_THROW(random_geometric_graph(10, 0.0, 1), ValidationError);
    EXPECT_THROW(random_geometric_graph(10, 1.5, 1), ValidationError);
    EXPECT_THROW(random_geometric_graph(1, 0.5, 1), ValidationError);
}

TEST(RandomGeometricGraph, DisconnectedIsFlaggedNotThrown) {
    const GeometricGraph g = random_geometric_graph(30, 0.01, 3);
    EXPECT_TRUE(g.disconnected);
    EXPECT_FALSE(is_connected(g.graph));
}

TEST(KnnGraph, CollinearPointsGivePath) {
    const Graph g = knn_graph({{0.0}, {1.0}, {3.0}}, 1);
    ASSERT_EQ(g.edges().size(), 2u);
    EXPECT_EQ(g.edges()[0].u, 0);
    EXPECT_EQ(g.edges()[0].v, 1);
    EXPECT_EQ(g.edges()[1].u, 1);
    EXPECT_EQ(g.edges()[1].v, 2);
    // sigma = mean nearest distance = (1 + 1 + 2) / 3
    const double sigma = 4.0 / 3.0;
    EXPECT_NEAR(g.edges()[1].w, std::exp(-4.0 / (sigma * sigma)), 1e-15);
}

TEST(KnnGraph, SwissRollGolden) {
    const Graph g = knn_graph(swiss_roll_points(256, 11), 6);
    EXPECT_EQ(g.size(), 256);
    EXPECT_EQ(g.edges().size(), 922u);
    EXPECT_TRUE(is_connected(g));
}

TEST(KnnGraph, Preconditions) {
    EXPECT_THROW(knn_graph({{0.0}, {1.0}}, 0), ValidationError);
    EXPECT_THROW(knn_graph({{0.0}, {1.0}}, 2), ValidationError);
    const Graph dup = knn_graph({{0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}}, 1);
    for (const Edge& e : dup.edges()) {
        EXPECT_EQ(e.w, 1.0);
    }
}

TEST(Adjacency, DirectedEdge) {
    const CMatrix a = adjacency(Graph(2, {{0, 1, 2.0}}, true));
    EXPECT_EQ(a(0, 1), Complex(2.0, 0.0));
    EXPECT_EQ(a(1, 0), Complex(0.0, 0.0));
    EXPECT_EQ(adjacency(Graph(2, {}, false)), CMatrix::Zero(2, 2));
}

TEST(Adjacency, UndirectedIsExactlySymmetric) {
    const Graph g = knn_graph(swiss_roll_points(64, 3), 4);
    const CMatrix a = adjacency(g);
    EXPECT_TRUE((a.array() == a.transpose().array()).all());
    EXPECT_TRUE((a.diagonal().array() == Complex(0.0, 0.0)).all());
}

TEST(Laplacian, RowsSumToZero) {
    const CMatrix l = laplacian(knn_graph(swiss_roll_points(40, 5), 3));
    EXPECT_LT(l.rowwise().sum().norm(), 1e-12);
}

TEST(StochasticBlockModel, BlocksAndDeterminism) {
    const BlockGraph a = stochastic_block_model({10, 15}, 0.5, 0.05, 3);
    EXPECT_EQ(a.graph.size(), 25);
    EXPECT_EQ(a.block[9], 0);
    EXPECT_EQ(a.block[10], 1);
    EXPECT_EQ(a.graph, stochastic_block_model({10, 15}, 0.5, 0.05, 3).graph);
    const BlockGraph full = stochastic_block_model({4, 4}, 1.0, 0.0, 1);
    EXPECT_EQ(full.graph.edges().size(), 12u);
    EXPECT_THROW(stochastic_block_model({4}, 1.5, 0.0, 1), ValidationError);
}
