#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

#include "glctkit/errors.hpp"
#include "glctkit/glct.hpp"
#include "glctkit/graph.hpp"

using namespace glctkit;

namespace {

constexpr double kPi = std::numbers::pi;

CVector random_signal(int n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    CVector x(n);
    for (int i = 0; i < n; ++i) {
        x(i) = Complex(g(rng), g(rng));
    }
    return x;
}

Graph sensor_graph() { return random_geometric_graph(40, 0.3, 21).graph; }

}  // namespace

TEST(Glct, ReconstructsAcrossParameters) {
    const Graph g = sensor_graph();
    const CVector x = random_signal(g.size(), 1);
    const GlctParams cases[] = {
        {1.0, 1.0, 0.0, 0.0}, {0.8, 32.0, 0.5, 1.0}, {0.3, 0.1, -1.25, 2.0}, {-0.7, 3.0, 0.0, 0.5}};
    for (const GlctParams& p : cases) {
        const GlctOperator op = build_operator(g, p);
        const CVector back = iglct(op, glct(op, x));
        EXPECT_LT((back - x).norm() / x.norm(), 1e-10);
        EXPECT_LT((op.inverse() * op.forward() - CMatrix::Identity(g.size(), g.size())).norm(), 1e-10);
    }
}

TEST(Glct, UnitaryForUndirectedGraphs) {
    const GlctOperator op = build_operator(sensor_graph(), {0.8, 32.0, 0.5, 1.0});
    EXPECT_TRUE(op.basis().unitary);
    const int n = op.size();
    EXPECT_LT((op.forward().adjoint() * op.forward() - CMatrix::Identity(n, n)).norm(), 1e-10);
    const CVector x = random_signal(n, 2);
    EXPECT_NEAR(glct(op, x).norm(), x.norm(), 1e-10 * x.norm());
}

TEST(Glct, SingleVertexChirp) {
    const Graph g(1, {}, false);
    const GlctOperator op = build_operator(g, {0.0, 1.0, 0.0, 1.0});
    ASSERT_EQ(op.size(), 1);
    EXPECT_NEAR(std::abs(op.forward()(0, 0) - Complex(0.0, 1.0)), 0.0, 1e-15);
    CVector x(1);
    x << 1.0;
    EXPECT_NEAR(std::abs(glct(op, x)(0) - Complex(0.0, 1.0)), 0.0, 1e-15);
}

TEST(Glct, ChirpDiagQuarterTurns) {
    const CVector c = chirp_diag(4, 0.0, 1.0);
    EXPECT_EQ(c(0), Complex(0.0, 1.0));
    EXPECT_EQ(c(1), Complex(-1.0, 0.0));
    EXPECT_EQ(c(2), Complex(0.0, -1.0));
    EXPECT_EQ(c(3), Complex(1.0, 0.0));
    const CVector half = chirp_diag(1, 0.0, 0.5);
    EXPECT_NEAR(std::abs(half(0) - std::polar(1.0, kPi / 4.0)), 0.0, 1e-15);
    EXPECT_THROW(chirp_diag(3, NAN, 0.0), ValidationError);
}

TEST(Glct, FractionalPowerPrincipalBranch) {
    CVector lam(3);
    lam << std::polar(1.0, kPi / 3.0), Complex(-1.0, -0.0), Complex(4.0, 0.0);
    const CVector half = fractional_diag(lam, 0.5);
    EXPECT_NEAR(std::abs(half(0) - std::polar(1.0, kPi / 6.0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(half(1) - Complex(0.0, 1.0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(half(2) - Complex(2.0, 0.0)), 0.0, 1e-15);
    const CVector one = fractional_diag(lam, 1.0);
    EXPECT_EQ(one, lam);
    const CVector zero = fractional_diag(lam, 0.0);
    EXPECT_EQ(zero, CVector::Ones(3));
}

TEST(Glct, ZeroEigenvalueWithNegativeOrderIsNumericalError) {
    CVector lam(2);
    lam << 0.0, 1.0;
    EXPECT_THROW(fractional_diag(lam, -0.5), NumericalError);
    EXPECT_EQ(fractional_diag(lam, 0.5)(0), Complex(0.0, 0.0));
}

TEST(Glct, AlphaOneNeutralStagesGiveGft) {
    const GlctOperator op = build_operator(sensor_graph(), GlctParams::gft());
    EXPECT_LT((op.forward() - op.basis().gft).norm(), 1e-12);
    EXPECT_LT((op.forward() - op.basis().shift_vectors.adjoint()).norm(), 1e-12);
}

TEST(Glct, AlphaZeroIsChirpOnly) {
    const Graph g = sensor_graph();
    const GlctOperator op = build_operator(g, {0.0, 5.0, 0.25, 0.5});
    const CVector chirp = chirp_diag(g.size(), 0.25, 0.5);
    EXPECT_LT((op.forward() - CMatrix(chirp.asDiagonal())).norm(), 1e-12);
}

TEST(Glct, GfrftComposesAdditively) {
    const Graph g = sensor_graph();
    const GlctOperator a = build_operator(g, GlctParams::gfrft(0.3));
    const GlctOperator b = build_operator(g, GlctParams::gfrft(0.5));
    const GlctOperator ab = build_operator(g, GlctParams::gfrft(0.8));
    EXPECT_LT((a.forward() * b.forward() - ab.forward()).norm(), 1e-10);
}

TEST(Glct, DirectedCycleGftMatchesDft) {
    const int n = 8;
    const GlctOperator op = build_operator(cycle_graph(n, true), GlctParams::gft());
    CMatrix dft(n, n);
    for (int k = 0; k < n; ++k) {
        for (int t = 0; t < n; ++t) {
            dft(k, t) = std::polar(1.0 / std::sqrt(n), -2.0 * kPi * k * t / n);
        }
    }
    for (int r = 0; r < n; ++r) {
        const CVector row = op.forward().row(r).transpose();
        double best = 0.0;
        for (int k = 0; k < n; ++k) {
            best = std::max(best, std::abs(dft.row(k).conjugate().dot(row.transpose())) / row.norm());
        }
        EXPECT_NEAR(best, 1.0, 1e-10) << "row " << r;
    }
}

TEST(Glct, RotationEigenvaluesAsMultiset) {
    CMatrix rot(2, 2);
    rot << 0.0, -1.0, 1.0, 0.0;
    const EigenPairs e = decompose_adjacency(rot);
    ASSERT_EQ(e.values.size(), 2);
    EXPECT_NEAR(std::abs(e.values(0) - Complex(0.0, -1.0)), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(e.values(1) - Complex(0.0, 1.0)), 0.0, 1e-12);
    EXPECT_LT((rot * e.vectors - e.vectors * e.values.asDiagonal()).norm(), 1e-12);
}

TEST(Glct, EigenvectorGaugeIsFixed) {
    const EigenPairs e = decompose_adjacency(adjacency(sensor_graph()));
    for (Eigen::Index j = 0; j < e.vectors.cols(); ++j) {
        // pivot: first entry within 1e-9 of the largest magnitude
        const double top = e.vectors.col(j).cwiseAbs().maxCoeff();
        Eigen::Index i = 0;
        while (std::abs(e.vectors(i, j)) < top * (1.0 - 1e-9)) ++i;
        EXPECT_GT(e.vectors(i, j).real(), 0.0);
        EXPECT_EQ(e.vectors(i, j).imag(), 0.0);
    }
    for (Eigen::Index j = 1; j < e.values.size(); ++j) {
        EXPECT_GE(e.values(j - 1).real() + 1e-9, e.values(j).real());
    }
}

TEST(Glct, LaplacianBasisAscending) {
    const GlctOperator op = build_operator(sensor_graph(), GlctParams::gft(), BasisKind::Laplacian);
    const CVector& lam = op.basis().shift_values;
    EXPECT_NEAR(lam(0).real(), 0.0, 1e-10);
    for (Eigen::Index j = 1; j < lam.size(); ++j) {
        EXPECT_LE(lam(j - 1).real(), lam(j).real() + 1e-9);
    }
}

TEST(Glct, DirectedNonNormalAdjacencyStillInverts) {
    const Graph g(4, {{0, 1, 1.0}, {1, 2, 2.0}, {2, 3, 0.5}, {3, 0, 1.5}, {0, 2, 0.3}}, true);
    const GlctOperator op = build_operator(g, {0.6, 2.0, 0.1, 0.2});
    EXPECT_FALSE(op.basis().unitary);
    EXPECT_LT((op.inverse() * op.forward() - CMatrix::Identity(4, 4)).norm(), 1e-9);
}

TEST(Glct, DefectiveAdjacencyIsNumericalError) {
    // Nilpotent path: a single Jordan block.
    const Graph g(3, {{0, 1, 1.0}, {1, 2, 1.0}}, true);
    EXPECT_THROW(build_operator(g, GlctParams::gft()), NumericalError);
}

TEST(Glct, ParameterValidation) {
    const Graph g = cycle_graph(4);
    EXPECT_THROW(build_operator(g, {1.0, 0.0, 0.0, 0.0}), ValidationError);
    EXPECT_THROW(build_operator(g, {NAN, 1.0, 0.0, 0.0}), ValidationError);
    EXPECT_THROW(glct(build_operator(g, GlctParams::gft()), CVector::Zero(3)), ValidationError);
}

TEST(ParamsFromMatrix, Examples) {
    const GlctParams id = params_from_matrix({1.0, 0.0, 0.0, 1.0});
    EXPECT_EQ(id.alpha, 0.0);
    EXPECT_EQ(id.beta, 1.0);
    EXPECT_EQ(id.chirp_f, 0.0);

    const GlctParams rot = params_from_matrix({0.0, 1.0, -1.0, 0.0});
    EXPECT_NEAR(rot.alpha, kPi / 2.0, 1e-15);
    EXPECT_NEAR(rot.beta, 1.0, 1e-15);
    EXPECT_NEAR(rot.chirp_f, 0.0, 1e-15);

    const double th = 0.3;
    const GlctParams turn = params_from_matrix({std::cos(th), std::sin(th), -std::sin(th), std::cos(th)});
    EXPECT_NEAR(turn.alpha, th, 1e-15);
    EXPECT_NEAR(turn.beta, 1.0, 1e-15);
    EXPECT_NEAR(turn.chirp_f, 0.0, 1e-15);

    const GlctParams scale = params_from_matrix({2.0, 0.0, 0.0, 0.5});
    EXPECT_EQ(scale.beta, 2.0);
    EXPECT_EQ(scale.alpha, 0.0);

    const GlctParams shear = params_from_matrix({1.0, 0.0, 1.0, 1.0});
    EXPECT_EQ(shear.chirp_f, 1.0);

    EXPECT_THROW(params_from_matrix({1.0, 1.0, 1.0, 1.0}), ValidationError);
}

TEST(WriteOperator, CsvRoundTripsBits) {
    const GlctOperator op = build_operator(cycle_graph(6), {0.8, 32.0, 0.5, 1.0});
    const auto dir = std::filesystem::temp_directory_path();
    const auto csv = dir / "glctkit_op_test.csv";
    const auto json = dir / "glctkit_op_test.json";
    write_operator(op, csv, json);
    EXPECT_EQ(read_operator_matrix(csv), op.forward());
    std::ifstream in(json);
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    EXPECT_NE(text.find("basis_hash"), std::string::npos);
    std::filesystem::remove(csv);
    std::filesystem::remove(json);
}
