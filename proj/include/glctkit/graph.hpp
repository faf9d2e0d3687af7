#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "glctkit/linalg.hpp"

namespace glctkit {

struct Edge {
    int u = 0;
    int v = 0;
    double w = 1.0;

    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Vertex count plus weighted edge list. Vertices are 0-indexed.
///
/// The constructor enforces the invariants: endpoints in range, no self-loops,
/// finite weights, and at most one edge per (ordered, or unordered when
/// undirected) vertex pair.
class Graph {
public:
    Graph(int n, std::vector<Edge> edges, bool directed);

    int size() const noexcept { return n_; }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    bool directed() const noexcept { return directed_; }

    friend bool operator==(const Graph&, const Graph&) = default;

private:
    int n_;
    std::vector<Edge> edges_;
    bool directed_;
};

using AdjacencyMatrix = CMatrix;
using Point2 = std::array<double, 2>;

/// Output of the random geometric generator.
struct GeometricGraph {
    Graph graph;
    std::vector<Point2> points;
    bool disconnected = false;  // warning flag, not an error
};

/// Output of the stochastic block model generator.
struct BlockGraph {
    Graph graph;
    std::vector<int> block;  // block label per vertex
};

/// Reads the edge-list format: first non-comment line `<n> <directed|undirected>`,
/// then `<u> <v> <w>` per line. `#` starts a comment.
Graph load_graph(const std::filesystem::path& path);
Graph parse_graph(std::istream& in);

void write_graph(const Graph& g, const std::filesystem::path& path);
void write_graph(const Graph& g, std::ostream& out);

Graph cycle_graph(int n, bool directed = false);

/// Uniform points in the unit square joined when closer than `radius`.
GeometricGraph random_geometric_graph(int n, double radius, std::uint64_t seed);

/// Symmetric k-nearest-neighbour graph with Gaussian weights
/// exp(-d^2 / sigma^2), sigma the mean k-th neighbour distance.
Graph knn_graph(const std::vector<std::vector<double>>& points, int k);

/// Swiss-roll point cloud in R^3.
std::vector<std::vector<double>> swiss_roll_points(int n, std::uint64_t seed);

/// Two-or-more-block stochastic block model, unit weights.
BlockGraph stochastic_block_model(const std::vector<int>& block_sizes, double p_in, double p_out,
                                  std::uint64_t seed);

AdjacencyMatrix adjacency(const Graph& g);

/// Combinatorial Laplacian D - A of the symmetrized weights.
CMatrix laplacian(const Graph& g);

bool is_connected(const Graph& g);

}  // namespace glctkit
