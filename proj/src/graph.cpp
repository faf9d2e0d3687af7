#include "glctkit/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>

#include "glctkit/errors.hpp"
#include "glctkit/io.hpp"

namespace glctkit {

Graph::Graph(int n, std::vector<Edge> edges, bool directed)
    : n_(n), edges_(std::move(edges)), directed_(directed) {
    if (n_ <= 0) {
        throw ValidationError("graph must have at least one vertex");
    }
    std::set<std::pair<int, int>> seen;
    for (const Edge& e : edges_) {
        if (e.u < 0 || e.v < 0 || e.u >= n_ || e.v >= n_) {
            throw ValidationError("edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                                  ") out of range for n=" + std::to_string(n_));
        }
        if (e.u == e.v) {
            throw ValidationError("self-loop at vertex " + std::to_string(e.u));
        }
        if (!std::isfinite(e.w)) {
            throw ValidationError("non-finite edge weight");
        }
        std::pair<int, int> key = directed_ ? std::pair{e.u, e.v} : std::pair{std::min(e.u, e.v), std::max(e.u, e.v)};
        if (!seen.insert(key).second) {
            throw ValidationError("duplicate edge (" + std::to_string(e.u) + ", " +
                                  std::to_string(e.v) + ")");
        }
    }
}

namespace {

std::string strip_comment(const std::string& line) {
    const auto hash = line.find('#');
    return hash == std::string::npos ? line : line.substr(0, hash);
}

bool blank(const std::string& s) {
    return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

template <typename T>
bool parse_token(const std::string& tok, T& out) {
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

}  // namespace

Graph parse_graph(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;
    int n = -1;
    bool directed = false;
    std::vector<Edge> edges;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string body = strip_comment(line);
        if (blank(body)) {
            continue;
        }
        std::istringstream ls(body);
        std::vector<std::string> toks;
        for (std::string t; ls >> t;) {
            toks.push_back(t);
        }
        if (n < 0) {
            if (toks.size() != 2 || !parse_token(toks[0], n) || n <= 0) {
                throw ParseError(lineno, "expected header '<n> <directed|undirected>'");
            }
            if (toks[1] == "directed") {
                directed = true;
            } else if (toks[1] != "undirected") {
                throw ParseError(lineno, "expected 'directed' or 'undirected', got '" + toks[1] + "'");
            }
            continue;
        }
        Edge e;
        if (toks.size() != 3 || !parse_token(toks[0], e.u) || !parse_token(toks[1], e.v) ||
            !parse_token(toks[2], e.w)) {
            throw ParseError(lineno, "expected '<u> <v> <w>'");
        }
        if (e.u == e.v) {
            throw ValidationError("line " + std::to_string(lineno) + ": self-loop at vertex " +
                                  std::to_string(e.u));
        }
        if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n) {
            throw ValidationError("line " + std::to_string(lineno) + ": vertex index out of range for n=" +
                                  std::to_string(n));
        }
        edges.push_back(e);
    }
    if (n < 0) {
        throw ParseError(lineno, "missing header line");
    }
    return Graph(n, std::move(edges), directed);
}

Graph load_graph(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("cannot open graph file '" + path.string() + "'");
    }
    return parse_graph(in);
}

void write_graph(const Graph& g, std::ostream& out) {
    out << g.size() << ' ' << (g.directed() ? "directed" : "undirected") << '\n';
    for (const Edge& e : g.edges()) {
        out << e.u << ' ' << e.v << ' ' << io::format_double(e.w) << '\n';
    }
}

void write_graph(const Graph& g, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw ValidationError("cannot write graph file '" + path.string() + "'");
    }
    write_graph(g, out);
}

Graph cycle_graph(int n, bool directed) {
    if (n < 3) {
        throw ValidationError("cycle graph needs n >= 3");
    }
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        edges.push_back({i, (i + 1) % n, 1.0});
    }
    return Graph(n, std::move(edges), directed);
}

GeometricGraph random_geometric_graph(int n, double radius, std::uint64_t seed) {
    if (n < 2) {
        throw ValidationError("random geometric graph needs n >= 2");
    }
    if (!(radius > 0.0) || radius > std::sqrt(2.0)) {
        throw ValidationError("radius must lie in (0, sqrt(2)]");
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Point2> pts(static_cast<std::size_t>(n));
    for (auto& p : pts) {
        p[0] = unit(rng);
        p[1] = unit(rng);
    }
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double dx = pts[i][0] - pts[j][0];
            const double dy = pts[i][1] - pts[j][1];
            if (std::hypot(dx, dy) < radius) {
                edges.push_back({i, j, 1.0});
            }
        }
    }
    GeometricGraph out{Graph(n, std::move(edges), false), std::move(pts), false};
    out.disconnected = !is_connected(out.graph);
    return out;
}

Graph knn_graph(const std::vector<std::vector<double>>& points, int k) {
    const int n = static_cast<int>(points.size());
    if (k <= 0) {
        throw ValidationError("k must be positive");
    }
    if (k >= n) {
        throw ValidationError("k must be smaller than the number of points");
    }
    const std::size_t dim = points.front().size();
    for (const auto& p : points) {
        if (p.size() != dim) {
            throw ValidationError("points must share one dimension");
        }
    }
    auto dist = [&](int a, int b) {
        double s = 0.0;
        for (std::size_t d = 0; d < dim; ++d) {
            const double t = points[a][d] - points[b][d];
            s += t * t;
        }
        return std::sqrt(s);
    };

    std::set<std::pair<int, int>> pairs;
    double kth_sum = 0.0;
    std::vector<std::pair<double, int>> cand;
    for (int i = 0; i < n; ++i) {
        cand.clear();
        for (int j = 0; j < n; ++j) {
            if (j != i) {
                cand.emplace_back(dist(i, j), j);
            }
        }
        // (distance, index) ordering breaks distance ties by smaller index.
        std::partial_sort(cand.begin(), cand.begin() + k, cand.end());
        kth_sum += cand[static_cast<std::size_t>(k - 1)].first;
        for (int t = 0; t < k; ++t) {
            pairs.insert(std::minmax(i, cand[static_cast<std::size_t>(t)].second));
        }
    }
    const double sigma = kth_sum / n;
    std::vector<Edge> edges;
    edges.reserve(pairs.size());
    for (const auto& [a, b] : pairs) {
        const double d = dist(a, b);
        const double w = sigma > 0.0 ? std::exp(-(d * d) / (sigma * sigma)) : 1.0;
        edges.push_back({a, b, w});
    }
    return Graph(n, std::move(edges), false);
}

std::vector<std::vector<double>> swiss_roll_points(int n, std::uint64_t seed) {
    if (n <= 0) {
        throw ValidationError("swiss roll needs n >= 1");
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double pi = std::acos(-1.0);
    std::vector<std::vector<double>> pts;
    pts.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double t = 1.5 * pi * (1.0 + 2.0 * unit(rng));
        const double h = 21.0 * unit(rng);
        pts.push_back({t * std::cos(t), h, t * std::sin(t)});
    }
    return pts;
}

BlockGraph stochastic_block_model(const std::vector<int>& block_sizes, double p_in, double p_out,
                                  std::uint64_t seed) {
    if (block_sizes.empty()) {
        throw ValidationError("block model needs at least one block");
    }
    if (!(p_in >= 0.0 && p_in <= 1.0 && p_out >= 0.0 && p_out <= 1.0)) {
        throw ValidationError("edge probabilities must lie in [0, 1]");
    }
    std::vector<int> block;
    for (std::size_t b = 0; b < block_sizes.size(); ++b) {
        if (block_sizes[b] <= 0) {
            throw ValidationError("block sizes must be positive");
        }
        block.insert(block.end(), static_cast<std::size_t>(block_sizes[b]), static_cast<int>(b));
    }
    const int n = static_cast<int>(block.size());
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double p = block[i] == block[j] ? p_in : p_out;
            if (unit(rng) < p) {
                edges.push_back({i, j, 1.0});
            }
        }
    }
    return {Graph(n, std::move(edges), false), std::move(block)};
}

AdjacencyMatrix adjacency(const Graph& g) {
    AdjacencyMatrix a = AdjacencyMatrix::Zero(g.size(), g.size());
    for (const Edge& e : g.edges()) {
        a(e.u, e.v) = e.w;
        if (!g.directed()) {
            a(e.v, e.u) = e.w;
        }
    }
    return a;
}

CMatrix laplacian(const Graph& g) {
    const CMatrix a = adjacency(g);
    const CMatrix sym = g.directed() ? CMatrix(0.5 * (a + a.transpose())) : a;
    CMatrix l = -sym;
    for (Eigen::Index i = 0; i < l.rows(); ++i) {
        l(i, i) = sym.row(i).sum();
    }
    return l;
}

bool is_connected(const Graph& g) {
    const int n = g.size();
    std::vector<std::vector<int>> nbr(static_cast<std::size_t>(n));
    for (const Edge& e : g.edges()) {
        nbr[e.u].push_back(e.v);
        nbr[e.v].push_back(e.u);
    }
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (int w : nbr[v]) {
            if (!seen[w]) {
                seen[w] = 1;
                ++count;
                stack.push_back(w);
            }
        }
    }
    return count == n;
}

}  // namespace glctkit
