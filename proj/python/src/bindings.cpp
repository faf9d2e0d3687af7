#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "glctkit/clustering.hpp"
#include "glctkit/errors.hpp"
#include "glctkit/experiments.hpp"
#include "glctkit/glct.hpp"
#include "glctkit/graph.hpp"
#include "glctkit/localization.hpp"
#include "glctkit/sampling.hpp"
#include "glctkit/uncertainty.hpp"

namespace py = pybind11;
using namespace glctkit;

namespace {

BandlimitSpec band(const GlctOperator& op, int bandwidth) { return BandlimitSpec::first(bandwidth, op.size()); }

SamplingOperator sampler(const GlctOperator& op, const std::vector<int>& set) {
    return SamplingOperator(SamplingSet(set, op.size()));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Graph linear canonical transform toolkit";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

    py::class_<Graph>(m, "Graph")
        .def(py::init([](int n, const std::vector<std::tuple<int, int, double>>& edges, bool directed) {
                 std::vector<Edge> es;
                 for (const auto& [u, v, w] : edges) es.push_back({u, v, w});
                 return Graph(n, std::move(es), directed);
             }),
             py::arg("n"), py::arg("edges"), py::arg("directed") = false)
        .def_property_readonly("n", &Graph::size)
        .def_property_readonly("directed", &Graph::directed)
        .def_property_readonly("edges", [](const Graph& g) {
            std::vector<std::tuple<int, int, double>> out;
            for (const Edge& e : g.edges()) out.emplace_back(e.u, e.v, e.w);
            return out;
        })
        .def("__eq__", [](const Graph& a, const Graph& b) { return a == b; });

    m.def("load_graph", &load_graph, py::arg("path"));
    m.def("write_graph", py::overload_cast<const Graph&, const std::filesystem::path&>(&write_graph));
    m.def("cycle_graph", &cycle_graph, py::arg("n"), py::arg("directed") = false);
    m.def(
        "random_geometric_graph",
        [](int n, double radius, std::uint64_t seed) {
            GeometricGraph g = random_geometric_graph(n, radius, seed);
            return py::make_tuple(g.graph, g.points, g.disconnected);
        },
        py::arg("n"), py::arg("radius"), py::arg("seed"));
    m.def("knn_graph", &knn_graph, py::arg("points"), py::arg("k"));
    m.def("swiss_roll_points", &swiss_roll_points, py::arg("n"), py::arg("seed"));
    m.def(
        "stochastic_block_model",
        [](const std::vector<int>& sizes, double p_in, double p_out, std::uint64_t seed) {
            BlockGraph g = stochastic_block_model(sizes, p_in, p_out, seed);
            return py::make_tuple(g.graph, g.block);
        },
        py::arg("sizes"), py::arg("p_in"), py::arg("p_out"), py::arg("seed"));
    m.def("adjacency", &adjacency);
    m.def("laplacian", &laplacian);
    m.def("is_connected", &is_connected);

    py::class_<GlctParams>(m, "GlctParams")
        .def(py::init([](double alpha, double beta, double l, double f) {
                 GlctParams p{alpha, beta, l, f};
                 p.validate();
                 return p;
             }),
             py::arg("alpha") = 1.0, py::arg("beta") = 1.0, py::arg("chirp_l") = 0.0, py::arg("chirp_f") = 0.0)
        .def_readonly("alpha", &GlctParams::alpha)
        .def_readonly("beta", &GlctParams::beta)
        .def_readonly("chirp_l", &GlctParams::chirp_l)
        .def_readonly("chirp_f", &GlctParams::chirp_f)
        .def("__repr__", [](const GlctParams& p) {
            std::ostringstream s;
            s << "GlctParams(alpha=" << p.alpha << ", beta=" << p.beta << ", chirp_l=" << p.chirp_l
              << ", chirp_f=" << p.chirp_f << ")";
            return s.str();
        });
    m.def(
        "params_from_matrix",
        [](double a, double b, double c, double d) { return params_from_matrix({a, b, c, d}); },
        py::arg("a"), py::arg("b"), py::arg("c"), py::arg("d"));

    py::enum_<BasisKind>(m, "BasisKind")
        .value("Adjacency", BasisKind::Adjacency)
        .value("Laplacian", BasisKind::Laplacian);

    py::class_<GlctOperator>(m, "GlctOperator")
        .def_property_readonly("forward", &GlctOperator::forward)
        .def_property_readonly("inverse", &GlctOperator::inverse)
        .def_property_readonly("params", &GlctOperator::params)
        .def_property_readonly("size", &GlctOperator::size)
        .def_property_readonly("shift_values", [](const GlctOperator& op) { return op.basis().shift_values; })
        .def_property_readonly("gft", [](const GlctOperator& op) { return op.basis().gft; })
        .def("basis_hash", &GlctOperator::basis_hash);

    m.def("build_operator", py::overload_cast<const Graph&, const GlctParams&, BasisKind>(&build_operator),
          py::arg("graph"), py::arg("params"), py::arg("kind") = BasisKind::Adjacency);
    m.def("glct", &glct, py::arg("op"), py::arg("x"));
    m.def("iglct", &iglct, py::arg("op"), py::arg("xhat"));
    m.def("write_operator", &write_operator, py::arg("op"), py::arg("csv_path"), py::arg("json_path"));

    m.def(
        "vertex_limiter", [](int n, const std::vector<int>& s) { return vertex_limiter(VertexSet(s, n)).matrix; },
        py::arg("n"), py::arg("vertices"));
    m.def(
        "spectral_limiter",
        [](const GlctOperator& op, const std::vector<int>& f) {
            return spectral_limiter(SpectralSet(f, op.size()), op).matrix;
        },
        py::arg("op"), py::arg("band"));
    m.def(
        "corner_lambdas",
        [](const GlctOperator& op, const std::vector<int>& s, const std::vector<int>& f) {
            const CornerLambdas c = corner_lambdas(vertex_limiter(VertexSet(s, op.size())),
                                                   spectral_limiter(SpectralSet(f, op.size()), op));
            return py::make_tuple(c.lam_bdb, c.lam_bdbarb, c.lam_bbardbbar, c.lam_all_bar);
        },
        py::arg("op"), py::arg("vertices"), py::arg("band"));
    m.def(
        "concentration_pair",
        [](const GlctOperator& op, const SignalVector& x, const std::vector<int>& s, const std::vector<int>& f) {
            const ConcentrationPair p = concentration_pair(x, vertex_limiter(VertexSet(s, op.size())),
                                                           spectral_limiter(SpectralSet(f, op.size()), op));
            return py::make_tuple(p.zeta, p.eta);
        },
        py::arg("op"), py::arg("x"), py::arg("vertices"), py::arg("band"));
    m.def("lemma2_upper_bound", &lemma2_upper_bound, py::arg("zeta"), py::arg("lam_max"));

    m.def(
        "bandlimit", [](const SignalVector& y, const GlctOperator& op, int bw) { return bandlimit(y, op, band(op, bw)); },
        py::arg("y"), py::arg("op"), py::arg("bandwidth"));
    m.def(
        "greedy_select",
        [](const std::string& strategy, const GlctOperator& op, int bw, int m, std::uint64_t seed) {
            return greedy_select(parse_strategy(strategy), op, band(op, bw), m, seed).vertices();
        },
        py::arg("strategy"), py::arg("op"), py::arg("bandwidth"), py::arg("m"), py::arg("seed") = 0);
    m.def(
        "exhaustive_select",
        [](const std::string& strategy, const GlctOperator& op, int bw, int m) {
            return exhaustive_select(parse_strategy(strategy), op, band(op, bw), m).vertices();
        },
        py::arg("strategy"), py::arg("op"), py::arg("bandwidth"), py::arg("m"));
    m.def(
        "is_qualified",
        [](const GlctOperator& op, int bw, const std::vector<int>& set) {
            return is_qualified(sampler(op, set), op, band(op, bw));
        },
        py::arg("op"), py::arg("bandwidth"), py::arg("vertices"));
    m.def(
        "recovery_operator",
        [](const GlctOperator& op, int bw, const std::vector<int>& set) {
            return recovery_operator(sampler(op, set), op, band(op, bw)).matrix;
        },
        py::arg("op"), py::arg("bandwidth"), py::arg("vertices"));
    m.def(
        "recoverability_margin",
        [](const GlctOperator& op, int bw, const std::vector<int>& set) {
            return recoverability_margin(sampler(op, set), spectral_limiter(band(op, bw).set, op));
        },
        py::arg("op"), py::arg("bandwidth"), py::arg("vertices"));
    m.def(
        "sampled_adjacency",
        [](const GlctOperator& op, int bw, const std::vector<int>& set) {
            return sampled_adjacency(sampler(op, set), op, band(op, bw), op.basis().shift_values);
        },
        py::arg("op"), py::arg("bandwidth"), py::arg("vertices"));
    m.def("nmse", &nmse, py::arg("x"), py::arg("xr"));

    m.def(
        "kmeans",
        [](const RMatrix& points, int k, std::uint64_t seed) {
            KMeansResult r = kmeans(points, k, seed);
            return py::make_tuple(r.assignments, r.centroids, r.inertia);
        },
        py::arg("points"), py::arg("k"), py::arg("seed") = 0);
    m.def("silhouette", &silhouette, py::arg("points"), py::arg("assignments"));
    m.def(
        "classify_semi_supervised",
        [](const GlctOperator& op, const std::vector<int>& labels, int bw, int m, const std::string& strategy,
           std::uint64_t seed) {
            return classify_semi_supervised(op, labels, band(op, bw), m, parse_strategy(strategy), seed);
        },
        py::arg("op"), py::arg("labels"), py::arg("bandwidth"), py::arg("m"), py::arg("strategy") = "maxsigmin",
        py::arg("seed") = 0);

    m.def(
        "run_experiment",
        [](const std::string& config_json, const std::filesystem::path& base_dir) {
            const ExperimentConfig cfg = parse_config(config_json, base_dir);
            ExperimentResult r;
            {
                py::gil_scoped_release release;
                r = run_experiment(cfg);
            }
            return py::make_tuple(results_csv(r.rows), summary_json(cfg, r).dump(2), r.artifacts);
        },
        py::arg("config_json"), py::arg("base_dir") = std::filesystem::path{},
        "Runs an experiment config; returns (results_csv, summary_json, artifacts).");
}
