#include "glctkit/experiments.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <tuple>

#include "glctkit/errors.hpp"
#include "glctkit/io.hpp"
#include "glctkit/localization.hpp"
#include "glctkit/parallel.hpp"
#include "glctkit/uncertainty.hpp"

namespace glctkit {

using nlohmann::ordered_json;

namespace {

constexpr double kPerfectSweep = 1e-10;
constexpr double kPerfectTable = 1e-12;
constexpr double kMismatchTable = 1e-2;
constexpr double kRowAgreement = 1e-9;
constexpr double kSlackTol = 1e-9;

// Seed streams, so that signals, noise and random draws never share a generator state.
enum Stream : std::uint64_t { kRandomDraw = 1, kSignal = 2, kNoise = 3, kFeature = 4, kKMeans = 5 };

bool is_deterministic(Strategy s) { return s != Strategy::Random; }

double median(std::vector<double> v) {
    if (v.empty()) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    std::sort(v.begin(), v.end());
    const std::size_t h = v.size() / 2;
    return v.size() % 2 == 1 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

std::string fmt(double v) { return io::format_double(v); }

void check_samples(const ExperimentConfig& cfg, int n) {
    if (cfg.bandwidth < 1 || cfg.bandwidth > n) {
        throw ValidationError("bandwidth " + std::to_string(cfg.bandwidth) + " must lie in [1, " +
                              std::to_string(n) + "]");
    }
    for (int m : cfg.samples) {
        if (m < 1 || m > n) {
            throw ValidationError("sample size " + std::to_string(m) + " must lie in [1, " +
                                  std::to_string(n) + "]");
        }
    }
}

int max_samples(const ExperimentConfig& cfg) {
    return cfg.samples.empty() ? 0 : *std::max_element(cfg.samples.begin(), cfg.samples.end());
}

// One selection per strategy at the largest budget; smaller budgets use prefixes.
// Exhaustive search is the exception and is re-run per budget.
struct Selections {
    std::vector<std::optional<SamplingSet>> full;  // per strategy, deterministic only
};

Selections select_all(const ExperimentConfig& cfg, const GlctOperator& op, const BandlimitSpec& spec) {
    Selections out;
    const int mmax = max_samples(cfg);
    for (Strategy s : cfg.strategies) {
        if (s == Strategy::Random || s == Strategy::Exhaustive) {
            out.full.emplace_back(std::nullopt);
        } else {
            out.full.emplace_back(greedy_select(s, op, spec, mmax));
        }
    }
    return out;
}

SamplingSet selection_for(const ExperimentConfig& cfg, const Selections& sel, std::size_t si,
                          const GlctOperator& op, const BandlimitSpec& spec, int m, int trial) {
    const Strategy s = cfg.strategies[si];
    if (s == Strategy::Random) {
        return greedy_select(s, op, spec, max_samples(cfg),
                             derive_seed(cfg.seed, kRandomDraw, static_cast<std::uint64_t>(trial)))
            .prefix(m);
    }
    if (s == Strategy::Exhaustive) {
        throw ValidationError("exhaustive strategy needs an objective; use exhaustive_select directly");
    }
    return sel.full[si]->prefix(m);
}

SignalVector random_bandlimited(const GlctOperator& op, const BandlimitSpec& spec, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    for (int attempt = 0; attempt < 8; ++attempt) {
        SignalVector x = bandlimit(complex_gaussian(op.size(), 1.0, rng), op, spec);
        if (x.norm() > 0.0) {
            return x;
        }
    }
    throw NumericalError("could not draw a nonzero bandlimited signal");
}

std::string failure_message(const std::string& where, const std::exception& e) {
    return where + ": " + e.what();
}

struct Cell {
    bool ok = false;
    double value = 0.0;
    double noiseless = 0.0;
    std::string error;
};

void add_assertion(ExperimentResult& r, std::string name, bool passed, std::string detail) {
    r.assertions.push_back({std::move(name), passed, std::move(detail)});
}

std::vector<int> sorted_unique(std::vector<int> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

std::vector<int> read_labels(const std::filesystem::path& path, int n) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("cannot open labels file '" + path.string() + "'");
    }
    std::string line;
    std::getline(in, line);
    if (io::split_csv_line(line) != std::vector<std::string>{"vertex", "label"}) {
        throw ParseError(1, "expected header 'vertex,label'");
    }
    std::vector<int> labels;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) {
            continue;
        }
        const auto cells = io::split_csv_line(line);
        if (cells.size() != 2) {
            throw ParseError(lineno, "expected 2 fields");
        }
        try {
            const int v = std::stoi(cells[0]);
            const int l = std::stoi(cells[1]);
            if (v != static_cast<int>(labels.size())) {
                throw ParseError(lineno, "vertices must be listed in ascending order from 0");
            }
            labels.push_back(l);
        } catch (const std::logic_error&) {
            throw ParseError(lineno, "malformed integer");
        }
    }
    if (static_cast<int>(labels.size()) != n) {
        throw ValidationError("labels file has " + std::to_string(labels.size()) +
                              " rows, graph has " + std::to_string(n) + " vertices");
    }
    return labels;
}

}  // namespace

// ---------------------------------------------------------------- config

std::string to_string(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::Sweep: return "sweep";
        case ExperimentKind::Table: return "table";
        case ExperimentKind::Classify: return "classify";
        case ExperimentKind::Cluster: return "cluster";
        case ExperimentKind::Region: return "uncertainty";
    }
    return "?";
}

std::string to_string(BasisVariant b) {
    switch (b) {
        case BasisVariant::Glct: return "GLCT";
        case BasisVariant::Gft: return "GFT";
        case BasisVariant::Gfrft: return "GFRFT";
        case BasisVariant::Laplacian: return "Laplacian";
    }
    return "?";
}

BasisVariant parse_basis(const std::string& name) {
    std::string key;
    for (char c : name) {
        key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    if (key == "glct") return BasisVariant::Glct;
    if (key == "gft") return BasisVariant::Gft;
    if (key == "gfrft") return BasisVariant::Gfrft;
    if (key == "laplacian") return BasisVariant::Laplacian;
    throw ValidationError("unknown basis '" + name + "'");
}

namespace {

ExperimentKind parse_kind(const std::string& s) {
    if (s == "sweep") return ExperimentKind::Sweep;
    if (s == "table") return ExperimentKind::Table;
    if (s == "classify") return ExperimentKind::Classify;
    if (s == "cluster") return ExperimentKind::Cluster;
    if (s == "uncertainty" || s == "region") return ExperimentKind::Region;
    throw ValidationError("unknown experiment '" + s + "'");
}

void reject_unknown(const nlohmann::json& obj, const std::set<std::string>& allowed, const std::string& where) {
    if (!obj.is_object()) {
        throw ValidationError(where + " must be a JSON object");
    }
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.count(key)) {
            throw ValidationError("unknown key '" + key + "' in " + where);
        }
    }
}

template <typename T>
T field(const nlohmann::json& obj, const char* key, const std::string& where) {
    try {
        return obj.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(where + "." + key + ": " + e.what());
    }
}

template <typename T>
T field_or(const nlohmann::json& obj, const char* key, T fallback, const std::string& where) {
    return obj.contains(key) ? field<T>(obj, key, where) : fallback;
}

}  // namespace

void ExperimentConfig::validate() const {
    params.validate();
    if (id.empty()) {
        throw ValidationError("config id must be non-empty");
    }
    if (bandwidth < 1) {
        throw ValidationError("bandwidth must be positive");
    }
    if (trials < 1) {
        throw ValidationError("trials must be at least 1");
    }
    if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) {
        throw ValidationError("noise_sigma must be finite and non-negative");
    }
    if (bases.empty()) {
        throw ValidationError("bases must list at least one basis");
    }
    if (gfrft_alpha && !std::isfinite(*gfrft_alpha)) {
        throw ValidationError("gfrft_alpha must be finite");
    }
    if (experiment != ExperimentKind::Region) {
        if (strategies.empty()) {
            throw ValidationError("strategies must list at least one strategy");
        }
        if (samples.empty()) {
            throw ValidationError("samples must list at least one sample size");
        }
        for (Strategy s : strategies) {
            if (s == Strategy::Exhaustive) {
                throw ValidationError("the exhaustive strategy is not available in experiment configs");
            }
        }
    }
    if (clusters < 2) {
        throw ValidationError("clusters must be at least 2");
    }
    if (signals < 1) {
        throw ValidationError("signals must be at least 1");
    }
    if (grid < 2) {
        throw ValidationError("grid must be at least 2");
    }
    if (graph.type != "cycle" && graph.type != "geometric" && graph.type != "knn_swiss_roll" &&
        graph.type != "sbm" && graph.type != "file") {
        throw ValidationError("unknown graph type '" + graph.type + "'");
    }
}

ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(std::string("malformed JSON config: ") + e.what());
    }
    reject_unknown(doc,
                   {"experiment", "id", "graph", "params", "bandwidth", "strategies", "samples",
                    "trials", "noise_sigma", "seed", "bases", "gfrft_alpha", "clusters", "signals",
                    "vertex_set", "grid", "labels"},
                   "config");
    ExperimentConfig cfg;
    cfg.experiment = parse_kind(field<std::string>(doc, "experiment", "config"));
    cfg.id = field<std::string>(doc, "id", "config");

    if (!doc.contains("graph")) {
        throw ValidationError("config is missing the 'graph' object");
    }
    const auto& g = doc.at("graph");
    reject_unknown(g, {"type", "n", "directed", "radius", "k", "blocks", "p_in", "p_out", "seed", "path"},
                   "graph");
    cfg.graph.type = field<std::string>(g, "type", "graph");
    cfg.graph.n = field_or<int>(g, "n", 0, "graph");
    cfg.graph.directed = field_or<bool>(g, "directed", false, "graph");
    cfg.graph.radius = field_or<double>(g, "radius", 0.0, "graph");
    cfg.graph.k = field_or<int>(g, "k", 0, "graph");
    cfg.graph.blocks = field_or<std::vector<int>>(g, "blocks", {}, "graph");
    cfg.graph.p_in = field_or<double>(g, "p_in", 0.0, "graph");
    cfg.graph.p_out = field_or<double>(g, "p_out", 0.0, "graph");
    if (g.contains("seed")) {
        cfg.graph.seed = field<std::uint64_t>(g, "seed", "graph");
    }
    if (g.contains("path")) {
        const std::filesystem::path p = field<std::string>(g, "path", "graph");
        cfg.graph.path = p.is_relative() ? base_dir / p : p;
    }

    if (doc.contains("params")) {
        const auto& p = doc.at("params");
        reject_unknown(p, {"alpha", "beta", "chirp_l", "chirp_f"}, "params");
        cfg.params.alpha = field_or<double>(p, "alpha", 1.0, "params");
        cfg.params.beta = field_or<double>(p, "beta", 1.0, "params");
        cfg.params.chirp_l = field_or<double>(p, "chirp_l", 0.0, "params");
        cfg.params.chirp_f = field_or<double>(p, "chirp_f", 0.0, "params");
    }
    cfg.bandwidth = field<int>(doc, "bandwidth", "config");
    for (const auto& s : field_or<std::vector<std::string>>(doc, "strategies", {}, "config")) {
        cfg.strategies.push_back(parse_strategy(s));
    }
    cfg.samples = field_or<std::vector<int>>(doc, "samples", {}, "config");
    cfg.trials = field_or<int>(doc, "trials", 1, "config");
    cfg.noise_sigma = field_or<double>(doc, "noise_sigma", 0.0, "config");
    cfg.seed = field_or<std::uint64_t>(doc, "seed", 0, "config");
    if (doc.contains("bases")) {
        cfg.bases.clear();
        for (const auto& b : field<std::vector<std::string>>(doc, "bases", "config")) {
            cfg.bases.push_back(parse_basis(b));
        }
    }
    if (doc.contains("gfrft_alpha")) {
        cfg.gfrft_alpha = field<double>(doc, "gfrft_alpha", "config");
    }
    cfg.clusters = field_or<int>(doc, "clusters", 2, "config");
    cfg.signals = field_or<int>(doc, "signals", 4, "config");
    cfg.vertex_set = field_or<std::vector<int>>(doc, "vertex_set", {}, "config");
    cfg.grid = field_or<int>(doc, "grid", 64, "config");
    if (doc.contains("labels")) {
        const std::filesystem::path p = field<std::string>(doc, "labels", "config");
        cfg.labels = p.is_relative() ? base_dir / p : p;
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("cannot open config '" + path.string() + "'");
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path.parent_path());
}

ordered_json config_to_json(const ExperimentConfig& cfg) {
    ordered_json j;
    j["experiment"] = to_string(cfg.experiment);
    j["id"] = cfg.id;
    ordered_json g;
    g["type"] = cfg.graph.type;
    if (cfg.graph.type == "file") {
        g["path"] = cfg.graph.path.string();
    } else if (cfg.graph.type == "sbm") {
        g["blocks"] = cfg.graph.blocks;
        g["p_in"] = cfg.graph.p_in;
        g["p_out"] = cfg.graph.p_out;
    } else {
        g["n"] = cfg.graph.n;
    }
    if (cfg.graph.type == "cycle") g["directed"] = cfg.graph.directed;
    if (cfg.graph.type == "geometric") g["radius"] = cfg.graph.radius;
    if (cfg.graph.type == "knn_swiss_roll") g["k"] = cfg.graph.k;
    if (cfg.graph.seed) g["seed"] = *cfg.graph.seed;
    j["graph"] = g;
    j["params"] = {{"alpha", cfg.params.alpha},
                   {"beta", cfg.params.beta},
                   {"chirp_l", cfg.params.chirp_l},
                   {"chirp_f", cfg.params.chirp_f}};
    j["bandwidth"] = cfg.bandwidth;
    std::vector<std::string> strategies;
    for (Strategy s : cfg.strategies) strategies.push_back(to_string(s));
    j["strategies"] = strategies;
    j["samples"] = cfg.samples;
    j["trials"] = cfg.trials;
    j["noise_sigma"] = cfg.noise_sigma;
    j["seed"] = cfg.seed;
    std::vector<std::string> bases;
    for (BasisVariant b : cfg.bases) bases.push_back(to_string(b));
    j["bases"] = bases;
    if (cfg.gfrft_alpha) j["gfrft_alpha"] = *cfg.gfrft_alpha;
    j["clusters"] = cfg.clusters;
    j["signals"] = cfg.signals;
    j["vertex_set"] = cfg.vertex_set;
    j["grid"] = cfg.grid;
    if (!cfg.labels.empty()) j["labels"] = cfg.labels.string();
    return j;
}

// ---------------------------------------------------------------- helpers

bool ExperimentResult::all_passed() const {
    return failures.empty() &&
           std::all_of(assertions.begin(), assertions.end(), [](const Assertion& a) { return a.passed; });
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    // splitmix64 finalizer over a combination of the three inputs
    std::uint64_t z = seed ^ (stream * 0xD1B54A32D192ED03ull) ^ ((index + 1) * 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

Graph make_graph(const GraphSpec& spec, std::uint64_t fallback_seed, std::vector<int>* labels) {
    const std::uint64_t seed = spec.seed.value_or(fallback_seed);
    if (spec.type == "cycle") {
        return cycle_graph(spec.n, spec.directed);
    }
    if (spec.type == "geometric") {
        return random_geometric_graph(spec.n, spec.radius, seed).graph;
    }
    if (spec.type == "knn_swiss_roll") {
        return knn_graph(swiss_roll_points(spec.n, seed), spec.k);
    }
    if (spec.type == "sbm") {
        BlockGraph bg = stochastic_block_model(spec.blocks, spec.p_in, spec.p_out, seed);
        if (labels) {
            *labels = bg.block;
        }
        return std::move(bg.graph);
    }
    if (spec.type == "file") {
        return load_graph(spec.path);
    }
    throw ValidationError("unknown graph type '" + spec.type + "'");
}

GlctOperator basis_operator(const Graph& g, BasisVariant b, const GlctParams& p,
                            std::optional<double> gfrft_alpha) {
    switch (b) {
        case BasisVariant::Glct: return build_operator(g, p);
        case BasisVariant::Gft: return build_operator(g, GlctParams::gft());
        case BasisVariant::Gfrft: return build_operator(g, GlctParams::gfrft(gfrft_alpha.value_or(p.alpha)));
        case BasisVariant::Laplacian: return build_operator(g, GlctParams::gft(), BasisKind::Laplacian);
    }
    throw ValidationError("unknown basis");
}

// ---------------------------------------------------------------- sweep

ExperimentResult recovery_sweep(const ExperimentConfig& cfg) {
    cfg.validate();
    ExperimentResult result;
    const Graph g = make_graph(cfg.graph, cfg.seed);
    const int n = g.size();
    check_samples(cfg, n);
    const std::vector<int> ms = sorted_unique(cfg.samples);
    const bool noisy = cfg.noise_sigma > 0.0;
    std::ostringstream sweep_csv;
    sweep_csv << "strategy,m,trial,nmse\n";

    for (std::size_t bi = 0; bi < cfg.bases.size(); ++bi) {
        const BasisVariant basis = cfg.bases[bi];
        const GlctOperator op = basis_operator(g, basis, cfg.params, cfg.gfrft_alpha);
        const BandlimitSpec spec = BandlimitSpec::first(cfg.bandwidth, n);
        const Selections sel = select_all(cfg, op, spec);
        const std::size_t ns = cfg.strategies.size();
        const std::size_t nm = ms.size();
        const auto nt = static_cast<std::size_t>(cfg.trials);
        std::vector<Cell> cells(ns * nm * nt);

        parallel_for(nt, [&](std::size_t t) {
            const int trial = static_cast<int>(t);
            SignalVector x;
            CVector noise;
            try {
                x = random_bandlimited(op, spec, derive_seed(cfg.seed, kSignal, t));
                std::mt19937_64 nrng(derive_seed(cfg.seed, kNoise, t));
                noise = complex_gaussian(n, cfg.noise_sigma, nrng);
            } catch (const std::exception& e) {
                for (std::size_t i = 0; i < ns * nm; ++i) {
                    cells[i * nt + t].error = failure_message("trial " + std::to_string(trial), e);
                }
                return;
            }
            for (std::size_t si = 0; si < ns; ++si) {
                for (std::size_t mi = 0; mi < nm; ++mi) {
                    Cell& cell = cells[(si * nm + mi) * nt + t];
                    try {
                        const SamplingOperator d(selection_for(cfg, sel, si, op, spec, ms[mi], trial));
                        const RecoveryOperator r = recovery_operator(d, op, spec);
                        cell.noiseless = nmse(x, recover(sample(x, d), r));
                        cell.value = noisy ? nmse(x, recover(sample(x + noise, d), r)) : cell.noiseless;
                        cell.ok = true;
                    } catch (const std::exception& e) {
                        cell.error = failure_message(to_string(cfg.strategies[si]) + " m=" +
                                                         std::to_string(ms[mi]) + " trial " +
                                                         std::to_string(trial),
                                                     e);
                    }
                }
            }
        });

        const std::string bname = to_string(basis);
        bool perfect_ok = true;
        std::string perfect_detail;
        bool monotone_ok = true;
        std::string monotone_detail;
        for (std::size_t si = 0; si < ns; ++si) {
            const Strategy s = cfg.strategies[si];
            const std::string sname = to_string(s);
            double prev_median = std::numeric_limits<double>::infinity();
            for (std::size_t mi = 0; mi < nm; ++mi) {
                std::vector<double> values;
                double worst_noiseless = 0.0;
                for (std::size_t t = 0; t < nt; ++t) {
                    const Cell& cell = cells[(si * nm + mi) * nt + t];
                    if (!cell.ok) {
                        result.failures.push_back(cell.error);
                        continue;
                    }
                    const int trial = static_cast<int>(t);
                    result.rows.push_back({cfg.id, bname, sname, ms[mi], trial, "nmse", cell.value});
                    if (noisy) {
                        result.rows.push_back(
                            {cfg.id, bname, sname, ms[mi], trial, "nmse_noiseless", cell.noiseless});
                    }
                    if (bi == 0) {
                        sweep_csv << sname << ',' << ms[mi] << ',' << trial << ',' << fmt(cell.value) << '\n';
                    }
                    values.push_back(cell.value);
                    worst_noiseless = std::max(worst_noiseless, cell.noiseless);
                }
                if (!is_deterministic(s) || values.empty()) {
                    continue;
                }
                if (ms[mi] == cfg.bandwidth && !(worst_noiseless < kPerfectSweep)) {
                    perfect_ok = false;
                    perfect_detail += sname + " worst noiseless NMSE " + fmt(worst_noiseless) + "; ";
                }
                if (noisy && ms[mi] >= cfg.bandwidth) {
                    const double med = median(values);
                    if (med > prev_median) {
                        monotone_ok = false;
                        monotone_detail += sname + " median rises at m=" + std::to_string(ms[mi]) + " (" +
                                           fmt(prev_median) + " -> " + fmt(med) + "); ";
                    }
                    prev_median = med;
                }
            }
        }
        if (std::find(ms.begin(), ms.end(), cfg.bandwidth) != ms.end()) {
            add_assertion(result, bname + ": deterministic strategies recover perfectly at m = bandwidth",
                          perfect_ok, perfect_ok ? "noiseless NMSE < 1e-10" : perfect_detail);
        }
        if (noisy) {
            add_assertion(result, bname + ": median NMSE non-increasing in m", monotone_ok,
                          monotone_ok ? "all deterministic strategies" : monotone_detail);
        }
    }
    result.artifacts["nmse_sweep.csv"] = sweep_csv.str();
    return result;
}

// ---------------------------------------------------------------- table

ExperimentResult cross_basis_table(const ExperimentConfig& cfg) {
    cfg.validate();
    ExperimentResult result;
    const Graph g = make_graph(cfg.graph, cfg.seed);
    const int n = g.size();
    check_samples(cfg, n);
    const std::vector<int> ms = sorted_unique(cfg.samples);
    const BandlimitSpec spec = BandlimitSpec::first(cfg.bandwidth, n);
    const GlctOperator glct_op = basis_operator(g, BasisVariant::Glct, cfg.params);

    // Trial 0: real(f0 + 0.5 f1 + f2) from the leading band columns, bandlimited again.
    // Further trials: seeded random bandlimited signals.
    std::vector<SignalVector> signals;
    {
        const CMatrix cols = band_basis(glct_op, spec);
        const double weights[] = {1.0, 0.5, 1.0};
        CVector y = CVector::Zero(n);
        for (int i = 0; i < std::min(3, spec.size()); ++i) {
            y += weights[i] * cols.col(i);
        }
        signals.push_back(bandlimit(CVector(y.real().cast<Complex>()), glct_op, spec));
        if (signals.back().norm() == 0.0) {
            throw NumericalError("table signal vanished after bandlimiting");
        }
        for (int t = 1; t < cfg.trials; ++t) {
            signals.push_back(random_bandlimited(glct_op, spec, derive_seed(cfg.seed, kSignal, t)));
        }
    }

    // nmse[basis][strategy][m][trial]
    std::map<std::tuple<int, int, int, int>, double> table;
    for (std::size_t bi = 0; bi < cfg.bases.size(); ++bi) {
        const BasisVariant basis = cfg.bases[bi];
        const GlctOperator op = basis == BasisVariant::Glct
                                    ? glct_op
                                    : basis_operator(g, basis, cfg.params, cfg.gfrft_alpha);
        const Selections sel = select_all(cfg, op, spec);
        for (std::size_t si = 0; si < cfg.strategies.size(); ++si) {
            for (std::size_t mi = 0; mi < ms.size(); ++mi) {
                for (int t = 0; t < cfg.trials; ++t) {
                    try {
                        const SamplingOperator d(selection_for(cfg, sel, si, op, spec, ms[mi], t));
                        const RecoveryOperator r = recovery_operator(d, op, spec);
                        const double v = nmse(signals[static_cast<std::size_t>(t)],
                                              recover(sample(signals[static_cast<std::size_t>(t)], d), r));
                        result.rows.push_back({cfg.id, to_string(basis), to_string(cfg.strategies[si]),
                                               ms[mi], t, "nmse", v});
                        table[{static_cast<int>(bi), static_cast<int>(si), static_cast<int>(mi), t}] = v;
                    } catch (const std::exception& e) {
                        result.failures.push_back(failure_message(
                            to_string(basis) + " " + to_string(cfg.strategies[si]) + " m=" +
                                std::to_string(ms[mi]),
                            e));
                    }
                }
            }
        }
    }

    // Assertions cover deterministic strategies at m >= bandwidth.
    double glct_worst = 0.0;
    double other_best = std::numeric_limits<double>::infinity();
    bool have_glct = false;
    bool have_other = false;
    std::string other_detail;
    for (const auto& [key, v] : table) {
        const auto [bi, si, mi, t] = key;
        if (!is_deterministic(cfg.strategies[static_cast<std::size_t>(si)]) ||
            ms[static_cast<std::size_t>(mi)] < cfg.bandwidth) {
            continue;
        }
        if (cfg.bases[static_cast<std::size_t>(bi)] == BasisVariant::Glct) {
            have_glct = true;
            glct_worst = std::max(glct_worst, v);
        } else {
            have_other = true;
            if (!(v > kMismatchTable)) {
                other_detail += to_string(cfg.bases[static_cast<std::size_t>(bi)]) + "/" +
                                to_string(cfg.strategies[static_cast<std::size_t>(si)]) + " NMSE " + fmt(v) + "; ";
            }
            other_best = std::min(other_best, v);
        }
    }
    if (have_glct) {
        add_assertion(result, "GLCT column NMSE < 1e-12", glct_worst < kPerfectTable,
                      "worst " + fmt(glct_worst));
    }
    if (have_other) {
        add_assertion(result, "other bases NMSE > 1e-2", other_detail.empty(),
                      other_detail.empty() ? "best " + fmt(other_best) : other_detail);
    }
    if (have_glct && have_other) {
        add_assertion(result, "GLCT column beats other bases by 6 orders of magnitude",
                      glct_worst * 1e6 <= other_best,
                      "GLCT worst " + fmt(glct_worst) + ", other best " + fmt(other_best));
    }
    const auto find_strategy = [&](Strategy s) -> int {
        const auto it = std::find(cfg.strategies.begin(), cfg.strategies.end(), s);
        return it == cfg.strategies.end() ? -1 : static_cast<int>(it - cfg.strategies.begin());
    };
    const int sf = find_strategy(Strategy::MinFro);
    const int sm = find_strategy(Strategy::MaxSig);
    if (sf >= 0 && sm >= 0) {
        double worst = 0.0;
        for (const auto& [key, v] : table) {
            const auto [bi, si, mi, t] = key;
            if (si != sf) {
                continue;
            }
            const auto other = table.find({bi, sm, mi, t});
            if (other != table.end()) {
                worst = std::max(worst, std::abs(v - other->second));
            }
        }
        add_assertion(result, "MinFro and MaxSig rows agree within 1e-9", worst <= kRowAgreement,
                      "largest difference " + fmt(worst));
    }
    return result;
}

// ---------------------------------------------------------------- classification

double classify_semi_supervised(const GlctOperator& op, const std::vector<int>& labels,
                                const BandlimitSpec& spec, int m, Strategy strategy, std::uint64_t seed) {
    const int n = op.size();
    if (static_cast<int>(labels.size()) != n) {
        throw ValidationError("label count does not match graph size");
    }
    for (int l : labels) {
        if (l != 0 && l != 1) {
            throw ValidationError("labels must be binary (0 or 1)");
        }
    }
    if (m < spec.size()) {
        throw ValidationError("classification needs at least |F| samples");
    }
    const SamplingSet set = strategy == Strategy::Exhaustive ? exhaustive_select(Strategy::MaxSigMin, op, spec, m)
                                                             : greedy_select(strategy, op, spec, m, seed);
    const SamplingOperator d(set);
    const CMatrix basis = band_basis(op, spec);
    CVector y(set.size());
    for (int i = 0; i < set.size(); ++i) {
        y(i) = static_cast<double>(labels[static_cast<std::size_t>(set.vertices()[static_cast<std::size_t>(i)])]);
    }
    const CVector coeffs = linalg::pinv(d.select_rows(basis)) * y;
    const CVector xr = basis * coeffs;
    int correct = 0;
    for (int v = 0; v < n; ++v) {
        const int predicted = xr(v).real() > 0.5 ? 1 : 0;
        correct += predicted == labels[static_cast<std::size_t>(v)] ? 1 : 0;
    }
    return static_cast<double>(correct) / n;
}

ExperimentResult classification_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    ExperimentResult result;
    const std::vector<int> ms = sorted_unique(cfg.samples);
    const std::uint64_t graph_seed = cfg.graph.seed.value_or(cfg.seed);
    const auto nt = static_cast<std::size_t>(cfg.trials);
    const std::size_t nb = cfg.bases.size();
    const std::size_t ns = cfg.strategies.size();
    const std::size_t nm = ms.size();
    std::vector<Cell> cells(nb * ns * nm * nt);

    parallel_for(nt, [&](std::size_t t) {
        try {
            GraphSpec gs = cfg.graph;
            gs.seed = graph_seed + t;
            std::vector<int> labels;
            const Graph g = make_graph(gs, graph_seed + t, &labels);
            if (!cfg.labels.empty()) {
                labels = read_labels(cfg.labels, g.size());
            }
            if (labels.empty()) {
                throw ValidationError("classification needs labels (sbm graph or a labels file)");
            }
            check_samples(cfg, g.size());
            const BandlimitSpec spec = BandlimitSpec::first(cfg.bandwidth, g.size());
            for (std::size_t bi = 0; bi < nb; ++bi) {
                const GlctOperator op = basis_operator(g, cfg.bases[bi], cfg.params, cfg.gfrft_alpha);
                for (std::size_t si = 0; si < ns; ++si) {
                    for (std::size_t mi = 0; mi < nm; ++mi) {
                        Cell& cell = cells[((bi * ns + si) * nm + mi) * nt + t];
                        try {
                            cell.value = classify_semi_supervised(op, labels, spec, ms[mi], cfg.strategies[si],
                                                                  derive_seed(cfg.seed, kRandomDraw, t));
                            cell.ok = true;
                        } catch (const std::exception& e) {
                            cell.error = failure_message(to_string(cfg.strategies[si]) + " m=" +
                                                             std::to_string(ms[mi]) + " trial " + std::to_string(t),
                                                         e);
                        }
                    }
                }
            }
        } catch (const std::exception& e) {
            for (std::size_t i = 0; i < nb * ns * nm; ++i) {
                cells[i * nt + t].error = failure_message("trial " + std::to_string(t), e);
            }
        }
    });

    bool monotone_ok = true;
    std::string monotone_detail;
    for (std::size_t bi = 0; bi < nb; ++bi) {
        for (std::size_t si = 0; si < ns; ++si) {
            double prev = -std::numeric_limits<double>::infinity();
            for (std::size_t mi = 0; mi < nm; ++mi) {
                std::vector<double> values;
                for (std::size_t t = 0; t < nt; ++t) {
                    const Cell& cell = cells[((bi * ns + si) * nm + mi) * nt + t];
                    if (!cell.ok) {
                        result.failures.push_back(cell.error);
                        continue;
                    }
                    result.rows.push_back({cfg.id, to_string(cfg.bases[bi]), to_string(cfg.strategies[si]),
                                           ms[mi], static_cast<int>(t), "accuracy", cell.value});
                    values.push_back(cell.value);
                }
                if (values.empty() || !is_deterministic(cfg.strategies[si])) {
                    continue;
                }
                const double med = median(values);
                if (med < prev) {
                    monotone_ok = false;
                    monotone_detail += to_string(cfg.bases[bi]) + "/" + to_string(cfg.strategies[si]) +
                                       " median drops at m=" + std::to_string(ms[mi]) + " (" + fmt(prev) +
                                       " -> " + fmt(med) + "); ";
                }
                prev = med;
            }
        }
    }
    if (nm > 1) {
        add_assertion(result, "median accuracy non-decreasing in m", monotone_ok,
                      monotone_ok ? "all deterministic strategies" : monotone_detail);
    }
    return result;
}

// ---------------------------------------------------------------- clustering

ExperimentResult clustering_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    ExperimentResult result;
    const Graph g = make_graph(cfg.graph, cfg.seed);
    const int n = g.size();
    check_samples(cfg, n);
    if (cfg.clusters > n) {
        throw ValidationError("more clusters than vertices");
    }
    const std::vector<int> ms = sorted_unique(cfg.samples);
    const BandlimitSpec spec = BandlimitSpec::first(cfg.bandwidth, n);
    const auto nt = static_cast<std::size_t>(cfg.trials);
    const std::size_t ns = cfg.strategies.size();
    const std::size_t nm = ms.size();
    bool range_ok = true;

    for (BasisVariant basis : cfg.bases) {
        const GlctOperator op = basis_operator(g, basis, cfg.params, cfg.gfrft_alpha);
        const Selections sel = select_all(cfg, op, spec);
        std::vector<Cell> cells(ns * nm * nt);
        parallel_for(nt, [&](std::size_t t) {
            CMatrix features(n, cfg.signals);
            for (int j = 0; j < cfg.signals; ++j) {
                features.col(j) = random_bandlimited(
                    op, spec, derive_seed(cfg.seed, kFeature, t * static_cast<std::size_t>(cfg.signals) + j));
            }
            for (std::size_t si = 0; si < ns; ++si) {
                for (std::size_t mi = 0; mi < nm; ++mi) {
                    Cell& cell = cells[(si * nm + mi) * nt + t];
                    try {
                        const SamplingOperator d(
                            selection_for(cfg, sel, si, op, spec, ms[mi], static_cast<int>(t)));
                        const RecoveryOperator r = recovery_operator(d, op, spec);
                        const CMatrix rec = r.matrix * d.select_rows(features);
                        RMatrix pts(n, 2 * cfg.signals);
                        pts << rec.real(), rec.imag();
                        cell.value = cluster_and_score(pts, cfg.clusters, derive_seed(cfg.seed, kKMeans, t)).silhouette;
                        cell.ok = true;
                    } catch (const std::exception& e) {
                        cell.error = failure_message(to_string(cfg.strategies[si]) + " m=" +
                                                         std::to_string(ms[mi]) + " trial " + std::to_string(t),
                                                     e);
                    }
                }
            }
        });
        for (std::size_t si = 0; si < ns; ++si) {
            for (std::size_t mi = 0; mi < nm; ++mi) {
                for (std::size_t t = 0; t < nt; ++t) {
                    const Cell& cell = cells[(si * nm + mi) * nt + t];
                    if (!cell.ok) {
                        result.failures.push_back(cell.error);
                        continue;
                    }
                    range_ok = range_ok && cell.value >= -1.0 && cell.value <= 1.0;
                    result.rows.push_back({cfg.id, to_string(basis), to_string(cfg.strategies[si]), ms[mi],
                                           static_cast<int>(t), "silhouette", cell.value});
                }
            }
        }
    }
    add_assertion(result, "silhouette within [-1, 1]", range_ok, "");
    return result;
}

// ---------------------------------------------------------------- uncertainty region

ExperimentResult uncertainty_region(const ExperimentConfig& cfg) {
    cfg.validate();
    ExperimentResult result;
    const Graph g = make_graph(cfg.graph, cfg.seed);
    const int n = g.size();
    if (cfg.bandwidth > n) {
        throw ValidationError("bandwidth exceeds graph size");
    }
    const GlctOperator op = basis_operator(g, cfg.bases.front(), cfg.params, cfg.gfrft_alpha);
    std::vector<int> s_idx = cfg.vertex_set;
    if (s_idx.empty()) {
        for (int i = 0; i < n / 2; ++i) {
            s_idx.push_back(i);
        }
    }
    const VertexSet s(sorted_unique(s_idx), n);
    const SpectralSet f = BandlimitSpec::first(cfg.bandwidth, n).set;
    const Limiter d = vertex_limiter(s);
    const Limiter b = spectral_limiter(f, op);
    const CornerLambdas c = corner_lambdas(d, b);

    std::ostringstream region;
    write_region_csv(c, cfg.grid, region);
    result.artifacts["region.csv"] = region.str();
    result.extra["corner_lambdas"] = {{"lam_bdb", c.lam_bdb},
                                      {"lam_bdbarb", c.lam_bdbarb},
                                      {"lam_bbardbbar", c.lam_bbardbbar},
                                      {"lam_all_bar", c.lam_all_bar}};

    const auto nt = static_cast<std::size_t>(cfg.trials);
    std::vector<std::array<double, 3>> pairs(nt);
    parallel_for(nt, [&](std::size_t t) {
        std::mt19937_64 rng(derive_seed(cfg.seed, kSignal, t));
        CVector x = complex_gaussian(n, 1.0, rng);
        x /= x.norm();
        const ConcentrationPair p = concentration_pair(x, d, b);
        const auto slacks = admissibility_slacks(p, c);
        pairs[t] = {p.zeta, p.eta, *std::min_element(slacks.begin(), slacks.end())};
    });
    double worst = std::numeric_limits<double>::infinity();
    const int m = static_cast<int>(s.size());
    for (std::size_t t = 0; t < nt; ++t) {
        const std::string bname = to_string(cfg.bases.front());
        result.rows.push_back({cfg.id, bname, "-", m, static_cast<int>(t), "zeta", pairs[t][0]});
        result.rows.push_back({cfg.id, bname, "-", m, static_cast<int>(t), "eta", pairs[t][1]});
        result.rows.push_back({cfg.id, bname, "-", m, static_cast<int>(t), "min_slack", pairs[t][2]});
        worst = std::min(worst, pairs[t][2]);
    }
    add_assertion(result, "random signals satisfy all four inequalities", worst >= -kSlackTol,
                  "smallest slack " + fmt(worst));

    double curve_gap = 0.0;
    for (const CurvePoint& p : boundary_curve(Corner::UpperRight, c, cfg.grid)) {
        curve_gap = std::max(curve_gap, std::abs(lemma2_upper_bound(p.zeta, c.lam_bdb) - p.eta));
    }
    add_assertion(result, "closed-form bound matches the upper-right curve", curve_gap <= 1e-12,
                  "largest gap " + fmt(curve_gap));

    const Limiter dbar = complement(d);
    const Limiter bbar = complement(b);
    const auto smax2 = [](const CMatrix& m) {
        const RVector sv = linalg::singular_values(m);
        return sv.size() == 0 ? 0.0 : sv(0) * sv(0);
    };
    const double gap = std::max({std::abs(smax2(d.matrix * b.matrix) - c.lam_bdb),
                                 std::abs(smax2(dbar.matrix * b.matrix) - c.lam_bdbarb),
                                 std::abs(smax2(d.matrix * bbar.matrix) - c.lam_bbardbbar),
                                 std::abs(smax2(dbar.matrix * bbar.matrix) - c.lam_all_bar)});
    add_assertion(result, "corner eigenvalues match squared singular values", gap <= 1e-8,
                  "largest gap " + fmt(gap));
    return result;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    switch (cfg.experiment) {
        case ExperimentKind::Sweep: return recovery_sweep(cfg);
        case ExperimentKind::Table: return cross_basis_table(cfg);
        case ExperimentKind::Classify: return classification_experiment(cfg);
        case ExperimentKind::Cluster: return clustering_experiment(cfg);
        case ExperimentKind::Region: return uncertainty_region(cfg);
    }
    throw ValidationError("unknown experiment kind");
}

// ---------------------------------------------------------------- output

std::string results_csv(const std::vector<ResultRow>& rows) {
    std::ostringstream out;
    out << "experiment,basis,strategy,m,trial,metric,value\n";
    for (const ResultRow& r : rows) {
        out << r.experiment << ',' << r.basis << ',' << r.strategy << ',' << r.m << ',' << r.trial << ','
            << r.metric << ',' << fmt(r.value) << '\n';
    }
    return out.str();
}

ordered_json summary_json(const ExperimentConfig& cfg, const ExperimentResult& r) {
    ordered_json j;
    j["id"] = cfg.id;
    j["experiment"] = to_string(cfg.experiment);
    std::map<std::tuple<std::string, std::string, int, std::string>, std::vector<double>> groups;
    for (const ResultRow& row : r.rows) {
        groups[{row.basis, row.strategy, row.m, row.metric}].push_back(row.value);
    }
    ordered_json medians = ordered_json::array();
    for (const auto& [key, values] : groups) {
        const auto& [basis, strategy, m, metric] = key;
        medians.push_back({{"basis", basis},
                           {"strategy", strategy},
                           {"m", m},
                           {"metric", metric},
                           {"median", median(values)},
                           {"count", values.size()}});
    }
    j["medians"] = medians;
    ordered_json asserts = ordered_json::array();
    for (const Assertion& a : r.assertions) {
        asserts.push_back({{"name", a.name}, {"passed", a.passed}, {"detail", a.detail}});
    }
    j["assertions"] = asserts;
    j["failures"] = r.failures;
    for (const auto& [key, value] : r.extra.items()) {
        j[key] = value;
    }
    j["all_passed"] = r.all_passed();
    return j;
}

}  // namespace glctkit
