// glctkit command-line tool: transform, operator export, sampling-set selection
// and config-driven experiments.
//
// Exit codes: 0 success, 1 experiment assertions failed, 2 usage or validation
// error, 3 numerical failure.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "CLI11.hpp"
#include "json.hpp"

#include "glctkit/errors.hpp"
#include "glctkit/experiments.hpp"
#include "glctkit/glct.hpp"
#include "glctkit/graph.hpp"
#include "glctkit/io.hpp"
#include "glctkit/parallel.hpp"
#include "glctkit/sampling.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitAssertions = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

struct GraphFlags {
    std::string path;
    int cycle = 0;
    bool directed = false;
    int geometric = 0;
    double radius = 0.2;
    std::uint64_t graph_seed = 0;
};

struct ParamFlags {
    double alpha = 1.0;
    double beta = 1.0;
    std::vector<double> chirp{0.0, 0.0};
    bool laplacian = false;
};

void add_graph_flags(CLI::App* cmd, GraphFlags& g) {
    auto* file = cmd->add_option("--graph", g.path, "Edge-list file");
    auto* cyc = cmd->add_option("--cycle", g.cycle, "Generate a cycle graph on N vertices");
    auto* geo = cmd->add_option("--geometric", g.geometric, "Generate a random geometric graph on N vertices");
    cmd->add_flag("--directed", g.directed, "Directed cycle (with --cycle)");
    cmd->add_option("--radius", g.radius, "Connection radius (with --geometric)");
    cmd->add_option("--graph-seed", g.graph_seed, "Generator seed (with --geometric)");
    file->excludes(cyc)->excludes(geo);
    cyc->excludes(geo);
}

void add_param_flags(CLI::App* cmd, ParamFlags& p) {
    cmd->add_option("--alpha", p.alpha, "Fractional order");
    cmd->add_option("--beta", p.beta, "Scaling parameter (> 0)");
    cmd->add_option("--chirp", p.chirp, "Chirp parameters l,f")->delimiter(',')->expected(2);
    cmd->add_flag("--laplacian", p.laplacian, "Use the Laplacian eigenbasis instead of the adjacency");
}

glctkit::Graph make_graph(const GraphFlags& g) {
    if (!g.path.empty()) {
        return glctkit::load_graph(g.path);
    }
    if (g.cycle > 0) {
        return glctkit::cycle_graph(g.cycle, g.directed);
    }
    if (g.geometric > 0) {
        auto geo = glctkit::random_geometric_graph(g.geometric, g.radius, g.graph_seed);
        if (geo.disconnected) {
            std::cerr << "warning: generated graph is disconnected\n";
        }
        return std::move(geo.graph);
    }
    throw glctkit::ValidationError("one of --graph, --cycle or --geometric is required");
}

glctkit::GlctParams make_params(const ParamFlags& p) {
    glctkit::GlctParams params{p.alpha, p.beta, p.chirp.at(0), p.chirp.at(1)};
    params.validate();
    return params;
}

glctkit::BasisKind basis_kind(const ParamFlags& p) {
    return p.laplacian ? glctkit::BasisKind::Laplacian : glctkit::BasisKind::Adjacency;
}

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw glctkit::ValidationError("cannot open '" + path.string() + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw glctkit::ValidationError("cannot write '" + path.string() + "'");
    }
    out << text;
}

ordered_json versions() {
    return {{"glctkit", GLCTKIT_VERSION},
            {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                          std::to_string(EIGEN_MINOR_VERSION)},
            {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                  std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                  std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
            {"cli11", CLI11_VERSION},
            {"compiler", __VERSION__}};
}

// The manifest records what is needed to re-run: the command, its arguments,
// a hash of the configuration, the seed and library versions. No timestamps.
void write_manifest(const fs::path& path, const std::string& command, const std::vector<std::string>& args,
                    const std::string& config_bytes, std::uint64_t seed, const std::vector<std::string>& outputs) {
    ordered_json m;
    m["tool"] = "glctkit";
    m["command"] = command;
    m["arguments"] = args;
    m["config_hash"] = hex64(fnv1a(config_bytes));
    m["seed"] = seed;
    m["versions"] = versions();
    m["outputs"] = outputs;
    write_file(path, m.dump(2) + "\n");
}

std::string joined(const std::vector<std::string>& args) {
    std::string out;
    for (const auto& a : args) {
        out += a;
        out += '\n';
    }
    return out;
}

int cmd_transform(const GraphFlags& gf, const ParamFlags& pf, const std::string& signal, const std::string& out,
                  bool inverse, const std::vector<std::string>& args) {
    const glctkit::Graph g = make_graph(gf);
    const glctkit::GlctOperator op = glctkit::build_operator(g, make_params(pf), basis_kind(pf));
    glctkit::SignalVector x;
    try {
        x = glctkit::io::read_signal(signal);
    } catch (const glctkit::ParseError& e) {
        throw glctkit::ValidationError(signal + ": " + e.what());
    }
    if (x.size() != op.size()) {
        throw glctkit::ValidationError(signal + ": signal has " + std::to_string(x.size()) +
                                       " entries, graph has " + std::to_string(op.size()) + " vertices");
    }
    const glctkit::SignalVector y = inverse ? glctkit::iglct(op, x) : glctkit::glct(op, x);
    glctkit::io::write_signal(y, out);
    write_manifest(fs::path(out).concat(".manifest.json"), "transform", args, joined(args), 0,
                   {fs::path(out).filename().string()});
    return kExitOk;
}

int cmd_operator(const GraphFlags& gf, const ParamFlags& pf, const std::string& out_csv,
                 const std::vector<std::string>& args) {
    const glctkit::Graph g = make_graph(gf);
    const glctkit::GlctOperator op = glctkit::build_operator(g, make_params(pf), basis_kind(pf));
    const fs::path csv(out_csv);
    fs::path json = csv;
    json.replace_extension(".json");
    glctkit::write_operator(op, csv, json);
    write_manifest(fs::path(out_csv).concat(".manifest.json"), "operator", args, joined(args), 0,
                   {csv.filename().string(), json.filename().string()});
    return kExitOk;
}

int cmd_select(const GraphFlags& gf, const ParamFlags& pf, int bandwidth, int samples, const std::string& strategy,
               const std::string& objective, std::uint64_t seed, const std::string& out,
               const std::vector<std::string>& args) {
    const glctkit::Graph g = make_graph(gf);
    const glctkit::GlctOperator op = glctkit::build_operator(g, make_params(pf), basis_kind(pf));
    const glctkit::BandlimitSpec spec = glctkit::BandlimitSpec::first(bandwidth, op.size());
    const glctkit::Strategy s = glctkit::parse_strategy(strategy);
    const glctkit::SamplingSet set =
        s == glctkit::Strategy::Exhaustive
            ? glctkit::exhaustive_select(glctkit::parse_strategy(objective), op, spec, samples)
            : glctkit::greedy_select(s, op, spec, samples, seed);
    const glctkit::SamplingOperator d(set);
    const glctkit::Limiter b = glctkit::spectral_limiter(spec.set, op);

    ordered_json j;
    j["strategy"] = glctkit::to_string(s);
    if (s == glctkit::Strategy::Exhaustive) {
        j["objective"] = glctkit::to_string(glctkit::parse_strategy(objective));
    }
    j["bandwidth"] = bandwidth;
    j["samples"] = samples;
    j["seed"] = seed;
    j["set"] = set.vertices();
    j["qualified"] = glctkit::is_qualified(d, op, spec);
    j["recoverability_margin"] = glctkit::recoverability_margin(d, b);
    const std::string text = j.dump(2) + "\n";
    if (out.empty() || out == "-") {
        std::cout << text;
    } else {
        write_file(out, text);
        write_manifest(fs::path(out).concat(".manifest.json"), "select", args, joined(args), seed,
                       {fs::path(out).filename().string()});
    }
    return kExitOk;
}

int cmd_experiment(const std::string& config_path, const std::string& out_dir, const std::vector<std::string>& args) {
    const std::string text = read_file(config_path);
    const glctkit::ExperimentConfig cfg = glctkit::parse_config(text, fs::path(config_path).parent_path());
    const glctkit::ExperimentResult result = glctkit::run_experiment(cfg);

    fs::create_directories(out_dir);
    const fs::path dir(out_dir);
    std::vector<std::string> outputs{"results.csv", "summary.json"};
    write_file(dir / "results.csv", glctkit::results_csv(result.rows));
    write_file(dir / "summary.json", glctkit::summary_json(cfg, result).dump(2) + "\n");
    for (const auto& [name, content] : result.artifacts) {
        write_file(dir / name, content);
        outputs.push_back(name);
    }
    write_manifest(dir / "manifest.json", "experiment", args, text, cfg.seed, outputs);

    for (const auto& a : result.assertions) {
        std::cout << (a.passed ? "PASS " : "FAIL ") << a.name;
        if (!a.detail.empty()) {
            std::cout << " (" << a.detail << ")";
        }
        std::cout << '\n';
    }
    for (const auto& f : result.failures) {
        std::cout << "FAILED ROW " << f << '\n';
    }
    return result.all_passed() ? kExitOk : kExitAssertions;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Graph linear canonical transform toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", GLCTKIT_VERSION);
    int threads = 0;
    app.add_option("--threads", threads, "Worker threads (default: GLCTKIT_THREADS or 1)")->check(CLI::PositiveNumber);

    GraphFlags gf;
    ParamFlags pf;
    std::string signal;
    std::string out;
    bool inverse = false;
    auto* transform = app.add_subcommand("transform", "Apply the GLCT (or its inverse) to a signal");
    add_graph_flags(transform, gf);
    add_param_flags(transform, pf);
    transform->add_option("--signal", signal, "Input signal CSV")->required();
    transform->add_option("--out", out, "Output signal CSV")->required();
    transform->add_flag("--inverse", inverse, "Apply the inverse transform");

    auto* op_cmd = app.add_subcommand("operator", "Export the operator matrix as CSV plus JSON sidecar");
    add_graph_flags(op_cmd, gf);
    add_param_flags(op_cmd, pf);
    op_cmd->add_option("--out", out, "Output CSV path (sidecar gets a .json extension)")->required();

    int bandwidth = 1;
    int samples = 1;
    std::string strategy = "maxsigmin";
    std::string objective = "maxsigmin";
    std::uint64_t seed = 0;
    auto* select = app.add_subcommand("select", "Choose a sampling set");
    add_graph_flags(select, gf);
    add_param_flags(select, pf);
    select->add_option("--bandwidth", bandwidth, "Band size |F|")->required();
    select->add_option("--samples", samples, "Number of samples m")->required();
    select->add_option("--strategy", strategy,
                       "minfro | maxvol | minpinv | maxsigmin | maxsig | random | exhaustive");
    select->add_option("--objective", objective, "Objective for --strategy exhaustive");
    select->add_option("--seed", seed, "Seed for the random strategy");
    select->add_option("--out", out, "Output JSON (default: stdout)");

    std::string config;
    std::string out_dir;
    auto* experiment = app.add_subcommand("experiment", "Run a config-driven experiment");
    experiment->add_option("--config", config, "Experiment config JSON")->required();
    experiment->add_option("--out", out_dir, "Output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    if (threads > 0) {
        glctkit::set_thread_count(threads);
    }
    const std::vector<std::string> args(argv + 1, argv + argc);

    try {
        if (*transform) return cmd_transform(gf, pf, signal, out, inverse, args);
        if (*op_cmd) return cmd_operator(gf, pf, out, args);
        if (*select) return cmd_select(gf, pf, bandwidth, samples, strategy, objective, seed, out, args);
        if (*experiment) return cmd_experiment(config, out_dir, args);
    } catch (const glctkit::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const glctkit::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const glctkit::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return kExitNumerical;
    }
    return kExitUsage;
}
