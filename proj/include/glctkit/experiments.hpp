#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "glctkit/clustering.hpp"
#include "glctkit/glct.hpp"
#include "glctkit/graph.hpp"
#include "glctkit/sampling.hpp"

namespace glctkit {

enum class ExperimentKind { Sweep, Table, Classify, Cluster, Region };

/// How to obtain the graph: a generator with its parameters or an edge-list file.
struct GraphSpec {
    std::string type = "cycle";  // cycle | geometric | knn_swiss_roll | sbm | file
    int n = 0;
    bool directed = false;            // cycle only
    double radius = 0.0;              // geometric
    int k = 0;                        // knn_swiss_roll
    std::vector<int> blocks;          // sbm block sizes
    double p_in = 0.0;                // sbm
    double p_out = 0.0;               // sbm
    std::optional<std::uint64_t> seed;  // generator seed; defaults to the experiment seed
    std::filesystem::path path;       // file
};

/// Transform variant compared in cross-basis experiments.
enum class BasisVariant { Glct, Gft, Gfrft, Laplacian };

struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::Sweep;
    std::string id;
    GraphSpec graph;
    GlctParams params;
    int bandwidth = 1;
    std::vector<Strategy> strategies;
    std::vector<int> samples;
    int trials = 1;
    double noise_sigma = 0.0;
    std::uint64_t seed = 0;
    std::vector<BasisVariant> bases{BasisVariant::Glct};
    std::optional<double> gfrft_alpha;  // GFRFT baseline order; defaults to params.alpha
    int clusters = 2;                   // cluster
    int signals = 4;                    // cluster: feature signals per vertex
    std::vector<int> vertex_set;        // region: S (default: first half of the vertices)
    int grid = 64;                      // region: samples per boundary curve
    std::filesystem::path labels;       // classify: optional `vertex,label` CSV

    void validate() const;
};

/// Parses a config document. `base_dir` resolves relative file paths.
/// Malformed JSON is reported with its line and column; unknown keys are rejected.
ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);
nlohmann::ordered_json config_to_json(const ExperimentConfig& cfg);

struct ResultRow {
    std::string experiment;
    std::string basis;
    std::string strategy;
    int m = 0;
    int trial = 0;
    std::string metric;
    double value = 0.0;
};

struct Assertion {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct ExperimentResult {
    std::vector<ResultRow> rows;
    std::vector<Assertion> assertions;
    std::vector<std::string> failures;             // per-row errors recorded instead of aborting
    nlohmann::ordered_json extra = nlohmann::ordered_json::object();  // experiment-specific summary fields
    std::map<std::string, std::string> artifacts;  // additional output files by name

    bool all_passed() const;
};

std::string to_string(ExperimentKind kind);
std::string to_string(BasisVariant b);
BasisVariant parse_basis(const std::string& name);

/// Derives an independent stream seed from (seed, stream, index).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

/// Materializes the graph of a spec; `fallback_seed` is used when the spec has none.
Graph make_graph(const GraphSpec& spec, std::uint64_t fallback_seed,
                 std::vector<int>* labels = nullptr);

/// Operator of one basis variant built from the experiment parameters.
GlctOperator basis_operator(const Graph& g, BasisVariant b, const GlctParams& p,
                            std::optional<double> gfrft_alpha = std::nullopt);

/// NMSE vs. number of samples for each strategy.
ExperimentResult recovery_sweep(const ExperimentConfig& cfg);

/// NMSE per (basis, strategy) for one GLCT-bandlimited signal.
ExperimentResult cross_basis_table(const ExperimentConfig& cfg);

/// Least-squares fit of sampled labels in the band, reconstruction, threshold at 0.5.
double classify_semi_supervised(const GlctOperator& op, const std::vector<int>& labels,
                                const BandlimitSpec& spec, int m, Strategy strategy,
                                std::uint64_t seed = 0);

/// Accuracy vs. samples, one graph realization per trial.
ExperimentResult classification_experiment(const ExperimentConfig& cfg);

/// Silhouette of k-means on recovered bandlimited feature signals, per sample count.
ExperimentResult clustering_experiment(const ExperimentConfig& cfg);

/// Corner eigenvalues, boundary curves and empirical admissibility of random signals.
ExperimentResult uncertainty_region(const ExperimentConfig& cfg);

ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// `experiment,basis,strategy,m,trial,metric,value`.
std::string results_csv(const std::vector<ResultRow>& rows);

/// Medians per (basis, strategy, m, metric), assertions, failures and extras.
nlohmann::ordered_json summary_json(const ExperimentConfig& cfg, const ExperimentResult& r);

}  // namespace glctkit
