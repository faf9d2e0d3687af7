#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "glctkit/glct.hpp"
#include "glctkit/localization.hpp"

namespace glctkit {

/// The band F of an M-bandlimited subspace.
struct BandlimitSpec {
    SpectralSet set;

    /// The first `size` spectral indices under the global ordering.
    static BandlimitSpec first(int size, int n);

    int size() const noexcept { return static_cast<int>(set.size()); }
    int ambient() const noexcept { return set.ambient(); }
};

/// Ordered, distinct vertex indices in [0, n). Greedy selection order is preserved.
class SamplingSet {
public:
    SamplingSet(std::vector<int> vertices, int n);

    const std::vector<int>& vertices() const noexcept { return vertices_; }
    int ambient() const noexcept { return n_; }
    int size() const noexcept { return static_cast<int>(vertices_.size()); }

    /// The first k vertices (greedy prefixes are the smaller-budget selections).
    SamplingSet prefix(int k) const;
    /// Same vertices in ascending order.
    VertexSet as_vertex_set() const;

    friend bool operator==(const SamplingSet&, const SamplingSet&) = default;

private:
    std::vector<int> vertices_;
    int n_;
};

/// Row-selection map D: C^n -> C^|S|.
struct SamplingOperator {
    SamplingSet set;

    explicit SamplingOperator(SamplingSet s) : set(std::move(s)) {}

    /// |S| x n matrix with a single 1 per row at column S_i.
    CMatrix matrix() const;
    /// Selected rows of `m`.
    CMatrix select_rows(const CMatrix& m) const;
};

/// R = O^{-M}_F pinv(D O^{-M}_F).
struct RecoveryOperator {
    CMatrix matrix;
    bool qualified = false;
};

enum class Strategy { MinFro, MaxVol, MinPinv, MaxSigMin, MaxSig, Random, Exhaustive };

/// Case-insensitive strategy name; throws ValidationError on unknown names.
Strategy parse_strategy(const std::string& name);
std::string to_string(Strategy s);

/// The five design strategies in table order.
const std::vector<Strategy>& design_strategies();

/// Columns F of O^{-M} (an n x |F| basis of the bandlimited subspace).
CMatrix band_basis(const GlctOperator& op, const BandlimitSpec& spec);

/// B^M y.
SignalVector bandlimit(const SignalVector& y, const GlctOperator& op, const BandlimitSpec& spec);

SignalVector sample(const SignalVector& x, const SamplingOperator& d);

/// D x + e with e i.i.d. complex Gaussian, standard deviation `sigma` per real component.
SignalVector sample_noisy(const SignalVector& x, const SamplingOperator& d, double sigma,
                          std::mt19937_64& rng);

/// Length-n complex Gaussian vector, `sigma` per real component.
CVector complex_gaussian(int n, double sigma, std::mt19937_64& rng);

bool is_qualified(const SamplingOperator& d, const GlctOperator& op, const BandlimitSpec& spec);

RecoveryOperator recovery_operator(const SamplingOperator& d, const GlctOperator& op,
                                   const BandlimitSpec& spec);

SignalVector recover(const SignalVector& xs, const RecoveryOperator& r);

/// ||xr - x||^2 / ||x||^2.
double nmse(const SignalVector& x, const SignalVector& xr);

/// sigma_max(Dbar B^M); below 1 certifies recoverability.
double recoverability_margin(const SamplingOperator& d, const Limiter& b);

/// P^{-1} diag(lambda_A[F]) P with P = (D O^{-M}_F)^{-1}. Requires |S| = |F| and qualification.
CMatrix sampled_adjacency(const SamplingOperator& d, const GlctOperator& op,
                          const BandlimitSpec& spec, const CVector& lambda_a);

/// Lexicographic score: numerical rank first, then the strategy value (larger is better).
struct SelectionScore {
    int rank = 0;
    double value = 0.0;
};

/// Score of a selected-rows submatrix for an optimizing strategy:
/// MaxSig sum(s^2), MaxSigMin/MinPinv min nonzero s, MaxVol sum(log s^2), MinFro -sum(s^-2).
SelectionScore objective_value(Strategy s, const CMatrix& rows);

/// Objective of the rows of O^{-M}_F picked by `set`.
SelectionScore objective_value(Strategy s, const GlctOperator& op, const BandlimitSpec& spec,
                               const SamplingSet& set);

/// True when `a` beats `b` by more than the relative tie tolerance.
bool better(const SelectionScore& a, const SelectionScore& b);

/// Greedy row selection (or seeded random draw for Strategy::Random).
SamplingSet greedy_select(Strategy s, const GlctOperator& op, const BandlimitSpec& spec, int m,
                          std::uint64_t seed = 0);

/// Exact optimum over all C(n, m) subsets (guarded at 1e6 subsets).
SamplingSet exhaustive_select(Strategy s, const GlctOperator& op, const BandlimitSpec& spec, int m);

}  // namespace glctkit
