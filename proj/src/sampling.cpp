#include "glctkit/sampling.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numeric>

#include "glctkit/errors.hpp"
#include "glctkit/parallel.hpp"

namespace glctkit {

namespace {

constexpr double kTieTol = 1e-12;
constexpr double kExhaustiveLimit = 1e6;

void check_compatible(const GlctOperator& op, const BandlimitSpec& spec) {
    if (spec.ambient() != op.size()) {
        throw ValidationError("band specification does not match operator size");
    }
}

void check_compatible(const SamplingOperator& d, const GlctOperator& op) {
    if (d.set.ambient() != op.size()) {
        throw ValidationError("sampling set does not match operator size");
    }
}

double binomial(int n, int k) {
    double c = 1.0;
    for (int i = 1; i <= k; ++i) {
        c = c * (n - k + i) / i;
    }
    return c;
}

}  // namespace

BandlimitSpec BandlimitSpec::first(int size, int n) {
    if (size < 1 || size > n) {
        throw ValidationError("bandwidth must lie in [1, " + std::to_string(n) + "]");
    }
    return {SpectralSet(IndexSet::range(0, size, n))};
}

SamplingSet::SamplingSet(std::vector<int> vertices, int n) : vertices_(std::move(vertices)), n_(n) {
    std::vector<char> seen(static_cast<std::size_t>(std::max(n_, 0)), 0);
    for (int v : vertices_) {
        if (v < 0 || v >= n_) {
            throw ValidationError("sample vertex " + std::to_string(v) + " out of range");
        }
        if (seen[static_cast<std::size_t>(v)]) {
            throw ValidationError("duplicate sample vertex " + std::to_string(v));
        }
        seen[static_cast<std::size_t>(v)] = 1;
    }
}

SamplingSet SamplingSet::prefix(int k) const {
    if (k < 0 || k > size()) {
        throw ValidationError("prefix length out of range");
    }
    return SamplingSet({vertices_.begin(), vertices_.begin() + k}, n_);
}

VertexSet SamplingSet::as_vertex_set() const {
    std::vector<int> v = vertices_;
    std::sort(v.begin(), v.end());
    return VertexSet(std::move(v), n_);
}

CMatrix SamplingOperator::matrix() const {
    CMatrix d = CMatrix::Zero(set.size(), set.ambient());
    for (int i = 0; i < set.size(); ++i) {
        d(i, set.vertices()[static_cast<std::size_t>(i)]) = 1.0;
    }
    return d;
}

CMatrix SamplingOperator::select_rows(const CMatrix& m) const {
    CMatrix out(set.size(), m.cols());
    for (int i = 0; i < set.size(); ++i) {
        out.row(i) = m.row(set.vertices()[static_cast<std::size_t>(i)]);
    }
    return out;
}

Strategy parse_strategy(const std::string& name) {
    std::string key;
    for (char c : name) {
        key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    if (key == "minfro") return Strategy::MinFro;
    if (key == "maxvol") return Strategy::MaxVol;
    if (key == "minpinv") return Strategy::MinPinv;
    if (key == "maxsigmin") return Strategy::MaxSigMin;
    if (key == "maxsig") return Strategy::MaxSig;
    if (key == "random") return Strategy::Random;
    if (key == "exhaustive") return Strategy::Exhaustive;
    throw ValidationError("unknown strategy '" + name + "'");
}

std::string to_string(Strategy s) {
    switch (s) {
        case Strategy::MinFro: return "MinFro";
        case Strategy::MaxVol: return "MaxVol";
        case Strategy::MinPinv: return "MinPinv";
        case Strategy::MaxSigMin: return "MaxSigMin";
        case Strategy::MaxSig: return "MaxSig";
        case Strategy::Random: return "Random";
        case Strategy::Exhaustive: return "Exhaustive";
    }
    return "?";
}

const std::vector<Strategy>& design_strategies() {
    static const std::vector<Strategy> all{Strategy::MinFro, Strategy::MaxVol, Strategy::MinPinv,
                                           Strategy::MaxSigMin, Strategy::MaxSig};
    return all;
}

CMatrix band_basis(const GlctOperator& op, const BandlimitSpec& spec) {
    check_compatible(op, spec);
    CMatrix out(op.size(), spec.size());
    for (int t = 0; t < spec.size(); ++t) {
        out.col(t) = op.inverse().col(spec.set.indices()[static_cast<std::size_t>(t)]);
    }
    return out;
}

SignalVector bandlimit(const SignalVector& y, const GlctOperator& op, const BandlimitSpec& spec) {
    check_compatible(op, spec);
    if (y.size() != op.size()) {
        throw ValidationError("signal length does not match operator size");
    }
    const CVector yhat = op.forward() * y;
    CVector masked = CVector::Zero(op.size());
    for (int i : spec.set.indices()) {
        masked(i) = yhat(i);
    }
    return op.inverse() * masked;
}

SignalVector sample(const SignalVector& x, const SamplingOperator& d) {
    if (x.size() != d.set.ambient()) {
        throw ValidationError("signal length does not match sampling operator");
    }
    SignalVector out(d.set.size());
    for (int i = 0; i < d.set.size(); ++i) {
        out(i) = x(d.set.vertices()[static_cast<std::size_t>(i)]);
    }
    return out;
}

CVector complex_gaussian(int n, double sigma, std::mt19937_64& rng) {
    CVector e(n);
    if (sigma <= 0.0) {
        e.setZero();
        return e;
    }
    std::normal_distribution<double> g(0.0, sigma);
    for (int i = 0; i < n; ++i) {
        const double re = g(rng);
        const double im = g(rng);
        e(i) = Complex(re, im);
    }
    return e;
}

SignalVector sample_noisy(const SignalVector& x, const SamplingOperator& d, double sigma,
                          std::mt19937_64& rng) {
    if (sigma < 0.0 || !std::isfinite(sigma)) {
        throw ValidationError("noise sigma must be finite and non-negative");
    }
    return sample(x, d) + complex_gaussian(d.set.size(), sigma, rng);
}

bool is_qualified(const SamplingOperator& d, const GlctOperator& op, const BandlimitSpec& spec) {
    check_compatible(d, op);
    if (d.set.size() < spec.size()) {
        return false;
    }
    const CMatrix sub = d.select_rows(band_basis(op, spec));
    return linalg::numerical_rank(linalg::singular_values(sub)) == spec.size();
}

RecoveryOperator recovery_operator(const SamplingOperator& d, const GlctOperator& op,
                                   const BandlimitSpec& spec) {
    check_compatible(d, op);
    const CMatrix basis = band_basis(op, spec);
    const CMatrix sub = d.select_rows(basis);
    const bool qualified = d.set.size() >= spec.size() &&
                           linalg::numerical_rank(linalg::singular_values(sub)) == spec.size();
    return {basis * linalg::pinv(sub), qualified};
}

SignalVector recover(const SignalVector& xs, const RecoveryOperator& r) {
    if (xs.size() != r.matrix.cols()) {
        throw ValidationError("sample vector length does not match recovery operator");
    }
    return r.matrix * xs;
}

double nmse(const SignalVector& x, const SignalVector& xr) {
    if (x.size() != xr.size()) {
        throw ValidationError("signal lengths differ");
    }
    const double ref = x.squaredNorm();
    if (ref == 0.0) {
        throw ValidationError("NMSE undefined for zero reference signal");
    }
    return (xr - x).squaredNorm() / ref;
}

double recoverability_margin(const SamplingOperator& d, const Limiter& b) {
    if (b.size() != d.set.ambient()) {
        throw ValidationError("limiter dimension does not match sampling operator");
    }
    CMatrix dbar_b = b.matrix;
    for (int v : d.set.vertices()) {
        dbar_b.row(v).setZero();
    }
    const RVector sv = linalg::singular_values(dbar_b);
    return sv.size() == 0 ? 0.0 : sv(0);
}

CMatrix sampled_adjacency(const SamplingOperator& d, const GlctOperator& op,
                          const BandlimitSpec& spec, const CVector& lambda_a) {
    check_compatible(d, op);
    if (d.set.size() != spec.size()) {
        throw ValidationError("sampled adjacency requires |S| = |F|");
    }
    if (lambda_a.size() != op.size()) {
        throw ValidationError("eigenvalue vector length does not match operator size");
    }
    if (!is_qualified(d, op, spec)) {
        throw ValidationError("sampling operator is not qualified");
    }
    const CMatrix p_inv = d.select_rows(band_basis(op, spec));  // P^{-1} = D O^{-M}_F
    const CMatrix p = p_inv.inverse();
    CVector lam(spec.size());
    for (int t = 0; t < spec.size(); ++t) {
        lam(t) = lambda_a(spec.set.indices()[static_cast<std::size_t>(t)]);
    }
    return p_inv * lam.asDiagonal() * p;
}

SelectionScore objective_value(Strategy s, const CMatrix& rows) {
    if (rows.rows() == 0 || rows.cols() == 0) {
        return {0, 0.0};
    }
    const RVector sv = linalg::singular_values(rows);
    const int rank = linalg::numerical_rank(sv);
    const RVector nz = sv.head(rank);
    double value = 0.0;
    switch (s) {
        case Strategy::MaxSig:
            value = sv.squaredNorm();
            break;
        case Strategy::MaxSigMin:
        case Strategy::MinPinv:
            value = rank > 0 ? nz(rank - 1) : 0.0;
            break;
        case Strategy::MaxVol:
            for (int i = 0; i < rank; ++i) {
                value += std::log(nz(i) * nz(i));
            }
            break;
        case Strategy::MinFro:
            for (int i = 0; i < rank; ++i) {
                value -= 1.0 / (nz(i) * nz(i));
            }
            break;
        case Strategy::Random:
        case Strategy::Exhaustive:
            throw ValidationError("not an optimizing strategy");
    }
    return {rank, value};
}

SelectionScore objective_value(Strategy s, const GlctOperator& op, const BandlimitSpec& spec,
                               const SamplingSet& set) {
    return objective_value(s, SamplingOperator(set).select_rows(band_basis(op, spec)));
}

bool better(const SelectionScore& a, const SelectionScore& b) {
    if (a.rank != b.rank) {
        return a.rank > b.rank;
    }
    const double scale = std::max({1.0, std::abs(a.value), std::abs(b.value)});
    return a.value > b.value + kTieTol * scale;
}

SamplingSet greedy_select(Strategy s, const GlctOperator& op, const BandlimitSpec& spec, int m,
                          std::uint64_t seed) {
    check_compatible(op, spec);
    const int n = op.size();
    if (m < 1 || m > n) {
        throw ValidationError("sample count " + std::to_string(m) + " must lie in [1, " +
                              std::to_string(n) + "]");
    }
    if (s == Strategy::Exhaustive) {
        throw ValidationError("use exhaustive_select for the exhaustive strategy");
    }
    if (s == Strategy::Random) {
        std::mt19937_64 rng(seed);
        std::vector<int> pool(static_cast<std::size_t>(n));
        std::iota(pool.begin(), pool.end(), 0);
        for (int i = 0; i < m; ++i) {
            std::uniform_int_distribution<int> pick(i, n - 1);
            std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(pick(rng))]);
        }
        pool.resize(static_cast<std::size_t>(m));
        return SamplingSet(std::move(pool), n);
    }

    const CMatrix basis = band_basis(op, spec);
    const auto k = basis.cols();
    std::vector<int> chosen;
    std::vector<char> used(static_cast<std::size_t>(n), 0);
    CMatrix rows(0, k);
    std::vector<SelectionScore> scores(static_cast<std::size_t>(n));
    for (int step = 0; step < m; ++step) {
        CMatrix grown(rows.rows() + 1, k);
        grown.topRows(rows.rows()) = rows;
        parallel_for(static_cast<std::size_t>(n), [&](std::size_t c) {
            if (used[c]) {
                return;
            }
            CMatrix cand = grown;
            cand.row(rows.rows()) = basis.row(static_cast<Eigen::Index>(c));
            scores[c] = objective_value(s, cand);
        });
        int best = -1;
        for (int c = 0; c < n; ++c) {
            if (used[static_cast<std::size_t>(c)]) {
                continue;
            }
            if (best < 0 || better(scores[static_cast<std::size_t>(c)],
                                   scores[static_cast<std::size_t>(best)])) {
                best = c;
            }
        }
        used[static_cast<std::size_t>(best)] = 1;
        chosen.push_back(best);
        grown.row(rows.rows()) = basis.row(best);
        rows = std::move(grown);
    }
    return SamplingSet(std::move(chosen), n);
}

SamplingSet exhaustive_select(Strategy s, const GlctOperator& op, const BandlimitSpec& spec, int m) {
    check_compatible(op, spec);
    const int n = op.size();
    if (s == Strategy::Random || s == Strategy::Exhaustive) {
        throw ValidationError("not an optimizing strategy");
    }
    if (m < 1 || m > n) {
        throw ValidationError("sample count " + std::to_string(m) + " must lie in [1, " +
                              std::to_string(n) + "]");
    }
    if (binomial(n, m) > kExhaustiveLimit) {
        throw ValidationError("exhaustive search over C(" + std::to_string(n) + ", " +
                              std::to_string(m) + ") subsets exceeds 1e6; use greedy_select");
    }
    const CMatrix basis = band_basis(op, spec);
    std::vector<int> idx(static_cast<std::size_t>(m));
    std::iota(idx.begin(), idx.end(), 0);
    std::vector<int> best_idx = idx;
    std::optional<SelectionScore> best;
    CMatrix rows(m, basis.cols());
    while (true) {
        for (int i = 0; i < m; ++i) {
            rows.row(i) = basis.row(idx[static_cast<std::size_t>(i)]);
        }
        const SelectionScore score = objective_value(s, rows);
        if (!best || better(score, *best)) {
            best = score;
            best_idx = idx;
        }
        int i = m - 1;
        while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - m + i) {
            --i;
        }
        if (i < 0) {
            break;
        }
        ++idx[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < m; ++j) {
            idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
        }
    }
    return SamplingSet(std::move(best_idx), n);
}

}  // namespace glctkit
