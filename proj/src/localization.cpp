#include "glctkit/localization.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "glctkit/errors.hpp"

namespace glctkit {

IndexSet::IndexSet(std::vector<int> indices, int n) : indices_(std::move(indices)), n_(n) {
    if (n_ < 0) {
        throw ValidationError("ambient dimension must be non-negative");
    }
    for (std::size_t i = 0; i < indices_.size(); ++i) {
        if (indices_[i] < 0 || indices_[i] >= n_) {
            throw ValidationError("index " + std::to_string(indices_[i]) + " out of range [0, " +
                                  std::to_string(n_) + ")");
        }
        if (i > 0 && indices_[i] <= indices_[i - 1]) {
            throw ValidationError("indices must be strictly increasing");
        }
    }
}

IndexSet IndexSet::all(int n) { return range(0, n, n); }

IndexSet IndexSet::empty(int n) { return IndexSet({}, n); }

IndexSet IndexSet::range(int first, int last, int n) {
    std::vector<int> v(static_cast<std::size_t>(std::max(0, last - first)));
    std::iota(v.begin(), v.end(), first);
    return IndexSet(std::move(v), n);
}

bool IndexSet::contains(int i) const {
    return std::binary_search(indices_.begin(), indices_.end(), i);
}

IndexSet IndexSet::complement() const {
    std::vector<int> out;
    for (int i = 0; i < n_; ++i) {
        if (!contains(i)) {
            out.push_back(i);
        }
    }
    return IndexSet(std::move(out), n_);
}

Limiter vertex_limiter(const VertexSet& s) {
    CMatrix d = CMatrix::Zero(s.ambient(), s.ambient());
    for (int i : s.indices()) {
        d(i, i) = 1.0;
    }
    return {std::move(d), Limiter::Kind::Vertex};
}

Limiter spectral_limiter(const SpectralSet& f, const GlctOperator& op) {
    if (f.ambient() != op.size()) {
        throw ValidationError("spectral set dimension does not match operator");
    }
    const auto n = static_cast<Eigen::Index>(op.size());
    const auto k = static_cast<Eigen::Index>(f.size());
    CMatrix cols(n, k);
    CMatrix rows(k, n);
    for (Eigen::Index t = 0; t < k; ++t) {
        const int i = f.indices()[static_cast<std::size_t>(t)];
        cols.col(t) = op.inverse().col(i);
        rows.row(t) = op.forward().row(i);
    }
    CMatrix b = k == 0 ? CMatrix(CMatrix::Zero(n, n)) : CMatrix(cols * rows);
    return {std::move(b), Limiter::Kind::Spectral};
}

Limiter complement(const Limiter& lim) {
    return {CMatrix::Identity(lim.size(), lim.size()) - lim.matrix, lim.kind};
}

namespace {

double clamp_unit(double v) {
    constexpr double tol = 1e-9;
    if (v < 0.0 && v > -tol) {
        return 0.0;
    }
    if (v > 1.0 && v < 1.0 + tol) {
        return 1.0;
    }
    return v;
}

void check_pair(const Limiter& b, const Limiter& d) {
    if (b.size() != d.size()) {
        throw ValidationError("limiters must share one dimension");
    }
}

}  // namespace

double joint_lambda_max(const Limiter& b, const Limiter& d) {
    check_pair(b, d);
    return clamp_unit(linalg::hermitian_lambda_max(b.matrix * d.matrix * b.matrix));
}

std::pair<double, CVector> joint_top_eigenpair(const Limiter& b, const Limiter& d) {
    check_pair(b, d);
    auto [value, vec] = linalg::hermitian_top_eigenpair(b.matrix * d.matrix * b.matrix);
    return {clamp_unit(value), std::move(vec)};
}

bool is_perfectly_localized(const SignalVector& x, const Limiter& lim, double tol) {
    if (x.size() != lim.size()) {
        throw ValidationError("signal length does not match limiter");
    }
    const double norm = x.norm();
    if (norm == 0.0) {
        throw ValidationError("undefined for zero signal");
    }
    return (lim.matrix * x - x).norm() / norm <= tol;
}

}  // namespace glctkit
