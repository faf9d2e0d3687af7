#pragma once

#include <vector>

#include "glctkit/glct.hpp"
#include "glctkit/linalg.hpp"

namespace glctkit {

/// Strictly increasing indices in [0, n).
class IndexSet {
public:
    IndexSet(std::vector<int> indices, int n);

    static IndexSet all(int n);
    static IndexSet empty(int n);
    static IndexSet range(int first, int last, int n);  // [first, last)

    const std::vector<int>& indices() const noexcept { return indices_; }
    int ambient() const noexcept { return n_; }
    std::size_t size() const noexcept { return indices_.size(); }
    bool contains(int i) const;
    IndexSet complement() const;

    friend bool operator==(const IndexSet&, const IndexSet&) = default;

private:
    std::vector<int> indices_;
    int n_;
};

/// Subset S of vertices.
struct VertexSet : IndexSet {
    using IndexSet::IndexSet;
    VertexSet(IndexSet s) : IndexSet(std::move(s)) {}
};

/// Subset F of spectral indices.
struct SpectralSet : IndexSet {
    using IndexSet::IndexSet;
    SpectralSet(IndexSet s) : IndexSet(std::move(s)) {}
};

/// A projector onto a vertex set (D) or a spectral band (B^M).
struct Limiter {
    enum class Kind { Vertex, Spectral };

    CMatrix matrix;
    Kind kind = Kind::Vertex;

    int size() const noexcept { return static_cast<int>(matrix.rows()); }
};

/// Default tolerance for the localization predicates.
inline constexpr double kLocalizationTol = 1e-8;

/// D = diag(d_i), d_i = 1 iff i in S.
Limiter vertex_limiter(const VertexSet& s);

/// B^M = O^{-M} Sigma_F O^M.
Limiter spectral_limiter(const SpectralSet& f, const GlctOperator& op);

/// I - L, the projector onto the complementary set (D-bar or B-bar).
Limiter complement(const Limiter& lim);

/// lambda_max(B D B) on the Hermitian part, clamped into [0, 1] within 1e-9.
double joint_lambda_max(const Limiter& b, const Limiter& d);

/// The clamped lambda_max together with its unit eigenvector.
std::pair<double, CVector> joint_top_eigenpair(const Limiter& b, const Limiter& d);

/// ||L x - x|| / ||x|| <= tol. Throws ValidationError on the zero signal.
bool is_perfectly_localized(const SignalVector& x, const Limiter& lim, double tol = kLocalizationTol);

}  // namespace glctkit
