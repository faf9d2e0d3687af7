#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "glctkit/graph.hpp"
#include "glctkit/linalg.hpp"

namespace glctkit {

/// Transform parameters in the (alpha, beta, l, f) form used by every experiment:
/// fractional order alpha, scaling beta > 0, and chirp xi_k = l*k + f for k = 1..N.
struct GlctParams {
    double alpha = 1.0;
    double beta = 1.0;
    double chirp_l = 0.0;
    double chirp_f = 0.0;

    /// Throws ValidationError unless beta > 0 and every field is finite.
    void validate() const;

    /// (1, 1, 0, 0): all stages neutral, the operator reduces to the GFT matrix.
    static GlctParams gft() { return {}; }
    /// (alpha, 1, 0, 0): the fractional GFT.
    static GlctParams gfrft(double alpha) { return {alpha, 1.0, 0.0, 0.0}; }

    friend bool operator==(const GlctParams&, const GlctParams&) = default;
};

/// The 2x2 parameter matrix M = [a b; c d] with unit determinant.
struct GlctMatrixParams {
    double a = 1.0;
    double b = 0.0;
    double c = 0.0;
    double d = 1.0;
};

/// Which shift operator supplies the first eigendecomposition.
enum class BasisKind {
    Adjacency,  ///< eigenvalues sorted by descending real part
    Laplacian,  ///< symmetric Laplacian, eigenvalues ascending (smoothest first)
};

/// Eigenvectors (columns) and matching eigenvalues, in a fixed order and gauge.
struct EigenPairs {
    CMatrix vectors;
    CVector values;
    bool unitary = false;  // true when `vectors` is unitary (normal input)
};

/// The chain of decompositions feeding the operator.
struct SpectralBasis {
    BasisKind kind = BasisKind::Adjacency;
    CMatrix shift_vectors;       // V, eigenvectors of the shift (A or L)
    CVector shift_values;        // lambda_A
    CMatrix gft;                 // V^{-1}
    CMatrix gft_vectors;         // Q, eigenvectors of V^{-1}
    CVector gft_values;          // lambda, eigenvalues of V^{-1}
    CMatrix scaled_gft_vectors;  // Q_beta, eigenvectors of V_beta^{-1}
    CVector scaled_gft_values;   // eigenvalues of V_beta^{-1}
    bool unitary = false;        // every factor unitary (Hermitian shift)
};

/// Immutable forward/inverse operator pair plus everything that built it.
class GlctOperator {
public:
    GlctOperator(CMatrix forward, CMatrix inverse, GlctParams params, SpectralBasis basis);

    const CMatrix& forward() const noexcept { return forward_; }
    const CMatrix& inverse() const noexcept { return inverse_; }
    const GlctParams& params() const noexcept { return params_; }
    const SpectralBasis& basis() const noexcept { return basis_; }
    int size() const noexcept { return static_cast<int>(forward_.rows()); }

    /// FNV-1a hash over the basis matrices, recorded in serialized sidecars.
    std::uint64_t basis_hash() const;

private:
    CMatrix forward_;
    CMatrix inverse_;
    GlctParams params_;
    SpectralBasis basis_;
};

/// Eigendecomposition A = V diag(lambda) V^{-1}. Hermitian input takes the
/// self-adjoint path (unitary V); anything else is rejected when cond(V) > 1e12.
/// Output is sorted (descending real part, ties ascending imaginary part) and
/// each eigenvector's largest-magnitude entry is real positive.
EigenPairs decompose_adjacency(const CMatrix& a);

/// Same conventions with ascending order, used for the Laplacian basis.
EigenPairs decompose_laplacian(const CMatrix& l);

/// Eigendecomposition of a (normally unitary) GFT matrix. Normal input goes
/// through the complex Schur form so the eigenvectors stay unitary even inside
/// repeated eigenspaces.
EigenPairs unitary_eig(const CMatrix& w);

/// Diagonal of Lambda^alpha, principal branch (argument in (-pi, pi]).
CVector fractional_diag(const CVector& lambda, double alpha);

/// Diagonal chirp exp(j*pi/2 * k * (l*k + f)), k = 1..n.
CVector chirp_diag(int n, double l, double f);

/// O^M = Lambda^xi Q_beta Lambda^alpha Q^{-1}; inverse Q Lambda^{-alpha} Q_beta^{-1} Lambda^{-xi}.
GlctOperator build_operator(const AdjacencyMatrix& a, const GlctParams& p,
                            BasisKind kind = BasisKind::Adjacency);

/// Convenience overload that picks adjacency or Laplacian from the graph.
GlctOperator build_operator(const Graph& g, const GlctParams& p,
                            BasisKind kind = BasisKind::Adjacency);

/// beta = sqrt(a^2 + b^2), alpha = atan2(b, a), xi = (ac + bd)/(a^2 + b^2) mapped to chirp_f.
GlctParams params_from_matrix(const GlctMatrixParams& m);

SignalVector glct(const GlctOperator& op, const SignalVector& x);
SignalVector iglct(const GlctOperator& op, const SignalVector& xhat);

/// Writes `row,col,real,imag` CSV of the forward matrix plus a JSON sidecar with
/// params, ordering convention and basis hash.
void write_operator(const GlctOperator& op, const std::filesystem::path& csv_path,
                    const std::filesystem::path& json_path);

/// Reads a matrix written by write_operator.
CMatrix read_operator_matrix(const std::filesystem::path& csv_path);

std::string to_string(BasisKind kind);

}  // namespace glctkit
