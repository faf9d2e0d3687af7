#pragma once

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace glctkit {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// A graph signal: one complex value per vertex.
using SignalVector = CVector;

namespace linalg {

/// Relative singular-value cutoff below which a direction counts as numerically null.
inline constexpr double kRankCutoff = 1e-10;

/// Singular values in descending order.
RVector singular_values(const CMatrix& m);

/// Number of singular values above `rel_cutoff * sigma_max`.
int numerical_rank(const RVector& sv, double rel_cutoff = kRankCutoff);

/// Moore-Penrose pseudo-inverse with a relative singular-value cutoff.
CMatrix pinv(const CMatrix& m, double rel_cutoff = kRankCutoff);

/// 2-norm condition number (sigma_max / sigma_min); +inf for singular input.
double condition_number(const CMatrix& m);

/// Largest eigenvalue of the Hermitian part (Z + Z*)/2.
double hermitian_lambda_max(const CMatrix& z);

/// Largest eigenvalue of (Z + Z*)/2 together with a unit eigenvector.
std::pair<double, CVector> hermitian_top_eigenpair(const CMatrix& z);

/// Relative Frobenius distance ||a - b||_F / max(||b||_F, tiny).
double rel_frobenius(const CMatrix& a, const CMatrix& b);

bool is_hermitian(const CMatrix& m, double tol = 0.0);

/// Multiplies each column by a unit-modulus scalar so that its largest-magnitude
/// entry (first one, on near-ties) becomes real and positive.
void fix_column_phases(CMatrix& vectors);

/// Permutation ordering eigenvalues by descending real part, ties by ascending
/// imaginary part. Real parts within 1e-9 of each other count as tied.
std::vector<int> descending_order(const CVector& values);

/// Same tie handling, ascending real part.
std::vector<int> ascending_order(const CVector& values);

/// Reorders `values` and the matching columns of `vectors`.
void apply_order(const std::vector<int>& order, CVector& values, CMatrix& vectors);

/// 64-bit FNV-1a over the raw bytes of the matrix entries.
std::uint64_t hash_matrix(const CMatrix& m, std::uint64_t seed = 14695981039346656037ull);

}  // namespace linalg
}  // namespace glctkit
