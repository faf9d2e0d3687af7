#include "glctkit/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <numeric>

namespace glctkit::linalg {

namespace {

// BDCSVD falls back to Jacobi below its own block size, so it is fine for all sizes.
Eigen::BDCSVD<CMatrix> svd(const CMatrix& m, unsigned options) {
    return Eigen::BDCSVD<CMatrix>(m, options);
}

constexpr double kOrderTieTol = 1e-9;

// Real parts are quantized to a 1e-9 grid so the comparator stays a strict weak
// ordering while round-off level differences in conjugate pairs still tie.
double order_key(double re) { return std::nearbyint(re / kOrderTieTol); }

}  // namespace

RVector singular_values(const CMatrix& m) {
    if (m.size() == 0) {
        return RVector();
    }
    return svd(m, 0).singularValues();
}

int numerical_rank(const RVector& sv, double rel_cutoff) {
    if (sv.size() == 0 || sv(0) <= 0.0) {
        return 0;
    }
    const double cut = rel_cutoff * sv(0);
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > cut) {
            ++rank;
        }
    }
    return rank;
}

CMatrix pinv(const CMatrix& m, double rel_cutoff) {
    if (m.size() == 0) {
        return CMatrix::Zero(m.cols(), m.rows());
    }
    const auto dec = svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RVector& sv = dec.singularValues();
    const double cut = sv.size() > 0 ? rel_cutoff * sv(0) : 0.0;
    RVector inv = RVector::Zero(sv.size());
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > cut && sv(i) > 0.0) {
            inv(i) = 1.0 / sv(i);
        }
    }
    return dec.matrixV() * inv.cast<Complex>().asDiagonal() * dec.matrixU().adjoint();
}

double condition_number(const CMatrix& m) {
    const RVector sv = singular_values(m);
    if (sv.size() == 0) {
        return 1.0;
    }
    const double smin = sv(sv.size() - 1);
    if (smin <= 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return sv(0) / smin;
}

double hermitian_lambda_max(const CMatrix& z) {
    if (z.size() == 0) {
        return 0.0;
    }
    const CMatrix h = 0.5 * (z + z.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
}

std::pair<double, CVector> hermitian_top_eigenpair(const CMatrix& z) {
    const CMatrix h = 0.5 * (z + z.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
    const Eigen::Index last = h.rows() - 1;
    return {es.eigenvalues()(last), es.eigenvectors().col(last)};
}

double rel_frobenius(const CMatrix& a, const CMatrix& b) {
    const double denom = std::max(b.norm(), std::numeric_limits<double>::min());
    return (a - b).norm() / denom;
}

bool is_hermitian(const CMatrix& m, double tol) {
    if (m.rows() != m.cols()) {
        return false;
    }
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        for (Eigen::Index i = j; i < m.rows(); ++i) {
            if (std::abs(m(i, j) - std::conj(m(j, i))) > tol) {
                return false;
            }
        }
    }
    return true;
}

void fix_column_phases(CMatrix& vectors) {
    for (Eigen::Index j = 0; j < vectors.cols(); ++j) {
        auto col = vectors.col(j);
        double best = 0.0;
        for (Eigen::Index i = 0; i < col.size(); ++i) {
            best = std::max(best, std::abs(col(i)));
        }
        if (best == 0.0) {
            continue;
        }
        Eigen::Index pivot = 0;
        for (Eigen::Index i = 0; i < col.size(); ++i) {
            if (std::abs(col(i)) >= best * (1.0 - 1e-9)) {
                pivot = i;
                break;
            }
        }
        const Complex phase = std::conj(col(pivot)) / std::abs(col(pivot));
        col *= phase;
        col(pivot) = Complex(col(pivot).real(), 0.0);
    }
}

std::vector<int> descending_order(const CVector& values) {
    std::vector<int> order(static_cast<std::size_t>(values.size()));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        const double ka = order_key(values(a).real());
        const double kb = order_key(values(b).real());
        if (ka != kb) {
            return ka > kb;
        }
        return values(a).imag() < values(b).imag();
    });
    return order;
}

std::vector<int> ascending_order(const CVector& values) {
    std::vector<int> order(static_cast<std::size_t>(values.size()));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        const double ka = order_key(values(a).real());
        const double kb = order_key(values(b).real());
        if (ka != kb) {
            return ka < kb;
        }
        return values(a).imag() < values(b).imag();
    });
    return order;
}

void apply_order(const std::vector<int>& order, CVector& values, CMatrix& vectors) {
    CVector v(values.size());
    CMatrix m(vectors.rows(), vectors.cols());
    for (std::size_t k = 0; k < order.size(); ++k) {
        v(static_cast<Eigen::Index>(k)) = values(order[k]);
        m.col(static_cast<Eigen::Index>(k)) = vectors.col(order[k]);
    }
    values = std::move(v);
    vectors = std::move(m);
}

std::uint64_t hash_matrix(const CMatrix& m, std::uint64_t seed) {
    std::uint64_t h = seed;
    auto mix = [&h](const void* data, std::size_t len) {
        const auto* bytes = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < len; ++i) {
            h ^= bytes[i];
            h *= 1099511628211ull;
        }
    };
    const std::int64_t dims[2] = {m.rows(), m.cols()};
    mix(dims, sizeof(dims));
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            const double parts[2] = {m(i, j).real(), m(i, j).imag()};
            mix(parts, sizeof(parts));
        }
    }
    return h;
}

}  // namespace glctkit::linalg
