#include "glctkit/glct.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <cstdio>
#include <tuple>

#include "json.hpp"

#include "glctkit/errors.hpp"
#include "glctkit/io.hpp"

namespace glctkit {

namespace {

constexpr double kMaxCondition = 1e12;
constexpr double kNormalTol = 1e-10;

void check_square_finite(const CMatrix& m, const char* what) {
    if (m.rows() != m.cols()) {
        throw ValidationError(std::string(what) + " must be square");
    }
    if (!m.allFinite()) {
        throw ValidationError(std::string(what) + " has non-finite entries");
    }
}

bool is_real_symmetric(const CMatrix& m) {
    return m.imag().isZero(0.0) && m.real() == m.real().transpose();
}

enum class Order { Descending, Ascending };

EigenPairs finish(CMatrix vectors, CVector values, bool unitary, Order order) {
    const auto perm = order == Order::Descending ? linalg::descending_order(values)
                                                 : linalg::ascending_order(values);
    linalg::apply_order(perm, values, vectors);
    linalg::fix_column_phases(vectors);
    return {std::move(vectors), std::move(values), unitary};
}

EigenPairs decompose_shift(const CMatrix& a, Order order) {
    check_square_finite(a, "shift matrix");
    if (is_real_symmetric(a)) {
        Eigen::SelfAdjointEigenSolver<RMatrix> es(a.real());
        return finish(es.eigenvectors().cast<Complex>(), es.eigenvalues().cast<Complex>(), true, order);
    }
    if (linalg::is_hermitian(a)) {
        Eigen::SelfAdjointEigenSolver<CMatrix> es(a);
        return finish(es.eigenvectors(), es.eigenvalues().cast<Complex>(), true, order);
    }
    Eigen::ComplexEigenSolver<CMatrix> es(a);
    if (es.info() != Eigen::Success) {
        throw NumericalError("adjacency not reliably diagonalizable (eigensolver did not converge)");
    }
    CMatrix vectors = es.eigenvectors();
    vectors.colwise().normalize();
    if (linalg::condition_number(vectors) > kMaxCondition) {
        throw NumericalError("adjacency not reliably diagonalizable");
    }
    return finish(std::move(vectors), es.eigenvalues(), false, order);
}

CMatrix inverse_of(const EigenPairs& e) {
    if (e.unitary) {
        return e.vectors.adjoint();
    }
    return e.vectors.partialPivLu().inverse();
}

CMatrix laplacian_of(const CMatrix& a) {
    const CMatrix sym = linalg::is_hermitian(a) ? a : CMatrix(0.5 * (a + a.adjoint()));
    CMatrix l = -sym;
    for (Eigen::Index i = 0; i < l.rows(); ++i) {
        l(i, i) += sym.row(i).sum();
    }
    return l;
}

}  // namespace

void GlctParams::validate() const {
    if (!std::isfinite(alpha) || !std::isfinite(beta) || !std::isfinite(chirp_l) ||
        !std::isfinite(chirp_f)) {
        throw ValidationError("transform parameters must be finite");
    }
    if (!(beta > 0.0)) {
        throw ValidationError("beta must be positive");
    }
}

GlctOperator::GlctOperator(CMatrix forward, CMatrix inverse, GlctParams params, SpectralBasis basis)
    : forward_(std::move(forward)),
      inverse_(std::move(inverse)),
      params_(params),
      basis_(std::move(basis)) {}

std::uint64_t GlctOperator::basis_hash() const {
    std::uint64_t h = linalg::hash_matrix(basis_.shift_vectors);
    h = linalg::hash_matrix(basis_.shift_values, h);
    h = linalg::hash_matrix(basis_.gft_vectors, h);
    h = linalg::hash_matrix(basis_.gft_values, h);
    return linalg::hash_matrix(basis_.scaled_gft_vectors, h);
}

EigenPairs decompose_adjacency(const CMatrix& a) { return decompose_shift(a, Order::Descending); }

EigenPairs decompose_laplacian(const CMatrix& l) { return decompose_shift(l, Order::Ascending); }

EigenPairs unitary_eig(const CMatrix& w) {
    check_square_finite(w, "GFT matrix");
    if (w.rows() == 0) {
        return {CMatrix(), CVector(), true};
    }
    Eigen::ComplexSchur<CMatrix> schur(w);
    if (schur.info() != Eigen::Success) {
        throw NumericalError("Schur decomposition did not converge");
    }
    const CMatrix& t = schur.matrixT();
    const double off = t.triangularView<Eigen::StrictlyUpper>().toDenseMatrix().norm();
    if (off <= kNormalTol * std::max(1.0, t.norm())) {
        return finish(schur.matrixU(), t.diagonal(), true, Order::Descending);
    }
    Eigen::ComplexEigenSolver<CMatrix> es(w);
    if (es.info() != Eigen::Success) {
        throw NumericalError("GFT matrix not reliably diagonalizable (eigensolver did not converge)");
    }
    CMatrix vectors = es.eigenvectors();
    vectors.colwise().normalize();
    if (linalg::condition_number(vectors) > kMaxCondition) {
        throw NumericalError("GFT matrix not reliably diagonalizable");
    }
    return finish(std::move(vectors), es.eigenvalues(), false, Order::Descending);
}

CVector fractional_diag(const CVector& lambda, double alpha) {
    CVector out(lambda.size());
    for (Eigen::Index i = 0; i < lambda.size(); ++i) {
        const Complex z = lambda(i);
        if (z == Complex(0.0, 0.0)) {
            if (alpha <= 0.0) {
                throw NumericalError("zero eigenvalue not invertible");
            }
            out(i) = 0.0;
            continue;
        }
        if (alpha == 1.0) {
            out(i) = z;
            continue;
        }
        if (alpha == 0.0) {
            out(i) = 1.0;
            continue;
        }
        double arg = std::arg(z);
        if (arg <= -std::numbers::pi) {
            arg = std::numbers::pi;  // atan2(-0, x<0) lands on -pi; the principal branch wants +pi
        }
        const double mag = std::pow(std::abs(z), alpha);
        out(i) = std::polar(mag, alpha * arg);
    }
    return out;
}

CVector chirp_diag(int n, double l, double f) {
    if (!std::isfinite(l) || !std::isfinite(f)) {
        throw ValidationError("chirp parameters must be finite");
    }
    CVector out(n);
    for (int k = 1; k <= n; ++k) {
        // Phase in quarter turns, reduced mod 4 before scaling by pi/2.
        const double turns = std::fmod(static_cast<double>(k) * (l * k + f), 4.0);
        const double q = turns < 0.0 ? turns + 4.0 : turns;
        Complex v;
        if (q == std::floor(q)) {
            static const Complex quarter[4] = {{1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};
            v = quarter[static_cast<int>(q) % 4];
        } else {
            v = std::polar(1.0, q * std::numbers::pi / 2.0);
        }
        out(k - 1) = v;
    }
    return out;
}

GlctOperator build_operator(const AdjacencyMatrix& a, const GlctParams& p, BasisKind kind) {
    p.validate();
    check_square_finite(a, "adjacency matrix");
    const CMatrix shift = kind == BasisKind::Laplacian ? laplacian_of(a) : a;
    auto decompose = [kind](const CMatrix& m) {
        return kind == BasisKind::Laplacian ? decompose_laplacian(m) : decompose_adjacency(m);
    };

    const EigenPairs base = decompose(shift);
    const CMatrix gft = inverse_of(base);
    const EigenPairs frac = unitary_eig(gft);

    const CMatrix scaled_shift = shift / p.beta;
    const EigenPairs scaled = decompose(scaled_shift);
    const EigenPairs scaled_frac = unitary_eig(inverse_of(scaled));

    const int n = static_cast<int>(a.rows());
    const CVector chirp = chirp_diag(n, p.chirp_l, p.chirp_f);
    const CVector frac_pow = fractional_diag(frac.values, p.alpha);
    const CVector frac_inv = fractional_diag(frac.values, -p.alpha);

    const CMatrix q_inv = inverse_of(frac);
    const CMatrix qb_inv = inverse_of(scaled_frac);

    CMatrix forward = chirp.asDiagonal() * scaled_frac.vectors * frac_pow.asDiagonal() * q_inv;
    CMatrix inverse = frac.vectors * frac_inv.asDiagonal() * qb_inv * chirp.conjugate().asDiagonal();

    SpectralBasis basis;
    basis.kind = kind;
    basis.shift_vectors = base.vectors;
    basis.shift_values = base.values;
    basis.gft = gft;
    basis.gft_vectors = frac.vectors;
    basis.gft_values = frac.values;
    basis.scaled_gft_vectors = scaled_frac.vectors;
    basis.scaled_gft_values = scaled_frac.values;
    basis.unitary = base.unitary && frac.unitary && scaled.unitary && scaled_frac.unitary;
    return GlctOperator(std::move(forward), std::move(inverse), p, std::move(basis));
}

GlctOperator build_operator(const Graph& g, const GlctParams& p, BasisKind kind) {
    return build_operator(adjacency(g), p, kind);
}

GlctParams params_from_matrix(const GlctMatrixParams& m) {
    if (!std::isfinite(m.a) || !std::isfinite(m.b) || !std::isfinite(m.c) || !std::isfinite(m.d)) {
        throw ValidationError("matrix entries must be finite");
    }
    if (std::abs(m.a * m.d - m.b * m.c - 1.0) > 1e-12) {
        throw ValidationError("parameter matrix must satisfy ad - bc = 1");
    }
    const double r2 = m.a * m.a + m.b * m.b;
    if (r2 == 0.0) {
        throw ValidationError("parameter matrix needs (a, b) != (0, 0)");
    }
    GlctParams p;
    p.beta = std::sqrt(r2);
    p.alpha = std::atan2(m.b, m.a);
    p.chirp_l = 0.0;
    p.chirp_f = (m.a * m.c + m.b * m.d) / r2;
    return p;
}

SignalVector glct(const GlctOperator& op, const SignalVector& x) {
    if (x.size() != op.size()) {
        throw ValidationError("signal length " + std::to_string(x.size()) +
                              " does not match operator size " + std::to_string(op.size()));
    }
    return op.forward() * x;
}

SignalVector iglct(const GlctOperator& op, const SignalVector& xhat) {
    if (xhat.size() != op.size()) {
        throw ValidationError("spectrum length " + std::to_string(xhat.size()) +
                              " does not match operator size " + std::to_string(op.size()));
    }
    return op.inverse() * xhat;
}

std::string to_string(BasisKind kind) {
    return kind == BasisKind::Laplacian ? "laplacian" : "adjacency";
}

void write_operator(const GlctOperator& op, const std::filesystem::path& csv_path,
                    const std::filesystem::path& json_path) {
    std::ofstream csv(csv_path);
    if (!csv) {
        throw ValidationError("cannot write '" + csv_path.string() + "'");
    }
    csv << "row,col,real,imag\n";
    const CMatrix& f = op.forward();
    for (Eigen::Index i = 0; i < f.rows(); ++i) {
        for (Eigen::Index j = 0; j < f.cols(); ++j) {
            csv << i << ',' << j << ',' << io::format_double(f(i, j).real()) << ','
                << io::format_double(f(i, j).imag()) << '\n';
        }
    }

    char hash[17];
    std::snprintf(hash, sizeof(hash), "%016llx", static_cast<unsigned long long>(op.basis_hash()));
    nlohmann::ordered_json meta;
    meta["n"] = op.size();
    meta["params"] = {{"alpha", op.params().alpha},
                      {"beta", op.params().beta},
                      {"chirp_l", op.params().chirp_l},
                      {"chirp_f", op.params().chirp_f}};
    meta["basis"] = to_string(op.basis().kind);
    meta["ordering"] = op.basis().kind == BasisKind::Laplacian
                           ? "shift eigenvalues ascending by real part, ties ascending imaginary part"
                           : "shift eigenvalues descending by real part, ties ascending imaginary part";
    meta["phase_convention"] = "largest-magnitude eigenvector entry real positive";
    meta["chirp_index"] = "k = 1..N";
    meta["basis_hash"] = hash;
    std::ofstream js(json_path);
    if (!js) {
        throw ValidationError("cannot write '" + json_path.string() + "'");
    }
    js << meta.dump(2) << '\n';
}

CMatrix read_operator_matrix(const std::filesystem::path& csv_path) {
    std::ifstream in(csv_path);
    if (!in) {
        throw ValidationError("cannot open '" + csv_path.string() + "'");
    }
    std::string line;
    std::getline(in, line);
    if (io::split_csv_line(line) != std::vector<std::string>{"row", "col", "real", "imag"}) {
        throw ParseError(1, "expected header 'row,col,real,imag'");
    }
    std::vector<std::tuple<long, long, Complex>> entries;
    long rows = 0;
    long cols = 0;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) {
            continue;
        }
        const auto f = io::split_csv_line(line);
        if (f.size() != 4) {
            throw ParseError(lineno, "expected 4 fields");
        }
        try {
            const long r = std::stol(f[0]);
            const long c = std::stol(f[1]);
            entries.emplace_back(r, c, Complex(std::stod(f[2]), std::stod(f[3])));
            rows = std::max(rows, r + 1);
            cols = std::max(cols, c + 1);
        } catch (const std::exception&) {
            throw ParseError(lineno, "malformed entry");
        }
    }
    CMatrix m = CMatrix::Zero(rows, cols);
    for (const auto& [r, c, v] : entries) {
        m(r, c) = v;
    }
    return m;
}

}  // namespace glctkit
