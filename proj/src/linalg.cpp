#include "freegrass/linalg.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace freegrass {

namespace {

using EMat = Eigen::Matrix<cd, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

EMat to_eigen(const ComplexMatrix& a) {
    EMat m(a.rows(), a.cols());
    std::copy(a.data(), a.data() + a.size(), m.data());
    return m;
}

ComplexMatrix from_eigen(const EMat& m) {
    ComplexMatrix a(m.rows(), m.cols());
    std::copy(m.data(), m.data() + m.size(), a.data());
    return a;
}

}  // namespace

std::optional<LuFactors> lu_factor(const ComplexMatrix& a) {
    if (!a.square()) throw DimensionMismatch("lu_factor: not square");
    const std::size_t n = a.rows();
    LuFactors f{a, {}, 1};
    f.perm.resize(n);
    for (std::size_t i = 0; i < n; ++i) f.perm[i] = i;
    const double threshold = kSingularThreshold * a.max_abs();
    if (n > 0 && a.max_abs() == 0.0) return std::nullopt;
    ComplexMatrix& m = f.lu;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        double best = std::abs(m(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            double v = std::abs(m(i, k));
            if (v > best) {
                best = v;
                piv = i;
            }
        }
        if (best <= threshold) return std::nullopt;
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(piv, j));
            std::swap(f.perm[k], f.perm[piv]);
            f.sign = -f.sign;
        }
        const cd inv_pivot = 1.0 / m(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const cd l = m(i, k) * inv_pivot;
            m(i, k) = l;
            if (l == cd(0.0)) continue;
            for (std::size_t j = k + 1; j < n; ++j) m(i, j) -= l * m(k, j);
        }
    }
    return f;
}

ComplexMatrix LuFactors::solve(const ComplexMatrix& rhs) const {
    const std::size_t n = lu.rows();
    if (rhs.rows() != n) throw DimensionMismatch("lu solve: rhs rows");
    const std::size_t m = rhs.cols();
    ComplexMatrix x(n, m);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) x(i, j) = rhs(perm[i], j);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < i; ++k) {
            const cd l = lu(i, k);
            if (l == cd(0.0)) continue;
            for (std::size_t j = 0; j < m; ++j) x(i, j) -= l * x(k, j);
        }
    for (std::size_t ii = n; ii-- > 0;) {
        for (std::size_t k = ii + 1; k < n; ++k) {
            const cd u = lu(ii, k);
            if (u == cd(0.0)) continue;
            for (std::size_t j = 0; j < m; ++j) x(ii, j) -= u * x(k, j);
        }
        const cd inv = 1.0 / lu(ii, ii);
        for (std::size_t j = 0; j < m; ++j) x(ii, j) *= inv;
    }
    return x;
}

ComplexMatrix LuFactors::inverse() const { return solve(ComplexMatrix::identity(lu.rows())); }

cd LuFactors::determinant() const {
    cd d = static_cast<double>(sign);
    for (std::size_t i = 0; i < lu.rows(); ++i) d *= lu(i, i);
    return d;
}

ComplexMatrix inverse(const ComplexMatrix& a) {
    auto f = lu_factor(a);
    if (!f) throw SingularMatrix("matrix is singular to working threshold");
    return f->inverse();
}

std::optional<ComplexMatrix> try_inverse(const ComplexMatrix& a) {
    auto f = lu_factor(a);
    if (!f) return std::nullopt;
    return f->inverse();
}

bool is_invertible(const ComplexMatrix& a) { return lu_factor(a).has_value(); }

ComplexMatrix solve(const ComplexMatrix& a, const ComplexMatrix& rhs) {
    auto f = lu_factor(a);
    if (!f) throw SingularMatrix("matrix is singular to working threshold");
    return f->solve(rhs);
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& a) {
    if (!is_hermitian(a)) throw NotHermitian("matrix is not Hermitian within tolerance");
    EMat m = to_eigen(a);
    Eigen::MatrixXcd h = (m + m.adjoint()) * 0.5;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    return std::vector<double>(ev.data(), ev.data() + ev.size());
}

double hermitian_min_eigenvalue(const ComplexMatrix& a) {
    auto ev = hermitian_eigenvalues(a);
    if (ev.empty()) throw DimensionMismatch("empty matrix");
    return *std::min_element(ev.begin(), ev.end());
}

double spectral_norm(const ComplexMatrix& a) {
    if (a.size() == 0) return 0.0;
    EMat m = to_eigen(a);
    Eigen::MatrixXcd g = (a.rows() >= a.cols()) ? Eigen::MatrixXcd(m.adjoint() * m)
                                                 : Eigen::MatrixXcd(m * m.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g, Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

bool is_hermitian(const ComplexMatrix& a, double tol) {
    if (!a.square()) return false;
    const double scale = std::max(1.0, a.max_abs());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i; j < a.cols(); ++j)
            if (std::abs(a(i, j) - std::conj(a(j, i))) > tol * scale) return false;
    return true;
}

bool is_unitary(const ComplexMatrix& a, double tol) {
    if (!a.square()) return false;
    return max_abs_diff(a * a.adjoint(), ComplexMatrix::identity(a.rows())) <= tol;
}

ComplexMatrix least_squares(const ComplexMatrix& x, const ComplexMatrix& y) {
    ComplexMatrix xh = x.adjoint();
    return solve(xh * x, xh * y);
}

ComplexMatrix ginibre(std::size_t rows, std::size_t cols, Rng& rng) {
    ComplexMatrix g(rows, cols);
    for (std::size_t i = 0; i < g.size(); ++i) g.data()[i] = rng.complex_normal();
    return g;
}

ComplexMatrix haar_unitary(std::size_t n, Rng& rng) {
    if (n == 0) throw DimensionMismatch("haar_unitary: n must be >= 1");
    EMat z = to_eigen(ginibre(n, n, rng));
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
    Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(n, n);
    const auto& r = qr.matrixQR();
    for (std::size_t j = 0; j < n; ++j) {
        const cd rjj = r(j, j);
        const double mag = std::abs(rjj);
        const cd phase = mag > 0.0 ? rjj / mag : cd(1.0);
        q.col(j) *= phase;
    }
    EMat out = q;
    return from_eigen(out);
}

}  // namespace freegrass
