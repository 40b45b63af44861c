#include "freegrass/duality.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "freegrass/calculus.hpp"
#include "freegrass/linalg.hpp"

namespace freegrass {

namespace {

ComplexMatrix scaling(double t) { return ComplexMatrix{{1.0, 0.0}, {0.0, std::exp(t)}}; }

// (id (x) id (x) phi) of an (m n d)-square matrix with E-blocks.
ComplexMatrix contract(const Functional& phi, const ComplexMatrix& m, std::size_t outer, std::size_t d) {
    return apply_blockwise(phi, m, outer, d);
}

// Richardson-extrapolated central difference of t -> f(t) at 0.
template <typename F>
ComplexMatrix derivative_at_zero(F&& f) {
    const double h = kFiniteDifferenceStep;
    auto central = [&](double step) { return (f(step) - f(-step)) * cd(1.0 / (2.0 * step)); };
    return (central(h / 2.0) * cd(4.0) - central(h)) * cd(1.0 / 3.0);
}

}  // namespace

DualitySetup DualitySetup::make(const BaseAlgebra& alg, std::size_t d, const GrassPoint& pi, const Functional& phi) {
    DualitySetup s{Embedding::make(alg, d), pi, phi};
    if (pi.n != 1 || pi.alg.kind != AlgebraKind::FullMatrix || pi.alg.k != d)
        throw std::invalid_argument("pi must be a level-1 point over M_d");
    if (phi.dual.rows() != d || phi.dual.cols() != d) throw std::invalid_argument("functional is not on M_d");
    const ComplexMatrix one = s.emb.element(ComplexMatrix::identity(alg.k));
    if (max_abs_diff(one, ComplexMatrix::identity(d)) > 1e-12) throw std::invalid_argument("embedding is not unital");
    for (std::size_t i = 0; i < alg.dim(); ++i) {
        const ComplexMatrix bi = alg.basis(i);
        if (max_abs_diff(s.emb.element(bi.adjoint()), s.emb.element(bi).adjoint()) > 1e-12)
            throw std::invalid_argument("embedding does not preserve the involution");
        for (std::size_t j = 0; j < alg.dim(); ++j) {
            const ComplexMatrix bj = alg.basis(j);
            if (max_abs_diff(s.emb.element(bi * bj), s.emb.element(bi) * s.emb.element(bj)) > 1e-12)
                throw std::invalid_argument("embedding is not multiplicative");
        }
    }
    return s;
}

ComplexMatrix transform(const DualitySetup& s, const GrassPoint& sigma) {
    return contract(s.phi, resolvent(s.pi, sigma, s.emb), sigma.n, s.d());
}

GrassFunction transform_fn(const DualitySetup& s) {
    return [s](const GrassPoint& sigma) { return transform(s, sigma); };
}

double verify_comultiplication(const DualitySetup& s, const GrassPoint& s1, const GrassPoint& s2) {
    const std::size_t m = s1.n, n = s2.n;
    const ComplexMatrix lhs =
        contract(s.phi, e_tensor_product(resolvent(s.pi, s1, s.emb), resolvent(s.pi, s2, s.emb), m, n, s.d()), m * n,
                 s.d());
    const ComplexMatrix dq = grass_diff_quotient(transform_fn(s), s1, s2, 1);
    return max_abs_diff(lhs, -dq);
}

double verify_trace_symmetry(const DualitySetup& s, const GrassPoint& s1, const GrassPoint& s2) {
    const std::size_t m = s1.n, n = s2.n;
    const ComplexMatrix x = grass_diff_quotient(transform_fn(s), s1, s2, 1);
    const ComplexMatrix y = grass_diff_quotient(transform_fn(s), s2, s1, 1);
    double r = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t j = 0; j < m; ++j)
                for (std::size_t l = 0; l < n; ++l)
                    r = std::max(r, std::abs(x(i * n + k, j * n + l) - y(k * m + i, l * m + j)));
    return r;
}

LambdaDualityResidual verify_lambda_duality(const DualitySetup& s, const GrassPoint& sigma) {
    LambdaDualityResidual out;
    const std::size_t n = sigma.n, d = s.d();
    const ComplexMatrix dr =
        derivative_at_zero([&](double t) { return resolvent(s.pi, c_action(scaling(-t), sigma), s.emb); });
    const ComplexMatrix lhs = contract(s.phi, dr, n, d);
    // (Lambda - id) U(phi)(sigma) = d/dt U(phi)(diag(1, e^t) sigma)
    const ComplexMatrix lam_minus_id =
        derivative_at_zero([&](double t) { return transform(s, c_action(scaling(t), sigma)); });
    out.duality = max_abs_diff(lhs, -lam_minus_id);

    const double t = 0.3;
    const GrassPoint pi_t = c_action(scaling(t), s.pi);
    const ComplexMatrix a = resolvent(pi_t, sigma, s.emb);
    const ComplexMatrix b = resolvent(s.pi, c_action(scaling(-t), sigma), s.emb) * cd(std::exp(-t));
    out.scaling = max_abs_diff(a, b);
    return out;
}

double verify_involution(const DualitySetup& s, const GrassPoint& sigma) {
    const DualitySetup st{s.emb, star(s.pi), s.phi.star()};
    return max_abs_diff(transform(s, sigma).adjoint(), transform(st, star(sigma)));
}

MatricialLawResiduals verify_matricial_laws(const DualitySetup& s, const GrassPoint& s1, const GrassPoint& s2,
                                            const ComplexMatrix& g) {
    MatricialLawResiduals r;
    const ComplexMatrix u1 = transform(s, s1), u2 = transform(s, s2);
    r.direct_sum = max_abs_diff(transform(s, direct_sum(s1, s2)), direct_sum(u1, u2));
    r.similarity = max_abs_diff(transform(s, scalar_action(g, s1)), g * u1 * inverse(g));
    return r;
}

ComplexMatrix choi_matrix(const DualitySetup& s, const GrassPoint& sigma) {
    const std::size_t n = sigma.n;
    // K(i n + k, j n + l) is entry (i, l) of the block for t = e_jk.
    const ComplexMatrix k = grass_diff_quotient(transform_fn(s), sigma, star(sigma), 1);
    ComplexMatrix theta(n * n, n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t kk = 0; kk < n; ++kk)
                for (std::size_t l = 0; l < n; ++l) theta(i * n + j, l * n + kk) = -k(i * n + kk, j * n + l);
    return theta;
}

PositivityResult dual_positivity_check(const DualitySetup& s, const GrassPoint& sigma, double tol) {
    if (!equivalent(star(s.pi), s.pi)) throw std::invalid_argument("dual positivity needs pi = pi^*");
    const ComplexMatrix theta = choi_matrix(s, sigma);
    const ComplexMatrix herm = (theta + theta.adjoint()) * cd(0.5);
    PositivityResult r;
    r.min_choi_eigenvalue = hermitian_min_eigenvalue(herm);
    const double asym = max_abs_diff(theta, theta.adjoint());
    r.is_cp = asym <= tol * std::max(1.0, theta.max_abs()) && r.min_choi_eigenvalue >= -tol;
    return r;
}

bool functional_is_positive(const Functional& phi, double tol) {
    const ComplexMatrix p = phi.dual.transpose();
    if (!is_hermitian(p, tol)) return false;
    return hermitian_min_eigenvalue((p + p.adjoint()) * cd(0.5)) >= -tol;
}

InjectivityReport injectivity_rank(const DualitySetup& s, std::size_t level, Rng& rng) {
    const std::size_t d = s.d(), dim = d * d;
    const std::size_t samples = 2 * dim;
    std::vector<ComplexMatrix> resolvents;
    while (resolvents.size() < samples) {
        const GrassPoint sigma = GrassPoint::random(s.algebra(), level, rng);
        if (!in_resolvent_set(s.pi, sigma, s.emb)) continue;
        resolvents.push_back(resolvent(s.pi, sigma, s.emb));
    }
    // Column (p, q) holds the values of U(e_pq-coordinate functional).
    const std::size_t rows = samples * level * level;
    ComplexMatrix m(rows, dim);
    for (std::size_t p = 0; p < d; ++p)
        for (std::size_t q = 0; q < d; ++q) {
            const Functional f = Functional::matrix_unit(d, p, q);
            std::size_t r = 0;
            for (const auto& res : resolvents) {
                const ComplexMatrix u = apply_blockwise(f, res, level, d);
                for (std::size_t e = 0; e < u.size(); ++e) m(r++, p * d + q) = u.data()[e];
            }
        }
    const std::vector<double> ev = hermitian_eigenvalues(m.adjoint() * m);
    const double top = *std::max_element(ev.begin(), ev.end());
    InjectivityReport out;
    out.target = dim;
    for (double e : ev)
        if (e > 1e-20 * top) ++out.rank;
    out.full_rank = out.rank == dim;
    return out;
}

}  // namespace freegrass
