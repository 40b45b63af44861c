#include "freegrass/grassmann.hpp"

#include <algorithm>
#include <cmath>

#include "freegrass/linalg.hpp"

namespace freegrass {

namespace {

const cd kI(0.0, 1.0);

void check_compatible(const GrassPoint& p1, const GrassPoint& p2) {
    if (!(p1.alg == p2.alg)) throw std::invalid_argument("Grassmannian points over different algebras");
    if (p1.n != p2.n) throw DimensionMismatch("Grassmannian points at different levels");
}

ComplexMatrix cayley() { return ComplexMatrix{{-kI, kI}, {1.0, 1.0}}; }
ComplexMatrix cayley_minus() { return ComplexMatrix{{kI, -kI}, {1.0, 1.0}}; }
ComplexMatrix swap2() { return ComplexMatrix{{0.0, 1.0}, {1.0, 0.0}}; }

// Second column of g^{-1} pi, split as (b', d').
std::pair<ComplexMatrix, ComplexMatrix> transformed_columns(const GrassPoint& p, const ComplexMatrix& g_inv) {
    const ComplexMatrix col = g_inv * vstack(p.b(), p.d());
    const std::size_t s = p.block();
    return {col.block(0, 0, s, s), col.block(s, 0, s, s)};
}

// d' b'^{-1} if b' is invertible.
std::optional<ComplexMatrix> moebius(const std::pair<ComplexMatrix, ComplexMatrix>& cols) {
    auto inv = try_inverse(cols.first);
    if (!inv) return std::nullopt;
    return cols.second * *inv;
}

bool in_unit_ball(const std::pair<ComplexMatrix, ComplexMatrix>& cols) {
    auto m = moebius(cols);
    return m && spectral_norm(*m) < 1.0;
}

bool unitary_image(const std::pair<ComplexMatrix, ComplexMatrix>& cols) {
    auto m = moebius(cols);
    return m && is_unitary(*m, 1e-9);
}

}  // namespace

GrassPoint GrassPoint::from_blocks(const BaseAlgebra& alg, std::size_t n, const ComplexMatrix& a,
                                   const ComplexMatrix& b, const ComplexMatrix& c, const ComplexMatrix& d) {
    const std::size_t s = n * alg.k;
    for (const auto* m : {&a, &b, &c, &d})
        if (m->rows() != s || m->cols() != s) throw DimensionMismatch("GrassPoint block shape");
    GrassPoint p{alg, n, block2x2(a, b, c, d)};
    if (!is_invertible(p.rep)) throw std::invalid_argument("GrassPoint representative is not invertible");
    return p;
}

GrassPoint GrassPoint::from_affine(const MatOverB& beta, AffineChart chart) {
    const std::size_t s = beta.level() * beta.algebra().k;
    const ComplexMatrix id = ComplexMatrix::identity(s), z(s, s);
    if (chart == AffineChart::Graph) return {beta.algebra(), beta.level(), block2x2(z, id, id, beta.dense())};
    return {beta.algebra(), beta.level(), block2x2(id, beta.dense(), z, id)};
}

GrassPoint GrassPoint::graph_of(const ComplexMatrix& y) {
    if (!y.square()) throw DimensionMismatch("graph_of: Y must be square");
    const std::size_t d = y.rows();
    const ComplexMatrix id = ComplexMatrix::identity(d), z(d, d);
    return {BaseAlgebra::full(d), 1, block2x2(z, id, id, y)};
}

GrassPoint GrassPoint::infinity(const BaseAlgebra& alg, std::size_t n) {
    const std::size_t s = n * alg.k;
    const ComplexMatrix id = ComplexMatrix::identity(s), z(s, s);
    return {alg, n, block2x2(z, id, id, z)};
}

GrassPoint GrassPoint::random(const BaseAlgebra& alg, std::size_t n, Rng& rng) {
    for (int attempt = 0; attempt < 16; ++attempt) {
        ComplexMatrix blocks[4];
        for (auto& bl : blocks) bl = MatOverB::random(alg, n, rng, 1.0).dense();
        GrassPoint p{alg, n, block2x2(blocks[0], blocks[1], blocks[2], blocks[3])};
        if (is_invertible(p.rep)) return p;
    }
    throw SingularMatrix("could not draw an invertible representative");
}

bool equivalent(const GrassPoint& p1, const GrassPoint& p2, double tol) {
    if (!(p1.alg == p2.alg) || p1.n != p2.n) return false;
    const ComplexMatrix x1 = vstack(p1.b(), p1.d());
    const ComplexMatrix x2 = vstack(p2.b(), p2.d());
    ComplexMatrix t;
    try {
        t = least_squares(x1, x2);
    } catch (const SingularMatrix&) {
        return false;
    }
    const double scale = std::max(1.0, x2.max_abs());
    return max_abs_diff(x1 * t, x2) <= tol * scale && is_invertible(t);
}

GrassPoint reparametrize(const GrassPoint& p, const ComplexMatrix& t) {
    if (!is_invertible(t)) throw SingularMatrix("reparametrize: t is singular");
    return GrassPoint::from_blocks(p.alg, p.n, p.a(), p.b() * t, p.c(), p.d() * t);
}

GrassPoint direct_sum(const GrassPoint& p1, const GrassPoint& p2) {
    if (!(p1.alg == p2.alg)) throw std::invalid_argument("direct_sum: algebra mismatch");
    return {p1.alg, p1.n + p2.n,
            block2x2(direct_sum(p1.a(), p2.a()), direct_sum(p1.b(), p2.b()), direct_sum(p1.c(), p2.c()),
                     direct_sum(p1.d(), p2.d()))};
}

GrassPoint act(const ComplexMatrix& g, const GrassPoint& p) {
    if (g.rows() != p.rep.rows() || g.cols() != p.rep.cols()) throw DimensionMismatch("act: shape");
    if (!is_invertible(g)) throw SingularMatrix("act: g is singular");
    return {p.alg, p.n, g * p.rep};
}

GrassPoint c_action_b(const ComplexMatrix& g, const GrassPoint& p) {
    const std::size_t k = p.alg.k;
    if (g.rows() != 2 * k || g.cols() != 2 * k) throw DimensionMismatch("c_action_b: g must be 2k x 2k");
    const ComplexMatrix in = ComplexMatrix::identity(p.n);
    const ComplexMatrix big = block2x2(kron(in, g.block(0, 0, k, k)), kron(in, g.block(0, k, k, k)),
                                       kron(in, g.block(k, 0, k, k)), kron(in, g.block(k, k, k, k)));
    return act(big, p);
}

GrassPoint c_action(const ComplexMatrix& g, const GrassPoint& p) {
    if (g.rows() != 2 || g.cols() != 2) throw DimensionMismatch("c_action: g must be 2 x 2");
    return act(kron(g, ComplexMatrix::identity(p.block())), p);
}

GrassPoint scalar_action(const ComplexMatrix& s, const GrassPoint& p) {
    if (s.rows() != p.n || s.cols() != p.n) throw DimensionMismatch("scalar_action: s must be n x n");
    return act(kron(ComplexMatrix::identity(2), kron(s, ComplexMatrix::identity(p.alg.k))), p);
}

GrassPoint swap_point(const GrassPoint& p) { return c_action(swap2(), p); }

bool transversal(const GrassPoint& p1, const GrassPoint& p2) {
    check_compatible(p1, p2);
    return is_invertible(block2x2(p2.b(), p1.b(), p2.d(), p1.d()));
}

GrassPoint orthogonal(const GrassPoint& p) {
    const ComplexMatrix inv = inverse(p.rep);
    const std::size_t s = p.block();
    const ComplexMatrix x = inv.block(0, 0, s, s), y = inv.block(0, s, s, s);
    const ComplexMatrix z = inv.block(s, 0, s, s), t = inv.block(s, s, s, s);
    return {p.alg, p.n, block2x2(z.adjoint(), x.adjoint(), t.adjoint(), y.adjoint())};
}

GrassPoint star(const GrassPoint& p) {
    const ComplexMatrix inv = inverse(p.rep);
    const std::size_t s = p.block();
    const ComplexMatrix x = inv.block(0, 0, s, s), y = inv.block(0, s, s, s);
    const ComplexMatrix z = inv.block(s, 0, s, s), t = inv.block(s, s, s, s);
    return {p.alg, p.n, block2x2(t.adjoint(), y.adjoint(), -z.adjoint(), -x.adjoint())};
}

ComplexMatrix delta_permutation(std::size_t p, std::size_t q) {
    const std::size_t n = p + q;
    ComplexMatrix g(2 * n, 2 * n);
    // block rows (p, q, p, q) <- block columns (1, 4, 3, 2)
    for (std::size_t i = 0; i < p; ++i) g(i, i) = 1.0;
    for (std::size_t i = 0; i < q; ++i) g(p + i, n + p + i) = 1.0;
    for (std::size_t i = 0; i < p; ++i) g(n + i, n + i) = 1.0;
    for (std::size_t i = 0; i < q; ++i) g(n + p + i, p + i) = 1.0;
    return g;
}

bool in_set(const GrassPoint& p, DiskSet set, std::size_t pp, std::size_t qq) {
    const std::size_t s = p.block();
    auto scalar_inv = [&](const ComplexMatrix& g) { return kron(inverse(g), ComplexMatrix::identity(s)); };
    auto delta_inv = [&]() {
        if (pp + qq != p.n) throw DimensionMismatch("Delta_{p,q} needs p + q equal to the level");
        return kron(inverse(delta_permutation(pp, qq)), ComplexMatrix::identity(p.alg.k));
    };
    switch (set) {
        case DiskSet::D0:
            return in_unit_ball({p.b(), p.d()});
        case DiskSet::DInf:
            return in_unit_ball(transformed_columns(p, scalar_inv(swap2())));
        case DiskSet::U:
            return unitary_image({p.b(), p.d()});
        case DiskSet::HPlus:
            return in_unit_ball(transformed_columns(p, scalar_inv(cayley())));
        case DiskSet::HMinus:
            return in_unit_ball(transformed_columns(p, scalar_inv(cayley_minus())));
        case DiskSet::Hermitian:
            return unitary_image(transformed_columns(p, scalar_inv(cayley_minus())));
        case DiskSet::Delta:
            return in_unit_ball(transformed_columns(p, delta_inv()));
        case DiskSet::X:
            return in_unit_ball(transformed_columns(p, delta_inv() * scalar_inv(cayley())));
    }
    return false;
}

GrassPoint delta_point(const MatOverB& xyzt, std::size_t p, std::size_t q) {
    if (xyzt.level() != p + q) throw DimensionMismatch("delta_point: level must be p + q");
    const BaseAlgebra& alg = xyzt.algebra();
    const std::size_t k = alg.k, sp = p * k, sq = q * k, s = sp + sq;
    const ComplexMatrix m = xyzt.dense();
    ComplexMatrix a(s, s), b(s, s), c(s, s), d(s, s);
    a.set_block(sp, sp, ComplexMatrix::identity(sq));
    b.set_block(0, 0, ComplexMatrix::identity(sp));
    b.set_block(sp, 0, m.block(sp, 0, sq, sp));   // z
    b.set_block(sp, sp, m.block(sp, sp, sq, sq));  // t
    c.set_block(0, 0, ComplexMatrix::identity(sp));
    d.set_block(0, 0, m.block(0, 0, sp, sp));      // x
    d.set_block(0, sp, m.block(0, sp, sp, sq));    // y
    d.set_block(sp, sp, ComplexMatrix::identity(sq));
    return GrassPoint::from_blocks(alg, p + q, a, b, c, d);
}

// ---------------------------------------------------------------------------

ComplexMatrix resolvent_stack(const GrassPoint& pi, const GrassPoint& sigma, const Embedding& emb) {
    if (pi.n != 1 || pi.alg.kind != AlgebraKind::FullMatrix || pi.alg.k != emb.d)
        throw std::invalid_argument("pi must be a level-1 point over E = M_d");
    if (!(sigma.alg == emb.alg)) throw std::invalid_argument("sigma is not over the embedded algebra");
    const std::size_t n = sigma.n;
    const ComplexMatrix in = ComplexMatrix::identity(n);
    return block2x2(kron(in, pi.b()), emb.level(sigma.b(), n), kron(in, pi.d()), emb.level(sigma.d(), n));
}

bool in_resolvent_set(const GrassPoint& pi, const GrassPoint& sigma, const Embedding& emb) {
    return is_invertible(resolvent_stack(pi, sigma, emb));
}

ComplexMatrix resolvent(const GrassPoint& pi, const GrassPoint& sigma, const Embedding& emb) {
    const ComplexMatrix st = resolvent_stack(pi, sigma, emb);
    auto lu = lu_factor(st);
    if (!lu) throw NotInResolventSet("sigma is not transversal to the direct sum of pi");
    const std::size_t s = sigma.n * emb.d;
    ComplexMatrix rhs(2 * s, s);
    rhs.set_block(s, 0, ComplexMatrix::identity(s));
    const ComplexMatrix zeta = lu->solve(rhs).block(s, 0, s, s);
    return emb.level(sigma.b(), sigma.n) * zeta;
}

ComplexMatrix resolvent_closed_form(const GrassPoint& pi, const GrassPoint& sigma, const Embedding& emb) {
    const ComplexMatrix inv = inverse(pi.rep);
    const std::size_t d = emb.d, n = sigma.n;
    const ComplexMatrix in = ComplexMatrix::identity(n);
    const ComplexMatrix x = kron(in, inv.block(0, 0, d, d)), y = kron(in, inv.block(0, d, d, d));
    const ComplexMatrix beta = emb.level(sigma.b(), n), delta = emb.level(sigma.d(), n);
    auto m = try_inverse(x * beta + y * delta);
    if (!m) throw NotInResolventSet("x beta + y delta is singular");
    return beta * *m * y;
}

ComplexMatrix grass_diff_quotient(const GrassFunction& f, const GrassPoint& s1, const GrassPoint& s2, std::size_t q) {
    if (!(s1.alg == s2.alg)) throw std::invalid_argument("grass_diff_quotient: algebra mismatch");
    const std::size_t m = s1.n, n = s2.n, k = s1.alg.k;
    const ComplexMatrix ik = ComplexMatrix::identity(k);
    auto probe_block = [&](const ComplexMatrix& t) {
        const std::size_t s = (m + n) * k;
        ComplexMatrix d(s, s);
        d.set_block(0, 0, s1.d());
        d.set_block(m * k, m * k, s2.d());
        d.set_block(0, m * k, kron(t, ik) * s2.b());
        const GrassPoint probe{s1.alg, m + n,
                               block2x2(direct_sum(s1.a(), s2.a()), direct_sum(s1.b(), s2.b()),
                                        direct_sum(s1.c(), s2.c()), d)};
        return f(probe).block(0, m * q, m * q, n * q);
    };
    ComplexMatrix out(m * n * q, m * n * q);
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t kk = 0; kk < n; ++kk) {
            const ComplexMatrix e = ComplexMatrix::unit(m, n, j, kk);
            const ComplexMatrix k1 = probe_block(e);
            const ComplexMatrix k2 = probe_block(e * 2.0) * 0.5;
            if (max_abs_diff(k1, k2) > 1e-8 * std::max(1.0, k1.max_abs()))
                throw std::runtime_error("off-diagonal block is not linear in the probe");
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t l = 0; l < n; ++l)
                    for (std::size_t e1 = 0; e1 < q; ++e1)
                        for (std::size_t e2 = 0; e2 < q; ++e2)
                            out(((i * n + kk) * q + e1), ((j * n + l) * q + e2)) = k1(i * q + e1, l * q + e2);
        }
    return out;
}

ComplexMatrix e_tensor_product(const ComplexMatrix& r1, const ComplexMatrix& r2, std::size_t m, std::size_t n,
                               std::size_t q) {
    ComplexMatrix out(m * n * q, m * n * q);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            const ComplexMatrix a = r1.block(i * q, j * q, q, q);
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t l = 0; l < n; ++l) {
                    const ComplexMatrix prod = a * r2.block(k * q, l * q, q, q);
                    out.set_block((i * n + k) * q, (j * n + l) * q, prod);
                }
        }
    return out;
}

UnitaryResiduals unitary_identities(const ComplexMatrix& u, const GrassPoint& sigma, const Embedding& emb) {
    UnitaryResiduals r;
    const GrassPoint up = GrassPoint::graph_of(u);
    const GrassPoint uinv = swap_point(up);
    const GrassPoint sinv = swap_point(sigma);
    const GrassPoint chi = c_action(cayley(), up);
    const GrassPoint nu = c_action(cayley(), sigma);
    r.in_set = in_resolvent_set(up, sigma, emb) && in_resolvent_set(uinv, sinv, emb) &&
               in_resolvent_set(chi, nu, emb);
    if (!r.in_set) return r;
    const std::size_t n = sigma.n;
    const ComplexMatrix in = ComplexMatrix::identity(n);
    const ComplexMatrix iu = kron(in, u), iu_inv = kron(in, inverse(u));
    const ComplexMatrix one = ComplexMatrix::identity(n * emb.d);
    const ComplexMatrix ru = resolvent(up, sigma, emb);
    const ComplexMatrix rinv = resolvent(uinv, sinv, emb);
    r.a = max_abs_diff(iu * ru * iu + iu, -rinv);
    const ComplexMatrix rchi = resolvent(chi, nu, emb);
    // The upper entry of nu = C(g) sigma is i (delta - beta), which fixes the overall sign.
    const ComplexMatrix rhs = rinv * (one - iu_inv) * (0.5 * kI) - ru * (one - iu) * (0.5 * kI);
    r.c = max_abs_diff(rchi, rhs);
    return r;
}

StarResidual resolvent_star_identity(const GrassPoint& pi, const GrassPoint& sigma, const Embedding& emb) {
    StarResidual r;
    const GrassPoint ps = star(pi), ss = star(sigma);
    r.star_in_set = in_resolvent_set(ps, ss, emb);
    if (!r.star_in_set) return r;
    r.residual = max_abs_diff(resolvent(pi, sigma, emb).adjoint(), resolvent(ps, ss, emb));
    return r;
}

}  // namespace freegrass
