#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "freegrass/grassmann.hpp"
#include "freegrass/linalg.hpp"

using namespace freegrass;

namespace {

const BaseAlgebra kC = BaseAlgebra::scalars();
const BaseAlgebra kM2 = BaseAlgebra::full(2);

double rel(const ComplexMatrix& a, const ComplexMatrix& b) { return max_abs_diff(a, b) / std::max(1.0, b.max_abs()); }

ComplexMatrix well_conditioned(std::size_t n, Rng& rng) {
    return ginibre(n, n, rng) + ComplexMatrix::scalar(n, 3.0 * double(n));
}

// Affine sigma whose resolvent at the graph of y is comfortably bounded.
GrassPoint affine_away_from(const ComplexMatrix& y, const BaseAlgebra& alg, std::size_t n, Rng& rng) {
    const auto beta = MatOverB::random(alg, n, rng, 0.5) + MatOverB::identity(alg, n) * (spectral_norm(y) + 2.0);
    return GrassPoint::from_affine(beta);
}

}  // namespace

TEST_CASE("affine points and equivalence") {
    Rng rng(1);
    const auto zero = MatOverB::zero(kM2, 2);
    CHECK(equivalent(GrassPoint::from_affine(zero), GrassPoint::from_affine(zero)));
    const auto p = GrassPoint::random(kM2, 2, rng);
    CHECK(equivalent(p, reparametrize(p, well_conditioned(4, rng))));
    const auto b1 = MatOverB::random(kM2, 2, rng, 0.5);
    const auto b2 = MatOverB::random(kM2, 2, rng, 0.5);
    CHECK_FALSE(equivalent(GrassPoint::from_affine(b1), GrassPoint::from_affine(b2)));
}

TEST_CASE("direct sums of graph points") {
    Rng rng(2);
    const auto y = ginibre(3, 3, rng);
    const auto pi = GrassPoint::graph_of(y);
    const auto twice = direct_sum(pi, pi);
    const auto i2 = ComplexMatrix::identity(2);
    const auto one = ComplexMatrix::identity(6);
    const auto expect = GrassPoint::from_blocks(BaseAlgebra::full(3), 2, ComplexMatrix::zeros(6, 6), one, one,
                                                kron(i2, y));
    CHECK(equivalent(twice, expect));
    // Exchanging equal summands fixes the point.
    const ComplexMatrix swap{{0.0, 1.0}, {1.0, 0.0}};
    CHECK(equivalent(scalar_action(swap, twice), twice));
}

TEST_CASE("group actions") {
    Rng rng(3);
    const auto p = GrassPoint::random(kC, 2, rng);
    CHECK(equivalent(c_action(ComplexMatrix::identity(2), p), p));
    const auto g = well_conditioned(2, rng);
    CHECK(equivalent(c_action(inverse(g), c_action(g, p)), p));
    const auto s = well_conditioned(2, rng);
    CHECK(equivalent(scalar_action(inverse(s), scalar_action(s, p)), p));
    CHECK(equivalent(swap_point(swap_point(p)), p));
}

TEST_CASE("transversality") {
    Rng rng(4);
    for (int t = 0; t < 5; ++t) {
        const auto beta = MatOverB::random(kM2, 2, rng, 2.0);
        const auto inf = GrassPoint::infinity(kM2, 2);
        const auto p = GrassPoint::random(kM2, 2, rng);
        const auto q = GrassPoint::random(kM2, 2, rng);
        CHECK_FALSE(transversal(p, p));
        const auto g = well_conditioned(8, rng);
        CHECK(transversal(act(g, p), act(g, q)) == transversal(p, q));
        CHECK(transversal(GrassPoint::from_affine(beta), inf));
    }
}

TEST_CASE("resolvent of a graph") {
    const auto emb = Embedding::make(kC, 1);
    const auto pi = GrassPoint::graph_of(ComplexMatrix{{0.0}});
    const auto sigma = GrassPoint::from_affine(MatOverB::embed(kC, 1, {ComplexMatrix{{2.0}}}));
    CHECK(std::abs(resolvent(pi, sigma, emb)(0, 0) - 0.5) < 1e-15);

    Rng rng(5);
    for (const auto& [alg, d] : {std::pair{kC, 3u}, {kM2, 4u}, {BaseAlgebra::diagonal(2), 3u}}) {
        const auto e = Embedding::make(alg, d);
        const auto y = ginibre(d, d, rng);
        const std::size_t n = 2;
        const auto beta = MatOverB::random(alg, n, rng, 0.5) + MatOverB::identity(alg, n) * (spectral_norm(y) + 2.0);
        const auto s = GrassPoint::from_affine(beta);
        const auto r = resolvent(GrassPoint::graph_of(y), s, e);
        const auto expect = inverse(e(beta) - kron(ComplexMatrix::identity(n), y));
        CHECK(rel(r, expect) < 1e-10);
    }
    const auto same = GrassPoint::from_affine(MatOverB::embed(kC, 1, {ComplexMatrix{{0.0}}}));
    CHECK_FALSE(in_resolvent_set(pi, same, emb));
    CHECK_THROWS_AS(resolvent(pi, same, emb), NotInResolventSet);
}

TEST_CASE("resolvent is independent of representatives and matches the closed form") {
    Rng rng(6);
    const std::size_t d = 4;
    const auto emb = Embedding::make(kM2, d);
    for (int t = 0; t < 10; ++t) {
        const auto pi = GrassPoint::random(BaseAlgebra::full(d), 1, rng);
        const auto s = GrassPoint::random(kM2, 1 + t % 2, rng);
        if (!in_resolvent_set(pi, s, emb)) continue;
        const auto r = resolvent(pi, s, emb);
        const auto tau = MatOverB::identity(kM2, s.n).dense() * cd(2.0) + MatOverB::random(kM2, s.n, rng, 1.0).dense();
        CHECK(rel(resolvent(reparametrize(pi, well_conditioned(d, rng)), reparametrize(s, tau), emb), r) < 1e-9);
        CHECK(rel(resolvent_closed_form(pi, s, emb), r) < 1e-9);
    }
}

TEST_CASE("resolvent equation") {
    Rng rng(7);
    const std::size_t d = 3;
    const auto emb = Embedding::make(kC, d);
    const auto y = ginibre(d, d, rng);
    const auto pi = GrassPoint::graph_of(y);
    const auto s1 = affine_away_from(y, kC, 1, rng);
    const auto s2 = affine_away_from(y, kC, 2, rng);
    const GrassFunction rf = [&](const GrassPoint& s) { return resolvent(pi, s, emb); };
    const auto r1 = resolvent(pi, s1, emb), r2 = resolvent(pi, s2, emb);
    const auto dq = grass_diff_quotient(rf, s1, s2, d);
    CHECK(rel(dq, e_tensor_product(r1, r2, 1, 2, d) * cd(-1.0)) < 1e-9);

    // Classical case: the quotient of (z - w)^-1 is -(z1 - w)^-1 (z2 - w)^-1.
    const auto e1 = Embedding::make(kC, 1);
    const auto w = GrassPoint::graph_of(ComplexMatrix{{0.25}});
    const auto z1 = GrassPoint::from_affine(MatOverB::embed(kC, 1, {ComplexMatrix{{2.0}}}));
    const auto z2 = GrassPoint::from_affine(MatOverB::embed(kC, 1, {ComplexMatrix{{cd(1.0, 1.0)}}}));
    const GrassFunction f1 = [&](const GrassPoint& s) { return resolvent(w, s, e1); };
    const cd expect = -1.0 / ((2.0 - 0.25) * (cd(1.0, 1.0) - 0.25));
    CHECK(std::abs(grass_diff_quotient(f1, z1, z2, 1)(0, 0) - expect) < 1e-12);
}

TEST_CASE("orthogonal complement and star") {
    Rng rng(8);
    for (int t = 0; t < 5; ++t) {
        const auto p = GrassPoint::random(kM2, 2, rng);
        CHECK(equivalent(orthogonal(orthogonal(p)), p));
        CHECK(equivalent(star(star(p)), p));
        const auto s = well_conditioned(2, rng);
        CHECK(equivalent(star(scalar_action(s, p)), scalar_action(inverse(s.adjoint()), star(p))));
    }
    const auto dmat = ginibre(2, 2, rng);
    const auto pi = GrassPoint::graph_of(dmat);
    const auto m = BaseAlgebra::full(2);
    const auto expect = GrassPoint::from_blocks(m, 1, ComplexMatrix::zeros(2, 2), ComplexMatrix::identity(2),
                                                -ComplexMatrix::identity(2), dmat.adjoint());
    CHECK(equivalent(star(pi), expect));
}

TEST_CASE("resolvent star identity") {
    Rng rng(9);
    const std::size_t d = 4;
    const auto emb = Embedding::make(kM2, d);
    for (int t = 0; t < 5; ++t) {
        const auto pi = GrassPoint::random(BaseAlgebra::full(d), 1, rng);
        const auto s = GrassPoint::random(kM2, 1, rng);
        if (!in_resolvent_set(pi, s, emb)) continue;
        const auto r = resolvent_star_identity(pi, s, emb);
        CHECK(r.star_in_set);
        CHECK(r.residual <= 1e-9 * std::max(1.0, resolvent(pi, s, emb).max_abs()));
    }
}

TEST_CASE("unitary identities") {
    Rng rng(10);
    const std::size_t d = 3;
    const auto emb = Embedding::make(kC, d);
    for (int t = 0; t < 5; ++t) {
        const auto u = haar_unitary(d, rng);
        const auto beta = MatOverB::random(kC, 1, rng, 0.3) + MatOverB::identity(kC, 1) * 2.0;
        const auto r = unitary_identities(u, GrassPoint::from_affine(beta), emb);
        REQUIRE(r.in_set);
        CHECK(r.a < 1e-10);
        CHECK(r.c < 1e-9);
    }
    const auto e1 = Embedding::make(kC, 1);
    const auto z = GrassPoint::from_affine(MatOverB::embed(kC, 1, {ComplexMatrix{{cd(0.3, 0.2)}}}));
    const auto r = unitary_identities(ComplexMatrix{{1.0}}, z, e1);
    CHECK(r.a < 1e-14);
}

TEST_CASE("disk sets") {
    Rng rng(11);
    const auto half = MatOverB::random(kM2, 2, rng, 0.5);
    CHECK(in_set(GrassPoint::from_affine(half), DiskSet::D0));
    const auto ii = MatOverB::identity(kM2, 2) * cd(0.0, 1.0);
    CHECK(in_set(GrassPoint::from_affine(ii), DiskSet::HPlus));
    CHECK_FALSE(in_set(GrassPoint::from_affine(ii), DiskSet::HMinus));
    CHECK_FALSE(in_set(GrassPoint::from_affine(MatOverB::identity(kM2, 2) * 2.0), DiskSet::D0));
    // The swap maps Delta_{1,2} onto s . Delta_{2,1} with s = [[0, I_1], [I_2, 0]].
    ComplexMatrix s(3, 3);
    s(0, 2) = 1.0;
    s(1, 0) = 1.0;
    s(2, 1) = 1.0;
    for (int t = 0; t < 5; ++t) {
        const auto dp = delta_point(MatOverB::random(kC, 3, rng, 0.9), 1, 2);
        CHECK(in_set(dp, DiskSet::Delta, 1, 2));
        CHECK(in_set(scalar_action(inverse(s), swap_point(dp)), DiskSet::Delta, 2, 1));
    }
}
