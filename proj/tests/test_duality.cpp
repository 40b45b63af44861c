#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "freegrass/duality.hpp"
#include "freegrass/linalg.hpp"

using namespace freegrass;

namespace {

const BaseAlgebra kC = BaseAlgebra::scalars();
const BaseAlgebra kC2 = BaseAlgebra::diagonal(2);

MatOverB scalar_point(const BaseAlgebra& alg, std::size_t n, cd shift, Rng& rng, double spread = 0.3) {
    return MatOverB::random(alg, n, rng, spread) + MatOverB::identity(alg, n) * shift;
}

DualitySetup graph_setup(const BaseAlgebra& alg, const ComplexMatrix& y, const Functional& phi) {
    return DualitySetup::make(alg, y.rows(), GrassPoint::graph_of(y), phi);
}

ComplexMatrix random_hermitian(std::size_t d, Rng& rng) {
    const auto g = ginibre(d, d, rng);
    return (g + g.adjoint()) * 0.5;
}

}  // namespace

TEST_CASE("transform of a diagonal graph") {
    const auto y = ComplexMatrix::diagonal({1.0, -1.0});
    const auto s = graph_setup(kC, y, Functional::normalized_trace(2));
    const auto sigma = GrassPoint::from_affine(MatOverB::embed(kC, 1, {ComplexMatrix{{2.0}}}));
    CHECK(std::abs(transform(s, sigma)(0, 0) - 2.0 / 3.0) < 1e-14);

    const auto zero = s.with_functional(Functional{ComplexMatrix::zeros(2, 2)});
    CHECK(transform(zero, sigma).max_abs() == 0.0);
}

TEST_CASE("transform is linear in the functional") {
    Rng rng(1);
    const std::size_t d = 3;
    const auto y = ginibre(d, d, rng);
    const Functional f1{ginibre(d, d, rng)}, f2{ginibre(d, d, rng)};
    const auto base = graph_setup(kC2, y, f1);
    const auto sigma = GrassPoint::from_affine(scalar_point(kC2, 2, spectral_norm(y) + 2.0, rng));
    const cd a(0.7, -1.2);
    const auto lhs = transform(base.with_functional(f1 + f2 * a), sigma);
    const auto rhs = transform(base, sigma) + transform(base.with_functional(f2), sigma) * a;
    CHECK(max_abs_diff(lhs, rhs) < 1e-12 * std::max(1.0, rhs.max_abs()));
}

TEST_CASE("setup validation") {
    const auto pi = GrassPoint::graph_of(ComplexMatrix::identity(3));
    CHECK_THROWS_AS(DualitySetup::make(BaseAlgebra::full(2), 3, pi, Functional::trace(3)), std::invalid_argument);
    CHECK_THROWS_AS(DualitySetup::make(kC, 3, pi, Functional::trace(2)), std::invalid_argument);
}

TEST_CASE("comultiplication") {
    Rng rng(2);
    const std::size_t d = 3;
    const auto y = ginibre(d, d, rng);
    const double shift = spectral_norm(y) + 2.0;
    const auto s = graph_setup(kC2, y, Functional{ginibre(d, d, rng)});
    for (std::size_t m : {1u, 2u}) {
        const auto s1 = GrassPoint::from_affine(scalar_point(kC2, m, shift, rng));
        const auto s2 = GrassPoint::from_affine(scalar_point(kC2, 1, shift, rng));
        CHECK(verify_comultiplication(s, s1, s2) < 1e-9);
        CHECK(verify_comultiplication(s.with_functional(Functional{ComplexMatrix::zeros(d, d)}), s1, s2) == 0.0);
    }
    // Scalar case: the Cauchy kernel.
    const auto c = graph_setup(kC, ComplexMatrix{{0.3}}, Functional::trace(1));
    const auto z1 = GrassPoint::from_affine(MatOverB::embed(kC, 1, {ComplexMatrix{{cd(1.0, 1.0)}}}));
    const auto z2 = GrassPoint::from_affine(MatOverB::embed(kC, 1, {ComplexMatrix{{-2.0}}}));
    CHECK(verify_comultiplication(c, z1, z2) < 1e-11);
}

TEST_CASE("trace symmetry holds for traces only") {
    Rng rng(3);
    const std::size_t d = 3;
    const auto y = ginibre(d, d, rng);
    const double shift = spectral_norm(y) + 1.5;
    const auto tr = graph_setup(kC, y, Functional::trace(d));
    for (int t = 0; t < 4; ++t) {
        const auto s1 = GrassPoint::from_affine(scalar_point(kC, 1 + t % 2, shift, rng, 1.0));
        const auto s2 = GrassPoint::from_affine(scalar_point(kC, 2, shift, rng, 1.0));
        CHECK(verify_trace_symmetry(tr, s1, s2) < 1e-9);
    }

    // Over B = C the resolvents of a graph commute, so every functional passes;
    // the control needs resolvent values that generate a noncommutative algebra.
    const auto pi = GrassPoint::random(BaseAlgebra::full(d), 1, rng);
    const auto gtr = DualitySetup::make(kC2, d, pi, Functional::trace(d));
    const auto off = gtr.with_functional(Functional::matrix_unit(d, 0, 1));
    double worst_off = 0.0;
    std::size_t used = 0;
    for (int t = 0; t < 20 && used < 4; ++t) {
        const auto s1 = GrassPoint::random(kC2, 1, rng);
        const auto s2 = GrassPoint::random(kC2, 2, rng);
        if (!in_resolvent_set(pi, s1, gtr.emb) || !in_resolvent_set(pi, s2, gtr.emb)) continue;
        ++used;
        CHECK(verify_trace_symmetry(gtr, s1, s2) < 1e-9 * std::max(1.0, transform(gtr, s1).max_abs()));
        worst_off = std::max(worst_off, verify_trace_symmetry(off, s1, s2));
    }
    REQUIRE(used > 0);
    CHECK(worst_off >= 1e-3);
    const auto s = GrassPoint::from_affine(scalar_point(kC2, 1, shift, rng));
    CHECK(verify_trace_symmetry(off, s, s) < 1e-11);
}

TEST_CASE("coderivation duality") {
    Rng rng(4);
    const auto scalar = graph_setup(kC, ComplexMatrix{{0.5}}, Functional::trace(1));
    const auto z = GrassPoint::from_affine(MatOverB::embed(kC, 1, {ComplexMatrix{{cd(2.0, 0.5)}}}));
    const auto rs = verify_lambda_duality(scalar, z);
    CHECK(rs.duality < 1e-7);
    CHECK(rs.scaling < 1e-9);

    const std::size_t d = 3;
    const auto y = ginibre(d, d, rng);
    const auto s = graph_setup(kC, y, Functional{ginibre(d, d, rng)});
    for (std::size_t n : {1u, 2u}) {
        const auto sigma = GrassPoint::from_affine(scalar_point(kC, n, spectral_norm(y) + 2.0, rng));
        const auto r = verify_lambda_duality(s, sigma);
        CHECK(r.duality < 1e-6);
        CHECK(r.scaling < 1e-9);
        const auto r0 = verify_lambda_duality(s.with_functional(Functional{ComplexMatrix::zeros(d, d)}), sigma);
        CHECK(r0.duality == 0.0);
    }
}

TEST_CASE("involution duality") {
    Rng rng(5);
    const std::size_t d = 4;
    const auto alg = BaseAlgebra::full(2);
    for (int t = 0; t < 4; ++t) {
        const auto y = t % 2 ? random_hermitian(d, rng) : ginibre(d, d, rng);
        const auto s = graph_setup(alg, y, Functional{ginibre(d, d, rng)});
        const auto sigma = GrassPoint::from_affine(scalar_point(alg, 1, cd(spectral_norm(y) + 1.0, 0.7), rng));
        CHECK(verify_involution(s, sigma) < 1e-9);
    }
}

TEST_CASE("matricial laws") {
    Rng rng(6);
    const std::size_t d = 3;
    const auto y = ginibre(d, d, rng);
    const double shift = spectral_norm(y) + 2.0;
    const auto s = graph_setup(kC2, y, Functional{ginibre(d, d, rng)});
    const auto s1 = GrassPoint::from_affine(scalar_point(kC2, 2, shift, rng));
    const auto s2 = GrassPoint::from_affine(scalar_point(kC2, 1, shift, rng));
    const auto g = ginibre(2, 2, rng) + ComplexMatrix::scalar(2, 3.0);
    const auto r = verify_matricial_laws(s, s1, s2, g);
    CHECK(r.direct_sum < 1e-9);
    CHECK(r.similarity < 1e-9);
}

TEST_CASE("dual positivity") {
    Rng rng(7);
    const std::size_t d = 3;
    const auto y = random_hermitian(d, rng);
    const auto tr = graph_setup(kC, y, Functional::trace(d));
    REQUIRE(functional_is_positive(tr.phi));

    const auto a = ginibre(d, d, rng);
    const Functional psd = Functional::weighted_trace(a.adjoint() * a);
    REQUIRE(functional_is_positive(psd));

    const Functional indefinite = Functional::weighted_trace(ComplexMatrix::diagonal({1.0, -1.0, 0.0}));
    CHECK_FALSE(functional_is_positive(indefinite));

    double most_negative = 0.0;
    for (int t = 0; t < 40; ++t) {
        const auto beta = MatOverB::random(kC, 2, rng, 1.5) + MatOverB::identity(kC, 2) * cd(0.0, 0.5 + 0.5 * (t % 3));
        const auto sigma = GrassPoint::from_affine(beta);
        const auto p1 = dual_positivity_check(tr, sigma);
        CHECK(p1.min_choi_eigenvalue >= -1e-9);
        CHECK(p1.is_cp);
        CHECK(dual_positivity_check(tr.with_functional(psd), sigma).min_choi_eigenvalue >= -1e-9);
        most_negative = std::min(most_negative, dual_positivity_check(tr.with_functional(indefinite), sigma).min_choi_eigenvalue);
    }
    CHECK(most_negative < -1e-3);
}

TEST_CASE("Choi matrix is Hermitian for Hermitian setups") {
    Rng rng(8);
    const auto y = random_hermitian(2, rng);
    const auto s = graph_setup(kC, y, Functional::normalized_trace(2));
    const auto sigma = GrassPoint::from_affine(MatOverB::random(kC, 2, rng, 1.0) + MatOverB::identity(kC, 2) * cd(0.0, 1.0));
    const auto choi = choi_matrix(s, sigma);
    CHECK(choi.rows() == 4);
    CHECK(max_abs_diff(choi, choi.adjoint()) < 1e-9);
}

TEST_CASE("injectivity proxy reports a rank") {
    Rng rng(9);
    const auto s = graph_setup(kC, ginibre(2, 2, rng), Functional::trace(2));
    const auto rep = injectivity_rank(s, 2, rng);
    CHECK(rep.target == 4);
    CHECK(rep.rank >= 1);
    CHECK(rep.rank <= rep.target);
}
