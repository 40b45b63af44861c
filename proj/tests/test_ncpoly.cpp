#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "freegrass/linalg.hpp"
#include "freegrass/ncpoly.hpp"
#include "freegrass/pathological.hpp"

using namespace freegrass;

namespace {

const BaseAlgebra kM2 = BaseAlgebra::full(2);
const BaseAlgebra kC2 = BaseAlgebra::diagonal(2);
const BaseAlgebra kC3 = BaseAlgebra::diagonal(3);

// z(theta) = sum_i theta(b_i) z(phi_i)
NCPoly z_theta(const BaseAlgebra& alg) {
    const auto theta = distinguished_functional(alg);
    NCPoly p(alg);
    for (std::size_t i = 0; i < alg.dim(); ++i) p = p + NCPoly::generator(alg, int(i)) * theta(alg.basis(i));
    return p;
}

}  // namespace

TEST_CASE("free algebra arithmetic") {
    Rng rng(1);
    const auto p = NCPoly::random(kM2, 4, 6, rng);
    CHECK(NCPoly::constant(kM2, 1.0) * p == p);
    CHECK(p * NCPoly::constant(kM2, 1.0) == p);
    const auto z1 = NCPoly::generator(kC2, 0);
    const auto z2 = NCPoly::generator(kC2, 1);
    CHECK_FALSE(z1 * z2 == z2 * z1);
    const auto sq = (z1 + z2) * (z1 + z2);
    CHECK(sq.terms().size() == 4);
    for (const auto& [w, c] : sq.terms()) {
        CHECK(w.size() == 2);
        CHECK(c == cd(1.0));
    }
    CHECK_THROWS_AS(z1 + NCPoly::generator(kM2, 0), AlgebraMismatch);
    CHECK_THROWS_AS(NCPoly::generator(kC2, 2), std::out_of_range);
    CHECK_THROWS_AS(NCPoly::monomial(kC2, Word(13, 0)), DegreeCapExceeded);
    CHECK_THROWS_AS(NCPoly::monomial(kC2, Word(7, 0)) * NCPoly::monomial(kC2, Word(6, 1)), DegreeCapExceeded);
}

TEST_CASE("evaluation of generators") {
    Rng rng(2);
    const auto a = ginibre(3, 3, rng);
    const auto b = kM2.random_element(rng);
    const auto beta = MatOverB::kron_scalar(kM2, a, b);
    const auto phis = dual_basis(kM2);
    for (std::size_t i = 0; i < kM2.dim(); ++i)
        CHECK(max_abs_diff(NCPoly::generator(kM2, int(i)).evaluate(beta), a * phis[i](b)) < 1e-14);
    CHECK(NCPoly::constant(kM2, 1.0).evaluate(beta) == ComplexMatrix::identity(3));

    const auto x = MatOverB::random(kC3, 3, rng, 1.0);
    const Word w{2, 0, 0, 1};
    const auto expect = x.component(2) * x.component(0) * x.component(0) * x.component(1);
    CHECK(max_abs_diff(NCPoly::monomial(kC3, w).evaluate(x), expect) < 1e-14);
}

TEST_CASE("evaluation is a fully matricial homomorphism") {
    Rng rng(3);
    for (const auto& alg : {kM2, kC2, kC3}) {
        for (int t = 0; t < 5; ++t) {
            const auto p = NCPoly::random(alg, 4, 5, rng);
            const auto q = NCPoly::random(alg, 4, 5, rng);
            const auto b1 = MatOverB::random(alg, 2, rng, 0.8);
            const auto b2 = MatOverB::random(alg, 3, rng, 0.8);
            const auto pq = (p * q).evaluate(b1);
            const auto prod = p.evaluate(b1) * q.evaluate(b1);
            CHECK(max_abs_diff(pq, prod) <= 1e-11 * std::max(1.0, prod.max_abs()));

            const auto sum = p.evaluate(b1.direct_sum(b2));
            CHECK(max_abs_diff(sum, direct_sum(p.evaluate(b1), p.evaluate(b2))) == 0.0);

            const auto s = ginibre(2, 2, rng) + ComplexMatrix::scalar(2, 3.0);
            const auto si = inverse(s);
            const auto lhs = p.evaluate(b1.conjugate_by(s, si));
            const auto rhs = s * p.evaluate(b1) * si;
            CHECK(max_abs_diff(lhs, rhs) <= 1e-10 * std::max(1.0, rhs.max_abs()));
        }
    }
}

TEST_CASE("symbolic derivative examples") {
    for (const auto& alg : {kM2, kC2, kC3}) {
        const auto zt = z_theta(alg);
        NCTensor one(alg);
        one.add_term({}, {}, 1.0);
        CHECK(zt.derivative() == one);

        NCTensor sq(alg);
        const auto dsq = (zt * zt).derivative();
        NCTensor expect = one.left_multiply(zt) + one.right_multiply(zt);
        CHECK(dsq == expect);
    }
    // phi_12(1) = phi_21(1) = 0 on M_2.
    const auto p = NCPoly::monomial(kM2, {1, 2, 1}) * 3.0 + NCPoly::monomial(kM2, {2}) * cd(0, 1);
    CHECK(p.derivative().is_zero());
    CHECK(NCPoly::constant(kM2, 5.0).derivative().is_zero());
}

TEST_CASE("derivative laws on random polynomials") {
    Rng rng(4);
    for (const auto& alg : {kM2, kC2, kC3}) {
        for (int t = 0; t < 10; ++t) {
            const auto p = NCPoly::random(alg, 5, 6, rng);
            const auto q = NCPoly::random(alg, 5, 6, rng);
            CHECK((p * q).derivative() == p.derivative().right_multiply(q) + q.derivative().left_multiply(p));
            CHECK(p.derivative().derivative_left() == p.derivative().derivative_right());
            CHECK(p.lambda().derivative() == p.derivative().lambda_sum());
            CHECK(p.star().derivative() == p.derivative().star_swap());
            CHECK(p.star().lambda() == p.lambda().star());
        }
    }
}

TEST_CASE("lambda scales by degree plus one") {
    CHECK(NCPoly::constant(kC2, 1.0).lambda() == NCPoly::constant(kC2, 1.0));
    const auto z = NCPoly::generator(kM2, 3);
    CHECK(z.lambda() == z * 2.0);
    const auto w = NCPoly::monomial(kM2, {0, 1, 2});
    CHECK(w.lambda() == w * 4.0);
}

TEST_CASE("star") {
    // phi_12 <-> phi_21 in lexicographic order (indices 1 and 2).
    CHECK(NCPoly::generator(kM2, 1).star() == NCPoly::generator(kM2, 2));
    CHECK(NCPoly::generator(kM2, 0).star() == NCPoly::generator(kM2, 0));
    const auto real = NCPoly::monomial(kC2, {0, 1, 1}) * 2.0 + NCPoly::monomial(kC2, {1, 1, 0}) * 2.0;
    CHECK(real.star() == real);

    Rng rng(5);
    for (const auto& alg : {kM2, kC2, kC3}) {
        for (int t = 0; t < 8; ++t) {
            const auto p = NCPoly::random(alg, 4, 6, rng);
            CHECK(p.star().star() == p);
            const auto beta = MatOverB::random(alg, 3, rng, 0.9);
            const auto lhs = p.star().evaluate(beta);
            const auto rhs = p.evaluate(beta.adjoint()).adjoint();
            CHECK(max_abs_diff(lhs, rhs) <= 1e-12 * std::max(1.0, rhs.max_abs()));
        }
    }
}

TEST_CASE("tensor evaluation matches Kronecker products") {
    Rng rng(6);
    const auto p = NCPoly::random(kC2, 3, 4, rng);
    const auto b1 = MatOverB::random(kC2, 2, rng, 0.7);
    const auto b2 = MatOverB::random(kC2, 3, rng, 0.7);
    ComplexMatrix expect = ComplexMatrix::zeros(6, 6);
    const NCTensor dp = p.derivative();
    for (const auto& [uv, c] : dp.terms()) {
        const auto u = NCPoly::monomial(kC2, uv.first).evaluate(b1);
        const auto v = NCPoly::monomial(kC2, uv.second).evaluate(b2);
        expect += kron(u, v) * c;
    }
    CHECK(max_abs_diff(dp.evaluate(b1, b2), expect) < 1e-12);
}

TEST_CASE("JSON round trip") {
    Rng rng(7);
    for (const auto& alg : {kM2, kC2, BaseAlgebra::scalars()}) {
        const auto p = NCPoly::random(alg, 5, 8, rng);
        CHECK(NCPoly::from_json(p.to_json()) == p);
        CHECK(NCPoly::from_json(nlohmann::json::parse(p.to_json().dump())) == p);
    }
    auto bad = NCPoly::generator(kM2, 0).to_json();
    bad["algebra"]["kind"] = "banana";
    CHECK_THROWS_AS(NCPoly::from_json(bad), std::invalid_argument);
}

TEST_CASE("antisymmetrization") {
    const auto g = antisymmetrize(kC2, {{0}, {1}});
    CHECK(g == NCPoly::monomial(kC2, {0, 1}) - NCPoly::monomial(kC2, {1, 0}));
    CHECK_THROWS_AS(antisymmetrize(kC2, {{0}, {0}}), std::invalid_argument);
    CHECK_THROWS_AS(antisymmetrize(kC2, {{0}, {0, 1}}), std::invalid_argument);

    Rng rng(8);
    for (int t = 0; t < 10; ++t) {
        const auto b1 = MatOverB::random(kC2, 1, rng, 1.0);
        CHECK(g.evaluate(b1).max_abs() == 0.0);
    }
    const auto b2 = MatOverB::random(kC2, 2, rng, 1.0);
    CHECK(g.evaluate(b2).max_abs() > 1e-3);

    const std::vector<Word> ms{{0, 0}, {0, 1}, {1, 0}};
    const auto g3 = antisymmetrize(kC2, ms);
    const auto b3 = MatOverB::random(kC2, 3, rng, 1.0);
    std::vector<ComplexMatrix> xs;
    std::vector<ComplexMatrix> gens{b3.component(0), b3.component(1)};
    for (const auto& m : ms) xs.push_back(word_value(m, gens, 3));
    const auto direct = g3.evaluate(b3);
    CHECK(max_abs_diff(antisymmetrized_product(xs), direct) <= 1e-12 * std::max(1.0, direct.max_abs()));
}

TEST_CASE("unbounded construction at depth 1") {
    const auto r = build_pathological(kC2, 1, 3);
    REQUIRE(r.stages.size() == 1);
    const auto& s = r.stages[0];
    CHECK(s.p == 2);
    CHECK(s.vanish_level == 1);
    Rng rng(9);
    for (int t = 0; t < 20; ++t) {
        const auto beta = MatOverB::random(kC2, 1, rng, 1.0);
        CHECK(evaluate_stage(s, beta).max_abs() == 0.0);
    }
    CHECK(s.witness.norm() < 1.0);
    CHECK(spectral_norm(evaluate_partial_sum(r, 1, s.witness)) > 1.0);
    CHECK_THROWS_AS(build_pathological(BaseAlgebra::scalars(), 1, 3), std::invalid_argument);
}
