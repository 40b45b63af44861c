#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "freegrass/calculus.hpp"
#include "freegrass/linalg.hpp"

using namespace freegrass;

namespace {

const BaseAlgebra kC = BaseAlgebra::scalars();
const BaseAlgebra kM2 = BaseAlgebra::full(2);
const BaseAlgebra kC2 = BaseAlgebra::diagonal(2);

double rel(const ComplexMatrix& a, const ComplexMatrix& b) { return max_abs_diff(a, b) / std::max(1.0, b.max_abs()); }

MatOverB scalar_point(cd x) { return MatOverB::embed(kC, 1, {ComplexMatrix{{x}}}); }

// A non-polynomial fully matricial function: (1 - z(theta))^-1 over C.
MatricialFn geometric() {
    MatricialFn f{kC, [](const MatOverB& b) {
                      const auto n = b.level();
                      return inverse(ComplexMatrix::identity(n) - b.component(0));
                  }};
    f.radius = 1.0;
    return f;
}

}  // namespace

TEST_CASE("difference quotient of z^2 over C") {
    const auto z = NCPoly::generator(kC, 0);
    const auto f = MatricialFn::from_poly(z * z);
    const cd x(0.3, 0.1), y(-0.2, 0.4);
    const auto d = diff_quotient(f, scalar_point(x), scalar_point(y));
    CHECK(std::abs(d(0, 0) - (x + y)) < 1e-14);
    const auto c = MatricialFn::from_poly(NCPoly::constant(kC, 2.0));
    CHECK(diff_quotient(c, scalar_point(x), scalar_point(y)).max_abs() == 0.0);
}

TEST_CASE("difference quotient matches the symbolic derivative") {
    Rng rng(1);
    for (const auto& alg : {kM2, kC2}) {
        for (int t = 0; t < 5; ++t) {
            const auto p = NCPoly::random(alg, 4, 6, rng);
            const auto b1 = MatOverB::random(alg, 1 + t % 2, rng, 0.8);
            const auto b2 = MatOverB::random(alg, 2, rng, 0.8);
            const auto num = diff_quotient(MatricialFn::from_poly(p), b1, b2);
            CHECK(rel(num, p.derivative().evaluate(b1, b2)) < 1e-10);
        }
    }
}

TEST_CASE("finite-difference quotient of a resolvent") {
    const auto f = geometric();
    const cd x(0.2, 0.1), y(-0.3, 0.05);
    const auto d = diff_quotient(f, scalar_point(x), scalar_point(y));
    const cd expect = 1.0 / ((1.0 - x) * (1.0 - y));
    CHECK(std::abs(d(0, 0) - expect) < 1e-8);
    CHECK_THROWS_AS(diff_quotient(f, scalar_point(1.5), scalar_point(0.0)), DomainViolation);
}

TEST_CASE("difference quotient laws") {
    Rng rng(2);
    const auto p = NCPoly::random(kC2, 3, 5, rng);
    const auto q = NCPoly::random(kC2, 3, 5, rng);
    const auto fp = MatricialFn::from_poly(p), fq = MatricialFn::from_poly(q), fpq = MatricialFn::from_poly(p * q);
    const auto b1 = MatOverB::random(kC2, 2, rng, 0.7);
    const auto b2 = MatOverB::random(kC2, 2, rng, 0.7);
    const auto i2 = ComplexMatrix::identity(2);
    const auto lhs = diff_quotient(fpq, b1, b2);
    const auto rhs = kron(p.evaluate(b1), i2) * diff_quotient(fq, b1, b2) +
                     diff_quotient(fp, b1, b2) * kron(i2, q.evaluate(b2));
    CHECK(rel(lhs, rhs) < 1e-9);

    // Direct sum in the first slot splits the rows of the first tensor factor.
    const auto b3 = MatOverB::random(kC2, 1, rng, 0.7);
    const auto sum = diff_quotient(fp, b1.direct_sum(b3), b2);
    const auto d1 = diff_quotient(fp, b1, b2);
    const auto d3 = diff_quotient(fp, b3, b2);
    CHECK(rel(sum.block(0, 0, 4, 4), d1) < 1e-9);
    CHECK(rel(sum.block(4, 4, 2, 2), d3) < 1e-9);
    CHECK(sum.block(0, 4, 4, 2).max_abs() < 1e-9);
}

TEST_CASE("nested difference quotients") {
    Rng rng(3);
    const auto z = NCPoly::generator(kC, 0);
    const auto cube = z * z * z;
    const auto b = scalar_point(0.3), b1 = scalar_point(cd(0.1, 0.2)), b2 = scalar_point(-0.4);
    const auto nested = diff_quotient_nested(MatricialFn::from_poly(cube), b, b1, b2);
    const auto sym = cube.derivative().derivative_right().evaluate(b, b1, b2);
    CHECK(rel(nested, sym) < 1e-10);
    CHECK(diff_quotient_nested(MatricialFn::from_poly(NCPoly::constant(kC, 3.0)), b, b1, b2).max_abs() == 0.0);

    for (int t = 0; t < 3; ++t) {
        const auto p = NCPoly::random(kC2, 4, 5, rng);
        const auto x = MatOverB::random(kC2, 1, rng, 0.6);
        const auto y = MatOverB::random(kC2, 2, rng, 0.6);
        const auto w = MatOverB::random(kC2, 1, rng, 0.6);
        const auto n = diff_quotient_nested(MatricialFn::from_poly(p), x, y, w);
        CHECK(rel(n, p.derivative().derivative_right().evaluate(x, y, w)) < 1e-10);
    }
}

TEST_CASE("numeric lambda") {
    Rng rng(4);
    const auto z = NCPoly::generator(kC, 0);
    const auto sq = MatricialFn::from_poly(z * z);
    const auto x = scalar_point(cd(0.4, -0.3));
    CHECK(std::abs(lambda_numeric(sq, x)(0, 0) - 3.0 * cd(0.4, -0.3) * cd(0.4, -0.3)) < 1e-8);
    const auto c = MatricialFn::from_poly(NCPoly::constant(kM2, cd(2.0, 1.0)));
    const auto b = MatOverB::random(kM2, 2, rng, 0.5);
    CHECK(rel(lambda_numeric(c, b), ComplexMatrix::scalar(2, cd(2.0, 1.0))) < 1e-8);

    for (std::size_t deg : {1u, 2u, 3u, 4u}) {
        const auto w = NCPoly::monomial(kM2, Word(deg, int(deg % 4)));
        const auto bb = MatOverB::random(kM2, 2, rng, 0.8);
        const auto f = MatricialFn::from_poly(w);
        CHECK(rel(lambda_numeric(f, bb), w.evaluate(bb) * double(deg + 1)) < 1e-8);
    }

    const auto p = NCPoly::random(kC2, 3, 4, rng);
    const auto q = NCPoly::random(kC2, 3, 4, rng);
    const auto bb = MatOverB::random(kC2, 2, rng, 0.6);
    const auto pv = p.evaluate(bb), qv = q.evaluate(bb);
    const auto lp = lambda_numeric(MatricialFn::from_poly(p), bb) - pv;
    const auto lq = lambda_numeric(MatricialFn::from_poly(q), bb) - qv;
    const auto lpq = lambda_numeric(MatricialFn::from_poly(p * q), bb) - pv * qv;
    CHECK(rel(lpq, lp * qv + pv * lq) < 1e-6);
}

TEST_CASE("coefficient extraction") {
    const auto z1 = NCPoly::generator(kC2, 0), z2 = NCPoly::generator(kC2, 1);
    const auto fam = extract_coefficients(MatricialFn::from_poly(z1 * z2), 3);
    for (const auto& [w, c] : fam.components[0].terms()) {
        if (w == Word{0, 1})
            CHECK(std::abs(c - 1.0) < 1e-11);
        else
            CHECK(std::abs(c) < 1e-11);
    }
    const auto cfam = extract_coefficients(MatricialFn::from_poly(NCPoly::constant(kM2, 4.0)), 2);
    CHECK(cfam.coefficient({}) == cd(4.0));
    CHECK(std::abs(cfam.coefficient({1, 2})) < 1e-12);

    Rng rng(5);
    for (const auto& alg : {kM2, kC2}) {
        const auto p = NCPoly::random(alg, 4, 8, rng);
        const auto got = extract_coefficients(MatricialFn::from_poly(p), 4).components[0];
        for (const auto& [w, c] : got.terms()) CHECK(std::abs(c - p.coefficient(w)) < 1e-11 * std::max(1.0, std::abs(p.coefficient(w))));
        for (const auto& [w, c] : p.terms()) CHECK(std::abs(got.coefficient(w) - c) < 1e-11 * std::max(1.0, std::abs(c)));
    }
}

TEST_CASE("extraction of a geometric series and truncation error") {
    const auto f = geometric();
    const std::size_t deg = 6;
    const auto fam = extract_coefficients(f, deg);
    for (std::size_t m = 0; m <= deg; ++m) CHECK(std::abs(fam.coefficient(Word(m, 0)) - 1.0) < 1e-9);
    Rng rng(6);
    for (double s : {0.1, 0.2, 0.3}) {
        const auto b = MatOverB::random(kC, 2, rng, s);
        const double err = max_abs_diff(fam.evaluate(b), f(b));
        CHECK(err <= 2.0 * std::pow(s, double(deg + 1)) / (1.0 - s));
    }
}

TEST_CASE("composition of families") {
    const auto z = NCPoly::generator(kC, 0);
    CoefficientFamily g{kC, 4, true, {z + z * z}};
    const auto f = CoefficientFamily::from_poly(z * z, 4);
    const auto gamma = compose_families(f, g);
    const auto expect = z * z + z * z * z * 2.0 + z * z * z * z;
    CHECK(gamma.components[0] == expect);

    Rng rng(7);
    const auto p = NCPoly::random(kC2, 3, 5, rng);
    const auto pf = CoefficientFamily::from_poly(p, 4);
    const auto id = CoefficientFamily::identity(kC2, 4);
    CHECK(compose_families(pf, id).components[0] == pf.components[0]);

    CoefficientFamily bad{kC, 4, true, {z + NCPoly::constant(kC, 1.0)}};
    CHECK_THROWS_AS(compose_families(f, bad), std::invalid_argument);
    CHECK_THROWS_AS(compose_families(f, f), std::invalid_argument);
}

TEST_CASE("composition agrees with extraction of the composite") {
    Rng rng(8);
    for (int t = 0; t < 3; ++t) {
        const auto f = NCPoly::random(kC2, 3, 5, rng);
        std::vector<NCPoly> gs;
        for (int c = 0; c < 2; ++c) {
            auto g = NCPoly::random(kC2, 2, 4, rng);
            gs.push_back(g - NCPoly::constant(kC2, g.coefficient({})));
        }
        const auto gmap = MatricialMap::from_polys(gs);
        const auto fn = MatricialFn::from_poly(f);
        MatricialFn comp{kC2, [&](const MatOverB& b) { return fn(gmap(b)); }};
        comp.polynomial = true;
        const std::size_t deg = 4;
        const auto direct = extract_coefficients(comp, deg).components[0];
        const auto composed =
            compose_families(extract_coefficients(fn, deg), extract_coefficients(gmap, deg)).components[0];
        for (const auto& [w, c] : direct.terms())
            CHECK(std::abs(composed.coefficient(w) - c) < 1e-9 * std::max(1.0, std::abs(c)));
        for (const auto& [w, c] : composed.terms())
            CHECK(std::abs(direct.coefficient(w) - c) < 1e-9 * std::max(1.0, std::abs(c)));
    }
}

TEST_CASE("truncated multiplication") {
    const auto z = NCPoly::generator(kC, 0);
    const auto p = z + z * z;
    CHECK(multiply_truncated(p, p, 3) == z * z + z * z * z * 2.0);
}
