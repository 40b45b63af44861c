#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "freegrass/sphere.hpp"

using namespace freegrass;

namespace {

const Circle kUnit{0.0, 1.0};
constexpr std::size_t kPoints = 512;

}  // namespace

TEST_CASE("pairing of monomials with inverse powers") {
    for (std::size_t n = 0; n < 5; ++n)
        for (std::size_t m = 0; m < 5; ++m) {
            ScalarFn::Pole pole{0.0, std::vector<cd>(m + 1, 0.0)};
            pole.coef[m] = 1.0;
            const auto zm = ScalarFn::rational({}, {pole});
            const cd v = pairing(ScalarFn::monomial(n), zm, kUnit, 64);
            CHECK(std::abs(v - (n == m ? 1.0 : 0.0)) < 1e-13);
        }
}

TEST_CASE("Cauchy kernels") {
    const cd w(0.2, -0.3), zeta(1.8, 0.4);
    CHECK(std::abs(pairing(ScalarFn::polynomial({1.0}), ScalarFn::outer_kernel(w), kUnit, kPoints) - 1.0) < 1e-13);
    const cd v = pairing(ScalarFn::inner_resolvent(zeta), ScalarFn::outer_kernel(w), kUnit, kPoints);
    CHECK(std::abs(v - 1.0 / (zeta - w)) < 1e-12);
    CHECK_THROWS_AS(pairing(ScalarFn::inner_resolvent(1.0), ScalarFn::outer_kernel(w), kUnit, kPoints), PoleOnContour);
}

TEST_CASE("closed-form calculus") {
    const auto sq = ScalarFn::monomial(2);
    const auto dq = scalar_diff_quotient(sq);
    const cd a(0.3, 0.1), b(-0.7, 0.2);
    CHECK(std::abs(dq(a, b) - (a + b)) < 1e-14);
    CHECK(std::abs(dq(a, a) - 2.0 * a) < 1e-14);
    for (std::size_t n = 0; n < 6; ++n) {
        const auto l = scalar_L(ScalarFn::monomial(n));
        CHECK(std::abs(l(a) - double(n + 1) * std::pow(a, double(n))) < 1e-13);
    }
    const cd w(0.25, 0.1);
    const auto g = ScalarFn::outer_kernel(w);
    const auto lam = scalar_Lambda(g);
    const double h = 1e-5;
    for (cd z : {cd(1.5, 0.0), cd(0.0, -2.0)}) {
        auto zg = [&](cd x) { return x * g(x); };
        const cd fd = (zg(z + h) - zg(z - h)) / (2.0 * h);
        CHECK(std::abs(lam(z) - fd) < 1e-9);
        CHECK(std::abs(lam(z) + w / ((z - w) * (z - w))) < 1e-13);
    }
    const auto r = ScalarFn::inner_resolvent(cd(2.0, 1.0));
    const auto rq = scalar_diff_quotient(r);
    CHECK(std::abs(rq(a, b) - (r(a) - r(b)) / (a - b)) < 1e-13);
    CHECK(std::abs(rq(a, a) - r.derivative()(a)) < 1e-13);
}

TEST_CASE("the three duality relations on resolvent kernels") {
    const cd zeta(1.7, 0.3), w(0.2, 0.1);
    SphereCase c1{"resolvent",
                  ScalarFn::inner_resolvent(zeta),
                  ScalarFn::monomial(1),
                  ScalarFn::monomial(1),
                  ScalarFn::outer_kernel(w),
                  ScalarFn::outer_kernel(w),
                  ScalarFn::outer_kernel(w),
                  kUnit};
    const auto r = verify_sphere_relations(c1, kPoints);
    CHECK(r.comultiplication < 1e-9);
    CHECK(r.multiplication < 1e-9);
    CHECK(r.coderivation < 1e-9);
    const auto g = ScalarFn::outer_kernel(w);
    const cd lhs = pairing_values([&](cd z) { return c1.f(z) * g(z) * g(z); }, kUnit, kPoints);
    CHECK(std::abs(lhs - g(zeta) * g(zeta)) < 1e-12);

    SphereCase c2 = c1;
    c2.f = ScalarFn::polynomial({1.0});
    CHECK(verify_sphere_relations(c2, kPoints).coderivation < 1e-10);
}

TEST_CASE("built-in family passes and converges") {
    const auto family = sphere_test_family();
    REQUIRE(family.size() >= 10);
    for (const auto& c : family) {
        const double fine = verify_sphere_relations(c, kPoints).max();
        const double coarse = verify_sphere_relations(c, 32).max();
        CHECK_MESSAGE(fine <= 1e-8, c.name);
        CHECK_MESSAGE((fine <= 1e-13 || fine <= 1e-3 * coarse), c.name);
    }
}

TEST_CASE("contour independence") {
    const auto f = ScalarFn::inner_resolvent(cd(3.0, 0.0)) + ScalarFn::monomial(3, cd(0.0, 2.0));
    const auto g = ScalarFn::rational({}, {{cd(0.1, 0.2), {1.0, 0.5}}, {cd(-0.3, 0.0), {cd(0.0, 1.0)}}});
    const cd ref = pairing(f, g, Circle{0.0, 1.0}, kPoints);
    for (double rad : {0.8, 1.5, 2.5}) CHECK(std::abs(pairing(f, g, Circle{0.0, rad}, kPoints) - ref) < 1e-9);
}

TEST_CASE("involution compatibility") {
    const auto f = ScalarFn::inner_resolvent(cd(2.0, 1.0)) + ScalarFn::monomial(2, cd(1.0, -1.0));
    const auto g = ScalarFn::rational({}, {{cd(0.3, 0.2), {cd(1.0, 2.0)}}, {cd(0.3, -0.2), {0.5, 1.0}}});
    const cd v = pairing(f, g, kUnit, kPoints);
    const cd vs = pairing(f.star(), g.star(), kUnit, kPoints);
    CHECK(std::abs(vs - std::conj(v)) < 1e-10);
}

TEST_CASE("functions on the wrong side are rejected") {
    SphereCase bad{"bad",
                   ScalarFn::inner_resolvent(0.5),
                   ScalarFn::monomial(1),
                   ScalarFn::monomial(1),
                   ScalarFn::outer_kernel(0.1),
                   ScalarFn::outer_kernel(0.1),
                   ScalarFn::outer_kernel(0.1),
                   kUnit};
    CHECK_THROWS_AS(verify_sphere_relations(bad, 64), std::invalid_argument);
    bad.f = ScalarFn::monomial(2);
    bad.g = ScalarFn::outer_kernel(3.0);
    CHECK_THROWS_AS(verify_sphere_relations(bad, 64), std::invalid_argument);
    bad.g = ScalarFn::monomial(1);
    CHECK_THROWS_AS(verify_sphere_relations(bad, 64), std::invalid_argument);
}
