#include "freegrass/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "freegrass/parallel.hpp"

namespace freegrass {

namespace {

constexpr double kPoleClearance = 1e-9;

std::vector<cd> nodes(const Circle& gamma, std::size_t points) {
    std::vector<cd> z(points);
    for (std::size_t j = 0; j < points; ++j)
        z[j] = gamma.center +
               std::polar(gamma.radius, 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(points));
    return z;
}

// (2 pi i)^-1 dz for each node: (z - c) / P
std::vector<cd> weights(const Circle& gamma, const std::vector<cd>& z) {
    std::vector<cd> w(z.size());
    for (std::size_t j = 0; j < z.size(); ++j) w[j] = (z[j] - gamma.center) / static_cast<double>(z.size());
    return w;
}

void check_clear(const ScalarFn& f, const Circle& gamma) {
    for (const auto& p : f.poles())
        if (std::abs(std::abs(p.at - gamma.center) - gamma.radius) <= kPoleClearance * gamma.radius)
            throw PoleOnContour("pole on the integration contour");
}

bool poles_outside(const ScalarFn& f, const Circle& gamma) {
    for (const auto& p : f.poles())
        if (std::abs(p.at - gamma.center) <= gamma.radius) return false;
    return true;
}

bool poles_inside(const ScalarFn& f, const Circle& gamma) {
    for (const auto& p : f.poles())
        if (std::abs(p.at - gamma.center) >= gamma.radius) return false;
    return true;
}

std::string fmt(cd c) {
    std::ostringstream os;
    os.precision(4);
    if (c.imag() == 0.0)
        os << c.real();
    else
        os << '(' << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i)";
    return os.str();
}

}  // namespace

ScalarFn ScalarFn::polynomial(std::vector<cd> coeffs) { return rational(std::move(coeffs), {}); }

ScalarFn ScalarFn::monomial(std::size_t n, cd c) {
    std::vector<cd> p(n + 1);
    p[n] = c;
    return polynomial(std::move(p));
}

ScalarFn ScalarFn::inner_resolvent(cd zeta) { return rational({}, {{zeta, {-1.0}}}); }

ScalarFn ScalarFn::outer_kernel(cd w) { return rational({}, {{w, {1.0}}}); }

ScalarFn ScalarFn::rational(std::vector<cd> poly, std::vector<Pole> poles) {
    ScalarFn f;
    f.poly_ = std::move(poly);
    f.poles_ = std::move(poles);
    f.normalize();
    return f;
}

void ScalarFn::normalize() {
    while (!poly_.empty() && poly_.back() == cd(0.0)) poly_.pop_back();
    std::vector<Pole> merged;
    for (auto& p : poles_) {
        auto it = std::find_if(merged.begin(), merged.end(), [&](const Pole& q) { return q.at == p.at; });
        if (it == merged.end()) {
            merged.push_back(p);
            continue;
        }
        if (it->coef.size() < p.coef.size()) it->coef.resize(p.coef.size());
        for (std::size_t j = 0; j < p.coef.size(); ++j) it->coef[j] += p.coef[j];
    }
    for (auto& p : merged)
        while (!p.coef.empty() && p.coef.back() == cd(0.0)) p.coef.pop_back();
    merged.erase(std::remove_if(merged.begin(), merged.end(), [](const Pole& p) { return p.coef.empty(); }),
                 merged.end());
    poles_ = std::move(merged);
}

cd ScalarFn::operator()(cd z) const {
    cd v = 0.0;
    for (std::size_t n = poly_.size(); n-- > 0;) v = v * z + poly_[n];
    for (const auto& p : poles_) {
        const cd u = 1.0 / (z - p.at);
        cd un = u;
        for (const cd& c : p.coef) {
            v += c * un;
            un *= u;
        }
    }
    return v;
}

ScalarFn ScalarFn::derivative() const {
    std::vector<cd> dp;
    for (std::size_t n = 1; n < poly_.size(); ++n) dp.push_back(poly_[n] * static_cast<double>(n));
    std::vector<Pole> poles;
    for (const auto& p : poles_) {
        Pole q{p.at, std::vector<cd>(p.coef.size() + 1)};
        for (std::size_t j = 0; j < p.coef.size(); ++j) q.coef[j + 1] = -static_cast<double>(j + 1) * p.coef[j];
        poles.push_back(q);
    }
    return rational(dp, poles);
}

ScalarFn ScalarFn::times_z() const {
    std::vector<cd> zp(poly_.size() + 1);
    for (std::size_t n = 0; n < poly_.size(); ++n) zp[n + 1] = poly_[n];
    std::vector<Pole> poles;
    for (const auto& p : poles_) {
        // z (z - a)^-m = (z - a)^-(m-1) + a (z - a)^-m
        Pole q{p.at, std::vector<cd>(p.coef.size())};
        for (std::size_t j = 0; j < p.coef.size(); ++j) {
            q.coef[j] += p.at * p.coef[j];
            if (j == 0) {
                if (zp.empty()) zp.resize(1);
                zp[0] += p.coef[0];
            } else {
                q.coef[j - 1] += p.coef[j];
            }
        }
        poles.push_back(q);
    }
    return rational(zp, poles);
}

ScalarFn ScalarFn::star() const {
    std::vector<cd> p;
    for (const cd& c : poly_) p.push_back(std::conj(c));
    std::vector<Pole> poles;
    for (const auto& q : poles_) {
        Pole r{std::conj(q.at), {}};
        for (const cd& c : q.coef) r.coef.push_back(std::conj(c));
        poles.push_back(r);
    }
    return rational(p, poles);
}

ScalarFn ScalarFn::operator+(const ScalarFn& o) const {
    std::vector<cd> p(std::max(poly_.size(), o.poly_.size()));
    for (std::size_t n = 0; n < poly_.size(); ++n) p[n] += poly_[n];
    for (std::size_t n = 0; n < o.poly_.size(); ++n) p[n] += o.poly_[n];
    std::vector<Pole> poles = poles_;
    poles.insert(poles.end(), o.poles_.begin(), o.poles_.end());
    return rational(p, poles);
}

ScalarFn ScalarFn::operator*(cd s) const {
    ScalarFn f = *this;
    for (cd& c : f.poly_) c *= s;
    for (auto& p : f.poles_)
        for (cd& c : p.coef) c *= s;
    f.normalize();
    return f;
}

std::string ScalarFn::describe() const {
    std::string s;
    for (std::size_t n = 0; n < poly_.size(); ++n) {
        if (poly_[n] == cd(0.0)) continue;
        if (!s.empty()) s += " + ";
        s += fmt(poly_[n]) + (n ? "z^" + std::to_string(n) : "");
    }
    for (const auto& p : poles_)
        for (std::size_t j = 0; j < p.coef.size(); ++j) {
            if (p.coef[j] == cd(0.0)) continue;
            if (!s.empty()) s += " + ";
            s += fmt(p.coef[j]) + "(z-" + fmt(p.at) + ")^-" + std::to_string(j + 1);
        }
    return s.empty() ? "0" : s;
}

ScalarFn2 scalar_diff_quotient(const ScalarFn& f) {
    return [f](cd z1, cd z2) {
        const auto& poly = f.poly();
        cd v = 0.0;
        // h_n = sum_i z1^i z2^(n-1-i) = z1 h_(n-1) + z2^(n-1)
        cd h = 0.0, z2p = 1.0;
        for (std::size_t n = 1; n < poly.size(); ++n) {
            h = h * z1 + z2p;
            z2p *= z2;
            v += poly[n] * h;
        }
        for (const auto& p : f.poles()) {
            // d (z - a)^-m = -sum_{i=1..m} u1^i u2^(m+1-i)
            const std::size_t top = p.coef.size() + 1;
            std::vector<cd> p1(top + 1, 1.0), p2(top + 1, 1.0);
            for (std::size_t i = 1; i <= top; ++i) {
                p1[i] = p1[i - 1] / (z1 - p.at);
                p2[i] = p2[i - 1] / (z2 - p.at);
            }
            for (std::size_t j = 0; j < p.coef.size(); ++j) {
                const std::size_t m = j + 1;
                cd s = 0.0;
                for (std::size_t i = 1; i <= m; ++i) s += p1[i] * p2[m + 1 - i];
                v -= p.coef[j] * s;
            }
        }
        return v;
    };
}

cd pairing_values(const std::function<cd(cd)>& fg, const Circle& gamma, std::size_t points) {
    if (points == 0) throw std::invalid_argument("pairing needs at least one quadrature point");
    const auto z = nodes(gamma, points);
    const auto w = weights(gamma, z);
    cd s = 0.0;
    for (std::size_t j = 0; j < points; ++j) s += fg(z[j]) * w[j];
    return s;
}

cd pairing(const ScalarFn& f, const ScalarFn& g, const Circle& gamma, std::size_t points) {
    check_clear(f, gamma);
    check_clear(g, gamma);
    return pairing_values([&](cd z) { return f(z) * g(z); }, gamma, points);
}

namespace {

cd tensor_sum(const std::function<cd(cd, cd)>& kernel, const std::vector<cd>& a, const std::vector<cd>& b,
              const std::vector<cd>& z) {
    const std::size_t p = z.size();
    std::vector<cd> rows(p);
    parallel_for(p, [&](std::size_t j) {
        cd s = 0.0;
        for (std::size_t l = 0; l < p; ++l) s += kernel(z[j], z[l]) * b[l];
        rows[j] = s * a[j];
    });
    cd total = 0.0;
    for (const cd& r : rows) total += r;
    return total;
}

}  // namespace

cd pairing2(const ScalarFn2& F, const ScalarFn& g1, const ScalarFn& g2, const Circle& gamma, std::size_t points) {
    check_clear(g1, gamma);
    check_clear(g2, gamma);
    const auto z = nodes(gamma, points);
    const auto w = weights(gamma, z);
    std::vector<cd> a(points), b(points);
    for (std::size_t j = 0; j < points; ++j) {
        a[j] = g1(z[j]) * w[j];
        b[j] = g2(z[j]) * w[j];
    }
    return tensor_sum(F, a, b, z);
}

cd pairing2(const ScalarFn& f1, const ScalarFn& f2, const ScalarFn2& G, const Circle& gamma, std::size_t points) {
    return pairing2(G, f1, f2, gamma, points);
}

double SphereResiduals::max() const { return std::max({comultiplication, multiplication, coderivation}); }

SphereResiduals verify_sphere_relations(const SphereCase& c, std::size_t points) {
    for (const ScalarFn* f : {&c.f, &c.f1, &c.f2}) {
        check_clear(*f, c.gamma);
        if (!poles_outside(*f, c.gamma)) throw std::invalid_argument("inner function has a pole inside the contour");
    }
    for (const ScalarFn* g : {&c.g, &c.g1, &c.g2}) {
        check_clear(*g, c.gamma);
        if (!poles_inside(*g, c.gamma) || !g->vanishes_at_infinity())
            throw std::invalid_argument("outer function must have its poles inside and vanish at infinity");
    }
    SphereResiduals r;
    const cd lhs1 = pairing2(scalar_diff_quotient(c.f), c.g1, c.g2, c.gamma, points);
    const cd rhs1 = pairing_values([&](cd z) { return c.f(z) * c.g1(z) * c.g2(z); }, c.gamma, points);
    r.comultiplication = std::abs(lhs1 - rhs1);

    const cd lhs2 = pairing_values([&](cd z) { return c.f1(z) * c.f2(z) * c.g(z); }, c.gamma, points);
    const cd rhs2 = pairing2(c.f1, c.f2, scalar_diff_quotient(c.g), c.gamma, points);
    r.multiplication = std::abs(lhs2 + rhs2);

    const cd a = pairing(scalar_L(c.f), c.g, c.gamma, points);
    const cd b = pairing(c.f, scalar_Lambda(c.g), c.gamma, points);
    const cd fg = pairing(c.f, c.g, c.gamma, points);
    r.coderivation = std::abs(a + b - fg);
    return r;
}

std::vector<SphereCase> sphere_test_family() {
    using P = ScalarFn::Pole;
    const std::vector<ScalarFn> inner = {
        ScalarFn::inner_resolvent(1.3),
        ScalarFn::polynomial({-1.0, 2.0, 1.0}),
        ScalarFn::inner_resolvent(cd(0.0, -1.25)) + ScalarFn::monomial(1),
        ScalarFn::rational({0.5}, {{cd(1.2, 0.4), {0.0, 1.0}}}),
        ScalarFn::rational({}, {{cd(-1.4, 0.0), {2.0}}, {cd(0.3, 1.3), {cd(0.0, 1.0)}}}),
        ScalarFn::monomial(3, cd(1.0, -1.0)),
    };
    const std::vector<ScalarFn> outer = {
        ScalarFn::outer_kernel(0.3),
        ScalarFn::rational({}, {P{cd(-0.2, 0.5), {0.0, 1.0}}}),
        ScalarFn::outer_kernel(cd(0.0, 0.7)) + ScalarFn::outer_kernel(-0.6) * cd(2.0),
        ScalarFn::rational({}, {P{0.0, {1.0, 0.0, 0.5}}}),
        ScalarFn::rational({}, {P{cd(0.75, -0.2), {cd(1.0, 1.0), 1.0}}}),
        ScalarFn::outer_kernel(cd(-0.5, -0.5)),
    };
    std::vector<SphereCase> out;
    for (std::size_t c = 0; c < 12; ++c) {
        SphereCase s;
        s.name = "case" + std::to_string(c + 1);
        s.f = inner[c % 6];
        s.f1 = inner[(c + 1) % 6];
        s.f2 = inner[(c + 3) % 6];
        s.g = outer[c % 6];
        s.g1 = outer[(c + 2) % 6];
        s.g2 = outer[(c + 4) % 6];
        s.gamma = c < 6 ? Circle{0.0, 1.0} : Circle{cd(0.05, -0.03), 1.02};
        out.push_back(s);
    }
    return out;
}

}  // namespace freegrass
