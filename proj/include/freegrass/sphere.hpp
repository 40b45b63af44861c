#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "freegrass/matrix.hpp"

namespace freegrass {

class PoleOnContour : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Rational function p(z) + sum over poles a of sum_j c_j (z - a)^-(j+1).
class ScalarFn {
public:
    struct Pole {
        cd at;
        std::vector<cd> coef;
    };

    ScalarFn() = default;

    static ScalarFn polynomial(std::vector<cd> coeffs);
    static ScalarFn monomial(std::size_t n, cd c = 1.0);
    // (zeta - z)^-1
    static ScalarFn inner_resolvent(cd zeta);
    // (z - w)^-1
    static ScalarFn outer_kernel(cd w);
    static ScalarFn rational(std::vector<cd> poly, std::vector<Pole> poles);

    const std::vector<cd>& poly() const { return poly_; }
    const std::vector<Pole>& poles() const { return poles_; }
    bool vanishes_at_infinity() const { return poly_.empty(); }

    cd operator()(cd z) const;
    ScalarFn derivative() const;
    // z f
    ScalarFn times_z() const;
    // (z f)'; serves both as L on inner functions and as Lambda on outer ones.
    ScalarFn z_derivative() const { return times_z().derivative(); }
    // conj(f(conj z))
    ScalarFn star() const;
    ScalarFn operator+(const ScalarFn& o) const;
    ScalarFn operator*(cd s) const;

    std::string describe() const;

private:
    void normalize();

    std::vector<cd> poly_;
    std::vector<Pole> poles_;
};

using ScalarFn2 = std::function<cd(cd, cd)>;

// (f(z1) - f(z2)) / (z1 - z2) in closed form, so the diagonal needs no limit.
ScalarFn2 scalar_diff_quotient(const ScalarFn& f);
inline ScalarFn scalar_L(const ScalarFn& f) { return f.z_derivative(); }
inline ScalarFn scalar_Lambda(const ScalarFn& g) { return g.z_derivative(); }

struct Circle {
    cd center = 0.0;
    double radius = 1.0;
};

// (2 pi i)^-1 times the trapezoidal sum of f g dz on the circle.
cd pairing(const ScalarFn& f, const ScalarFn& g, const Circle& gamma, std::size_t points);
cd pairing_values(const std::function<cd(cd)>& fg, const Circle& gamma, std::size_t points);
// <F | g1 (x) g2> by the tensor-product rule.
cd pairing2(const ScalarFn2& F, const ScalarFn& g1, const ScalarFn& g2, const Circle& gamma, std::size_t points);
// <f1 (x) f2 | G>
cd pairing2(const ScalarFn& f1, const ScalarFn& f2, const ScalarFn2& G, const Circle& gamma, std::size_t points);

struct SphereCase {
    std::string name;
    ScalarFn f, f1, f2;  // holomorphic near K, poles outside the contour
    ScalarFn g, g1, g2;  // poles inside the contour, vanishing at infinity
    Circle gamma;
};

struct SphereResiduals {
    double comultiplication = 0.0;  // <df | g1 (x) g2> - <f | g1 g2>
    double multiplication = 0.0;    // <f1 f2 | g> + <f1 (x) f2 | dg>
    double coderivation = 0.0;      // <Lf | g> + <f | Lambda g> - <f | g>
    double max() const;
};

// Throws std::invalid_argument when a function sits on the wrong side of the contour.
SphereResiduals verify_sphere_relations(const SphereCase& c, std::size_t points);

std::vector<SphereCase> sphere_test_family();

}  // namespace freegrass
