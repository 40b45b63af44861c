#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "freegrass/algebra.hpp"
#include "freegrass/matrix.hpp"
#include "freegrass/ncpoly.hpp"

namespace freegrass {

class DomainViolation : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class NonlinearityDetected : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class CoassociativityViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr double kFiniteDifferenceStep = 1e-5;
inline constexpr double kProbeScale = 1e-3;

// Scalar-valued fully matricial function: level-n points go to n x n matrices.
struct MatricialFn {
    BaseAlgebra alg;
    std::function<ComplexMatrix(const MatOverB&)> eval;
    double radius = std::numeric_limits<double>::infinity();
    // The evaluator is a polynomial, so block probes may use unit scale.
    bool polynomial = false;

    ComplexMatrix operator()(const MatOverB& beta) const;
    bool in_domain(const MatOverB& beta) const { return beta.norm() < radius; }

    static MatricialFn from_poly(const NCPoly& p);
};

// B-valued fully matricial map M_n(B) -> M_n(B).
struct MatricialMap {
    BaseAlgebra alg;
    std::function<MatOverB(const MatOverB&)> eval;
    double radius = std::numeric_limits<double>::infinity();

    MatOverB operator()(const MatOverB& beta) const;

    // Component i of the output is polys[i] evaluated at the point.
    static MatricialMap from_polys(const std::vector<NCPoly>& polys);
};

// Difference quotient at (beta' level m, beta'' level n), as an element of
// M_m (x) M_n: entry ((i n + k), (j n + l)) is entry (i,l) of the
// off-diagonal block produced by t = e_jk.
ComplexMatrix diff_quotient(const MatricialFn& f, const MatOverB& b1, const MatOverB& b2);

// Second difference quotient, an element of M_m (x) M_n (x) M_p. Both
// iteration orders are computed; they must agree to 1e-8.
ComplexMatrix diff_quotient_nested(const MatricialFn& f, const MatOverB& b, const MatOverB& b1, const MatOverB& b2);

// d/dt e^t f(e^t beta) at t = 0 (central difference, one Richardson step).
ComplexMatrix lambda_numeric(const MatricialFn& f, const MatOverB& beta);

// Taylor coefficients at the origin, graded as words: the coefficient of
// word J is alpha_m(b_{j_1}, ..., b_{j_m}). Scalar-valued families have one
// component; B-valued families have dim B components.
struct CoefficientFamily {
    BaseAlgebra alg;
    std::size_t max_degree = 0;
    bool b_valued = false;
    std::vector<NCPoly> components;

    cd coefficient(const Word& w, std::size_t component = 0) const { return components.at(component).coefficient(w); }
    // Truncated series at a point (scalar component 0).
    ComplexMatrix evaluate(const MatOverB& beta) const { return components.at(0).evaluate(beta); }

    static CoefficientFamily from_poly(const NCPoly& p, std::size_t max_degree);
    static CoefficientFamily identity(const BaseAlgebra& alg, std::size_t max_degree);

    nlohmann::json to_json() const;
};

CoefficientFamily extract_coefficients(const MatricialFn& f, std::size_t max_degree);
CoefficientFamily extract_coefficients(const MatricialMap& g, std::size_t max_degree);

// gamma = beta o alpha truncated at min of the two degree caps; alpha must
// be B-valued with vanishing constant term.
CoefficientFamily compose_families(const CoefficientFamily& beta, const CoefficientFamily& alpha);

// Product of two polynomials keeping only words of length <= max_degree.
NCPoly multiply_truncated(const NCPoly& p, const NCPoly& q, std::size_t max_degree);

}  // namespace freegrass
