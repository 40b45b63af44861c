#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <vector>

#include "freegrass/algebra.hpp"
#include "freegrass/calculus.hpp"
#include "freegrass/matrix.hpp"
#include "freegrass/ncpoly.hpp"
#include "freegrass/rng.hpp"

namespace freegrass {

class OutOfDomain : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class NoConvergence : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// phi(a_1 U ... a_m U c U^-1 b_n ... U^-1 b_1) in the free product of B (with
// its trace state) and a Haar unitary: 0 if m != n, else prod phi(a_j b_j) phi(c).
cd free_moment_oracle(const BaseAlgebra& alg, const std::vector<ComplexMatrix>& a, const ComplexMatrix& c,
                      const std::vector<ComplexMatrix>& b);

// Large-N limit of N^-1 Tr(z_alpha(w) z_beta(w)^*) for words over the dual basis.
cd haar_exact_limit(const BaseAlgebra& alg, const Word& alpha, const Word& beta);

struct McConfig {
    BaseAlgebra alg;
    std::vector<std::size_t> ladder;
    std::size_t samples = 1;
    std::uint64_t seed = 0;

    // Throws std::invalid_argument.
    void validate() const;
};

// z(phi_i)_N(w) for a Haar sample: one U(N k) for M_k, U(N)^k for C^k.
std::vector<ComplexMatrix> haar_generators(const BaseAlgebra& alg, std::size_t N, Rng& rng);

struct McRow {
    std::size_t N = 0;
    std::size_t samples = 0;
    cd estimate;
    double stderr_ = 0.0;
    cd exact;
};

struct WordPairSeries {
    Word alpha;
    Word beta;
    std::vector<McRow> rows;
    double deviation = 0.0;  // at the final N
    double tolerance = 0.0;  // max(3 stderr, bias / N) at the final N
    bool pass = false;
};

inline constexpr double kMcBiasAllowance = 8.0;

WordPairSeries haar_moment_estimate(const McConfig& cfg, const Word& alpha, const Word& beta);
// Every pair of words of length <= max_len, sharing one set of Haar samples per N.
std::vector<WordPairSeries> haar_moment_table(const McConfig& cfg, std::size_t max_len);

// Words are written as dot-separated letter indices; the empty word is "e".
void write_moment_csv(std::ostream& os, const std::vector<WordPairSeries>& table);

struct CoefficientEstimate {
    std::size_t N = 0;
    Word word;
    cd estimate;
    double stderr_ = 0.0;
    cd exact;
    double z_score = 0.0;
};

// Taylor coefficients from Haar integrals. Each sample is averaged over
// `rotations` angles omega -> e^{i theta} omega to isolate homogeneous parts;
// f is evaluated at r omega and degree m is rescaled by r^-m.
std::vector<CoefficientEstimate> recover_coefficients_mc(const MatricialFn& f, const McConfig& cfg,
                                                         std::size_t max_degree, std::size_t rotations,
                                                         double r = 1.0);

void write_coefficient_csv(std::ostream& os, const std::vector<CoefficientEstimate>& rows);

// ---------------------------------------------------------------------------
// R-transform

// E = M_d with B embedded, Phi the conditional expectation, a in E.
struct ExpectationSetup {
    Embedding emb;
    ComplexMatrix a;
    double C = 0.0;  // ||a||

    const BaseAlgebra& algebra() const { return emb.alg; }
    ComplexMatrix expectation(const ComplexMatrix& x) const { return emb.expectation_in_b(x); }

    // Checks that Phi is idempotent, B-bimodular and unital to 1e-12.
    static ExpectationSetup make(const BaseAlgebra& alg, std::size_t d, const ComplexMatrix& a, Rng& rng);
};

// The maps the R-transform is built from, on elements of B (k x k).
struct CauchySource {
    BaseAlgebra alg;
    double C = 0.0;
    std::function<ComplexMatrix(const ComplexMatrix&)> G;
    // x -> Phi(H_a(x)), H_a(x) = a (1 - x a)^-1
    std::function<ComplexMatrix(const ComplexMatrix&)> phi_h;
    double radius = 0.0;  // domain of L, set by calibrate()

    static CauchySource from_setup(const ExpectationSetup& s);
    // Truncated series: phi_h = sum of the moment family, G(x) = x + x phi_h(x) x.
    static CauchySource from_moments(const CoefficientFamily& moments, double C);

    // Starts at 1 / (6C) and halves until Newton converges on probe points.
    void calibrate();
};

ComplexMatrix cauchy_G(const ExpectationSetup& s, const ComplexMatrix& b);
ComplexMatrix invert_L(const CauchySource& src, const ComplexMatrix& b);
ComplexMatrix r_transform(const CauchySource& src, const ComplexMatrix& b);

// Moment family of a: the coefficient of word (i_1..i_j) is Phi(a b_i1 a ... b_ij a).
CoefficientFamily moment_family(const ExpectationSetup& s, std::size_t max_degree);
// Scalar (B = C) family with coefficient of the length-j word equal to m[j + 1].
CoefficientFamily scalar_moment_family(const std::vector<cd>& moments, std::size_t max_degree);

// Sum over (i, j, c) of F_i G_j coordinate_c(b_i b_j), truncated.
CoefficientFamily b_product(const CoefficientFamily& f, const CoefficientFamily& g, std::size_t max_degree);
CoefficientFamily b_constant(const BaseAlgebra& alg, const ComplexMatrix& b, std::size_t max_degree);

// Coefficient family of R_a from its moment family, up to max_degree.
CoefficientFamily r_transform_series(const CoefficientFamily& moments, std::size_t max_degree);

// Scalar moments phi(x^n), n = 0..max_n, of x = x_1 + x_2 with x_1, x_2 free,
// by expansion into centered alternating words.
std::vector<cd> free_sum_moments(const std::vector<cd>& m1, const std::vector<cd>& m2, std::size_t max_n);

// Free cumulants kappa_1..kappa_n from moments m_0..m_n by the noncrossing recursion.
std::vector<cd> free_cumulants(const std::vector<cd>& moments);

std::vector<cd> semicircle_moments(std::size_t max_n);

}  // namespace freegrass
