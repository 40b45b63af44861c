#pragma once

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <json.hpp>

#include "freegrass/algebra.hpp"
#include "freegrass/matrix.hpp"
#include "freegrass/rng.hpp"

namespace freegrass {

// Sequence of dual-basis indices; the empty word is the unit.
using Word = std::vector<int>;

inline constexpr std::size_t kDefaultDegreeCap = 12;

class DegreeCapExceeded : public std::length_error {
public:
    using std::length_error::length_error;
};

class AlgebraMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class NCTensor;
class NCTensor3;

// Element of the free algebra on the generators z(phi_i), i < dim B.
class NCPoly {
public:
    using Terms = std::map<Word, cd>;

    NCPoly() = default;
    explicit NCPoly(const BaseAlgebra& alg) : alg_(alg) {}

    static NCPoly constant(const BaseAlgebra& alg, cd c);
    static NCPoly generator(const BaseAlgebra& alg, int i);
    static NCPoly monomial(const BaseAlgebra& alg, const Word& w, cd c = 1.0);
    // Random polynomial with Gaussian-integer coefficients in [-3,3] + i[-3,3];
    // products of such values stay exact in double arithmetic.
    static NCPoly random(const BaseAlgebra& alg, std::size_t max_degree, std::size_t n_terms, Rng& rng);

    const BaseAlgebra& algebra() const { return alg_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t degree() const;
    cd coefficient(const Word& w) const;
    void add_term(const Word& w, cd c);
    NCPoly homogeneous(std::size_t m) const;

    NCPoly operator+(const NCPoly& o) const;
    NCPoly operator-(const NCPoly& o) const;
    NCPoly operator*(const NCPoly& o) const;
    NCPoly operator*(cd s) const;
    bool operator==(const NCPoly& o) const { return alg_ == o.alg_ && terms_ == o.terms_; }

    // p_n(beta), with z(phi_i)_n(beta) the matrix of i-th coordinates.
    ComplexMatrix evaluate(const MatOverB& beta) const;
    // Same, with the generator matrices supplied directly.
    ComplexMatrix evaluate_generators(const std::vector<ComplexMatrix>& gens) const;

    NCTensor derivative() const;
    NCPoly lambda() const;
    NCPoly star() const;

    nlohmann::json to_json() const;
    static NCPoly from_json(const nlohmann::json& j);

private:
    void check_same(const NCPoly& o) const;

    BaseAlgebra alg_;
    Terms terms_;
};

NCPoly operator*(cd s, const NCPoly& p);

// Element of Z (x) Z: coefficients on pairs of words.
class NCTensor {
public:
    using Terms = std::map<std::pair<Word, Word>, cd>;

    NCTensor() = default;
    explicit NCTensor(const BaseAlgebra& alg) : alg_(alg) {}

    const BaseAlgebra& algebra() const { return alg_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    void add_term(const Word& u, const Word& v, cd c);

    NCTensor operator+(const NCTensor& o) const;
    NCTensor operator-(const NCTensor& o) const;
    bool operator==(const NCTensor& o) const { return alg_ == o.alg_ && terms_ == o.terms_; }

    // (p (x) 1) . T
    NCTensor left_multiply(const NCPoly& p) const;
    // T . (1 (x) q)
    NCTensor right_multiply(const NCPoly& q) const;
    // (Lambda (x) id) T + (id (x) Lambda) T
    NCTensor lambda_sum() const;
    // sigma_12 applied after the entrywise star.
    NCTensor star_swap() const;
    NCTensor3 derivative_left() const;   // (d (x) id)
    NCTensor3 derivative_right() const;  // (id (x) d)

    // sum c kron(u(beta'), v(beta'')), an element of M_m (x) M_n.
    ComplexMatrix evaluate(const MatOverB& b1, const MatOverB& b2) const;

private:
    BaseAlgebra alg_;
    Terms terms_;
};

class NCTensor3 {
public:
    using Terms = std::map<std::tuple<Word, Word, Word>, cd>;

    NCTensor3() = default;
    explicit NCTensor3(const BaseAlgebra& alg) : alg_(alg) {}

    const Terms& terms() const { return terms_; }
    void add_term(const Word& u, const Word& v, const Word& w, cd c);
    bool operator==(const NCTensor3& o) const { return alg_ == o.alg_ && terms_ == o.terms_; }

    // sum c kron(u(b1), v(b2), w(b3))
    ComplexMatrix evaluate(const MatOverB& b1, const MatOverB& b2, const MatOverB& b3) const;

private:
    BaseAlgebra alg_;
    Terms terms_;
};

// Total antisymmetrization sum_sigma sign(sigma) m_sigma(1) ... m_sigma(p).
NCPoly antisymmetrize(const BaseAlgebra& alg, const std::vector<Word>& monomials);

// Value of the antisymmetrization at matrices x_j = m_j(beta), by a subset
// recursion instead of the p! expansion.
ComplexMatrix antisymmetrized_product(const std::vector<ComplexMatrix>& x);

// Product of generator matrices along a word; the empty word gives I_n.
ComplexMatrix word_value(const Word& w, const std::vector<ComplexMatrix>& gens, std::size_t n);

}  // namespace freegrass
