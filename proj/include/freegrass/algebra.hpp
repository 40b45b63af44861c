#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "freegrass/matrix.hpp"
#include "freegrass/rng.hpp"

namespace freegrass {

enum class AlgebraKind { FullMatrix, Diagonal };

// B = M_k (FullMatrix) or C^k (Diagonal). Elements of B are realized as k x k
// complex matrices; C^k elements are diagonal.
struct BaseAlgebra {
    AlgebraKind kind = AlgebraKind::FullMatrix;
    std::size_t k = 1;

    static BaseAlgebra full(std::size_t k);
    static BaseAlgebra diagonal(std::size_t k);
    static BaseAlgebra scalars() { return full(1); }
    // "c", "m2", "c3", ... ; throws std::invalid_argument.
    static BaseAlgebra parse(const std::string& spec);

    std::size_t dim() const { return kind == AlgebraKind::FullMatrix ? k * k : k; }
    std::size_t block() const { return k; }
    std::string name() const;

    // Canonical basis b_i (e_pq in lexicographic order, or e_j).
    ComplexMatrix basis(std::size_t i) const;
    // phi_i(b) for the dual basis.
    cd coordinate(std::size_t i, const ComplexMatrix& b) const;
    // phi_i(1)
    cd unit_coordinate(std::size_t i) const;
    // index of phi_i^*
    std::size_t star_index(std::size_t i) const;
    std::vector<cd> coordinates(const ComplexMatrix& b) const;
    ComplexMatrix from_coordinates(const std::vector<cd>& c) const;
    bool contains(const ComplexMatrix& b, double tol = 0.0) const;
    ComplexMatrix random_element(Rng& rng) const;

    bool operator==(const BaseAlgebra&) const = default;
};

// Linear functional on a matrix algebra: phi(X) = Tr(X A^t) = sum_ij X_ij A_ij.
struct Functional {
    ComplexMatrix dual;

    cd operator()(const ComplexMatrix& x) const;
    // phi^*(X) = conj(phi(X^*)); its dual matrix is A^*.
    Functional star() const { return {dual.adjoint()}; }
    Functional operator+(const Functional& o) const { return {dual + o.dual}; }
    Functional operator*(cd s) const { return {dual * s}; }

    static Functional trace(std::size_t d);
    static Functional normalized_trace(std::size_t d);
    static Functional matrix_unit(std::size_t d, std::size_t p, std::size_t q);
    // X -> Tr(X P): dual is P^t.
    static Functional weighted_trace(const ComplexMatrix& p);
};

std::vector<Functional> dual_basis(const BaseAlgebra& alg);
// theta(1) = 1: normalized trace on M_k, mean of coordinates on C^k.
Functional distinguished_functional(const BaseAlgebra& alg);

// Element of M_n(B), realized in the M_n (x) B Kronecker order (outer index
// is the matricial level). The Diagonal kind keeps k separate n x n matrices.
class MatOverB {
public:
    MatOverB() = default;

    static MatOverB zero(const BaseAlgebra& alg, std::size_t n);
    static MatOverB identity(const BaseAlgebra& alg, std::size_t n);
    static MatOverB embed(const BaseAlgebra& alg, std::size_t n, const std::vector<ComplexMatrix>& entries);
    // sum_i comps[i] (x) b_i
    static MatOverB from_components(const BaseAlgebra& alg, const std::vector<ComplexMatrix>& comps);
    static MatOverB from_dense(const BaseAlgebra& alg, std::size_t n, const ComplexMatrix& dense);
    // A (x) b
    static MatOverB kron_scalar(const BaseAlgebra& alg, const ComplexMatrix& a, const ComplexMatrix& b);
    // A (x) 1
    static MatOverB scalar_matrix(const BaseAlgebra& alg, const ComplexMatrix& a);
    // [[x, t (x) 1], [0, y]]
    static MatOverB upper_block(const MatOverB& x, const MatOverB& y, const ComplexMatrix& t);
    // Entry (i,j) is b_{w_i} on the superdiagonal: sum_p e_{p,p+1} (x) b_{word[p]}.
    static MatOverB nilpotent_chain(const BaseAlgebra& alg, const std::vector<int>& word);
    static MatOverB random(const BaseAlgebra& alg, std::size_t n, Rng& rng, double norm);
    static MatOverB random_hermitian(const BaseAlgebra& alg, std::size_t n, Rng& rng, double norm);

    const BaseAlgebra& algebra() const { return alg_; }
    std::size_t level() const { return n_; }

    ComplexMatrix extract_entry(std::size_t i, std::size_t j) const;
    // z(phi_i)_n(beta): the n x n matrix of i-th coordinates.
    ComplexMatrix component(std::size_t i) const;
    ComplexMatrix dense() const;
    const std::vector<ComplexMatrix>& parts() const { return parts_; }

    MatOverB adjoint() const;
    MatOverB direct_sum(const MatOverB& o) const;
    MatOverB conjugate_by(const ComplexMatrix& s, const ComplexMatrix& s_inv) const;
    MatOverB block(std::size_t r0, std::size_t c0, std::size_t nr) const;
    double norm() const;

    MatOverB operator+(const MatOverB& o) const;
    MatOverB operator-(const MatOverB& o) const;
    MatOverB operator*(const MatOverB& o) const;
    MatOverB operator*(cd s) const;

private:
    BaseAlgebra alg_;
    std::size_t n_ = 0;
    ComplexMatrix full_;
    std::vector<ComplexMatrix> parts_;
};

// Unital *-embedding of B into E = M_d. M_k maps to X (x) I_{d/k}; C^k maps
// to block-diagonal constants with multiplicities summing to d.
struct Embedding {
    BaseAlgebra alg;
    std::size_t d = 1;
    std::vector<std::size_t> mult;

    static Embedding make(const BaseAlgebra& alg, std::size_t d);

    ComplexMatrix element(const ComplexMatrix& b) const;
    // nk x nk realization of M_n(B) -> nd x nd matrix over E.
    ComplexMatrix level(const ComplexMatrix& dense, std::size_t n) const;
    ComplexMatrix operator()(const MatOverB& m) const { return level(m.dense(), m.level()); }
    // Conditional expectation E -> B (normalized partial trace / block compression), as d x d.
    ComplexMatrix expectation(const ComplexMatrix& x) const;
    // The same expectation as a k x k element of B.
    ComplexMatrix expectation_in_b(const ComplexMatrix& x) const;
};

// (id (x) phi) on an (n d) x (n d) matrix over E.
ComplexMatrix apply_blockwise(const Functional& phi, const ComplexMatrix& m, std::size_t n, std::size_t d);

}  // namespace freegrass
