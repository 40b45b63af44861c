#pragma once

#include <cstddef>

#include "freegrass/algebra.hpp"
#include "freegrass/grassmann.hpp"
#include "freegrass/matrix.hpp"
#include "freegrass/rng.hpp"

namespace freegrass {

// pi over E = M_d at level 1, B embedded in E, phi a functional on E.
struct DualitySetup {
    Embedding emb;
    GrassPoint pi;
    Functional phi;

    std::size_t d() const { return emb.d; }
    const BaseAlgebra& algebra() const { return emb.alg; }
    DualitySetup with_functional(const Functional& f) const { return {emb, pi, f}; }

    // Throws std::invalid_argument unless the embedding is a unital
    // *-homomorphism (to 1e-12) and the shapes agree.
    static DualitySetup make(const BaseAlgebra& alg, std::size_t d, const GrassPoint& pi, const Functional& phi);
};

// (id_n (x) phi)(R(pi; B)(sigma)), an n x n matrix.
ComplexMatrix transform(const DualitySetup& s, const GrassPoint& sigma);
GrassFunction transform_fn(const DualitySetup& s);

// (id (x) id (x) phi)(R(s1) (x)_E R(s2)) + d~ U(phi)(s1; s2)
double verify_comultiplication(const DualitySetup& s, const GrassPoint& s1, const GrassPoint& s2);

// d~ U(phi)(s1; s2) against the flip of d~ U(phi)(s2; s1).
double verify_trace_symmetry(const DualitySetup& s, const GrassPoint& s1, const GrassPoint& s2);

struct LambdaDualityResidual {
    // (id (x) phi) d/dt R(diag(1, e^-t) sigma) against (id - Lambda) U(phi)(sigma)
    double duality = 0.0;
    // R(diag(1, e^t) pi)(sigma) against e^-t R(pi)(diag(1, e^-t) sigma) at t = 0.3
    double scaling = 0.0;
};
LambdaDualityResidual verify_lambda_duality(const DualitySetup& s, const GrassPoint& sigma);

// (U_pi(phi)(sigma))^* against U_{pi^*}(phi^*)(sigma^*).
double verify_involution(const DualitySetup& s, const GrassPoint& sigma);

struct MatricialLawResiduals {
    double direct_sum = 0.0;
    double similarity = 0.0;
};
// U(s1 + s2) = U(s1) + U(s2) and U(g . s1) = g U(s1) g^-1.
MatricialLawResiduals verify_matricial_laws(const DualitySetup& s, const GrassPoint& s1, const GrassPoint& s2,
                                            const ComplexMatrix& g);

// Choi matrix of Phi = -nabla U(phi)(sigma, sigma^*): entry (i n + j, l n + k) is Phi(e_jk)_il.
ComplexMatrix choi_matrix(const DualitySetup& s, const GrassPoint& sigma);

struct PositivityResult {
    bool is_cp = false;
    double min_choi_eigenvalue = 0.0;
};
// Requires pi equivalent to pi^*.
PositivityResult dual_positivity_check(const DualitySetup& s, const GrassPoint& sigma, double tol = 1e-8);

// phi(y^* y) >= -tol for all y in M_d, decided by the spectrum of the density.
bool functional_is_positive(const Functional& phi, double tol = 1e-10);

struct InjectivityReport {
    std::size_t rank = 0;
    std::size_t target = 0;
    bool full_rank = false;
};
// Rank of phi -> (U(phi)(sigma_j))_j over 2 d^2 sampled sigma at the given level.
InjectivityReport injectivity_rank(const DualitySetup& s, std::size_t level, Rng& rng);

}  // namespace freegrass
