#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>

#include "freegrass/algebra.hpp"
#include "freegrass/matrix.hpp"
#include "freegrass/rng.hpp"

namespace freegrass {

class NotInResolventSet : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Graph: [[0, 1], [1, beta]] (columns (1, beta)), the normalization used by
// resolvents and the disk sets. Upper: [[1, beta], [0, 1]].
enum class AffineChart { Graph, Upper };

// Point of Gr_n(B): an invertible 2 x 2 block matrix over M_n(B), realized
// densely (blocks of size n k), modulo right multiplication of the second
// column. Points over E = M_d use BaseAlgebra::full(d) at level 1.
struct GrassPoint {
    BaseAlgebra alg;
    std::size_t n = 1;
    ComplexMatrix rep;

    std::size_t block() const { return n * alg.k; }
    ComplexMatrix a() const { return rep.block(0, 0, block(), block()); }
    ComplexMatrix b() const { return rep.block(0, block(), block(), block()); }
    ComplexMatrix c() const { return rep.block(block(), 0, block(), block()); }
    ComplexMatrix d() const { return rep.block(block(), block(), block(), block()); }

    static GrassPoint from_blocks(const BaseAlgebra& alg, std::size_t n, const ComplexMatrix& a,
                                  const ComplexMatrix& b, const ComplexMatrix& c, const ComplexMatrix& d);
    static GrassPoint from_affine(const MatOverB& beta, AffineChart chart = AffineChart::Graph);
    // Graph of Y in E = M_d.
    static GrassPoint graph_of(const ComplexMatrix& y);
    // Point at infinity: second column (1, 0).
    static GrassPoint infinity(const BaseAlgebra& alg, std::size_t n);
    // Blocks drawn from a Ginibre ensemble over B.
    static GrassPoint random(const BaseAlgebra& alg, std::size_t n, Rng& rng);
};

bool equivalent(const GrassPoint& p1, const GrassPoint& p2, double tol = 1e-9);
// Right multiplication of the second column by an invertible t over M_n(B).
GrassPoint reparametrize(const GrassPoint& p, const ComplexMatrix& t);

GrassPoint direct_sum(const GrassPoint& p1, const GrassPoint& p2);
// g pi for g in GL_2(M_n(B)) given densely (2 n k square).
GrassPoint act(const ComplexMatrix& g, const GrassPoint& p);
// C(g) for g in GL(2; B) given as a 2k x 2k matrix of B-blocks: applies I_n (x) g.
GrassPoint c_action_b(const ComplexMatrix& g, const GrassPoint& p);
// C(g) for a complex 2 x 2 matrix g.
GrassPoint c_action(const ComplexMatrix& g, const GrassPoint& p);
// s . pi = diag(s, s) pi for s in GL(n; C).
GrassPoint scalar_action(const ComplexMatrix& s, const GrassPoint& p);
// C((0,1),(1,0)) pi
GrassPoint swap_point(const GrassPoint& p);

bool transversal(const GrassPoint& p1, const GrassPoint& p2);

GrassPoint orthogonal(const GrassPoint& p);
GrassPoint star(const GrassPoint& p);

enum class DiskSet { D0, DInf, U, HPlus, HMinus, Hermitian, Delta, X };

// Stably matricial set membership via the Moebius characterization. Delta
// and X need p + q equal to the level.
bool in_set(const GrassPoint& p, DiskSet set, std::size_t pp = 0, std::size_t qq = 0);

// The 4 x 4 pattern parametrizing Delta_{p,q} by [[x,y],[z,t]] in the unit ball.
GrassPoint delta_point(const MatOverB& xyzt, std::size_t p, std::size_t q);
// g_{p,q} in GL(2(p+q); C)
ComplexMatrix delta_permutation(std::size_t p, std::size_t q);

// ---------------------------------------------------------------------------

// [[I_n (x) b_pi, beta], [I_n (x) d_pi, delta]] over M_n(E).
ComplexMatrix resolvent_stack(const GrassPoint& pi, const GrassPoint& sigma, const Embedding& emb);
bool in_resolvent_set(const GrassPoint& pi, const GrassPoint& sigma, const Embedding& emb);
// beta zeta, an n d x n d matrix over M_n(E).
ComplexMatrix resolvent(const GrassPoint& pi, const GrassPoint& sigma, const Embedding& emb);
// beta (x beta + y delta)^{-1} y with ((x,y),(z,t)) the inverse of pi's representative.
ComplexMatrix resolvent_closed_form(const GrassPoint& pi, const GrassPoint& sigma, const Embedding& emb);

using GrassFunction = std::function<ComplexMatrix(const GrassPoint&)>;

// Difference quotient of a function with values in M_level (x) M_q, via the
// probe with D = [[d', t (x) 1 b''], [0, d'']]. Entry
// (((i n + k) q + e1), ((j n + l) q + e2)) is entry (i q + e1, l q + e2) of
// the off-diagonal block produced by t = e_jk.
ComplexMatrix grass_diff_quotient(const GrassFunction& f, const GrassPoint& s1, const GrassPoint& s2, std::size_t q);

// R' (x)_E R'' in the same layout: E-block ((i,k),(j,l)) is R'_ij R''_kl.
ComplexMatrix e_tensor_product(const ComplexMatrix& r1, const ComplexMatrix& r2, std::size_t m, std::size_t n,
                               std::size_t q);

struct UnitaryResiduals {
    bool in_set = false;
    double a = 0.0;
    double c = 0.0;
};

// Residuals of the two unitary resolvent identities relating u, u^{-1} and
// the Cayley transform chi.
UnitaryResiduals unitary_identities(const ComplexMatrix& u, const GrassPoint& sigma, const Embedding& emb);

struct StarResidual {
    bool star_in_set = false;
    double residual = 0.0;
};

// (R(pi)(sigma))^* against R(pi^*)(sigma^*).
StarResidual resolvent_star_identity(const GrassPoint& pi, const GrassPoint& sigma, const Embedding& emb);

}  // namespace freegrass
