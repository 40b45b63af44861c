#include "freegrass/suites.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "freegrass/calculus.hpp"
#include "freegrass/duality.hpp"
#include "freegrass/grassmann.hpp"
#include "freegrass/linalg.hpp"
#include "freegrass/pathological.hpp"
#include "freegrass/rng.hpp"
#include "freegrass/sphere.hpp"

namespace freegrass {

namespace {

using nlohmann::json;

double rel(const ComplexMatrix& x, const ComplexMatrix& ref) {
    return max_abs_diff(x, ref) / std::max(1.0, ref.max_abs());
}

std::vector<BaseAlgebra> algebras_or(const SuiteOptions& o, std::vector<BaseAlgebra> fallback) {
    return o.algebras.empty() ? fallback : o.algebras;
}

std::size_t or_default(std::size_t v, std::size_t fallback) { return v ? v : fallback; }

// Smallest admissible d >= want for the embedding of alg.
std::size_t fit_E(const BaseAlgebra& alg, std::size_t want) {
    std::size_t d = std::max(want, alg.k);
    if (alg.kind == AlgebraKind::FullMatrix)
        while (d % alg.k) ++d;
    return d;
}

// (B, d) combinations for the E-level suites.
std::vector<std::pair<BaseAlgebra, std::size_t>> e_combos(const SuiteOptions& o) {
    std::vector<std::pair<BaseAlgebra, std::size_t>> out;
    if (o.algebras.empty() && !o.E) {
        out = {{BaseAlgebra::scalars(), 3},     {BaseAlgebra::scalars(), 4}, {BaseAlgebra::diagonal(2), 3},
               {BaseAlgebra::diagonal(2), 4}, {BaseAlgebra::full(2), 4}};
        return out;
    }
    const auto algs = algebras_or(o, {BaseAlgebra::scalars(), BaseAlgebra::diagonal(2), BaseAlgebra::full(2)});
    for (const auto& a : algs) {
        if (o.E) {
            out.push_back({a, fit_E(a, o.E)});
        } else {
            out.push_back({a, fit_E(a, 3)});
            if (fit_E(a, 4) != fit_E(a, 3)) out.push_back({a, fit_E(a, 4)});
        }
    }
    return out;
}

ComplexMatrix random_invertible(std::size_t s, Rng& rng) {
    return ComplexMatrix::identity(s) * cd(2.0) + ginibre(s, s, rng) * cd(1.0 / std::sqrt(2.0 * s));
}

// A sigma in the resolvent set with ||R|| below the conditioning cap.
std::optional<GrassPoint> draw_sigma(const GrassPoint& pi, const BaseAlgebra& alg, std::size_t n,
                                     const Embedding& emb, double cap, Rng& rng) {
    for (int attempt = 0; attempt < 64; ++attempt) {
        GrassPoint s = GrassPoint::random(alg, n, rng);
        if (!in_resolvent_set(pi, s, emb)) continue;
        if (resolvent(pi, s, emb).max_abs() <= cap) return s;
    }
    return std::nullopt;
}

Functional random_functional(std::size_t d, Rng& rng) { return {ginibre(d, d, rng)}; }

ComplexMatrix random_hermitian(std::size_t d, Rng& rng) {
    const ComplexMatrix g = ginibre(d, d, rng);
    return (g + g.adjoint()) * cd(0.5 / std::sqrt(static_cast<double>(d)));
}

std::size_t level_for(std::size_t i) { return 1 + (i % 2); }

}  // namespace

json SuiteOptions::to_json() const {
    json j;
    json algs = json::array();
    for (const auto& a : algebras) algs.push_back(a.name());
    j["algebras"] = algs;
    j["seed"] = seed;
    j["instances"] = instances;
    j["E"] = E;
    j["max_degree"] = max_degree;
    j["tolerances"] = tol.to_json();
    return j;
}

// ---------------------------------------------------------------------------

Report run_bialgebra(const SuiteOptions& o) {
    Report rep("bialgebra", o.to_json());
    const auto algs = algebras_or(o, {BaseAlgebra::full(2), BaseAlgebra::diagonal(2), BaseAlgebra::diagonal(3)});
    const std::size_t count = or_default(o.instances, 50);
    const std::size_t deg = or_default(o.max_degree, 5);
    std::size_t sym_leibniz = 0, sym_coassoc = 0, sym_lambda = 0, sym_star = 0, sym_lstar = 0, total = 0;
    Worst bridge, leibniz, coassoc, nested_sym, lambda, homom;
    for (std::size_t ai = 0; ai < algs.size(); ++ai) {
        const BaseAlgebra& alg = algs[ai];
        for (std::size_t i = 0; i < count; ++i) {
            Rng rng = Rng::derive(o.seed, {1, ai, i});
            const NCPoly p = NCPoly::random(alg, deg, 6, rng);
            const NCPoly q = NCPoly::random(alg, deg, 6, rng);
            const NCTensor dp = p.derivative(), dq = q.derivative();
            ++total;
            if ((p * q).derivative() == dp.right_multiply(q) + dq.left_multiply(p)) ++sym_leibniz;
            if (dp.derivative_left() == dp.derivative_right()) ++sym_coassoc;
            if (p.lambda().derivative() == dp.lambda_sum()) ++sym_lambda;
            if (p.star().derivative() == dp.star_swap()) ++sym_star;
            if (p.star().lambda() == p.lambda().star()) ++sym_lstar;

            const MatricialFn fp = MatricialFn::from_poly(p), fq = MatricialFn::from_poly(q);
            const MatricialFn fpq = MatricialFn::from_poly(p * q);
            const std::size_t m = level_for(i), n = level_for(i + 1);
            const MatOverB b1 = MatOverB::random(alg, m, rng, 0.9), b2 = MatOverB::random(alg, n, rng, 0.9);
            const ComplexMatrix tp = diff_quotient(fp, b1, b2), tq = diff_quotient(fq, b1, b2);
            bridge.add(rel(tp, dp.evaluate(b1, b2)));
            const ComplexMatrix lhs = diff_quotient(fpq, b1, b2);
            const ComplexMatrix rhs = kron(p.evaluate(b1), ComplexMatrix::identity(n)) * tq +
                                      tp * kron(ComplexMatrix::identity(m), q.evaluate(b2));
            leibniz.add(rel(lhs, rhs));
            homom.add(rel((p * q).evaluate(b1), p.evaluate(b1) * q.evaluate(b1)));
            const MatOverB b0 = MatOverB::random(alg, 1, rng, 0.9);
            const ComplexMatrix nested = diff_quotient_nested(fp, b0, b1, b2);
            nested_sym.add(rel(nested, dp.derivative_left().evaluate(b0, b1, b2)));
            coassoc.add(rel(nested, dp.derivative_right().evaluate(b0, b1, b2)));
            lambda.add(rel(lambda_numeric(fp, b1), p.lambda().evaluate(b1)));
        }
    }
    rep.add_lower("leibniz-symbolic", "leibniz-rule", total, static_cast<double>(sym_leibniz), static_cast<double>(total));
    rep.add_lower("coassociativity-symbolic", "coassociativity", total, static_cast<double>(sym_coassoc),
                  static_cast<double>(total));
    rep.add_lower("lambda-coderivation-symbolic", "lambda-coderivation", total, static_cast<double>(sym_lambda),
                  static_cast<double>(total));
    rep.add_lower("derivative-star-symbolic", "derivative-involution", total, static_cast<double>(sym_star),
                  static_cast<double>(total));
    rep.add_lower("lambda-star-symbolic", "lambda-involution", total, static_cast<double>(sym_lstar),
                  static_cast<double>(total));
    rep.add_upper("difference-quotient-bridge", "difference-quotient", bridge.count, bridge.value, o.tol.leibniz);
    rep.add_upper("leibniz-numeric", "leibniz-rule", leibniz.count, leibniz.value, o.tol.leibniz);
    rep.add_upper("evaluation-homomorphism", "evaluation", homom.count, homom.value, o.tol.leibniz);
    rep.add_upper("coassociativity-numeric", "coassociativity", coassoc.count, coassoc.value, o.tol.coassociativity);
    rep.add_upper("nested-quotient-bridge", "coassociativity", nested_sym.count, nested_sym.value,
                  o.tol.coassociativity);
    rep.add_upper("lambda-numeric", "lambda-coderivation", lambda.count, lambda.value, o.tol.lambda_duality);
    return rep;
}

// ---------------------------------------------------------------------------

Report run_resolvent(const SuiteOptions& o) {
    Report rep("resolvent", o.to_json());
    const auto combos = e_combos(o);
    const std::size_t per = or_default(o.instances, (100 + combos.size() - 1) / combos.size());
    Worst eq, repr, closed, ua, uc, multiplicative;
    std::size_t skipped = 0, unitary_skipped = 0;
    for (std::size_t ci = 0; ci < combos.size(); ++ci) {
        const auto& [alg, d] = combos[ci];
        const Embedding emb = Embedding::make(alg, d);
        const BaseAlgebra E = BaseAlgebra::full(d);
        for (std::size_t i = 0; i < per; ++i) {
            Rng rng = Rng::derive(o.seed, {2, ci, i});
            const GrassPoint pi = GrassPoint::random(E, 1, rng);
            const std::size_t m = level_for(i), n = level_for(i / 2);
            const auto s1 = draw_sigma(pi, alg, m, emb, o.tol.conditioning, rng);
            const auto s2 = draw_sigma(pi, alg, n, emb, o.tol.conditioning, rng);
            if (!s1 || !s2) {
                ++skipped;
                continue;
            }
            const ComplexMatrix r1 = resolvent(pi, *s1, emb), r2 = resolvent(pi, *s2, emb);
            const GrassFunction rf = [&](const GrassPoint& s) { return resolvent(pi, s, emb); };
            const ComplexMatrix dq = grass_diff_quotient(rf, *s1, *s2, d);
            const ComplexMatrix et = e_tensor_product(r1, r2, m, n, d);
            eq.add(rel(dq, et * cd(-1.0)));

            const GrassPoint pi2 = reparametrize(pi, random_invertible(d, rng));
            const GrassPoint s1b = reparametrize(*s1, MatOverB::identity(alg, m).dense() * cd(2.0) +
                                                          MatOverB::random(alg, m, rng, 1.0).dense());
            repr.add(rel(resolvent(pi2, s1b, emb), r1));
            closed.add(rel(resolvent_closed_form(pi, *s1, emb), r1));

            // Entries of R over the direct-sum probe factor through the pieces.
            const ComplexMatrix rs = resolvent(pi, direct_sum(*s1, *s2), emb);
            multiplicative.add(rel(rs.block(0, 0, m * d, m * d), r1) +
                               rel(rs.block(m * d, m * d, n * d, n * d), r2));

            const ComplexMatrix u = haar_unitary(d, rng);
            const auto us = draw_sigma(GrassPoint::graph_of(u), alg, m, emb, o.tol.conditioning, rng);
            if (!us) {
                ++unitary_skipped;
                continue;
            }
            const UnitaryResiduals ur = unitary_identities(u, *us, emb);
            if (!ur.in_set) {
                ++unitary_skipped;
                continue;
            }
            const double scale = std::max(1.0, resolvent(GrassPoint::graph_of(u), *us, emb).max_abs());
            ua.add(ur.a / scale);
            uc.add(ur.c / scale);
        }
    }
    rep.add_upper("resolvent-equation", "resolvent-equation", eq.count, eq.value, o.tol.resolvent_equation)
        .detail = {{"skipped", skipped}};
    rep.add_upper("representative-independence", "resolvent-well-defined", repr.count, repr.value,
                  o.tol.representative);
    rep.add_upper("closed-form", "resolvent-closed-form", closed.count, closed.value, o.tol.closed_form);
    rep.add_upper("direct-sum", "resolvent-matricial", multiplicative.count, multiplicative.value, o.tol.matricial);
    rep.add_upper("unitary-inverse", "unitary-resolvent", ua.count, ua.value, o.tol.unitary).detail = {
        {"skipped", unitary_skipped}};
    rep.add_upper("unitary-cayley", "unitary-resolvent", uc.count, uc.value, o.tol.unitary);
    rep.add_lower("instances", "resolvent-equation", eq.count, static_cast<double>(eq.count),
                  o.instances ? 1.0 : 100.0);
    return rep;
}

// ---------------------------------------------------------------------------

Report run_involution(const SuiteOptions& o) {
    Report rep("involution", o.to_json());
    const auto combos = e_combos(o);
    const std::size_t per = or_default(o.instances, (50 + combos.size() - 1) / combos.size());
    const std::size_t deg = or_default(o.max_degree, 5);
    std::size_t total = 0, ss = 0, oo = 0, sym_d = 0, sym_l = 0;
    Worst star_res, inv_res;
    for (std::size_t ci = 0; ci < combos.size(); ++ci) {
        const auto& [alg, d] = combos[ci];
        const Embedding emb = Embedding::make(alg, d);
        const BaseAlgebra E = BaseAlgebra::full(d);
        for (std::size_t i = 0; i < per; ++i) {
            Rng rng = Rng::derive(o.seed, {3, ci, i});
            ++total;
            const GrassPoint p = GrassPoint::random(alg, level_for(i), rng);
            if (equivalent(star(star(p)), p)) ++ss;
            if (equivalent(orthogonal(orthogonal(p)), p)) ++oo;
            const NCPoly poly = NCPoly::random(alg, deg, 6, rng);
            if (poly.star().derivative() == poly.derivative().star_swap()) ++sym_d;
            if (poly.star().lambda() == poly.lambda().star()) ++sym_l;

            // Alternate Hermitian graph setups and generic ones.
            const GrassPoint pi = i % 2 ? GrassPoint::graph_of(random_hermitian(d, rng)) : GrassPoint::random(E, 1, rng);
            const auto s = draw_sigma(pi, alg, level_for(i + 1), emb, o.tol.conditioning, rng);
            if (!s) continue;
            const StarResidual sr = resolvent_star_identity(pi, *s, emb);
            if (sr.star_in_set) star_res.add(sr.residual / std::max(1.0, resolvent(pi, *s, emb).max_abs()));
            const DualitySetup setup = DualitySetup::make(alg, d, pi, random_functional(d, rng));
            const ComplexMatrix u = transform(setup, *s);
            if (in_resolvent_set(star(pi), star(*s), emb))
                inv_res.add(verify_involution(setup, *s) / std::max(1.0, u.max_abs()));
        }
    }
    rep.add_lower("star-star", "point-involution", total, static_cast<double>(ss), static_cast<double>(total));
    rep.add_lower("perp-perp", "point-involution", total, static_cast<double>(oo), static_cast<double>(total));
    rep.add_lower("derivative-star-symbolic", "derivative-involution", total, static_cast<double>(sym_d),
                  static_cast<double>(total));
    rep.add_lower("lambda-star-symbolic", "lambda-involution", total, static_cast<double>(sym_l),
                  static_cast<double>(total));
    rep.add_upper("resolvent-star", "resolvent-involution", star_res.count, star_res.value, o.tol.involution);
    rep.add_upper("transform-star", "transform-involution", inv_res.count, inv_res.value, o.tol.involution);
    rep.add_lower("instances", "transform-involution", inv_res.count, static_cast<double>(inv_res.count),
                  o.instances ? 1.0 : 50.0);
    return rep;
}

// ---------------------------------------------------------------------------

Report run_positivity(const SuiteOptions& o) {
    Report rep("positivity", o.to_json());
    const auto combos = e_combos(o);
    const std::size_t setups = or_default(o.instances, 20);
    const std::size_t sigmas_per_setup = 3;
    double min_eig = INFINITY;
    std::size_t checked = 0, positive_phi = 0;
    for (std::size_t i = 0; i < setups; ++i) {
        const auto& [alg, d] = combos[i % combos.size()];
        Rng rng = Rng::derive(o.seed, {4, i});
        const Embedding emb = Embedding::make(alg, d);
        const GrassPoint pi = GrassPoint::graph_of(random_hermitian(d, rng));
        const Functional phi = Functional::normalized_trace(d);
        if (functional_is_positive(phi)) ++positive_phi;
        const DualitySetup s = DualitySetup::make(alg, d, pi, phi);
        for (std::size_t j = 0; j < sigmas_per_setup; ++j) {
            const auto sigma = draw_sigma(pi, alg, level_for(j), emb, o.tol.conditioning, rng);
            if (!sigma || !in_resolvent_set(pi, star(*sigma), emb)) continue;
            const PositivityResult r = dual_positivity_check(s, *sigma, o.tol.choi);
            min_eig = std::min(min_eig, r.min_choi_eigenvalue);
            ++checked;
        }
    }
    rep.add_lower("positive-functional-validated", "dual-positivity", setups, static_cast<double>(positive_phi),
                  static_cast<double>(setups));
    rep.add_lower("choi-min-eigenvalue", "dual-positivity", checked, checked ? min_eig : -INFINITY, -o.tol.choi);

    // Negative control: X -> Tr(X diag(1, -1, 0, ...)).
    const auto& [alg, d] = combos.front();
    ComplexMatrix w(d, d);
    w(0, 0) = 1.0;
    w(1, 1) = -1.0;
    const Functional control = Functional::weighted_trace(w);
    Rng rng = Rng::derive(o.seed, {4, 999});
    const Embedding emb = Embedding::make(alg, d);
    const GrassPoint pi = GrassPoint::graph_of(random_hermitian(d, rng));
    const DualitySetup s = DualitySetup::make(alg, d, pi, control);
    double best = INFINITY;
    std::size_t tried = 0, found_at = 0;
    while (tried < 200) {
        const auto sigma = draw_sigma(pi, alg, level_for(tried), emb, o.tol.conditioning, rng);
        ++tried;
        if (!sigma || !in_resolvent_set(pi, star(*sigma), emb)) continue;
        const double e = dual_positivity_check(s, *sigma, o.tol.choi).min_choi_eigenvalue;
        best = std::min(best, e);
        if (best < -o.tol.control_witness) {
            found_at = tried;
            break;
        }
    }
    rep.add_flag("control-functional-not-positive", "dual-positivity", 1, !functional_is_positive(control));
    rep.add_upper("control-witness", "dual-positivity", tried, best, -o.tol.control_witness).detail = {
        {"sampled", tried}, {"found_at", found_at}};
    return rep;
}

// ---------------------------------------------------------------------------

Report run_grassmann_identities(const SuiteOptions& o) {
    Report rep("grassmann-identities", o.to_json());
    const auto combos = e_combos(o);
    const std::size_t per = or_default(o.instances, 10);
    Worst comult, sym, lam, scal, dsum, simil, incl;
    std::size_t inj_full = 0, inj_total = 0, incl_miss = 0;
    for (std::size_t ci = 0; ci < combos.size(); ++ci) {
        const auto& [alg, d] = combos[ci];
        const Embedding emb = Embedding::make(alg, d);
        const BaseAlgebra E = BaseAlgebra::full(d);
        for (std::size_t i = 0; i < per; ++i) {
            Rng rng = Rng::derive(o.seed, {5, ci, i});
            const GrassPoint pi = GrassPoint::random(E, 1, rng);
            const DualitySetup s = DualitySetup::make(alg, d, pi, random_functional(d, rng));
            const std::size_t m = level_for(i), n = level_for(i + 1);
            const auto s1 = draw_sigma(pi, alg, m, emb, o.tol.conditioning, rng);
            const auto s2 = draw_sigma(pi, alg, n, emb, o.tol.conditioning, rng);
            if (!s1 || !s2) continue;
            const double u1 = std::max(1.0, transform(s, *s1).max_abs());
            const double scale = std::max(1.0, resolvent(pi, *s1, emb).max_abs() * resolvent(pi, *s2, emb).max_abs() *
                                                   s.phi.dual.max_abs() * static_cast<double>(d));
            comult.add(verify_comultiplication(s, *s1, *s2) / scale);
            sym.add(verify_trace_symmetry(s.with_functional(Functional::trace(d)), *s1, *s2) / scale);
            const LambdaDualityResidual ld = verify_lambda_duality(s, *s1);
            lam.add(ld.duality / u1);
            scal.add(ld.scaling / std::max(1.0, resolvent(pi, *s1, emb).max_abs()));
            const MatricialLawResiduals ml = verify_matricial_laws(s, *s1, *s2, random_invertible(m, rng));
            dsum.add(ml.direct_sum / u1);
            simil.add(ml.similarity / u1);
            if (i == 0) {
                const InjectivityReport ir = injectivity_rank(s, 1, rng);
                ++inj_total;
                if (ir.full_rank) ++inj_full;
            }
        }
        // Sampled points of Delta_{p,q} lie in the resolvent set of every sampled unitary.
        if (alg.kind == AlgebraKind::FullMatrix && alg.k == 1) {
            Rng rng = Rng::derive(o.seed, {5, ci, 1000});
            for (std::size_t i = 0; i < per; ++i) {
                const std::size_t p = 1, q = 1;
                const GrassPoint dp = delta_point(MatOverB::random(alg, p + q, rng, 0.9), p, q);
                const ComplexMatrix u = haar_unitary(d, rng);
                incl.add(0.0);
                if (!in_set(dp, DiskSet::Delta, p, q) || !in_resolvent_set(GrassPoint::graph_of(u), dp, emb))
                    ++incl_miss;
            }
        }
    }
    rep.add_upper("comultiplication", "transform-comultiplication", comult.count, comult.value, o.tol.matricial);
    rep.add_upper("trace-symmetry", "trace-symmetry", sym.count, sym.value, o.tol.matricial);
    rep.add_upper("coderivation-duality", "coderivation-duality", lam.count, lam.value, o.tol.lambda_duality);
    rep.add_upper("scaling-covariance", "coderivation-duality", scal.count, scal.value, o.tol.matricial);
    rep.add_upper("transform-direct-sum", "transform-matricial", dsum.count, dsum.value, o.tol.matricial);
    rep.add_upper("transform-similarity", "transform-matricial", simil.count, simil.value, o.tol.matricial);
    rep.add_upper("delta-inclusion-misses", "disk-inclusion", incl.count, static_cast<double>(incl_miss), 0.0);
    // Injectivity is a sampling proxy; it is reported but does not gate the suite.
    IdentityCheck& inj = rep.add_lower("injectivity-full-rank", "transform-injective", inj_total,
                                       static_cast<double>(inj_full), 0.0);
    inj.detail = {{"full_rank_setups", inj_full}, {"setups", inj_total}, {"informational", true}};
    return rep;
}

// ---------------------------------------------------------------------------

std::vector<std::string> verify_suite_names() {
    return {"bialgebra", "resolvent", "involution", "positivity", "grassmann-identities", "sphere-duality"};
}

Report run_verify(const std::string& suite, const SuiteOptions& o) {
    if (suite == "bialgebra") return run_bialgebra(o);
    if (suite == "resolvent") return run_resolvent(o);
    if (suite == "involution") return run_involution(o);
    if (suite == "positivity") return run_positivity(o);
    if (suite == "grassmann-identities") return run_grassmann_identities(o);
    if (suite == "sphere-duality") {
        SphereOptions so;
        so.tol = o.tol.sphere;
        return run_sphere(so);
    }
    throw std::invalid_argument("unknown suite '" + suite + "'");
}

// ---------------------------------------------------------------------------

Report run_sphere(const SphereOptions& o) {
    Report rep("sphere-duality", json{{"points", o.points}, {"coarse_points", o.coarse_points}, {"tol", o.tol}});
    Worst comult, mult, coder, decay;
    json per_case = json::array();
    for (const SphereCase& c : sphere_test_family()) {
        const SphereResiduals fine = verify_sphere_relations(c, o.points);
        const SphereResiduals coarse = verify_sphere_relations(c, o.coarse_points);
        comult.add(fine.comultiplication);
        mult.add(fine.multiplication);
        coder.add(fine.coderivation);
        // Geometric decay: the fine residual sits at roundoff or far below the coarse one.
        const bool decays = fine.max() <= 1e-13 || fine.max() <= 1e-3 * coarse.max();
        decay.add(decays ? 0.0 : 1.0);
        per_case.push_back({{"case", c.name},
                            {"coarse", coarse.max()},
                            {"fine", fine.max()},
                            {"comultiplication", fine.comultiplication},
                            {"multiplication", fine.multiplication},
                            {"coderivation", fine.coderivation}});
    }
    rep.add_upper("comultiplication", "sphere-comultiplication", comult.count, comult.value, o.tol);
    rep.add_upper("multiplication", "sphere-multiplication", mult.count, mult.value, o.tol);
    rep.add_upper("coderivation", "sphere-coderivation", coder.count, coder.value, o.tol);
    rep.add_upper("quadrature-decay-failures", "sphere-quadrature", decay.count, decay.value, 0.0).detail = per_case;
    return rep;
}

// ---------------------------------------------------------------------------

namespace {

double family_distance(const CoefficientFamily& a, const CoefficientFamily& b) {
    double r = 0.0;
    const std::size_t nc = std::max(a.components.size(), b.components.size());
    for (std::size_t c = 0; c < nc; ++c) {
        const NCPoly pa = c < a.components.size() ? a.components[c] : NCPoly(a.alg);
        const NCPoly pb = c < b.components.size() ? b.components[c] : NCPoly(b.alg);
        const NCPoly diff = pa - pb;
        for (const auto& [w, v] : diff.terms()) r = std::max(r, std::abs(v) / std::max(1.0, std::abs(pb.coefficient(w))));
    }
    return r;
}

NCPoly truncate_poly(const NCPoly& p, std::size_t max_degree) {
    NCPoly out(p.algebra());
    for (const auto& [w, c] : p.terms())
        if (w.size() <= max_degree) out.add_term(w, c);
    return out;
}

}  // namespace

Report run_series(const SeriesOptions& o) {
    json cfg = o.base.to_json();
    cfg["extraction_degree"] = o.extraction_degree;
    cfg["composition_pairs"] = o.composition_pairs;
    cfg["composition_degree"] = o.composition_degree;
    cfg["truncation_max"] = o.truncation_max;
    if (o.poly) cfg["poly"] = o.poly->to_json();
    Report rep("series", cfg);

    // Extraction roundtrip.
    Worst extraction;
    if (o.poly) {
        const std::size_t D = o.poly->degree();
        extraction.add(family_distance(extract_coefficients(MatricialFn::from_poly(*o.poly), D),
                                       CoefficientFamily::from_poly(*o.poly, D)));
    } else {
        const auto algs = algebras_or(o.base, {BaseAlgebra::full(2), BaseAlgebra::diagonal(2), BaseAlgebra::diagonal(3)});
        const std::size_t count = or_default(o.base.instances, 5);
        for (std::size_t ai = 0; ai < algs.size(); ++ai)
            for (std::size_t i = 0; i < count; ++i) {
                Rng rng = Rng::derive(o.base.seed, {6, ai, i});
                const NCPoly p = NCPoly::random(algs[ai], o.extraction_degree, 8, rng);
                extraction.add(family_distance(extract_coefficients(MatricialFn::from_poly(p), p.degree()),
                                               CoefficientFamily::from_poly(p, p.degree())));
            }
    }
    rep.add_upper("extraction-roundtrip", "coefficient-extraction", extraction.count, extraction.value,
                  o.base.tol.extraction);

    // Composition against extraction of the composed evaluator.
    Worst comp;
    if (o.composition_pairs) {
        const auto algs = algebras_or(o.base, {BaseAlgebra::diagonal(2), BaseAlgebra::full(2)});
        const std::size_t D = o.composition_degree;
        for (std::size_t i = 0; i < o.composition_pairs; ++i) {
            const BaseAlgebra& alg = algs[i % algs.size()];
            Rng rng = Rng::derive(o.base.seed, {7, i});
            const NCPoly f = NCPoly::random(alg, 3, 5, rng);
            std::vector<NCPoly> g;
            for (std::size_t c = 0; c < alg.dim(); ++c) {
                NCPoly gc = NCPoly::random(alg, 2, 3, rng);
                gc = gc - NCPoly::constant(alg, gc.coefficient({}));
                g.push_back(gc);
            }
            const MatricialMap gm = MatricialMap::from_polys(g);
            MatricialFn composed{alg, [f, gm](const MatOverB& b) { return f.evaluate(gm(b)); },
                                 std::numeric_limits<double>::infinity(), true};
            const CoefficientFamily truth = extract_coefficients(composed, D);
            const CoefficientFamily fam =
                compose_families(CoefficientFamily::from_poly(f, D), extract_coefficients(gm, D));
            comp.add(family_distance(fam, truth));
        }
    }
    if (o.composition_pairs)
        rep.add_upper("composition", "coefficient-composition", comp.count, comp.value, o.base.tol.composition);

    // Truncation bound for f = (1 - (z1 + z2) / 2)^-1 over C^2.
    if (o.truncation_max) {
        const BaseAlgebra alg = BaseAlgebra::diagonal(2);
        const MatricialFn f{alg,
                            [](const MatOverB& b) {
                                const std::size_t n = b.level();
                                return inverse(ComplexMatrix::identity(n) -
                                               (b.component(0) + b.component(1)) * cd(0.5));
                            },
                            1.0, false};
        const double r_outer = 0.9, r = 0.5;
        Rng rng = Rng::derive(o.base.seed, {8});
        double C = spectral_norm(f(MatOverB::identity(alg, 1) * cd(r_outer)));
        std::vector<MatOverB> inner;
        inner.push_back(MatOverB::identity(alg, 1) * cd(r));
        for (std::size_t s = 0; s < 30; ++s) {
            C = std::max(C, spectral_norm(f(MatOverB::random(alg, 1 + s % 3, rng, r_outer))));
            inner.push_back(MatOverB::random(alg, 1 + s % 3, rng, r));
        }
        const CoefficientFamily fam = extract_coefficients(f, o.truncation_max);
        double worst_ratio = 0.0;
        json rows = json::array();
        for (std::size_t N = 1; N <= o.truncation_max; ++N) {
            const NCPoly zn = truncate_poly(fam.components[0], N - 1);
            double rem = 0.0;
            for (const auto& b : inner) rem = std::max(rem, spectral_norm(f(b) - zn.evaluate(b)));
            const double q = r / r_outer;
            const double bound = C * std::pow(q, static_cast<double>(N)) / (1.0 - q) * o.base.tol.truncation_slack;
            worst_ratio = std::max(worst_ratio, rem / bound);
            rows.push_back({{"N", N}, {"remainder", rem}, {"bound", bound}});
        }
        rep.add_upper("truncation-bound-ratio", "truncation-bound", o.truncation_max, worst_ratio, 1.0).detail = {
            {"measured_C", C}, {"R", r}, {"R_outer", r_outer}, {"rows", rows}};
    }
    return rep;
}

// ---------------------------------------------------------------------------

Report run_pathological(const PathologicalOptions& o, json* table) {
    Report rep("pathological",
               json{{"algebra", o.algebra.name()}, {"depth", o.depth}, {"seed", o.seed}, {"vanish_points", o.vanish_points}});
    const PathologicalResult res = build_pathological(o.algebra, o.depth, o.seed);
    Worst vanish;
    json rows = json::array();
    for (const auto& st : res.stages) {
        for (std::size_t k = 1; k * k < st.p; ++k) {
            Rng rng = Rng::derive(o.seed, {9, st.index, k});
            for (std::size_t s = 0; s < o.vanish_points; ++s)
                vanish.add(evaluate_stage(st, MatOverB::random(o.algebra, k, rng, 0.9)).max_abs());
        }
        // g_j is homogeneous of degree p d, so its size at the witness is measured against ||beta||^(p d).
        const double scale = std::pow(st.witness.norm(), static_cast<double>(st.p * st.monomial_degree));
        const double gj = spectral_norm(evaluate_stage(st, st.witness)) / scale;
        const double j = static_cast<double>(st.index);
        rep.add_lower("witness-nonvanishing-g" + std::to_string(st.index), "unbounded-construction", 1, gj, 1e-6);
        IdentityCheck& wn =
            rep.add_lower("witness-norm-" + std::to_string(st.index), "unbounded-construction", 1, st.witness_norm, j);
        wn.relation = ">";
        wn.pass = st.witness_norm > j;
        IdentityCheck& wr = rep.add_upper("witness-radius-" + std::to_string(st.index), "unbounded-construction", 1,
                                          st.witness.norm(), st.radius);
        wr.relation = "<";
        wr.pass = st.witness.norm() < st.radius;
        rows.push_back({{"j", st.index},
                        {"p", st.p},
                        {"vanish_level", st.vanish_level},
                        {"witness_level", st.witness_level},
                        {"monomial_degree", st.monomial_degree},
                        {"lambda", st.lambda},
                        {"radius", st.radius},
                        {"witness_point_norm", st.witness.norm()},
                        {"witness_norm", st.witness_norm}});
    }
    rep.add_upper("vanishing-below-threshold", "unbounded-construction", vanish.count, vanish.value, o.tol);
    if (table) *table = rows;
    return rep;
}

// ---------------------------------------------------------------------------

namespace {

json ladder_json(const McConfig& cfg) {
    return json{{"algebra", cfg.alg.name()}, {"ladder", cfg.ladder}, {"samples", cfg.samples}, {"seed", cfg.seed}};
}

}  // namespace

Report run_mc_orthogonality(const McConfig& cfg, std::size_t max_len, std::ostream* csv) {
    json c = ladder_json(cfg);
    c["max_len"] = max_len;
    Report rep("mc-orthogonality", c);
    const auto table = haar_moment_table(cfg, max_len);
    if (csv) write_moment_csv(*csv, table);
    double worst = 0.0;
    std::size_t failures = 0;
    for (const auto& p : table) {
        worst = std::max(worst, p.deviation / p.tolerance);
        if (!p.pass) ++failures;
    }
    rep.add_upper("deviation-over-tolerance", "haar-orthogonality", table.size(), worst, 1.0).detail = {
        {"failing_pairs", failures}, {"bias_allowance", kMcBiasAllowance}};
    return rep;
}

NCPoly default_coefficient_poly(const BaseAlgebra& alg) {
    if (alg.kind == AlgebraKind::FullMatrix && alg.k == 2) return NCPoly::monomial(alg, {0, 3});
    if (alg.dim() >= 2) return NCPoly::monomial(alg, {0, 1});
    return NCPoly::monomial(alg, {0});
}

Report run_mc_coefficients(const McConfig& cfg, const std::optional<NCPoly>& f, std::size_t max_degree,
                           std::ostream* csv) {
    const NCPoly p = f ? *f : default_coefficient_poly(cfg.alg);
    if (!(p.algebra() == cfg.alg)) throw std::invalid_argument("polynomial algebra does not match --algebra");
    json c = ladder_json(cfg);
    c["max_degree"] = max_degree;
    c["poly"] = p.to_json();
    Report rep("mc-coefficients", c);
    const std::size_t rotations = max_degree + p.degree() + 1;
    const auto rows = recover_coefficients_mc(MatricialFn::from_poly(p), cfg, max_degree, rotations);
    if (csv) write_coefficient_csv(*csv, rows);
    double worst_z = 0.0, a0 = 0.0;
    std::size_t final_count = 0;
    for (const auto& e : rows) {
        if (e.word.empty()) a0 = std::max(a0, std::abs(e.estimate - e.exact));
        if (e.N != cfg.ladder.back()) continue;
        ++final_count;
        if (!e.word.empty()) worst_z = std::max(worst_z, e.z_score);
    }
    rep.add_upper("max-z-score", "coefficient-recovery", final_count, worst_z, 3.0);
    rep.add_upper("constant-term-exact", "coefficient-recovery", cfg.ladder.size(), a0, 1e-12);
    return rep;
}

// ---------------------------------------------------------------------------

Report run_rtransform(const RTransformOptions& o, std::ostream* csv) {
    Report rep("rtransform", json{{"max_degree", o.max_degree},
                                  {"point_mass", o.point_mass},
                                  {"semicircle_radius", o.semicircle_radius},
                                  {"seed", o.seed},
                                  {"tolerances", o.tol.to_json()}});
    const std::size_t D = o.max_degree;

    // Semicircle: truncated Catalan series, R(b) against b.
    {
        // Tail beyond this depth is below (2 |b|)^12 at |b| <= 0.05.
        const std::size_t depth = 11;
        CauchySource src = CauchySource::from_moments(scalar_moment_family(semicircle_moments(depth + 1), depth), 2.0);
        src.calibrate();
        double worst = 0.0;
        std::size_t count = 0;
        for (int i = 0; i <= 16; ++i) {
            const cd b = std::polar(o.semicircle_radius * (i % 4 + 1) / 4.0, 2.0 * std::numbers::pi * i / 17.0);
            const ComplexMatrix bm = ComplexMatrix::scalar(1, b);
            worst = std::max(worst, std::abs(r_transform(src, bm)(0, 0) - b));
            ++count;
        }
        rep.add_upper("semicircle-R-equals-b", "r-transform", count, worst, o.tol.semicircle);
        const auto kappa = free_cumulants(semicircle_moments(2 * D + 2));
        const CoefficientFamily series = r_transform_series(scalar_moment_family(semicircle_moments(D + 2), D + 1), D);
        double cw = 0.0;
        for (std::size_t n = 0; n <= D; ++n) cw = std::max(cw, std::abs(series.coefficient(Word(n, 0)) - kappa[n + 1]));
        rep.add_upper("semicircle-series-cumulants", "r-transform", D + 1, cw, o.tol.additivity);
    }

    // Point mass a = lambda 1 in M_4 over B = C and B = M_2.
    {
        double worst = 0.0;
        std::size_t count = 0;
        for (const BaseAlgebra& alg : {BaseAlgebra::scalars(), BaseAlgebra::full(2)}) {
            Rng rng = Rng::derive(o.seed, {10, alg.k});
            const ExpectationSetup s =
                ExpectationSetup::make(alg, 4, ComplexMatrix::identity(4) * cd(o.point_mass), rng);
            CauchySource src = CauchySource::from_setup(s);
            src.calibrate();
            for (int i = 0; i < 8; ++i) {
                const ComplexMatrix b = alg.random_element(rng);
                const ComplexMatrix bb = b * cd(0.5 * src.radius / std::max(1e-300, spectral_norm(b)));
                worst = std::max(worst, max_abs_diff(r_transform(src, bb), ComplexMatrix::identity(alg.k) * cd(o.point_mass)));
                ++count;
            }
        }
        rep.add_upper("point-mass-constant", "r-transform", count, worst, o.tol.point_mass);
    }

    // Additivity for free pairs, with moments of the sum from the freeness oracle.
    {
        double worst = 0.0;
        std::size_t count = 0;
        json table = json::array();
        for (std::size_t trial = 0; trial < 4; ++trial) {
            Rng rng = Rng::derive(o.seed, {11, trial});
            std::vector<cd> m1(D + 2), m2(D + 2);
            const ComplexMatrix h1 = random_hermitian(3, rng), h2 = random_hermitian(4, rng);
            ComplexMatrix p1 = ComplexMatrix::identity(3), p2 = ComplexMatrix::identity(4);
            for (std::size_t n = 0; n < D + 2; ++n) {
                m1[n] = p1.trace() / 3.0;
                m2[n] = p2.trace() / 4.0;
                p1 = p1 * h1;
                p2 = p2 * h2;
            }
            const auto ms = free_sum_moments(m1, m2, D + 1);
            const auto r1 = r_transform_series(scalar_moment_family(m1, D), D);
            const auto r2 = r_transform_series(scalar_moment_family(m2, D), D);
            const auto rs = r_transform_series(scalar_moment_family(ms, D), D);
            for (std::size_t n = 0; n <= D; ++n) {
                const Word w(n, 0);
                const cd lhs = rs.coefficient(w), rhs = r1.coefficient(w) + r2.coefficient(w);
                worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
                ++count;
                table.push_back({{"trial", trial}, {"degree", n}, {"sum", lhs.real()}, {"parts", rhs.real()}});
            }
        }
        if (csv) {
            *csv << "trial,degree,r_sum,r_parts\n";
            csv->precision(15);
            for (const auto& row : table)
                *csv << row["trial"].get<std::size_t>() << ',' << row["degree"].get<std::size_t>() << ','
                     << row["sum"].get<double>() << ',' << row["parts"].get<double>() << '\n';
        }
        rep.add_upper("series-additivity", "r-additivity", count, worst, o.tol.additivity);
    }
    return rep;
}

}  // namespace freegrass
