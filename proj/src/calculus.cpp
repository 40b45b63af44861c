#include "freegrass/calculus.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "freegrass/linalg.hpp"
#include "freegrass/parallel.hpp"

namespace freegrass {

ComplexMatrix MatricialFn::operator()(const MatOverB& beta) const {
    if (std::isfinite(radius) && !(beta.norm() < radius))
        throw DomainViolation("point of norm " + std::to_string(beta.norm()) + " outside radius " + std::to_string(radius));
    return eval(beta);
}

MatricialFn MatricialFn::from_poly(const NCPoly& p) {
    return {p.algebra(), [p](const MatOverB& b) { return p.evaluate(b); }, std::numeric_limits<double>::infinity(), true};
}

MatOverB MatricialMap::operator()(const MatOverB& beta) const {
    if (std::isfinite(radius) && !(beta.norm() < radius))
        throw DomainViolation("point of norm " + std::to_string(beta.norm()) + " outside radius " + std::to_string(radius));
    return eval(beta);
}

MatricialMap MatricialMap::from_polys(const std::vector<NCPoly>& polys) {
    if (polys.empty()) throw std::invalid_argument("from_polys: no components");
    const BaseAlgebra alg = polys.front().algebra();
    if (polys.size() != alg.dim()) throw DimensionMismatch("from_polys: need dim B components");
    return {alg, [polys, alg](const MatOverB& b) {
                std::vector<ComplexMatrix> comps;
                for (const auto& p : polys) comps.push_back(p.evaluate(b));
                return MatOverB::from_components(alg, comps);
            }};
}

namespace {

ComplexMatrix off_block(const MatricialFn& f, const MatOverB& b1, const MatOverB& b2, const ComplexMatrix& t) {
    const std::size_t m = b1.level(), n = b2.level();
    const ComplexMatrix v = f(MatOverB::upper_block(b1, b2, t));
    return v.block(0, m, m, n);
}

bool close(const ComplexMatrix& a, const ComplexMatrix& b, double rel) {
    return max_abs_diff(a, b) <= rel * std::max(1.0, std::max(a.max_abs(), b.max_abs()));
}

// Probe [[b, e1 s, 0], [0, b1, e2 t], [0, 0, b2]], corner block / (e1 e2).
ComplexMatrix corner(const MatricialFn& f, const MatOverB& b, const MatOverB& b1, const MatOverB& b2,
                     const ComplexMatrix& s, const ComplexMatrix& t, double e1, double e2) {
    const std::size_t m = b.level(), n = b1.level(), p = b2.level();
    ComplexMatrix top(m, n + p);
    top.set_block(0, 0, s * e1);
    const MatOverB lower = MatOverB::upper_block(b1, b2, t * e2);
    const ComplexMatrix v = f(MatOverB::upper_block(b, lower, top));
    return v.block(0, m + n, m, p) * (1.0 / (e1 * e2));
}

}  // namespace

ComplexMatrix diff_quotient(const MatricialFn& f, const MatOverB& b1, const MatOverB& b2) {
    if (!(b1.algebra() == f.alg) || !(b2.algebra() == f.alg)) throw AlgebraMismatch("diff_quotient: algebra mismatch");
    const std::size_t m = b1.level(), n = b2.level();
    ComplexMatrix out(m * n, m * n);
    std::vector<ComplexMatrix> blocks(m * n);
    std::vector<int> nonlinear(m * n, 0);
    parallel_for(m * n, [&](std::size_t idx) {
        const std::size_t j = idx / n, k = idx % n;
        const ComplexMatrix e = ComplexMatrix::unit(m, n, j, k);
        if (f.polynomial) {
            const ComplexMatrix k1 = off_block(f, b1, b2, e);
            const ComplexMatrix k2 = off_block(f, b1, b2, e * 2.0) * 0.5;
            if (!close(k1, k2, 1e-8)) nonlinear[idx] = 1;
            blocks[idx] = k1;
        } else {
            const double eps = kProbeScale;
            const ComplexMatrix kp = off_block(f, b1, b2, e * eps);
            const ComplexMatrix km = off_block(f, b1, b2, e * (-eps));
            blocks[idx] = (kp - km) * (1.0 / (2.0 * eps));
        }
    });
    for (std::size_t idx = 0; idx < m * n; ++idx) {
        if (nonlinear[idx]) throw NonlinearityDetected("off-diagonal block is not linear in the probe");
        const std::size_t j = idx / n, k = idx % n;
        const ComplexMatrix& kb = blocks[idx];
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t l = 0; l < n; ++l) out(i * n + k, j * n + l) = kb(i, l);
    }
    return out;
}

ComplexMatrix diff_quotient_nested(const MatricialFn& f, const MatOverB& b, const MatOverB& b1, const MatOverB& b2) {
    const std::size_t m = b.level(), n = b1.level(), p = b2.level();
    const double e = f.polynomial ? 1.0 : 10.0 * kProbeScale;
    ComplexMatrix first(m * n * p, m * n * p), second(m * n * p, m * n * p);
    const std::size_t count = m * n * n * p;
    std::vector<ComplexMatrix> ca(count), cb(count);
    parallel_for(count, [&](std::size_t idx) {
        const std::size_t bb = idx / (n * n * p);
        const std::size_t c = (idx / (n * p)) % n;
        const std::size_t d = (idx / p) % n;
        const std::size_t ee = idx % p;
        const ComplexMatrix s = ComplexMatrix::unit(m, n, bb, c);
        const ComplexMatrix t = ComplexMatrix::unit(n, p, d, ee);
        // (id (x) d~) d~: inner probe on the right factor at the finer scale.
        ca[idx] = corner(f, b, b1, b2, s, t, e, 2.0 * e);
        // (d~ (x) id) d~: inner probe on the left factor at the finer scale.
        cb[idx] = corner(f, b, b1, b2, s, t, 2.0 * e, e);
    });
    for (std::size_t idx = 0; idx < count; ++idx) {
        const std::size_t bb = idx / (n * n * p);
        const std::size_t c = (idx / (n * p)) % n;
        const std::size_t d = (idx / p) % n;
        const std::size_t ee = idx % p;
        for (std::size_t a = 0; a < m; ++a)
            for (std::size_t ff = 0; ff < p; ++ff) {
                const std::size_t row = (a * n + c) * p + ee;
                const std::size_t col = (bb * n + d) * p + ff;
                first(row, col) = ca[idx](a, ff);
                second(row, col) = cb[idx](a, ff);
            }
    }
    if (!close(first, second, 1e-8))
        throw CoassociativityViolation("iterated difference quotients disagree by " +
                                       std::to_string(max_abs_diff(first, second)));
    return first;
}

ComplexMatrix lambda_numeric(const MatricialFn& f, const MatOverB& beta) {
    auto g = [&](double t) { return f(beta * cd(std::exp(t))) * cd(std::exp(t)); };
    auto central = [&](double h) { return (g(h) - g(-h)) * (1.0 / (2.0 * h)); };
    const double h = kFiniteDifferenceStep;
    return (central(h / 2.0) * 4.0 - central(h)) * (1.0 / 3.0);
}

// ---------------------------------------------------------------------------

CoefficientFamily CoefficientFamily::from_poly(const NCPoly& p, std::size_t max_degree) {
    NCPoly q(p.algebra());
    for (const auto& [w, c] : p.terms())
        if (w.size() <= max_degree) q.add_term(w, c);
    return {p.algebra(), max_degree, false, {q}};
}

CoefficientFamily CoefficientFamily::identity(const BaseAlgebra& alg, std::size_t max_degree) {
    CoefficientFamily f{alg, max_degree, true, {}};
    for (std::size_t i = 0; i < alg.dim(); ++i) f.components.push_back(NCPoly::generator(alg, static_cast<int>(i)));
    return f;
}

nlohmann::json CoefficientFamily::to_json() const {
    nlohmann::json comps = nlohmann::json::array();
    for (const auto& c : components) comps.push_back(c.to_json()["terms"]);
    return {{"algebra", alg.name()}, {"max_degree", max_degree}, {"b_valued", b_valued}, {"components", comps}};
}

namespace {

Word word_from_index(std::size_t idx, std::size_t m, std::size_t base) {
    Word w(m);
    for (std::size_t p = m; p-- > 0;) {
        w[p] = static_cast<int>(idx % base);
        idx /= base;
    }
    return w;
}

std::size_t ipow(std::size_t b, std::size_t e) {
    std::size_t r = 1;
    for (std::size_t i = 0; i < e; ++i) r *= b;
    return r;
}

double max_basis_norm(const BaseAlgebra& alg) {
    double s = 0.0;
    for (std::size_t i = 0; i < alg.dim(); ++i) s = std::max(s, spectral_norm(alg.basis(i)));
    return s;
}

// Reads the (1, m+1) entry of the values at z * chain for z on a circle of
// radius r and divides out z^m by discrete Fourier inversion. `entry`
// returns the entry for each output component.
template <class Entry>
std::vector<cd> extract_one(const BaseAlgebra& alg, const Word& w, double r, std::size_t n_out, Entry entry) {
    const std::size_t m = w.size();
    const MatOverB chain = MatOverB::nilpotent_chain(alg, w);
    std::vector<cd> acc(n_out, 0.0);
    const std::size_t q = m + 1;
    for (std::size_t s = 0; s < q; ++s) {
        const double ang = 2.0 * std::numbers::pi * static_cast<double>(s) / static_cast<double>(q);
        const cd z = std::polar(r, ang);
        const std::vector<cd> v = entry(chain * z);
        const cd back = std::polar(1.0, -ang * static_cast<double>(m));
        for (std::size_t c = 0; c < n_out; ++c) acc[c] += v[c] * back;
    }
    const double scale = 1.0 / (static_cast<double>(q) * std::pow(r, static_cast<double>(m)));
    for (auto& a : acc) a *= scale;
    return acc;
}

template <class Entry>
CoefficientFamily extract_generic(const BaseAlgebra& alg, double radius, std::size_t max_degree, std::size_t n_out,
                                  bool b_valued, Entry entry) {
    CoefficientFamily fam{alg, max_degree, b_valued, std::vector<NCPoly>(n_out, NCPoly(alg))};
    const double bnorm = max_basis_norm(alg);
    {
        const std::vector<cd> v0 = entry(MatOverB::zero(alg, 1));
        for (std::size_t c = 0; c < n_out; ++c) fam.components[c].add_term({}, v0[c]);
    }
    for (std::size_t m = 1; m <= max_degree; ++m) {
        const double r = std::isfinite(radius) ? std::min(1.0, 0.5 * radius / (static_cast<double>(m) * bnorm)) : 1.0;
        const std::size_t count = ipow(alg.dim(), m);
        std::vector<std::vector<cd>> vals(count);
        parallel_for(count, [&](std::size_t idx) {
            vals[idx] = extract_one(alg, word_from_index(idx, m, alg.dim()), r, n_out, entry);
        });
        for (std::size_t idx = 0; idx < count; ++idx) {
            const Word w = word_from_index(idx, m, alg.dim());
            for (std::size_t c = 0; c < n_out; ++c) fam.components[c].add_term(w, vals[idx][c]);
        }
    }
    return fam;
}

}  // namespace

CoefficientFamily extract_coefficients(const MatricialFn& f, std::size_t max_degree) {
    return extract_generic(f.alg, f.radius, max_degree, 1, false, [&](const MatOverB& b) {
        const ComplexMatrix v = f(b);
        return std::vector<cd>{v(0, b.level() - 1)};
    });
}

CoefficientFamily extract_coefficients(const MatricialMap& g, std::size_t max_degree) {
    const std::size_t dim = g.alg.dim();
    return extract_generic(g.alg, g.radius, max_degree, dim, true, [&](const MatOverB& b) {
        const MatOverB v = g(b);
        std::vector<cd> out(dim);
        for (std::size_t c = 0; c < dim; ++c) out[c] = v.component(c)(0, b.level() - 1);
        return out;
    });
}

NCPoly multiply_truncated(const NCPoly& p, const NCPoly& q, std::size_t max_degree) {
    if (!(p.algebra() == q.algebra())) throw AlgebraMismatch("multiply_truncated: algebra mismatch");
    NCPoly out(p.algebra());
    for (const auto& [u, a] : p.terms())
        for (const auto& [v, b] : q.terms()) {
            if (u.size() + v.size() > max_degree) continue;
            Word w = u;
            w.insert(w.end(), v.begin(), v.end());
            out.add_term(w, a * b);
        }
    return out;
}

CoefficientFamily compose_families(const CoefficientFamily& beta, const CoefficientFamily& alpha) {
    if (!(beta.alg == alpha.alg)) throw AlgebraMismatch("compose_families: algebra mismatch");
    if (!alpha.b_valued || alpha.components.size() != alpha.alg.dim())
        throw std::invalid_argument("compose_families: inner family must be B-valued");
    const std::size_t cap = std::min(beta.max_degree, alpha.max_degree);
    std::vector<NCPoly> inner;
    for (const auto& c : alpha.components) {
        if (std::abs(c.coefficient({})) > 1e-12)
            throw std::invalid_argument("compose_families: inner family has a nonzero constant term");
        NCPoly q(c.algebra());
        for (const auto& [w, v] : c.terms())
            if (!w.empty() && w.size() <= cap) q.add_term(w, v);
        inner.push_back(q);
    }
    CoefficientFamily out{beta.alg, cap, beta.b_valued, {}};
    for (const auto& comp : beta.components) {
        NCPoly acc(beta.alg);
        for (const auto& [w, c] : comp.terms()) {
            if (w.size() > cap) continue;
            NCPoly term = NCPoly::constant(beta.alg, c);
            for (int letter : w) {
                term = multiply_truncated(term, inner[static_cast<std::size_t>(letter)], cap);
                if (term.is_zero()) break;
            }
            acc = acc + term;
        }
        out.components.push_back(acc);
    }
    return out;
}

}  // namespace freegrass
