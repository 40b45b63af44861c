#include <algorithm>
#include <cmath>
#include <map>
#include <optional>

#include "freegrass/freeprob.hpp"
#include "freegrass/linalg.hpp"

namespace freegrass {

namespace {

constexpr double kNewtonTol = 1e-12;
constexpr int kNewtonIterations = 100;

ComplexMatrix to_b(const BaseAlgebra& alg, const std::vector<cd>& c) { return alg.from_coordinates(c); }

std::optional<ComplexMatrix> newton(const CauchySource& src, const ComplexMatrix& b) {
    const BaseAlgebra& alg = src.alg;
    const std::size_t dim = alg.dim();
    ComplexMatrix x = b;
    try {
        for (int it = 0; it < kNewtonIterations; ++it) {
            const ComplexMatrix r = src.G(x) - b;
            if (r.max_abs() <= kNewtonTol) return x;
            const double h = 1e-6 * std::max(1.0, x.max_abs());
            ComplexMatrix jac(dim, dim);
            for (std::size_t i = 0; i < dim; ++i) {
                const ComplexMatrix e = alg.basis(i) * cd(h);
                const std::vector<cd> col = alg.coordinates((src.G(x + e) - src.G(x - e)) * cd(0.5 / h));
                for (std::size_t j = 0; j < dim; ++j) jac(j, i) = col[j];
            }
            const std::vector<cd> rc = alg.coordinates(r);
            ComplexMatrix rhs(dim, 1);
            for (std::size_t j = 0; j < dim; ++j) rhs(j, 0) = rc[j];
            const ComplexMatrix step = solve(jac, rhs);
            std::vector<cd> sc(dim);
            for (std::size_t j = 0; j < dim; ++j) sc[j] = step(j, 0);
            x -= to_b(alg, sc);
            if (!x.all_finite()) return std::nullopt;
        }
        if ((src.G(x) - b).max_abs() <= kNewtonTol) return x;
    } catch (const OutOfDomain&) {
    } catch (const SingularMatrix&) {
    }
    return std::nullopt;
}

CoefficientFamily add(const CoefficientFamily& f, const CoefficientFamily& g, cd s) {
    CoefficientFamily out = f;
    out.max_degree = std::min(f.max_degree, g.max_degree);
    for (std::size_t c = 0; c < out.components.size(); ++c)
        out.components[c] = out.components[c] + g.components[c] * s;
    return out;
}

CoefficientFamily truncate(const CoefficientFamily& f, std::size_t max_degree) {
    CoefficientFamily out{f.alg, max_degree, f.b_valued, {}};
    for (const auto& c : f.components) {
        NCPoly p(f.alg);
        for (const auto& [w, v] : c.terms())
            if (w.size() <= max_degree) p.add_term(w, v);
        out.components.push_back(p);
    }
    return out;
}

}  // namespace

ExpectationSetup ExpectationSetup::make(const BaseAlgebra& alg, std::size_t d, const ComplexMatrix& a, Rng& rng) {
    ExpectationSetup s{Embedding::make(alg, d), a, 0.0};
    if (a.rows() != d || a.cols() != d) throw DimensionMismatch("ExpectationSetup: a must be d x d");
    s.C = spectral_norm(a);
    auto close = [](const ComplexMatrix& x, const ComplexMatrix& y) {
        return max_abs_diff(x, y) <= 1e-12 * std::max(1.0, std::max(x.max_abs(), y.max_abs()));
    };
    if (!close(s.expectation(ComplexMatrix::identity(d)), ComplexMatrix::identity(alg.k)))
        throw std::invalid_argument("conditional expectation is not unital");
    for (int trial = 0; trial < 4; ++trial) {
        const ComplexMatrix x = ginibre(d, d, rng);
        const ComplexMatrix b1 = alg.random_element(rng), b2 = alg.random_element(rng);
        const ComplexMatrix px = s.expectation(x);
        if (!close(s.expectation(s.emb.element(px)), px))
            throw std::invalid_argument("conditional expectation is not idempotent");
        if (!close(s.expectation(s.emb.element(b1) * x * s.emb.element(b2)), b1 * px * b2))
            throw std::invalid_argument("conditional expectation is not B-bimodular");
    }
    return s;
}

ComplexMatrix cauchy_G(const ExpectationSetup& s, const ComplexMatrix& b) {
    if (s.C * spectral_norm(b) >= 1.0) throw OutOfDomain("G_a needs ||b|| < ||a||^-1");
    const ComplexMatrix eb = s.emb.element(b);
    const ComplexMatrix id = ComplexMatrix::identity(s.emb.d);
    return s.expectation(solve(id - eb * s.a, eb));
}

CauchySource CauchySource::from_setup(const ExpectationSetup& s) {
    CauchySource src;
    src.alg = s.algebra();
    src.C = s.C;
    src.G = [s](const ComplexMatrix& b) { return cauchy_G(s, b); };
    src.phi_h = [s](const ComplexMatrix& x) {
        if (s.C * spectral_norm(x) >= 1.0) throw OutOfDomain("H_a needs ||x|| < ||a||^-1");
        const ComplexMatrix id = ComplexMatrix::identity(s.emb.d);
        return s.expectation(s.a * inverse(id - s.emb.element(x) * s.a));
    };
    src.calibrate();
    return src;
}

CauchySource CauchySource::from_moments(const CoefficientFamily& moments, double C) {
    if (!moments.b_valued) throw std::invalid_argument("moment family must be B-valued");
    CauchySource src;
    src.alg = moments.alg;
    src.C = C;
    src.phi_h = [moments](const ComplexMatrix& x) {
        const MatOverB beta = MatOverB::from_dense(moments.alg, 1, x);
        std::vector<cd> c(moments.components.size());
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = moments.components[i].evaluate(beta)(0, 0);
        return moments.alg.from_coordinates(c);
    };
    src.G = [phi_h = src.phi_h](const ComplexMatrix& x) { return x + x * phi_h(x) * x; };
    src.calibrate();
    return src;
}

void CauchySource::calibrate() {
    double eps = C > 0.0 ? 1.0 / (6.0 * C) : 1.0;
    std::vector<ComplexMatrix> dirs;
    const ComplexMatrix one = ComplexMatrix::identity(alg.k);
    for (cd u : {cd(1.0), cd(-1.0), cd(0.0, 1.0), cd(0.0, -1.0)}) dirs.push_back(one * u);
    for (std::size_t i = 0; i < alg.dim(); ++i) dirs.push_back(alg.basis(i));
    for (int halving = 0; halving < 40; ++halving) {
        bool ok = true;
        for (const auto& d : dirs) {
            if (!newton(*this, d * cd(0.99 * eps / spectral_norm(d)))) {
                ok = false;
                break;
            }
        }
        if (ok) {
            radius = eps;
            return;
        }
        eps /= 2.0;
    }
    throw NoConvergence("no radius found on which G_a can be inverted");
}

ComplexMatrix invert_L(const CauchySource& src, const ComplexMatrix& b) {
    if (spectral_norm(b) >= src.radius) throw OutOfDomain("L_a is only defined near 0");
    if (b.max_abs() == 0.0) return b;
    auto x = newton(src, b);
    if (!x) throw NoConvergence("Newton iteration for L_a did not converge");
    return *x;
}

ComplexMatrix r_transform(const CauchySource& src, const ComplexMatrix& b) {
    const ComplexMatrix x = invert_L(src, b);
    const ComplexMatrix h = src.phi_h(x);
    return solve(ComplexMatrix::identity(src.alg.k) + h * x, h);
}

CoefficientFamily moment_family(const ExpectationSetup& s, std::size_t max_degree) {
    const BaseAlgebra& alg = s.algebra();
    const std::size_t dim = alg.dim();
    CoefficientFamily out{alg, max_degree, true, std::vector<NCPoly>(dim, NCPoly(alg))};
    std::vector<ComplexMatrix> emb_basis;
    for (std::size_t i = 0; i < dim; ++i) emb_basis.push_back(s.emb.element(alg.basis(i)));
    // prefix products a b_i1 a ... b_ij a
    std::vector<std::pair<Word, ComplexMatrix>> level{{Word{}, s.a}};
    for (std::size_t len = 0; len <= max_degree; ++len) {
        std::vector<std::pair<Word, ComplexMatrix>> next;
        for (const auto& [w, p] : level) {
            const std::vector<cd> c = alg.coordinates(s.expectation(p));
            for (std::size_t i = 0; i < dim; ++i)
                if (c[i] != cd(0.0)) out.components[i].add_term(w, c[i]);
            if (len == max_degree) continue;
            for (std::size_t i = 0; i < dim; ++i) {
                Word w2 = w;
                w2.push_back(static_cast<int>(i));
                next.emplace_back(std::move(w2), p * emb_basis[i] * s.a);
            }
        }
        level = std::move(next);
    }
    return out;
}

CoefficientFamily scalar_moment_family(const std::vector<cd>& moments, std::size_t max_degree) {
    const BaseAlgebra alg = BaseAlgebra::scalars();
    CoefficientFamily out{alg, max_degree, true, {NCPoly(alg)}};
    for (std::size_t j = 0; j <= max_degree && j + 1 < moments.size(); ++j)
        out.components[0].add_term(Word(j, 0), moments[j + 1]);
    return out;
}

CoefficientFamily b_product(const CoefficientFamily& f, const CoefficientFamily& g, std::size_t max_degree) {
    if (!(f.alg == g.alg)) throw AlgebraMismatch("b_product: algebra mismatch");
    const BaseAlgebra& alg = f.alg;
    const std::size_t dim = alg.dim();
    CoefficientFamily out{alg, max_degree, true, std::vector<NCPoly>(dim, NCPoly(alg))};
    for (std::size_t i = 0; i < dim; ++i) {
        if (f.components[i].is_zero()) continue;
        for (std::size_t j = 0; j < dim; ++j) {
            if (g.components[j].is_zero()) continue;
            const std::vector<cd> sc = alg.coordinates(alg.basis(i) * alg.basis(j));
            std::optional<NCPoly> prod;
            for (std::size_t c = 0; c < dim; ++c) {
                if (sc[c] == cd(0.0)) continue;
                if (!prod) prod = multiply_truncated(f.components[i], g.components[j], max_degree);
                out.components[c] = out.components[c] + *prod * sc[c];
            }
        }
    }
    return out;
}

CoefficientFamily b_constant(const BaseAlgebra& alg, const ComplexMatrix& b, std::size_t max_degree) {
    CoefficientFamily out{alg, max_degree, true, {}};
    for (const cd& c : alg.coordinates(b)) out.components.push_back(NCPoly::constant(alg, c));
    return out;
}

CoefficientFamily r_transform_series(const CoefficientFamily& moments, std::size_t max_degree) {
    if (!moments.b_valued) throw std::invalid_argument("moment family must be B-valued");
    const BaseAlgebra& alg = moments.alg;
    const std::size_t D = max_degree;
    const CoefficientFamily m = truncate(moments, D);
    const CoefficientFamily x = CoefficientFamily::identity(alg, D);
    // L + L M(L) L = x, solved one degree per pass.
    CoefficientFamily l = x;
    for (std::size_t pass = 0; pass < D; ++pass) {
        const CoefficientFamily ml = compose_families(m, l);
        l = add(x, b_product(b_product(l, ml, D), l, D), -1.0);
    }
    const CoefficientFamily ml = compose_families(m, l);
    const CoefficientFamily y = b_product(ml, l, D);
    // (1 + y)^-1 = sum (-y)^j
    CoefficientFamily inv = b_constant(alg, ComplexMatrix::identity(alg.k), D);
    CoefficientFamily power = inv;
    for (std::size_t j = 1; j <= D; ++j) {
        power = b_product(power, y, D);
        inv = add(inv, power, (j % 2) ? -1.0 : 1.0);
    }
    CoefficientFamily r = b_product(inv, ml, D);
    r.max_degree = D;
    return r;
}

// ---------------------------------------------------------------------------

namespace {

struct Letter {
    int alg;
    int power;
    bool centered;
    auto operator<=>(const Letter&) const = default;
};
using FreeWord = std::vector<Letter>;

class FreeProductState {
public:
    FreeProductState(const std::vector<cd>& m1, const std::vector<cd>& m2) : m_{m1, m2} {}

    cd operator()(const FreeWord& w) {
        if (w.empty()) return 1.0;
        auto it = memo_.find(w);
        if (it != memo_.end()) return it->second;
        const cd v = compute(w);
        memo_.emplace(w, v);
        return v;
    }

private:
    cd moment(const Letter& l) const {
        const auto& m = m_[static_cast<std::size_t>(l.alg)];
        if (static_cast<std::size_t>(l.power) >= m.size()) throw std::out_of_range("free_sum_moments: moment missing");
        return m[static_cast<std::size_t>(l.power)];
    }

    static FreeWord erase(FreeWord w, std::size_t i) {
        w.erase(w.begin() + static_cast<std::ptrdiff_t>(i));
        return w;
    }

    cd compute(const FreeWord& w) {
        for (std::size_t i = 0; i + 1 < w.size(); ++i) {
            if (w[i].alg != w[i + 1].alg) continue;
            for (std::size_t j : {i, i + 1}) {
                if (!w[j].centered) continue;
                // a^p - phi(a^p) 1
                FreeWord plain = w;
                plain[j].centered = false;
                return (*this)(plain) - moment(w[j]) * (*this)(erase(w, j));
            }
            FreeWord merged = erase(w, i + 1);
            merged[i].power += w[i + 1].power;
            return (*this)(merged);
        }
        // alternating
        for (std::size_t i = 0; i < w.size(); ++i) {
            if (w[i].centered) continue;
            FreeWord c = w;
            c[i].centered = true;
            return (*this)(c) + moment(w[i]) * (*this)(erase(w, i));
        }
        return 0.0;  // centered alternating word
    }

    std::vector<cd> m_[2];
    std::map<FreeWord, cd> memo_;
};

}  // namespace

std::vector<cd> free_sum_moments(const std::vector<cd>& m1, const std::vector<cd>& m2, std::size_t max_n) {
    if (max_n > 16) throw std::invalid_argument("free_sum_moments: degree too large for exhaustive expansion");
    FreeProductState phi(m1, m2);
    std::vector<cd> out(max_n + 1);
    for (std::size_t n = 0; n <= max_n; ++n) {
        cd s = 0.0;
        for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
            FreeWord w;
            for (std::size_t i = 0; i < n; ++i) w.push_back({static_cast<int>((mask >> i) & 1U), 1, false});
            s += phi(w);
        }
        out[n] = s;
    }
    return out;
}

std::vector<cd> free_cumulants(const std::vector<cd>& moments) {
    const std::size_t n = moments.size() - 1;
    // powers[s][j] = [z^j] M(z)^s
    std::vector<std::vector<cd>> powers(n + 1, std::vector<cd>(n + 1));
    powers[0][0] = 1.0;
    for (std::size_t s = 1; s <= n; ++s)
        for (std::size_t j = 0; j <= n; ++j)
            for (std::size_t i = 0; i <= j; ++i) powers[s][j] += powers[s - 1][j - i] * moments[i];
    std::vector<cd> kappa(n + 1);
    for (std::size_t m = 1; m <= n; ++m) {
        cd rest = 0.0;
        for (std::size_t s = 1; s < m; ++s) rest += kappa[s] * powers[s][m - s];
        kappa[m] = moments[m] - rest;
    }
    return kappa;
}

std::vector<cd> semicircle_moments(std::size_t max_n) {
    std::vector<cd> m(max_n + 1);
    double catalan = 1.0;
    for (std::size_t j = 0; 2 * j <= max_n; ++j) {
        m[2 * j] = catalan;
        catalan = catalan * 2.0 * (2.0 * j + 1.0) / (j + 2.0);
    }
    return m;
}

}  // namespace freegrass
