#include "freegrass/freeprob.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include "freegrass/linalg.hpp"
#include "freegrass/parallel.hpp"

namespace freegrass {

namespace {

std::vector<Word> words_up_to(std::size_t dim, std::size_t max_len) {
    std::vector<Word> out{{}};
    std::size_t begin = 0;
    for (std::size_t len = 1; len <= max_len; ++len) {
        const std::size_t end = out.size();
        for (std::size_t i = begin; i < end; ++i)
            for (std::size_t c = 0; c < dim; ++c) {
                Word w = out[i];
                w.push_back(static_cast<int>(c));
                out.push_back(w);
            }
        begin = end;
    }
    return out;
}

std::string word_label(const Word& w) {
    if (w.empty()) return "e";
    std::string s;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) s += '.';
        s += std::to_string(w[i]);
    }
    return s;
}

struct Moments {
    cd mean;
    double stderr_ = 0.0;
};

Moments summarize(const std::vector<cd>& xs) {
    Moments m;
    for (const cd& x : xs) m.mean += x;
    m.mean /= static_cast<double>(xs.size());
    if (xs.size() > 1) {
        double ss = 0.0;
        for (const cd& x : xs) ss += std::norm(x - m.mean);
        m.stderr_ = std::sqrt(ss / static_cast<double>(xs.size() - 1) / static_cast<double>(xs.size()));
    }
    return m;
}

MatOverB haar_point(const BaseAlgebra& alg, std::size_t N, Rng& rng) {
    if (alg.kind == AlgebraKind::FullMatrix) return MatOverB::from_dense(alg, N, haar_unitary(N * alg.k, rng));
    std::vector<ComplexMatrix> comps;
    for (std::size_t j = 0; j < alg.k; ++j) comps.push_back(haar_unitary(N, rng));
    return MatOverB::from_components(alg, comps);
}

// Tr(W_a W_b^*) / N for all pairs, as gram(b, a).
ComplexMatrix normalized_gram(const std::vector<ComplexMatrix>& values, std::size_t N) {
    const std::size_t nw = values.size();
    ComplexMatrix v(N * N, nw);
    for (std::size_t c = 0; c < nw; ++c) {
        const cd* src = values[c].data();
        for (std::size_t e = 0; e < N * N; ++e) v(e, c) = src[e];
    }
    return (v.adjoint() * v) * cd(1.0 / static_cast<double>(N));
}

std::vector<ComplexMatrix> word_values(const std::vector<Word>& words, const std::vector<ComplexMatrix>& gens,
                                       std::size_t N, std::size_t dim) {
    // Children of each word are contiguous and in parent order.
    std::vector<ComplexMatrix> vals(words.size());
    vals[0] = ComplexMatrix::identity(N);
    std::size_t level_begin = 0, level_size = 1, idx = 1;
    while (idx < words.size()) {
        for (std::size_t p = 0; p < level_size; ++p)
            for (std::size_t c = 0; c < dim; ++c, ++idx) vals[idx] = vals[level_begin + p] * gens[c];
        level_begin += level_size;
        level_size *= dim;
    }
    return vals;
}

}  // namespace

cd free_moment_oracle(const BaseAlgebra& alg, const std::vector<ComplexMatrix>& a, const ComplexMatrix& c,
                      const std::vector<ComplexMatrix>& b) {
    if (a.size() != b.size()) return 0.0;
    const Functional phi = distinguished_functional(alg);
    cd v = phi(c);
    for (std::size_t j = 0; j < a.size(); ++j) v *= phi(a[j] * b[j]);
    return v;
}

cd haar_exact_limit(const BaseAlgebra& alg, const Word& alpha, const Word& beta) {
    if (alpha.size() != beta.size()) return 0.0;
    cd v = 1.0;
    for (std::size_t j = 0; j < alpha.size(); ++j) {
        if (alg.kind == AlgebraKind::FullMatrix) {
            const ComplexMatrix x = alg.basis(static_cast<std::size_t>(alpha[j]));
            const ComplexMatrix y = alg.basis(static_cast<std::size_t>(beta[j]));
            v *= (x * y.adjoint()).trace() / static_cast<double>(alg.k);
        } else if (alpha[j] != beta[j]) {
            return 0.0;
        }
    }
    return v;
}

void McConfig::validate() const {
    if (ladder.empty()) throw std::invalid_argument("N-ladder is empty");
    for (std::size_t i = 0; i < ladder.size(); ++i) {
        if (ladder[i] == 0) throw std::invalid_argument("N-ladder entries must be positive");
        if (i && ladder[i] <= ladder[i - 1]) throw std::invalid_argument("N-ladder must be strictly increasing");
    }
    if (samples < 1) throw std::invalid_argument("samples must be >= 1");
}

std::vector<ComplexMatrix> haar_generators(const BaseAlgebra& alg, std::size_t N, Rng& rng) {
    const MatOverB w = haar_point(alg, N, rng);
    std::vector<ComplexMatrix> gens;
    for (std::size_t i = 0; i < alg.dim(); ++i) gens.push_back(w.component(i));
    return gens;
}

std::vector<WordPairSeries> haar_moment_table(const McConfig& cfg, std::size_t max_len) {
    cfg.validate();
    const std::size_t dim = cfg.alg.dim();
    const std::vector<Word> words = words_up_to(dim, max_len);
    const std::size_t nw = words.size();
    std::vector<WordPairSeries> table(nw * nw);
    for (std::size_t a = 0; a < nw; ++a)
        for (std::size_t b = 0; b < nw; ++b) {
            table[a * nw + b].alpha = words[a];
            table[a * nw + b].beta = words[b];
        }
    for (std::size_t N : cfg.ladder) {
        std::vector<ComplexMatrix> grams(cfg.samples);
        parallel_for(cfg.samples, [&](std::size_t s) {
            Rng rng = Rng::derive(cfg.seed, {N, s});
            grams[s] = normalized_gram(word_values(words, haar_generators(cfg.alg, N, rng), N, dim), N);
        });
        std::vector<cd> xs(cfg.samples);
        for (std::size_t a = 0; a < nw; ++a)
            for (std::size_t b = 0; b < nw; ++b) {
                for (std::size_t s = 0; s < cfg.samples; ++s) xs[s] = grams[s](b, a);
                const Moments m = summarize(xs);
                table[a * nw + b].rows.push_back(
                    {N, cfg.samples, m.mean, m.stderr_, haar_exact_limit(cfg.alg, words[a], words[b])});
            }
    }
    const double n_final = static_cast<double>(cfg.ladder.back());
    for (auto& p : table) {
        const McRow& last = p.rows.back();
        p.deviation = std::abs(last.estimate - last.exact);
        p.tolerance = std::max(3.0 * last.stderr_, kMcBiasAllowance / n_final);
        p.pass = p.deviation <= p.tolerance;
    }
    return table;
}

WordPairSeries haar_moment_estimate(const McConfig& cfg, const Word& alpha, const Word& beta) {
    cfg.validate();
    WordPairSeries p{alpha, beta, {}, 0.0, 0.0, false};
    for (std::size_t N : cfg.ladder) {
        std::vector<cd> xs(cfg.samples);
        parallel_for(cfg.samples, [&](std::size_t s) {
            Rng rng = Rng::derive(cfg.seed, {N, s});
            const auto gens = haar_generators(cfg.alg, N, rng);
            const ComplexMatrix wa = word_value(alpha, gens, N), wb = word_value(beta, gens, N);
            xs[s] = frobenius_inner(wb, wa) / static_cast<double>(N);
        });
        const Moments m = summarize(xs);
        p.rows.push_back({N, cfg.samples, m.mean, m.stderr_, haar_exact_limit(cfg.alg, alpha, beta)});
    }
    const McRow& last = p.rows.back();
    p.deviation = std::abs(last.estimate - last.exact);
    p.tolerance = std::max(3.0 * last.stderr_, kMcBiasAllowance / static_cast<double>(cfg.ladder.back()));
    p.pass = p.deviation <= p.tolerance;
    return p;
}

void write_moment_csv(std::ostream& os, const std::vector<WordPairSeries>& table) {
    os << "alpha,beta,N,samples,estimate_re,estimate_im,stderr,exact_limit_re,exact_limit_im\n";
    os.precision(12);
    for (const auto& p : table)
        for (const auto& r : p.rows)
            os << word_label(p.alpha) << ',' << word_label(p.beta) << ',' << r.N << ',' << r.samples << ','
               << r.estimate.real() << ',' << r.estimate.imag() << ',' << r.stderr_ << ',' << r.exact.real() << ','
               << r.exact.imag() << '\n';
}

std::vector<CoefficientEstimate> recover_coefficients_mc(const MatricialFn& f, const McConfig& cfg,
                                                         std::size_t max_degree, std::size_t rotations, double r) {
    cfg.validate();
    if (rotations <= max_degree) throw std::invalid_argument("rotations must exceed the maximal degree");
    if (!(r > 0.0 && r <= 1.0)) throw std::invalid_argument("radial parameter must lie in (0, 1]");
    const BaseAlgebra& alg = f.alg;
    const std::size_t dim = alg.dim();
    const std::vector<Word> words = words_up_to(dim, max_degree);
    const CoefficientFamily truth = extract_coefficients(f, max_degree);
    const double kscale = alg.kind == AlgebraKind::FullMatrix ? static_cast<double>(alg.k) : 1.0;
    std::vector<CoefficientEstimate> out;
    for (std::size_t N : cfg.ladder) {
        // per sample, per word
        std::vector<std::vector<cd>> vals(cfg.samples, std::vector<cd>(words.size()));
        parallel_for(cfg.samples, [&](std::size_t s) {
            Rng rng = Rng::derive(cfg.seed, {N, s});
            const MatOverB w = haar_point(alg, N, rng);
            std::vector<ComplexMatrix> gens;
            for (std::size_t i = 0; i < dim; ++i) gens.push_back(w.component(i));
            std::vector<ComplexMatrix> homog(max_degree + 1, ComplexMatrix(N, N));
            for (std::size_t l = 0; l < rotations; ++l) {
                const double theta = 2.0 * std::numbers::pi * static_cast<double>(l) / static_cast<double>(rotations);
                const cd rot = std::polar(1.0, theta);
                const ComplexMatrix fv = f(w * (rot * r));
                for (std::size_t m = 0; m <= max_degree; ++m)
                    homog[m] += fv * (std::polar(1.0, -theta * static_cast<double>(m)) /
                                      (static_cast<double>(rotations) * std::pow(r, static_cast<double>(m))));
            }
            for (std::size_t i = 0; i < words.size(); ++i) {
                const std::size_t m = words[i].size();
                const ComplexMatrix zw = word_value(words[i], gens, N);
                vals[s][i] = frobenius_inner(zw, homog[m]) / static_cast<double>(N) *
                             std::pow(kscale, static_cast<double>(m));
            }
        });
        std::vector<cd> xs(cfg.samples);
        for (std::size_t i = 0; i < words.size(); ++i) {
            for (std::size_t s = 0; s < cfg.samples; ++s) xs[s] = vals[s][i];
            const Moments m = summarize(xs);
            CoefficientEstimate e{N, words[i], m.mean, m.stderr_, truth.coefficient(words[i]), 0.0};
            const double dev = std::abs(e.estimate - e.exact);
            e.z_score = e.stderr_ > 0.0 ? dev / e.stderr_ : (dev <= 1e-12 ? 0.0 : std::numeric_limits<double>::infinity());
            out.push_back(e);
        }
    }
    return out;
}

void write_coefficient_csv(std::ostream& os, const std::vector<CoefficientEstimate>& rows) {
    os << "word,N,estimate_re,estimate_im,stderr,exact_re,exact_im,z_score\n";
    os.precision(12);
    for (const auto& e : rows)
        os << word_label(e.word) << ',' << e.N << ',' << e.estimate.real() << ',' << e.estimate.imag() << ','
           << e.stderr_ << ',' << e.exact.real() << ',' << e.exact.imag() << ',' << e.z_score << '\n';
}

}  // namespace freegrass
