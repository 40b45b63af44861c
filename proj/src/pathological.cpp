#include "freegrass/pathological.hpp"

#include <cmath>
#include <string>

#include "freegrass/linalg.hpp"

namespace freegrass {

std::vector<Word> first_words(const BaseAlgebra& alg, std::size_t p, std::size_t d) {
    const std::size_t base = alg.dim();
    std::vector<Word> out;
    Word w(d, 0);
    while (out.size() < p) {
        out.push_back(w);
        std::size_t pos = d;
        while (pos > 0) {
            --pos;
            if (static_cast<std::size_t>(++w[pos]) < base) break;
            w[pos] = 0;
            if (pos == 0) return out;
        }
        if (d == 0) break;
    }
    return out;
}

ComplexMatrix evaluate_stage(const PathologicalStage& stage, const MatOverB& beta) {
    std::vector<ComplexMatrix> gens;
    for (std::size_t i = 0; i < beta.algebra().dim(); ++i) gens.push_back(beta.component(i));
    std::vector<ComplexMatrix> x;
    for (const auto& m : stage.monomials) x.push_back(word_value(m, gens, beta.level()));
    return antisymmetrized_product(x);
}

ComplexMatrix evaluate_partial_sum(const PathologicalResult& r, std::size_t j, const MatOverB& beta) {
    ComplexMatrix s(beta.level(), beta.level());
    for (std::size_t i = 0; i < j && i < r.stages.size(); ++i)
        s.add_block(0, 0, evaluate_stage(r.stages[i], beta), r.stages[i].lambda);
    return s;
}

PathologicalResult build_pathological(const BaseAlgebra& alg, std::size_t depth, std::uint64_t seed,
                                      std::size_t samples) {
    if (alg.dim() < 2) throw std::invalid_argument("the construction needs dim B > 1");
    if (depth < 1) throw std::invalid_argument("depth must be >= 1");
    PathologicalResult r{alg, {}};
    std::size_t n_j = 1;
    for (std::size_t j = 1; j <= depth; ++j) {
        PathologicalStage st;
        st.index = j;
        st.vanish_level = n_j;
        st.p = n_j * n_j + 1;
        st.witness_level = st.p / 2 + 1;
        std::size_t d = 1;
        double count = static_cast<double>(alg.dim());
        while (count < static_cast<double>(st.p)) {
            ++d;
            count *= static_cast<double>(alg.dim());
        }
        st.monomial_degree = d;
        st.monomials = first_words(alg, st.p, d);
        st.radius = 1.0 / static_cast<double>(j);

        const double target = 0.999 * st.radius;
        Rng rng = Rng::derive(seed, {j});
        double best = -1.0;
        for (std::size_t s = 0; s < samples; ++s) {
            MatOverB beta = MatOverB::random(alg, st.witness_level, rng, target);
            const double v = spectral_norm(evaluate_stage(st, beta));
            if (v > best) {
                best = v;
                st.witness = beta;
            }
        }
        if (!(best > 0.0))
            throw SearchFailed("no point with nonzero g_" + std::to_string(j) + " at level " +
                               std::to_string(st.witness_level));
        r.stages.push_back(st);
        PathologicalStage& cur = r.stages.back();
        const ComplexMatrix prev = evaluate_partial_sum(r, j - 1, cur.witness);
        const ComplexMatrix gj = evaluate_stage(cur, cur.witness);
        double lambda = 1.0;
        bool found = false;
        for (int it = 0; it < 400; ++it) {
            const double v = spectral_norm(prev + gj * lambda);
            if (v > static_cast<double>(j)) {
                cur.lambda = lambda;
                cur.witness_norm = v;
                found = true;
                break;
            }
            lambda *= 2.0;
        }
        if (!found) throw SearchFailed("doubling search for lambda_" + std::to_string(j) + " exhausted");
        n_j = cur.witness_level;
    }
    return r;
}

}  // namespace freegrass
