#include "freegrass/ncpoly.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace freegrass {

namespace {

Word concat(const Word& a, const Word& b) {
    Word w = a;
    w.insert(w.end(), b.begin(), b.end());
    return w;
}

void accumulate(std::map<Word, cd>& terms, const Word& w, cd c) {
    if (c == cd(0.0)) return;
    auto it = terms.find(w);
    if (it == terms.end()) {
        terms.emplace(w, c);
        return;
    }
    it->second += c;
    if (it->second == cd(0.0)) terms.erase(it);
}

template <class Map, class Key>
void accumulate_key(Map& terms, const Key& key, cd c) {
    if (c == cd(0.0)) return;
    auto it = terms.find(key);
    if (it == terms.end()) {
        terms.emplace(key, c);
        return;
    }
    it->second += c;
    if (it->second == cd(0.0)) terms.erase(it);
}

void check_word(const BaseAlgebra& alg, const Word& w) {
    for (int i : w)
        if (i < 0 || static_cast<std::size_t>(i) >= alg.dim())
            throw std::out_of_range("generator index " + std::to_string(i) + " outside dual basis of " + alg.name());
    if (w.size() > kDefaultDegreeCap)
        throw DegreeCapExceeded("word of degree " + std::to_string(w.size()) + " exceeds the degree cap");
}

std::vector<ComplexMatrix> generator_matrices(const MatOverB& beta) {
    std::vector<ComplexMatrix> g;
    for (std::size_t i = 0; i < beta.algebra().dim(); ++i) g.push_back(beta.component(i));
    return g;
}

ComplexMatrix evaluate_terms(const std::map<Word, cd>& terms, const std::vector<ComplexMatrix>& gens, std::size_t n) {
    ComplexMatrix out(n, n);
    for (const auto& [w, c] : terms) out.add_block(0, 0, word_value(w, gens, n), c);
    return out;
}

std::string algebra_kind_name(AlgebraKind k) { return k == AlgebraKind::FullMatrix ? "full" : "diagonal"; }

}  // namespace

ComplexMatrix word_value(const Word& w, const std::vector<ComplexMatrix>& gens, std::size_t n) {
    if (w.empty()) return ComplexMatrix::identity(n);
    ComplexMatrix v = gens.at(static_cast<std::size_t>(w[0]));
    for (std::size_t p = 1; p < w.size(); ++p) v = v * gens.at(static_cast<std::size_t>(w[p]));
    return v;
}

// ---------------------------------------------------------------------------

NCPoly NCPoly::constant(const BaseAlgebra& alg, cd c) { return monomial(alg, {}, c); }

NCPoly NCPoly::generator(const BaseAlgebra& alg, int i) { return monomial(alg, {i}, 1.0); }

NCPoly NCPoly::monomial(const BaseAlgebra& alg, const Word& w, cd c) {
    check_word(alg, w);
    NCPoly p(alg);
    accumulate(p.terms_, w, c);
    return p;
}

NCPoly NCPoly::random(const BaseAlgebra& alg, std::size_t max_degree, std::size_t n_terms, Rng& rng) {
    NCPoly p(alg);
    const int top = static_cast<int>(alg.dim()) - 1;
    for (std::size_t t = 0; t < n_terms; ++t) {
        const auto len = static_cast<std::size_t>(rng.integer(0, static_cast<int>(max_degree)));
        Word w(len);
        for (auto& x : w) x = rng.integer(0, top);
        const cd c(rng.integer(-3, 3), rng.integer(-3, 3));
        p.add_term(w, c);
    }
    return p;
}

std::size_t NCPoly::degree() const {
    std::size_t d = 0;
    for (const auto& [w, c] : terms_) d = std::max(d, w.size());
    return d;
}

cd NCPoly::coefficient(const Word& w) const {
    auto it = terms_.find(w);
    return it == terms_.end() ? cd(0.0) : it->second;
}

void NCPoly::add_term(const Word& w, cd c) {
    check_word(alg_, w);
    accumulate(terms_, w, c);
}

NCPoly NCPoly::homogeneous(std::size_t m) const {
    NCPoly p(alg_);
    for (const auto& [w, c] : terms_)
        if (w.size() == m) p.terms_.emplace(w, c);
    return p;
}

void NCPoly::check_same(const NCPoly& o) const {
    if (!(alg_ == o.alg_)) throw AlgebraMismatch("polynomials over " + alg_.name() + " and " + o.alg_.name());
}

NCPoly NCPoly::operator+(const NCPoly& o) const {
    check_same(o);
    NCPoly p = *this;
    for (const auto& [w, c] : o.terms_) accumulate(p.terms_, w, c);
    return p;
}

NCPoly NCPoly::operator-(const NCPoly& o) const { return *this + o * cd(-1.0); }

NCPoly NCPoly::operator*(const NCPoly& o) const {
    check_same(o);
    if (!terms_.empty() && !o.terms_.empty() && degree() + o.degree() > kDefaultDegreeCap)
        throw DegreeCapExceeded("product degree exceeds the degree cap");
    NCPoly p(alg_);
    for (const auto& [u, a] : terms_)
        for (const auto& [v, b] : o.terms_) accumulate(p.terms_, concat(u, v), a * b);
    return p;
}

NCPoly NCPoly::operator*(cd s) const {
    NCPoly p(alg_);
    for (const auto& [w, c] : terms_) accumulate(p.terms_, w, c * s);
    return p;
}

NCPoly operator*(cd s, const NCPoly& p) { return p * s; }

ComplexMatrix NCPoly::evaluate(const MatOverB& beta) const {
    if (!(beta.algebra() == alg_)) throw AlgebraMismatch("evaluation point is over " + beta.algebra().name());
    return evaluate_terms(terms_, generator_matrices(beta), beta.level());
}

ComplexMatrix NCPoly::evaluate_generators(const std::vector<ComplexMatrix>& gens) const {
    if (gens.size() != alg_.dim()) throw DimensionMismatch("need one matrix per generator");
    return evaluate_terms(terms_, gens, gens.front().rows());
}

NCTensor NCPoly::derivative() const {
    NCTensor t(alg_);
    for (const auto& [w, c] : terms_)
        for (std::size_t i = 0; i < w.size(); ++i) {
            const cd unit = alg_.unit_coordinate(static_cast<std::size_t>(w[i]));
            if (unit == cd(0.0)) continue;
            t.add_term(Word(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(i)),
                       Word(w.begin() + static_cast<std::ptrdiff_t>(i) + 1, w.end()), c * unit);
        }
    return t;
}

NCPoly NCPoly::lambda() const {
    NCPoly p(alg_);
    for (const auto& [w, c] : terms_) accumulate(p.terms_, w, c * static_cast<double>(w.size() + 1));
    return p;
}

NCPoly NCPoly::star() const {
    NCPoly p(alg_);
    for (const auto& [w, c] : terms_) {
        Word r(w.rbegin(), w.rend());
        for (auto& x : r) x = static_cast<int>(alg_.star_index(static_cast<std::size_t>(x)));
        accumulate(p.terms_, r, std::conj(c));
    }
    return p;
}

nlohmann::json NCPoly::to_json() const {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [w, c] : terms_) terms.push_back({{"word", w}, {"re", c.real()}, {"im", c.imag()}});
    return {{"algebra", {{"kind", algebra_kind_name(alg_.kind)}, {"k", alg_.k}}}, {"terms", terms}};
}

NCPoly NCPoly::from_json(const nlohmann::json& j) {
    const auto& a = j.at("algebra");
    BaseAlgebra alg;
    if (a.is_string()) {
        alg = BaseAlgebra::parse(a.get<std::string>());
    } else {
        const std::string kind = a.at("kind").get<std::string>();
        const auto k = a.at("k").get<std::size_t>();
        if (kind == "full")
            alg = BaseAlgebra::full(k);
        else if (kind == "diagonal")
            alg = BaseAlgebra::diagonal(k);
        else
            throw std::invalid_argument("unknown algebra kind '" + kind + "'");
    }
    NCPoly p(alg);
    for (const auto& t : j.at("terms")) {
        const Word w = t.at("word").get<Word>();
        const cd c(t.value("re", 0.0), t.value("im", 0.0));
        p.add_term(w, c);
    }
    return p;
}

// ---------------------------------------------------------------------------

void NCTensor::add_term(const Word& u, const Word& v, cd c) { accumulate_key(terms_, std::make_pair(u, v), c); }

NCTensor NCTensor::operator+(const NCTensor& o) const {
    NCTensor t = *this;
    for (const auto& [k, c] : o.terms_) accumulate_key(t.terms_, k, c);
    return t;
}

NCTensor NCTensor::operator-(const NCTensor& o) const {
    NCTensor t = *this;
    for (const auto& [k, c] : o.terms_) accumulate_key(t.terms_, k, -c);
    return t;
}

NCTensor NCTensor::left_multiply(const NCPoly& p) const {
    NCTensor t(alg_);
    for (const auto& [w, a] : p.terms())
        for (const auto& [k, b] : terms_) t.add_term(concat(w, k.first), k.second, a * b);
    return t;
}

NCTensor NCTensor::right_multiply(const NCPoly& q) const {
    NCTensor t(alg_);
    for (const auto& [k, a] : terms_)
        for (const auto& [w, b] : q.terms()) t.add_term(k.first, concat(k.second, w), a * b);
    return t;
}

NCTensor NCTensor::lambda_sum() const {
    NCTensor t(alg_);
    for (const auto& [k, c] : terms_)
        t.add_term(k.first, k.second, c * static_cast<double>(k.first.size() + k.second.size() + 2));
    return t;
}

NCTensor NCTensor::star_swap() const {
    NCTensor t(alg_);
    auto star_word = [&](const Word& w) {
        Word r(w.rbegin(), w.rend());
        for (auto& x : r) x = static_cast<int>(alg_.star_index(static_cast<std::size_t>(x)));
        return r;
    };
    for (const auto& [k, c] : terms_) t.add_term(star_word(k.second), star_word(k.first), std::conj(c));
    return t;
}

NCTensor3 NCTensor::derivative_left() const {
    NCTensor3 t(alg_);
    for (const auto& [k, c] : terms_) {
        NCTensor d = NCPoly::monomial(alg_, k.first).derivative();
        for (const auto& [dk, dc] : d.terms()) t.add_term(dk.first, dk.second, k.second, c * dc);
    }
    return t;
}

NCTensor3 NCTensor::derivative_right() const {
    NCTensor3 t(alg_);
    for (const auto& [k, c] : terms_) {
        NCTensor d = NCPoly::monomial(alg_, k.second).derivative();
        for (const auto& [dk, dc] : d.terms()) t.add_term(k.first, dk.first, dk.second, c * dc);
    }
    return t;
}

ComplexMatrix NCTensor::evaluate(const MatOverB& b1, const MatOverB& b2) const {
    const auto g1 = generator_matrices(b1);
    const auto g2 = generator_matrices(b2);
    const std::size_t m = b1.level(), n = b2.level();
    ComplexMatrix out(m * n, m * n);
    for (const auto& [k, c] : terms_) out.add_block(0, 0, kron(word_value(k.first, g1, m), word_value(k.second, g2, n)), c);
    return out;
}

void NCTensor3::add_term(const Word& u, const Word& v, const Word& w, cd c) {
    accumulate_key(terms_, std::make_tuple(u, v, w), c);
}

ComplexMatrix NCTensor3::evaluate(const MatOverB& b1, const MatOverB& b2, const MatOverB& b3) const {
    const auto g1 = generator_matrices(b1);
    const auto g2 = generator_matrices(b2);
    const auto g3 = generator_matrices(b3);
    const std::size_t m = b1.level(), n = b2.level(), p = b3.level();
    ComplexMatrix out(m * n * p, m * n * p);
    for (const auto& [k, c] : terms_) {
        const ComplexMatrix x = kron(kron(word_value(std::get<0>(k), g1, m), word_value(std::get<1>(k), g2, n)),
                                     word_value(std::get<2>(k), g3, p));
        out.add_block(0, 0, x, c);
    }
    return out;
}

// ---------------------------------------------------------------------------

NCPoly antisymmetrize(const BaseAlgebra& alg, const std::vector<Word>& monomials) {
    if (monomials.empty()) throw std::invalid_argument("antisymmetrize: no monomials");
    const std::size_t len = monomials.front().size();
    std::set<Word> seen;
    for (const auto& m : monomials) {
        if (m.size() != len) throw std::invalid_argument("antisymmetrize: monomials of unequal degree");
        if (!seen.insert(m).second) throw std::invalid_argument("antisymmetrize: duplicate monomial");
        for (int i : m)
            if (i < 0 || static_cast<std::size_t>(i) >= alg.dim()) throw std::out_of_range("antisymmetrize: index");
    }
    const std::size_t p = monomials.size();
    if (p * len > kDefaultDegreeCap) throw DegreeCapExceeded("antisymmetrization degree exceeds the degree cap");
    std::vector<std::size_t> perm(p);
    std::iota(perm.begin(), perm.end(), 0);
    NCPoly g(alg);
    do {
        int inversions = 0;
        for (std::size_t i = 0; i < p; ++i)
            for (std::size_t j = i + 1; j < p; ++j)
                if (perm[i] > perm[j]) ++inversions;
        Word w;
        for (std::size_t i : perm) w.insert(w.end(), monomials[i].begin(), monomials[i].end());
        g.add_term(w, inversions % 2 == 0 ? 1.0 : -1.0);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return g;
}

ComplexMatrix antisymmetrized_product(const std::vector<ComplexMatrix>& x) {
    const std::size_t p = x.size();
    if (p == 0) throw std::invalid_argument("antisymmetrized_product: empty");
    if (p > 20) throw std::invalid_argument("antisymmetrized_product: too many factors");
    const std::size_t n = x.front().rows();
    // F(S) = sum over orderings of S of sign * product; first factor drawn from S.
    std::vector<ComplexMatrix> f(std::size_t{1} << p);
    f[0] = ComplexMatrix::identity(n);
    for (std::size_t s = 1; s < f.size(); ++s) {
        ComplexMatrix acc(n, n);
        int below = 0;
        for (std::size_t j = 0; j < p; ++j) {
            if (!(s & (std::size_t{1} << j))) continue;
            const ComplexMatrix term = x[j] * f[s & ~(std::size_t{1} << j)];
            acc.add_block(0, 0, term, below % 2 == 0 ? 1.0 : -1.0);
            ++below;
        }
        f[s] = std::move(acc);
    }
    return f.back();
}

}  // namespace freegrass
