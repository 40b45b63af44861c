#include "freegrass/algebra.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

#include "freegrass/linalg.hpp"

namespace freegrass {

BaseAlgebra BaseAlgebra::full(std::size_t k) {
    if (k < 1) throw std::invalid_argument("algebra size must be >= 1");
    return {AlgebraKind::FullMatrix, k};
}

BaseAlgebra BaseAlgebra::diagonal(std::size_t k) {
    if (k < 1) throw std::invalid_argument("algebra size must be >= 1");
    return {AlgebraKind::Diagonal, k};
}

BaseAlgebra BaseAlgebra::parse(const std::string& spec) {
    std::string s;
    for (char ch : spec) s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
    if (s == "c" || s == "c1" || s == "m1") return scalars();
    if (s.size() >= 2 && (s[0] == 'm' || s[0] == 'c')) {
        const std::string digits = s.substr(1);
        if (!std::all_of(digits.begin(), digits.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
            throw std::invalid_argument("malformed algebra spec '" + spec + "'");
        const std::size_t k = std::stoul(digits);
        if (k < 1 || k > 16) throw std::invalid_argument("algebra size out of range in '" + spec + "'");
        return s[0] == 'm' ? full(k) : diagonal(k);
    }
    throw std::invalid_argument("malformed algebra spec '" + spec + "' (expected c, cK or mK)");
}

std::string BaseAlgebra::name() const {
    if (k == 1) return "c";
    return (kind == AlgebraKind::FullMatrix ? "m" : "c") + std::to_string(k);
}

ComplexMatrix BaseAlgebra::basis(std::size_t i) const {
    if (i >= dim()) throw std::out_of_range("basis index");
    if (kind == AlgebraKind::FullMatrix) return ComplexMatrix::unit(k, k, i / k, i % k);
    return ComplexMatrix::unit(k, k, i, i);
}

cd BaseAlgebra::coordinate(std::size_t i, const ComplexMatrix& b) const {
    if (kind == AlgebraKind::FullMatrix) return b(i / k, i % k);
    return b(i, i);
}

cd BaseAlgebra::unit_coordinate(std::size_t i) const {
    if (kind == AlgebraKind::FullMatrix) return (i / k == i % k) ? 1.0 : 0.0;
    return 1.0;
}

std::size_t BaseAlgebra::star_index(std::size_t i) const {
    if (kind == AlgebraKind::FullMatrix) return (i % k) * k + i / k;
    return i;
}

std::vector<cd> BaseAlgebra::coordinates(const ComplexMatrix& b) const {
    std::vector<cd> c(dim());
    for (std::size_t i = 0; i < dim(); ++i) c[i] = coordinate(i, b);
    return c;
}

ComplexMatrix BaseAlgebra::from_coordinates(const std::vector<cd>& c) const {
    if (c.size() != dim()) throw DimensionMismatch("coordinate count");
    ComplexMatrix b(k, k);
    for (std::size_t i = 0; i < dim(); ++i) b += basis(i) * c[i];
    return b;
}

bool BaseAlgebra::contains(const ComplexMatrix& b, double tol) const {
    if (b.rows() != k || b.cols() != k) return false;
    if (kind == AlgebraKind::FullMatrix) return true;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            if (i != j && std::abs(b(i, j)) > tol) return false;
    return true;
}

ComplexMatrix BaseAlgebra::random_element(Rng& rng) const {
    std::vector<cd> c(dim());
    for (auto& z : c) z = rng.complex_normal();
    return from_coordinates(c);
}

cd Functional::operator()(const ComplexMatrix& x) const {
    if (x.rows() != dual.rows() || x.cols() != dual.cols()) throw DimensionMismatch("functional argument shape");
    cd s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x.data()[i] * dual.data()[i];
    return s;
}

Functional Functional::trace(std::size_t d) { return {ComplexMatrix::identity(d)}; }

Functional Functional::normalized_trace(std::size_t d) {
    return {ComplexMatrix::scalar(d, 1.0 / static_cast<double>(d))};
}

Functional Functional::matrix_unit(std::size_t d, std::size_t p, std::size_t q) {
    return {ComplexMatrix::unit(d, d, p, q)};
}

Functional Functional::weighted_trace(const ComplexMatrix& p) { return {p.transpose()}; }

std::vector<Functional> dual_basis(const BaseAlgebra& alg) {
    std::vector<Functional> out;
    for (std::size_t i = 0; i < alg.dim(); ++i) out.push_back({alg.basis(i)});
    return out;
}

Functional distinguished_functional(const BaseAlgebra& alg) {
    return Functional::normalized_trace(alg.k);
}

// ---------------------------------------------------------------------------

MatOverB MatOverB::zero(const BaseAlgebra& alg, std::size_t n) {
    MatOverB m;
    m.alg_ = alg;
    m.n_ = n;
    if (alg.kind == AlgebraKind::FullMatrix)
        m.full_ = ComplexMatrix(n * alg.k, n * alg.k);
    else
        m.parts_.assign(alg.k, ComplexMatrix(n, n));
    return m;
}

MatOverB MatOverB::identity(const BaseAlgebra& alg, std::size_t n) {
    return scalar_matrix(alg, ComplexMatrix::identity(n));
}

MatOverB MatOverB::embed(const BaseAlgebra& alg, std::size_t n, const std::vector<ComplexMatrix>& entries) {
    if (entries.size() != n * n) throw DimensionMismatch("embed: need n*n entries");
    MatOverB m = zero(alg, n);
    const std::size_t k = alg.k;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const ComplexMatrix& b = entries[i * n + j];
            if (!alg.contains(b)) throw std::invalid_argument("embed: entry is not an element of B");
            if (alg.kind == AlgebraKind::FullMatrix)
                m.full_.set_block(i * k, j * k, b);
            else
                for (std::size_t p = 0; p < k; ++p) m.parts_[p](i, j) = b(p, p);
        }
    return m;
}

MatOverB MatOverB::from_components(const BaseAlgebra& alg, const std::vector<ComplexMatrix>& comps) {
    if (comps.size() != alg.dim()) throw DimensionMismatch("from_components: need dim B components");
    const std::size_t n = comps.front().rows();
    MatOverB m = zero(alg, n);
    if (alg.kind == AlgebraKind::Diagonal) {
        m.parts_ = comps;
        return m;
    }
    const std::size_t k = alg.k;
    for (std::size_t idx = 0; idx < comps.size(); ++idx) {
        const std::size_t p = idx / k, q = idx % k;
        const ComplexMatrix& c = comps[idx];
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) m.full_(i * k + p, j * k + q) += c(i, j);
    }
    return m;
}

MatOverB MatOverB::from_dense(const BaseAlgebra& alg, std::size_t n, const ComplexMatrix& dense) {
    const std::size_t k = alg.k;
    if (dense.rows() != n * k || dense.cols() != n * k) throw DimensionMismatch("from_dense: shape");
    MatOverB m = zero(alg, n);
    if (alg.kind == AlgebraKind::FullMatrix) {
        m.full_ = dense;
        return m;
    }
    const double tol = 1e-12 * std::max(1.0, dense.max_abs());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t p = 0; p < k; ++p)
                for (std::size_t q = 0; q < k; ++q) {
                    const cd v = dense(i * k + p, j * k + q);
                    if (p == q)
                        m.parts_[p](i, j) = v;
                    else if (std::abs(v) > tol)
                        throw std::invalid_argument("from_dense: matrix is not over C^k");
                }
    return m;
}

MatOverB MatOverB::kron_scalar(const BaseAlgebra& alg, const ComplexMatrix& a, const ComplexMatrix& b) {
    if (!alg.contains(b)) throw std::invalid_argument("kron_scalar: b is not in B");
    std::vector<ComplexMatrix> comps;
    for (std::size_t i = 0; i < alg.dim(); ++i) comps.push_back(a * alg.coordinate(i, b));
    return from_components(alg, comps);
}

MatOverB MatOverB::scalar_matrix(const BaseAlgebra& alg, const ComplexMatrix& a) {
    return kron_scalar(alg, a, ComplexMatrix::identity(alg.k));
}

MatOverB MatOverB::upper_block(const MatOverB& x, const MatOverB& y, const ComplexMatrix& t) {
    if (!(x.alg_ == y.alg_)) throw std::invalid_argument("upper_block: algebra mismatch");
    const std::size_t m = x.n_, n = y.n_;
    if (t.rows() != m || t.cols() != n) throw DimensionMismatch("upper_block: t shape");
    const BaseAlgebra& alg = x.alg_;
    MatOverB out = zero(alg, m + n);
    if (alg.kind == AlgebraKind::FullMatrix) {
        const std::size_t k = alg.k;
        out.full_.set_block(0, 0, x.full_);
        out.full_.set_block(m * k, m * k, y.full_);
        out.full_.set_block(0, m * k, kron(t, ComplexMatrix::identity(k)));
    } else {
        for (std::size_t p = 0; p < alg.k; ++p) {
            out.parts_[p].set_block(0, 0, x.parts_[p]);
            out.parts_[p].set_block(m, m, y.parts_[p]);
            out.parts_[p].set_block(0, m, t);
        }
    }
    return out;
}

MatOverB MatOverB::nilpotent_chain(const BaseAlgebra& alg, const std::vector<int>& word) {
    const std::size_t n = word.size() + 1;
    std::vector<ComplexMatrix> comps(alg.dim(), ComplexMatrix(n, n));
    for (std::size_t p = 0; p < word.size(); ++p) comps.at(static_cast<std::size_t>(word[p]))(p, p + 1) = 1.0;
    return from_components(alg, comps);
}

MatOverB MatOverB::random(const BaseAlgebra& alg, std::size_t n, Rng& rng, double norm) {
    std::vector<ComplexMatrix> comps;
    for (std::size_t i = 0; i < alg.dim(); ++i) comps.push_back(ginibre(n, n, rng));
    MatOverB m = from_components(alg, comps);
    const double s = m.norm();
    return s > 0.0 ? m * (norm / s) : m;
}

MatOverB MatOverB::random_hermitian(const BaseAlgebra& alg, std::size_t n, Rng& rng, double norm) {
    MatOverB m = random(alg, n, rng, 1.0);
    MatOverB h = (m + m.adjoint()) * 0.5;
    const double s = h.norm();
    return s > 0.0 ? h * (norm / s) : h;
}

ComplexMatrix MatOverB::extract_entry(std::size_t i, std::size_t j) const {
    if (i >= n_ || j >= n_) throw std::out_of_range("extract_entry index");
    const std::size_t k = alg_.k;
    if (alg_.kind == AlgebraKind::FullMatrix) return full_.block(i * k, j * k, k, k);
    ComplexMatrix b(k, k);
    for (std::size_t p = 0; p < k; ++p) b(p, p) = parts_[p](i, j);
    return b;
}

ComplexMatrix MatOverB::component(std::size_t idx) const {
    if (idx >= alg_.dim()) throw std::out_of_range("component index");
    if (alg_.kind == AlgebraKind::Diagonal) return parts_[idx];
    const std::size_t k = alg_.k, p = idx / k, q = idx % k;
    ComplexMatrix c(n_, n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) c(i, j) = full_(i * k + p, j * k + q);
    return c;
}

ComplexMatrix MatOverB::dense() const {
    if (alg_.kind == AlgebraKind::FullMatrix) return full_;
    const std::size_t k = alg_.k;
    ComplexMatrix d(n_ * k, n_ * k);
    for (std::size_t p = 0; p < k; ++p)
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j) d(i * k + p, j * k + p) = parts_[p](i, j);
    return d;
}

MatOverB MatOverB::adjoint() const {
    MatOverB m = *this;
    if (alg_.kind == AlgebraKind::FullMatrix)
        m.full_ = full_.adjoint();
    else
        for (auto& p : m.parts_) p = p.adjoint();
    return m;
}

MatOverB MatOverB::direct_sum(const MatOverB& o) const {
    if (!(alg_ == o.alg_)) throw std::invalid_argument("direct_sum: algebra mismatch");
    MatOverB m = zero(alg_, n_ + o.n_);
    if (alg_.kind == AlgebraKind::FullMatrix)
        m.full_ = freegrass::direct_sum(full_, o.full_);
    else
        for (std::size_t p = 0; p < alg_.k; ++p) m.parts_[p] = freegrass::direct_sum(parts_[p], o.parts_[p]);
    return m;
}

MatOverB MatOverB::conjugate_by(const ComplexMatrix& s, const ComplexMatrix& s_inv) const {
    MatOverB m = *this;
    if (alg_.kind == AlgebraKind::FullMatrix) {
        const ComplexMatrix ik = ComplexMatrix::identity(alg_.k);
        m.full_ = kron(s, ik) * full_ * kron(s_inv, ik);
    } else {
        for (auto& p : m.parts_) p = s * p * s_inv;
    }
    return m;
}

MatOverB MatOverB::block(std::size_t r0, std::size_t c0, std::size_t nr) const {
    MatOverB m = zero(alg_, nr);
    const std::size_t k = alg_.k;
    if (alg_.kind == AlgebraKind::FullMatrix)
        m.full_ = full_.block(r0 * k, c0 * k, nr * k, nr * k);
    else
        for (std::size_t p = 0; p < k; ++p) m.parts_[p] = parts_[p].block(r0, c0, nr, nr);
    return m;
}

double MatOverB::norm() const {
    if (alg_.kind == AlgebraKind::FullMatrix) return spectral_norm(full_);
    double s = 0.0;
    for (const auto& p : parts_) s = std::max(s, spectral_norm(p));
    return s;
}

MatOverB MatOverB::operator+(const MatOverB& o) const {
    MatOverB m = *this;
    if (alg_.kind == AlgebraKind::FullMatrix)
        m.full_ += o.full_;
    else
        for (std::size_t p = 0; p < parts_.size(); ++p) m.parts_[p] += o.parts_[p];
    return m;
}

MatOverB MatOverB::operator-(const MatOverB& o) const { return *this + o * cd(-1.0); }

MatOverB MatOverB::operator*(const MatOverB& o) const {
    if (!(alg_ == o.alg_) || n_ != o.n_) throw std::invalid_argument("MatOverB product mismatch");
    MatOverB m = *this;
    if (alg_.kind == AlgebraKind::FullMatrix)
        m.full_ = full_ * o.full_;
    else
        for (std::size_t p = 0; p < parts_.size(); ++p) m.parts_[p] = parts_[p] * o.parts_[p];
    return m;
}

MatOverB MatOverB::operator*(cd s) const {
    MatOverB m = *this;
    if (alg_.kind == AlgebraKind::FullMatrix)
        m.full_ *= s;
    else
        for (auto& p : m.parts_) p *= s;
    return m;
}

// ---------------------------------------------------------------------------

Embedding Embedding::make(const BaseAlgebra& alg, std::size_t d) {
    Embedding e{alg, d, {}};
    if (alg.kind == AlgebraKind::FullMatrix) {
        if (d % alg.k != 0) throw std::invalid_argument("M_k embeds in M_d only when k divides d");
        e.mult.assign(1, d / alg.k);
    } else {
        if (d < alg.k) throw std::invalid_argument("C^k embeds in M_d only when d >= k");
        e.mult.assign(alg.k, d / alg.k);
        for (std::size_t j = 0; j < d % alg.k; ++j) ++e.mult[j];
    }
    return e;
}

ComplexMatrix Embedding::element(const ComplexMatrix& b) const { return level(b, 1); }

ComplexMatrix Embedding::level(const ComplexMatrix& dense, std::size_t n) const {
    const std::size_t k = alg.k;
    if (dense.rows() != n * k || dense.cols() != n * k) throw DimensionMismatch("Embedding::level shape");
    if (alg.kind == AlgebraKind::FullMatrix) return kron(dense, ComplexMatrix::identity(mult[0]));
    ComplexMatrix out(n * d, n * d);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            std::size_t off = 0;
            for (std::size_t p = 0; p < k; ++p) {
                const cd v = dense(i * k + p, j * k + p);
                if (v != cd(0.0))
                    for (std::size_t s = 0; s < mult[p]; ++s) out(i * d + off + s, j * d + off + s) = v;
                off += mult[p];
            }
        }
    return out;
}

ComplexMatrix Embedding::expectation_in_b(const ComplexMatrix& x) const {
    if (x.rows() != d || x.cols() != d) throw DimensionMismatch("expectation shape");
    const std::size_t k = alg.k;
    ComplexMatrix b(k, k);
    if (alg.kind == AlgebraKind::FullMatrix) {
        const std::size_t r = mult[0];
        for (std::size_t p = 0; p < k; ++p)
            for (std::size_t q = 0; q < k; ++q) {
                cd s = 0.0;
                for (std::size_t t = 0; t < r; ++t) s += x(p * r + t, q * r + t);
                b(p, q) = s / static_cast<double>(r);
            }
    } else {
        std::size_t off = 0;
        for (std::size_t p = 0; p < k; ++p) {
            cd s = 0.0;
            for (std::size_t t = 0; t < mult[p]; ++t) s += x(off + t, off + t);
            b(p, p) = s / static_cast<double>(mult[p]);
            off += mult[p];
        }
    }
    return b;
}

ComplexMatrix Embedding::expectation(const ComplexMatrix& x) const { return element(expectation_in_b(x)); }

ComplexMatrix apply_blockwise(const Functional& phi, const ComplexMatrix& m, std::size_t n, std::size_t d) {
    if (m.rows() != n * d || m.cols() != n * d) throw DimensionMismatch("apply_blockwise shape");
    if (phi.dual.rows() != d) throw DimensionMismatch("apply_blockwise functional size");
    ComplexMatrix out(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            cd s = 0.0;
            for (std::size_t a = 0; a < d; ++a)
                for (std::size_t b = 0; b < d; ++b) s += m(i * d + a, j * d + b) * phi.dual(a, b);
            out(i, j) = s;
        }
    return out;
}

}  // namespace freegrass
