#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "freegrass/algebra.hpp"
#include "freegrass/linalg.hpp"

using namespace freegrass;

namespace {

std::vector<BaseAlgebra> algebras() {
    return {BaseAlgebra::scalars(), BaseAlgebra::full(2), BaseAlgebra::full(3), BaseAlgebra::diagonal(2),
            BaseAlgebra::diagonal(3)};
}

}  // namespace

TEST_CASE("parse algebra specs") {
    CHECK(BaseAlgebra::parse("c") == BaseAlgebra::scalars());
    CHECK(BaseAlgebra::parse("m2") == BaseAlgebra::full(2));
    CHECK(BaseAlgebra::parse("c3") == BaseAlgebra::diagonal(3));
    CHECK(BaseAlgebra::parse("m2").dim() == 4);
    CHECK(BaseAlgebra::parse("c3").dim() == 3);
    for (const char* bad : {"", "x2", "m0", "m", "c-1", "m2x", "c0"})
        CHECK_THROWS_AS(BaseAlgebra::parse(bad), std::invalid_argument);
}

TEST_CASE("dual basis is dual to the canonical basis") {
    for (const auto& alg : algebras()) {
        const auto phis = dual_basis(alg);
        REQUIRE(phis.size() == alg.dim());
        for (std::size_t i = 0; i < alg.dim(); ++i)
            for (std::size_t j = 0; j < alg.dim(); ++j)
                CHECK(phis[i](alg.basis(j)) == cd(i == j ? 1.0 : 0.0));
    }
}

TEST_CASE("dual basis on the unit") {
    const auto m2 = BaseAlgebra::full(2);
    const auto phis = dual_basis(m2);
    const auto one = ComplexMatrix::identity(2);
    // e_11, e_12, e_21, e_22
    CHECK(phis[0](one) == cd(1.0));
    CHECK(phis[1](one) == cd(0.0));
    CHECK(phis[2](one) == cd(0.0));
    CHECK(phis[3](one) == cd(1.0));
    const auto c3 = BaseAlgebra::diagonal(3);
    for (const auto& p : dual_basis(c3)) CHECK(p(ComplexMatrix::identity(3)) == cd(1.0));
    for (const auto& alg : algebras())
        CHECK(std::abs(distinguished_functional(alg)(ComplexMatrix::identity(alg.k)) - 1.0) < 1e-15);
}

TEST_CASE("functional star") {
    Rng rng(4);
    for (const auto& alg : algebras()) {
        const auto phis = dual_basis(alg);
        for (std::size_t i = 0; i < alg.dim(); ++i) {
            const auto b = alg.random_element(rng);
            const cd lhs = phis[i].star()(b);
            const cd rhs = std::conj(phis[i](b.adjoint()));
            CHECK(std::abs(lhs - rhs) < 1e-14);
            CHECK(std::abs(phis[alg.star_index(i)](b) - lhs) < 1e-14);
        }
    }
}

TEST_CASE("coordinates round trip") {
    Rng rng(6);
    for (const auto& alg : algebras()) {
        const auto b = alg.random_element(rng);
        CHECK(alg.contains(b, 1e-14));
        CHECK(max_abs_diff(alg.from_coordinates(alg.coordinates(b)), b) < 1e-15);
    }
    CHECK_FALSE(BaseAlgebra::diagonal(2).contains(ComplexMatrix::unit(2, 2, 0, 1)));
}

TEST_CASE("dual basis separates points") {
    for (const auto& alg : algebras()) {
        const auto phis = dual_basis(alg);
        const std::size_t m = alg.dim();
        ComplexMatrix gram(m, m);
        for (std::size_t p = 0; p < m; ++p)
            for (std::size_t q = 0; q < m; ++q)
                for (std::size_t i = 0; i < m; ++i)
                    gram(p, q) += phis[p](alg.basis(i)) * std::conj(phis[q](alg.basis(i)));
        CHECK(is_invertible(gram));
    }
}

TEST_CASE("embed and extract") {
    const auto m2 = BaseAlgebra::full(2);
    const auto e12 = ComplexMatrix::unit(2, 2, 0, 1);
    CHECK(MatOverB::embed(m2, 1, {e12}).dense() == e12);

    Rng rng(12);
    for (const auto& alg : algebras()) {
        const std::size_t n = 3;
        std::vector<ComplexMatrix> entries;
        for (std::size_t i = 0; i < n * n; ++i) entries.push_back(alg.random_element(rng));
        const auto m = MatOverB::embed(alg, n, entries);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) CHECK(m.extract_entry(i, j) == entries[i * n + j]);

        const auto a = ginibre(n, n, rng);
        const auto b = alg.random_element(rng);
        CHECK(max_abs_diff(MatOverB::kron_scalar(alg, a, b).dense(), kron(a, b)) < 1e-15);
    }
}

TEST_CASE("realization is a *-homomorphism and isometric") {
    Rng rng(15);
    for (const auto& alg : algebras()) {
        for (std::size_t n : {1u, 2u, 3u}) {
            const auto x = MatOverB::random(alg, n, rng, 1.0);
            const auto y = MatOverB::random(alg, n, rng, 1.0);
            CHECK(max_abs_diff((x * y).dense(), x.dense() * y.dense()) < 1e-12);
            CHECK(max_abs_diff((x + y).dense(), x.dense() + y.dense()) < 1e-12);
            CHECK(max_abs_diff(x.adjoint().dense(), x.dense().adjoint()) < 1e-12);
            CHECK(std::abs(x.norm() - spectral_norm(x.dense())) < 1e-12);
            CHECK(x.adjoint().adjoint().dense() == x.dense());
            CHECK(std::abs(x.adjoint().norm() - x.norm()) < 1e-12);
            const auto h = MatOverB::random_hermitian(alg, n, rng, 1.0);
            CHECK(max_abs_diff(h.adjoint().dense(), h.dense()) < 1e-14);
            const auto back = MatOverB::from_dense(alg, n, x.dense());
            CHECK(max_abs_diff(back.dense(), x.dense()) < 1e-15);
            ComplexMatrix sum = ComplexMatrix::zeros(n * alg.k, n * alg.k);
            for (std::size_t i = 0; i < alg.dim(); ++i) sum += kron(x.component(i), alg.basis(i));
            CHECK(max_abs_diff(sum, x.dense()) < 1e-14);
        }
    }
}

TEST_CASE("direct sum and conjugation") {
    Rng rng(19);
    const auto alg = BaseAlgebra::full(2);
    const auto x = MatOverB::random(alg, 2, rng, 1.0);
    const auto y = MatOverB::random(alg, 1, rng, 1.0);
    const auto s = x.direct_sum(y);
    CHECK(s.level() == 3);
    CHECK(max_abs_diff(s.block(0, 0, 2).dense(), x.dense()) < 1e-15);
    CHECK(max_abs_diff(s.block(2, 2, 1).dense(), y.dense()) < 1e-15);
    const auto g = ginibre(2, 2, rng) + ComplexMatrix::scalar(2, 3.0);
    const auto gi = inverse(g);
    const auto c = x.conjugate_by(g, gi);
    const auto big = kron(g, ComplexMatrix::identity(2));
    CHECK(max_abs_diff(c.dense(), big * x.dense() * inverse(big)) < 1e-12);
}

TEST_CASE("embeddings into M_d are unital *-homomorphisms") {
    Rng rng(23);
    for (const auto& alg : algebras()) {
        for (std::size_t d : {alg.k, 2 * alg.k, std::size_t{5}}) {
            if (alg.kind == AlgebraKind::FullMatrix && d % alg.k) continue;
            if (d < alg.k) continue;
            const auto emb = Embedding::make(alg, d);
            const auto a = alg.random_element(rng);
            const auto b = alg.random_element(rng);
            CHECK(max_abs_diff(emb.element(ComplexMatrix::identity(alg.k)), ComplexMatrix::identity(d)) < 1e-15);
            CHECK(max_abs_diff(emb.element(a * b), emb.element(a) * emb.element(b)) < 1e-12);
            CHECK(max_abs_diff(emb.element(a.adjoint()), emb.element(a).adjoint()) < 1e-14);
            // The conditional expectation fixes B.
            CHECK(max_abs_diff(emb.expectation_in_b(emb.element(a)), a) < 1e-13);
        }
    }
    CHECK_THROWS(Embedding::make(BaseAlgebra::full(2), 3));
}

TEST_CASE("blockwise functional") {
    Rng rng(29);
    const std::size_t n = 2, d = 3;
    const auto m = ginibre(n * d, n * d, rng);
    const auto phi = Functional::matrix_unit(d, 1, 2);
    const auto out = apply_blockwise(phi, m, n, d);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) CHECK(out(i, j) == m(i * d + 1, j * d + 2));
    const auto tr = apply_blockwise(Functional::trace(d), m, n, d);
    CHECK(std::abs(tr.trace() - m.trace()) < 1e-13);
}
