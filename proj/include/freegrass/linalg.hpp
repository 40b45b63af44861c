#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "freegrass/matrix.hpp"
#include "freegrass/rng.hpp"

namespace freegrass {

class SingularMatrix : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NotHermitian : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr double kSingularThreshold = 1e-12;

// LU with partial pivoting, P A = L U packed in one matrix.
struct LuFactors {
    ComplexMatrix lu;
    std::vector<std::size_t> perm;
    int sign = 1;

    ComplexMatrix solve(const ComplexMatrix& rhs) const;
    ComplexMatrix inverse() const;
    cd determinant() const;
};

// Empty when a pivot falls below kSingularThreshold * max|a_ij|.
std::optional<LuFactors> lu_factor(const ComplexMatrix& a);

ComplexMatrix inverse(const ComplexMatrix& a);
std::optional<ComplexMatrix> try_inverse(const ComplexMatrix& a);
bool is_invertible(const ComplexMatrix& a);
ComplexMatrix solve(const ComplexMatrix& a, const ComplexMatrix& rhs);

double spectral_norm(const ComplexMatrix& a);
double hermitian_min_eigenvalue(const ComplexMatrix& a);
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& a);
bool is_hermitian(const ComplexMatrix& a, double tol = 1e-10);
bool is_unitary(const ComplexMatrix& a, double tol = 1e-10);

// Least-squares solution of x t = y for x with full column rank (normal equations).
ComplexMatrix least_squares(const ComplexMatrix& x, const ComplexMatrix& y);

ComplexMatrix ginibre(std::size_t rows, std::size_t cols, Rng& rng);
ComplexMatrix haar_unitary(std::size_t n, Rng& rng);

}  // namespace freegrass
