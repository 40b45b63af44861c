#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace freegrass {

using cd = std::complex<double>;

class DimensionMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Dense complex matrix, row-major. Entries are finite on every explicit
// construction path; arithmetic results are not rechecked.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols);
    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cd> entries);
    ComplexMatrix(std::initializer_list<std::initializer_list<cd>> rows);

    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix zeros(std::size_t rows, std::size_t cols) { return {rows, cols}; }
    static ComplexMatrix unit(std::size_t rows, std::size_t cols, std::size_t i, std::size_t j);
    static ComplexMatrix diagonal(const std::vector<cd>& diag);
    static ComplexMatrix scalar(std::size_t n, cd value);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }
    bool square() const { return rows_ == cols_; }
    bool empty() const { return data_.empty(); }

    cd& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const cd& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    cd* data() { return data_.data(); }
    const cd* data() const { return data_.data(); }
    cd* row(std::size_t i) { return data_.data() + i * cols_; }
    const cd* row(std::size_t i) const { return data_.data() + i * cols_; }
    const std::vector<cd>& entries() const { return data_; }

    ComplexMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
    void set_block(std::size_t r0, std::size_t c0, const ComplexMatrix& b);
    void add_block(std::size_t r0, std::size_t c0, const ComplexMatrix& b, cd scale = 1.0);

    ComplexMatrix adjoint() const;
    ComplexMatrix transpose() const;
    ComplexMatrix conj() const;
    cd trace() const;
    double max_abs() const;
    double frobenius() const;
    bool all_finite() const;

    ComplexMatrix& operator+=(const ComplexMatrix& o);
    ComplexMatrix& operator-=(const ComplexMatrix& o);
    ComplexMatrix& operator*=(cd s);

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
    friend ComplexMatrix operator*(ComplexMatrix a, cd s) { return a *= s; }
    friend ComplexMatrix operator*(cd s, ComplexMatrix a) { return a *= s; }
    friend ComplexMatrix operator-(ComplexMatrix a) { return a *= -1.0; }
    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

    bool operator==(const ComplexMatrix& o) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cd> data_;
};

ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix direct_sum(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix block2x2(const ComplexMatrix& a, const ComplexMatrix& b,
                       const ComplexMatrix& c, const ComplexMatrix& d);
ComplexMatrix hstack(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix vstack(const ComplexMatrix& a, const ComplexMatrix& b);
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

// Sum of conj(a_ij) * b_ij, i.e. Tr(a* b).
cd frobenius_inner(const ComplexMatrix& a, const ComplexMatrix& b);

std::string to_string(const ComplexMatrix& m, int precision = 4);

}  // namespace freegrass
