#pragma once

#include <complex>
#include <cstddef>

namespace freegrass::kernels {

using cd = std::complex<double>;

enum class Isa { Scalar, Avx2 };

const char* isa_name(Isa isa);
bool isa_supported(Isa isa);
Isa active_isa();
// Returns false (and leaves the selection unchanged) if the host lacks the ISA.
bool select_isa(Isa isa);

// y += a * x
void caxpy(std::size_t n, cd a, const cd* x, cd* y);
// sum_i conj(x_i) * y_i
cd cdotc(std::size_t n, const cd* x, const cd* y);
// C (n x m) = A (n x k) * B (k x m), all row-major and non-aliasing.
void cgemm(std::size_t n, std::size_t k, std::size_t m, const cd* a, const cd* b, cd* c);

namespace scalar {
void caxpy(std::size_t n, cd a, const cd* x, cd* y);
cd cdotc(std::size_t n, const cd* x, const cd* y);
void cgemm(std::size_t n, std::size_t k, std::size_t m, const cd* a, const cd* b, cd* c);
}  // namespace scalar

namespace avx2 {
void caxpy(std::size_t n, cd a, const cd* x, cd* y);
cd cdotc(std::size_t n, const cd* x, const cd* y);
void cgemm(std::size_t n, std::size_t k, std::size_t m, const cd* a, const cd* b, cd* c);
}  // namespace avx2

}  // namespace freegrass::kernels
