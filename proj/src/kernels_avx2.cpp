#include "freegrass/kernels.hpp"

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>
#define FG_TARGET_AVX2 __attribute__((target("avx2,fma")))
#define FG_HAVE_X86 1
#else
#define FG_TARGET_AVX2
#define FG_HAVE_X86 0
#endif

namespace freegrass::kernels::avx2 {

#if FG_HAVE_X86

// Two complex doubles per 256-bit register, interleaved (re, im, re, im).

FG_TARGET_AVX2 void caxpy(std::size_t n, cd a, const cd* x, cd* y) {
    const __m256d ar = _mm256_set1_pd(a.real());
    const __m256d ai = _mm256_set1_pd(a.imag());
    const double* xp = reinterpret_cast<const double*>(x);
    double* yp = reinterpret_cast<double*>(y);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d x0 = _mm256_loadu_pd(xp + 2 * i);
        __m256d x1 = _mm256_loadu_pd(xp + 2 * i + 4);
        __m256d s0 = _mm256_permute_pd(x0, 0b0101);
        __m256d s1 = _mm256_permute_pd(x1, 0b0101);
        __m256d p0 = _mm256_fmaddsub_pd(ar, x0, _mm256_mul_pd(ai, s0));
        __m256d p1 = _mm256_fmaddsub_pd(ar, x1, _mm256_mul_pd(ai, s1));
        _mm256_storeu_pd(yp + 2 * i, _mm256_add_pd(_mm256_loadu_pd(yp + 2 * i), p0));
        _mm256_storeu_pd(yp + 2 * i + 4, _mm256_add_pd(_mm256_loadu_pd(yp + 2 * i + 4), p1));
    }
    for (; i + 2 <= n; i += 2) {
        __m256d x0 = _mm256_loadu_pd(xp + 2 * i);
        __m256d s0 = _mm256_permute_pd(x0, 0b0101);
        __m256d p0 = _mm256_fmaddsub_pd(ar, x0, _mm256_mul_pd(ai, s0));
        _mm256_storeu_pd(yp + 2 * i, _mm256_add_pd(_mm256_loadu_pd(yp + 2 * i), p0));
    }
    if (i < n) scalar::caxpy(n - i, a, x + i, y + i);
}

FG_TARGET_AVX2 cd cdotc(std::size_t n, const cd* x, const cd* y) {
    const double* xp = reinterpret_cast<const double*>(x);
    const double* yp = reinterpret_cast<const double*>(y);
    // acc_d collects (xr*yr, xi*yi); acc_c collects (xr*yi, xi*yr).
    __m256d acc_d0 = _mm256_setzero_pd(), acc_d1 = _mm256_setzero_pd();
    __m256d acc_c0 = _mm256_setzero_pd(), acc_c1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d x0 = _mm256_loadu_pd(xp + 2 * i);
        __m256d x1 = _mm256_loadu_pd(xp + 2 * i + 4);
        __m256d y0 = _mm256_loadu_pd(yp + 2 * i);
        __m256d y1 = _mm256_loadu_pd(yp + 2 * i + 4);
        acc_d0 = _mm256_fmadd_pd(x0, y0, acc_d0);
        acc_d1 = _mm256_fmadd_pd(x1, y1, acc_d1);
        acc_c0 = _mm256_fmadd_pd(x0, _mm256_permute_pd(y0, 0b0101), acc_c0);
        acc_c1 = _mm256_fmadd_pd(x1, _mm256_permute_pd(y1, 0b0101), acc_c1);
    }
    for (; i + 2 <= n; i += 2) {
        __m256d x0 = _mm256_loadu_pd(xp + 2 * i);
        __m256d y0 = _mm256_loadu_pd(yp + 2 * i);
        acc_d0 = _mm256_fmadd_pd(x0, y0, acc_d0);
        acc_c0 = _mm256_fmadd_pd(x0, _mm256_permute_pd(y0, 0b0101), acc_c0);
    }
    alignas(32) double d[4], c[4];
    _mm256_store_pd(d, _mm256_add_pd(acc_d0, acc_d1));
    _mm256_store_pd(c, _mm256_add_pd(acc_c0, acc_c1));
    double re = d[0] + d[1] + d[2] + d[3];
    double im = (c[0] - c[1]) + (c[2] - c[3]);
    if (i < n) {
        cd tail = scalar::cdotc(n - i, x + i, y + i);
        re += tail.real();
        im += tail.imag();
    }
    return {re, im};
}

FG_TARGET_AVX2 void cgemm(std::size_t n, std::size_t k, std::size_t m, const cd* a, const cd* b,
                          cd* c) {
    for (std::size_t i = 0; i < n; ++i) {
        cd* crow = c + i * m;
        for (std::size_t j = 0; j < m; ++j) crow[j] = 0.0;
        for (std::size_t p = 0; p < k; ++p) {
            const cd aip = a[i * k + p];
            if (aip == cd(0.0)) continue;
            caxpy(m, aip, b + p * m, crow);
        }
    }
}

#else

void caxpy(std::size_t n, cd a, const cd* x, cd* y) { scalar::caxpy(n, a, x, y); }
cd cdotc(std::size_t n, const cd* x, const cd* y) { return scalar::cdotc(n, x, y); }
void cgemm(std::size_t n, std::size_t k, std::size_t m, const cd* a, const cd* b, cd* c) {
    scalar::cgemm(n, k, m, a, b, c);
}

#endif

}  // namespace freegrass::kernels::avx2
