#include "freegrass/kernels.hpp"

#include <atomic>

namespace freegrass::kernels {

namespace scalar {

void caxpy(std::size_t n, cd a, const cd* x, cd* y) {
    const double ar = a.real(), ai = a.imag();
    for (std::size_t i = 0; i < n; ++i) {
        const double xr = x[i].real(), xi = x[i].imag();
        y[i] = cd(y[i].real() + ar * xr - ai * xi, y[i].imag() + ar * xi + ai * xr);
    }
}

cd cdotc(std::size_t n, const cd* x, const cd* y) {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double xr = x[i].real(), xi = x[i].imag();
        const double yr = y[i].real(), yi = y[i].imag();
        re += xr * yr + xi * yi;
        im += xr * yi - xi * yr;
    }
    return {re, im};
}

void cgemm(std::size_t n, std::size_t k, std::size_t m, const cd* a, const cd* b, cd* c) {
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

}  // namespace scalar

namespace {

struct Table {
    void (*caxpy)(std::size_t, cd, const cd*, cd*);
    cd (*cdotc)(std::size_t, const cd*, const cd*);
    void (*cgemm)(std::size_t, std::size_t, std::size_t, const cd*, const cd*, cd*);
};

constexpr Table kScalar{scalar::caxpy, scalar::cdotc, scalar::cgemm};
constexpr Table kAvx2{avx2::caxpy, avx2::cdotc, avx2::cgemm};

bool host_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

std::atomic<Isa>& current() {
    static std::atomic<Isa> isa{host_has_avx2() ? Isa::Avx2 : Isa::Scalar};
    return isa;
}

const Table& table() {
    return current().load(std::memory_order_relaxed) == Isa::Avx2 ? kAvx2 : kScalar;
}

}  // namespace

const char* isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

bool isa_supported(Isa isa) { return isa == Isa::Scalar || host_has_avx2(); }

Isa active_isa() { return current().load(std::memory_order_relaxed); }

bool select_isa(Isa isa) {
    if (!isa_supported(isa)) return false;
    current().store(isa, std::memory_order_relaxed);
    return true;
}

void caxpy(std::size_t n, cd a, const cd* x, cd* y) { table().caxpy(n, a, x, y); }
cd cdotc(std::size_t n, const cd* x, const cd* y) { return table().cdotc(n, x, y); }
void cgemm(std::size_t n, std::size_t k, std::size_t m, const cd* a, const cd* b, cd* c) {
    table().cgemm(n, k, m, a, b, c);
}

}  // namespace freegrass::kernels
