#include "freegrass/rng.hpp"

#include <cmath>

namespace freegrass {

std::uint64_t Rng::mix(std::uint64_t x) {
    // splitmix64 finalizer
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

Rng Rng::derive(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
    std::uint64_t h = mix(seed);
    for (std::uint64_t p : path) h = mix(h ^ mix(p + 0x632be59bd9b4e019ULL));
    return Rng(h);
}

std::complex<double> Rng::complex_normal() {
    const double s = std::sqrt(0.5);
    const double re = normal();
    const double im = normal();
    return {s * re, s * im};
}

std::complex<double> Rng::unit_disk() {
    const double r = std::sqrt(uniform());
    const double t = uniform(0.0, 2.0 * M_PI);
    return std::polar(r, t);
}

}  // namespace freegrass
