#pragma once

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace freegrass {

// Seeded stream. Independent streams are derived from (seed, task indices)
// so parallel consumers never share state.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(mix(seed)) {}

    static Rng derive(std::uint64_t seed, std::initializer_list<std::uint64_t> path);

    double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }
    double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }
    // Standard complex normal: E|z|^2 = 1.
    std::complex<double> complex_normal();
    std::complex<double> unit_disk();

    std::mt19937_64& engine() { return engine_; }

    static std::uint64_t mix(std::uint64_t x);

private:
    std::mt19937_64 engine_;
};

}  // namespace freegrass
