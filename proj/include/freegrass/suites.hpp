#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "freegrass/algebra.hpp"
#include "freegrass/freeprob.hpp"
#include "freegrass/ncpoly.hpp"
#include "freegrass/report.hpp"

namespace freegrass {

// Shared knobs. Zero means "suite default".
struct SuiteOptions {
    std::vector<BaseAlgebra> algebras;  // empty: suite default list
    std::uint64_t seed = 1;
    std::size_t instances = 0;
    std::size_t E = 0;  // size d of E = M_d
    std::size_t max_degree = 0;
    Tolerances tol;

    nlohmann::json to_json() const;
};

Report run_bialgebra(const SuiteOptions& o);
Report run_resolvent(const SuiteOptions& o);
Report run_involution(const SuiteOptions& o);
Report run_positivity(const SuiteOptions& o);
Report run_grassmann_identities(const SuiteOptions& o);

// Names accepted by `verify`.
std::vector<std::string> verify_suite_names();
// Throws std::invalid_argument on an unknown name.
Report run_verify(const std::string& suite, const SuiteOptions& o);

struct SphereOptions {
    std::size_t points = 512;
    std::size_t coarse_points = 64;
    double tol = 1e-8;
};
Report run_sphere(const SphereOptions& o);

// Extraction of random NCPolys (or of `poly` when given), composition of
// random pairs, and the geometric truncation bound. A zero count skips a part.
struct SeriesOptions {
    SuiteOptions base;
    std::optional<NCPoly> poly;
    std::size_t extraction_degree = 6;
    std::size_t composition_pairs = 20;
    std::size_t composition_degree = 4;
    std::size_t truncation_max = 8;
};
Report run_series(const SeriesOptions& o);

struct PathologicalOptions {
    BaseAlgebra algebra = BaseAlgebra::diagonal(2);
    std::size_t depth = 2;
    std::uint64_t seed = 1;
    std::size_t vanish_points = 50;
    double tol = 1e-12;
};
// Also fills `table` with one row per stage when given.
Report run_pathological(const PathologicalOptions& o, nlohmann::json* table = nullptr);

Report run_mc_orthogonality(const McConfig& cfg, std::size_t max_len, std::ostream* csv);

// f is the polynomial to recover; defaults to z(phi_11) z(phi_22) for M_2
// and z(phi_1) z(phi_2) otherwise.
Report run_mc_coefficients(const McConfig& cfg, const std::optional<NCPoly>& f, std::size_t max_degree,
                           std::ostream* csv);

struct RTransformOptions {
    std::size_t max_degree = 5;
    double point_mass = 0.7;
    double semicircle_radius = 0.05;
    std::uint64_t seed = 1;
    Tolerances tol;
};
Report run_rtransform(const RTransformOptions& o, std::ostream* csv);

// Default f for coefficient recovery over alg.
NCPoly default_coefficient_poly(const BaseAlgebra& alg);

}  // namespace freegrass
