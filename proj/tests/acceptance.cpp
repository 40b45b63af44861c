#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "freegrass/algebra.hpp"
#include "freegrass/freeprob.hpp"
#include "freegrass/parallel.hpp"
#include "freegrass/report.hpp"
#include "freegrass/suites.hpp"

using namespace freegrass;

namespace {

struct Criterion {
    int id;
    std::string name;
    double budget_s;  // 0: no runtime limit
    std::function<std::vector<Report>()> run;
};

McConfig mc(const BaseAlgebra& alg, std::uint64_t seed) {
    McConfig c;
    c.alg = alg;
    c.ladder = {20, 50, 100, 150};
    c.samples = 40;
    c.seed = seed;
    return c;
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "bialgebra", 30.0, [] { return std::vector{run_bialgebra({})}; }},
        {2, "resolvent", 60.0, [] { return std::vector{run_resolvent({})}; }},
        {3, "involution", 0.0,
         [] { return std::vector{run_involution({}), run_grassmann_identities({})}; }},
        {4, "positivity", 0.0, [] { return std::vector{run_positivity({})}; }},
        {5, "series", 0.0, [] { return std::vector{run_series({})}; }},
        {6, "haar-orthogonality", 600.0,
         [] {
             // Budget is the single-threaded one.
             const std::size_t workers = worker_count();
             set_worker_count(1);
             std::vector<Report> out{run_mc_orthogonality(mc(BaseAlgebra::full(2), 1), 3, nullptr),
                                     run_mc_orthogonality(mc(BaseAlgebra::diagonal(2), 1), 3, nullptr)};
             set_worker_count(workers);
             return out;
         }},
        {7, "coefficient-recovery", 0.0,
         [] { return std::vector{run_mc_coefficients(mc(BaseAlgebra::full(2), 1), std::nullopt, 2, nullptr)}; }},
        {8, "r-transform", 0.0, [] { return std::vector{run_rtransform({}, nullptr)}; }},
        {9, "sphere-duality", 0.0, [] { return std::vector{run_sphere({})}; }},
        {10, "pathological", 0.0, [] { return std::vector{run_pathological({})}; }},
    };

    int failed = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        std::vector<Report> reports;
        std::string error;
        try {
            reports = c.run();
        } catch (const std::exception& e) {
            error = e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

        bool ok = error.empty();
        for (const auto& r : reports) ok = ok && r.pass();
        const bool in_time = c.budget_s == 0.0 || secs < c.budget_s;
        ok = ok && in_time;
        if (!ok) ++failed;

        std::printf("criterion %2d %-22s %s  %.2f s", c.id, c.name.c_str(), ok ? "PASS" : "FAIL", secs);
        if (c.budget_s > 0.0) std::printf(" (limit %.0f s)", c.budget_s);
        std::printf("\n");
        if (!error.empty()) std::printf("    error: %s\n", error.c_str());
        for (const auto& r : reports)
            for (const auto& chk : r.checks())
                if (!chk.pass)
                    std::printf("    %s/%s: %.3g %s %.3g\n", r.suite().c_str(), chk.name.c_str(), chk.value,
                                chk.relation.c_str(), chk.bound);
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", int(criteria.size()) - failed, criteria.size());
    return failed ? 1 : 0;
}
