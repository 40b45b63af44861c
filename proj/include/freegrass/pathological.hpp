#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "freegrass/algebra.hpp"
#include "freegrass/ncpoly.hpp"

namespace freegrass {

class SearchFailed : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// One antisymmetrized block g_j of the unbounded construction.
struct PathologicalStage {
    std::size_t index = 1;          // j
    std::size_t vanish_level = 1;   // N_j: g_j vanishes at every level k <= N_j
    std::size_t witness_level = 2;  // N_{j+1}: first level where g_j is not identically zero
    std::size_t p = 2;              // N_j^2 + 1 monomials
    std::size_t monomial_degree = 1;
    std::vector<Word> monomials;
    double lambda = 1.0;
    double radius = 1.0;            // 1/j
    double witness_norm = 0.0;      // norm of g_1 + ... + g_j at the witness
    MatOverB witness;
};

struct PathologicalResult {
    BaseAlgebra algebra;
    std::vector<PathologicalStage> stages;
};

// First p words of length d in lexicographic order.
std::vector<Word> first_words(const BaseAlgebra& alg, std::size_t p, std::size_t d);

// Unscaled g_j at a point, via the subset recursion.
ComplexMatrix evaluate_stage(const PathologicalStage& stage, const MatOverB& beta);
// lambda_1 g_1 + ... + lambda_j g_j at a point.
ComplexMatrix evaluate_partial_sum(const PathologicalResult& r, std::size_t j, const MatOverB& beta);

// Builds stages 1..depth with N_1 = 1, p_j = N_j^2 + 1 and N_{j+1} the first
// level where s_{p_j} can be nonzero (2 N_{j+1} > p_j). lambda_j is found by
// doubling until the partial sum exceeds j at a sampled point of norm < 1/j.
PathologicalResult build_pathological(const BaseAlgebra& alg, std::size_t depth, std::uint64_t seed,
                                      std::size_t samples = 200);

}  // namespace freegrass
