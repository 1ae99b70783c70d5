#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ecca/baselines.hpp"
#include "ecca/dataset.hpp"
#include "ecca/lasso.hpp"
#include "ecca/tuning.hpp"

namespace ecca {

/// The fitting pipeline whose leading canonical correlation is tested.
struct FitProcedure {
    enum class Kind { EccaTuned, EccaFixed, Classical, Nugget };
    Kind kind = Kind::EccaTuned;

    double lambda1 = 0.0;             // EccaFixed
    std::vector<double> lambda_grid;  // EccaTuned; empty -> default grid
    SplitSpec split{5, 1, 0, true};   // EccaTuned internal validation split
    NuggetConfig nugget;
    LassoConfig lasso;

    // When false, lambda1 is tuned once on the observed data and reused
    // for every permutation; when true the whole pipeline (tuning
    // included) is re-run per permutation.
    bool retune_per_permutation = true;
};

struct PermTestResult {
    double observed = 0.0;
    std::vector<double> null_sample;
    double p_value = 1.0;
    std::size_t permutations = 0;
    std::uint64_t seed = 0;
    std::size_t degenerate_count = 0;  // null draws from degenerate fits (recorded as 0)
    double chosen_lambda = 0.0;        // EccaTuned: lambda selected on the observed data
};

// Breaks the sample pairing by permuting the columns of x while y stays
// fixed; the first-pair training correlation of the re-run procedure forms
// the null sample. p_value = (1 + #{null >= observed}) / (P + 1).
// Permutation i uses substream_seed(seed, i + 1), so results are
// reproducible bit-for-bit at any thread count.
PermTestResult perm_test(const Dataset& data, const FitProcedure& procedure,
                         std::size_t permutations, std::uint64_t seed, std::size_t threads = 0);

}  // namespace ecca
