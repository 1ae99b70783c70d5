#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "ecca/cca.hpp"
#include "ecca/dataset.hpp"
#include "ecca/lasso.hpp"

namespace ecca {

/// Deterministic sample split by column index. ratio_train : ratio_holdout
/// fixes the proportion (5:1, 44:5, ...); with shuffle the assignment is a
/// seeded permutation, otherwise leading columns go to the train part.
struct SplitSpec {
    std::size_t ratio_train = 5;
    std::size_t ratio_holdout = 1;
    std::uint64_t seed = 0;
    bool shuffle = false;
};

std::pair<Dataset, Dataset> split(const Dataset& data, const SplitSpec& spec);

enum class TuneCriterion {
    FirstPair,  // validation correlation of the leading pair
    SumPairs,   // sum of validation correlations over all pairs
};

struct TuneOptions {
    LassoConfig lasso;  // lambda1 is taken from the grid
    // Grid points are evaluated independently (cold starts) so that the
    // recorded model for the chosen lambda IS the independent fit at that
    // lambda; with p > n the warm-started path can land on a different
    // minimizer than a fresh fit would.
    bool warm_start = false;
    TuneCriterion criterion = TuneCriterion::FirstPair;
    std::size_t threads = 0;
};

struct TuneResult {
    std::vector<double> lambda_grid;       // ascending
    std::vector<double> val_correlations;  // aligned with lambda_grid
    std::vector<bool> degenerate;          // grid points with zero b_hat
    std::size_t chosen_index = 0;
    double chosen_lambda = 0.0;
    CanonicalModel model;  // fit on the full training data at chosen_lambda
};

// Signed validation correlation per grid point; argmax wins, exact ties go
// to the smallest lambda, degenerate points never win. Throws when every
// grid point fully shrinks the coefficients.
TuneResult tune_lambda(const Dataset& train, const Dataset& val,
                       const std::vector<double>& grid, std::size_t k_pairs,
                       const TuneOptions& options = {});

// Six candidates c * sqrt(n log p), c in {0.01, 0.03, 0.1, 0.3, 1, 3},
// ascending. p is clamped below at 2 to keep the grid positive.
std::vector<double> default_lambda_grid(std::size_t n, std::size_t p);

}  // namespace ecca
