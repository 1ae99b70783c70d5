#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "ecca/dataset.hpp"
#include "ecca/matrix.hpp"

namespace ecca {

/// Settings for one l1-penalized least-squares fit. The objective is
/// sum_i (y_i - beta^T X_i)^2 + lambda1 * ||beta||_1 — sum of squares, no
/// 1/(2n) factor — so lambda1 scales like sqrt(n log p).
struct LassoConfig {
    double lambda1 = 0.0;
    std::size_t max_iters = 10000;  // full coordinate sweeps
    double tol = 1e-8;              // max relative coefficient change per sweep
    std::optional<std::vector<double>> warm_start;

    void validate() const;
};

struct LassoRowResult {
    std::vector<double> beta;
    std::size_t iters = 0;
    bool converged = false;
    double objective = 0.0;
};

/// Row-wise sparse coefficient estimate: row k of b_hat regresses response
/// row k of Y on all rows of X.
struct LassoFit {
    Matrix b_hat;                                  // d x p
    std::vector<std::vector<std::size_t>> supports;
    double lambda1 = 0.0;
    std::vector<std::size_t> iters;
    std::vector<bool> converged;
    std::vector<double> objective;
};

// Cyclic coordinate descent for one response row. Features are visited in
// index order; a feature row with zero norm keeps a zero coefficient.
// Hitting max_iters returns the best iterate with converged=false.
LassoRowResult fit_row(const Matrix& x, const std::vector<double>& y_row,
                       const LassoConfig& config);

// Fits all d response rows independently (optionally in parallel) and
// assembles them in index order; the result does not depend on the
// schedule. warm_b, when given, provides per-row warm starts (d x p).
LassoFit fit_all(const Dataset& data, const LassoConfig& config, const Matrix* warm_b = nullptr,
                 std::size_t threads = 0);

// Max subgradient-optimality violation per row: for active coefficients
// |2 x_j^T r - lambda1 * sign(beta_j)|, for zero coefficients
// max(0, |2 x_j^T r| - lambda1).
std::vector<double> kkt_check(const LassoFit& fit, const Dataset& data);

// Exact full-shrinkage threshold: beta = 0 is optimal iff
// lambda1 >= 2 * max_j |x_j^T y|.
double full_shrinkage_lambda(const Matrix& x, const std::vector<double>& y_row);

}  // namespace ecca
