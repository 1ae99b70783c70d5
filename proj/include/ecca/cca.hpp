#pragma once

#include <cstddef>
#include <set>
#include <vector>

#include "ecca/dataset.hpp"
#include "ecca/lasso.hpp"
#include "ecca/matrix.hpp"

namespace ecca {

/// K canonical pairs estimated in one shot. Columns of a and b are unit
/// 2-norm with the first significant entry positive; a pair whose mapped
/// x-side vector collapsed to zero is listed in degenerate_pairs and
/// reported with correlation 0.
struct CanonicalModel {
    std::size_t k_pairs = 0;
    Matrix a;                                // d x K
    Matrix b;                                // p x K
    std::vector<double> eigenvalues;         // descending, clamped at 0
    std::vector<double> train_correlations;  // signed Pearson per pair
    double lambda1 = 0.0;
    std::set<std::size_t> degenerate_pairs;
    // Sign applied to the mapped x-side vector by the first-entry-positive
    // rule (+1 kept, -1 flipped). correlation * b_orientation recovers the
    // statistic of the pair as mapped, (a, B^T a), whose orientation is
    // intrinsic; validation selection and test-set accounting use that.
    std::vector<double> b_orientation;
};

/// The d x d pencil (m, s) standing in for s^-1 m: eigenpairs of the
/// implicit matrix are the solutions of m a = lambda s a.
struct GammaPencil {
    Matrix m;  // (B_hat X)(B_hat X)^T / n
    Matrix s;  // Y Y^T / n
};

struct Projection {
    Matrix u;  // K x n, rows a_k^T Y
    Matrix v;  // K x n, rows b_k^T X
    std::vector<double> correlations;
    std::vector<bool> zero_variance;
};

// Generalized symmetric-definite eigenpairs of (m, s) via Cholesky
// reduction to a standard symmetric problem: columns unit-norm and
// sign-fixed, values descending with negatives clamped to 0.
struct PencilPairs {
    Matrix vectors;  // d x k
    std::vector<double> values;
};
PencilPairs pencil_eigenpairs(const Matrix& m, const Matrix& s, std::size_t k_pairs);

GammaPencil assemble_gamma(const LassoFit& fit, const Dataset& data);

// Maps pencil eigenvectors to canonical pairs: a_k from the pencil,
// b_k proportional to B_hat^T a_k, plus training correlations.
CanonicalModel solve_pairs(const GammaPencil& pencil, std::size_t k_pairs, const LassoFit& fit,
                           const Dataset& data);

// Full pipeline: center -> row-wise Lasso -> pencil assembly -> K pairs
// from a single eigensolve. Requires d < n and 1 <= k_pairs <= d.
CanonicalModel fit_ecca(const Dataset& data, const LassoConfig& config, std::size_t k_pairs,
                        std::size_t threads = 0);

// Canonical variables and their signed sample correlations on `data`,
// which must already be centered with the training means.
Projection project(const CanonicalModel& model, const Dataset& data);

// Signed Pearson correlation; writes true to *degenerate when either
// input has no variance (correlation reported 0).
double pearson(const double* u, const double* v, std::size_t n, bool* degenerate = nullptr);

// Correlations of the intrinsically oriented pairs (a_k, B^T a_k):
// projection correlations with each pair's sign flip undone.
std::vector<double> intrinsic_correlations(const CanonicalModel& model, const Projection& proj);

}  // namespace ecca
