#pragma once

#include <cstddef>
#include <vector>

#include "ecca/cca.hpp"
#include "ecca/dataset.hpp"
#include "ecca/matrix.hpp"

namespace ecca {

/// Ridge terms added to the sample Gram matrices so they stay invertible
/// when p or d reaches the sample size.
struct NuggetConfig {
    double mu_x = 0.0;
    double mu_y = 0.0;

    void validate() const;
};

// Sample CCA from the covariance pencil; requires p < n and d < n. A
// singular Gram matrix raises an error pointing at nugget_cca.
CanonicalModel classical_cca(const Dataset& data, std::size_t k_pairs);

// CCA on (Sigma_XX + mu_x I, Sigma_YY + mu_y I); p may exceed n. The
// x-side solve is a p x p SPD factorization, O(p^3).
CanonicalModel nugget_cca(const Dataset& data, const NuggetConfig& config, std::size_t k_pairs);

struct PcaResult {
    Matrix components;             // num_components x d, orthonormal rows
    Matrix reduced;                // num_components x n (centered scores)
    std::vector<double> variances; // per-component, descending
    std::vector<double> y_means;   // row means removed before the eigensolve
};

// Top principal directions of the rows of y (centered internally).
PcaResult pca_reduce(const Matrix& y, std::size_t num_components);

// Half of d rounded up: the default component count for pre-reduction.
std::size_t default_pca_components(std::size_t d);

}  // namespace ecca
