#pragma once

#include <cstddef>
#include <vector>

#include "ecca/matrix.hpp"

namespace ecca {

/// Paired sample matrices with samples as columns: x is p x n, y is d x n.
/// Row means removed by center() are kept so held-out data can be shifted
/// by the training means.
struct Dataset {
    Matrix x;
    Matrix y;
    std::vector<double> x_means;
    std::vector<double> y_means;
    bool centered = false;

    Dataset() = default;
    Dataset(Matrix x_in, Matrix y_in);

    std::size_t n_samples() const { return x.cols(); }
    std::size_t x_dim() const { return x.rows(); }
    std::size_t y_dim() const { return y.rows(); }
};

// Removes each row's mean from x and y, recording the means. Requires
// n >= 2.
Dataset center(const Dataset& data);

// Shifts by externally supplied means (e.g. training means applied to a
// validation set). Marks the result centered without re-estimating means.
Dataset center_with(const Dataset& data, const std::vector<double>& x_means,
                    const std::vector<double>& y_means);

// New dataset holding the selected sample columns, in the given order.
// Means are dropped; the result is marked uncentered.
Dataset select_columns(const Dataset& data, const std::vector<std::size_t>& indices);

}  // namespace ecca
