#include "ecca/dataset.hpp"

#include <string>
#include <utility>

#include "ecca/errors.hpp"

namespace ecca {

Dataset::Dataset(Matrix x_in, Matrix y_in) : x(std::move(x_in)), y(std::move(y_in)) {
    if (x.cols() != y.cols()) {
        throw DimensionError("dataset: x has " + std::to_string(x.cols()) + " samples, y has " +
                             std::to_string(y.cols()));
    }
}

namespace {

std::vector<double> center_rows(Matrix& m) {
    std::vector<double> means(m.rows(), 0.0);
    const double inv_n = 1.0 / static_cast<double>(m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        double* row = m.row(i);
        double sum = 0.0;
        for (std::size_t j = 0; j < m.cols(); ++j) sum += row[j];
        const double mean = sum * inv_n;
        for (std::size_t j = 0; j < m.cols(); ++j) row[j] -= mean;
        means[i] = mean;
    }
    return means;
}

}  // namespace

Dataset center(const Dataset& data) {
    if (data.n_samples() < 2) {
        throw ValueError("center: need at least 2 samples, got " +
                         std::to_string(data.n_samples()));
    }
    Dataset out = data;
    out.x_means = center_rows(out.x);
    out.y_means = center_rows(out.y);
    out.centered = true;
    return out;
}

Dataset center_with(const Dataset& data, const std::vector<double>& x_means,
                    const std::vector<double>& y_means) {
    if (x_means.size() != data.x_dim() || y_means.size() != data.y_dim()) {
        throw DimensionError("center_with: means length does not match dataset dims");
    }
    Dataset out = data;
    for (std::size_t i = 0; i < out.x.rows(); ++i) {
        double* row = out.x.row(i);
        for (std::size_t j = 0; j < out.x.cols(); ++j) row[j] -= x_means[i];
    }
    for (std::size_t i = 0; i < out.y.rows(); ++i) {
        double* row = out.y.row(i);
        for (std::size_t j = 0; j < out.y.cols(); ++j) row[j] -= y_means[i];
    }
    out.x_means = x_means;
    out.y_means = y_means;
    out.centered = true;
    return out;
}

Dataset select_columns(const Dataset& data, const std::vector<std::size_t>& indices) {
    Matrix x(data.x_dim(), indices.size());
    Matrix y(data.y_dim(), indices.size());
    for (std::size_t c = 0; c < indices.size(); ++c) {
        const std::size_t src = indices[c];
        if (src >= data.n_samples()) {
            throw DimensionError("select_columns: index out of range");
        }
        for (std::size_t i = 0; i < x.rows(); ++i) x(i, c) = data.x(i, src);
        for (std::size_t i = 0; i < y.rows(); ++i) y(i, c) = data.y(i, src);
    }
    Dataset out;
    out.x = std::move(x);
    out.y = std::move(y);
    out.centered = false;
    return out;
}

}  // namespace ecca
