#include "ecca/matrix.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace ecca {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {
    if (!std::isfinite(fill)) {
        throw ValueError("matrix: non-finite fill value");
    }
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_) {
        throw DimensionError("matrix: entries length " + std::to_string(data_.size()) +
                             " does not match " + std::to_string(rows_) + "x" +
                             std::to_string(cols_));
    }
    ensure_finite();
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) {
            throw DimensionError("matrix literal: ragged rows");
        }
        data_.insert(data_.end(), r.begin(), r.end());
    }
    ensure_finite();
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

void Matrix::ensure_finite(const char* context) const {
    for (std::size_t i = 0; i < data_.size(); ++i) {
        if (!std::isfinite(data_[i])) {
            throw ValueError(std::string(context) + ": non-finite entry at flat index " +
                             std::to_string(i));
        }
    }
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) {
        throw DimensionError("matmul: " + std::to_string(a.rows()) + "x" +
                             std::to_string(a.cols()) + " * " + std::to_string(b.rows()) + "x" +
                             std::to_string(b.cols()));
    }
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const double* arow = a.row(i);
        double* crow = c.row(i);
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = arow[k];
            if (aik == 0.0) continue;
            const double* brow = b.row(k);
            for (std::size_t j = 0; j < b.cols(); ++j) {
                crow[j] += aik * brow[j];
            }
        }
    }
    return c;
}

Matrix transpose(const Matrix& m) {
    Matrix t(m.cols(), m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            t(j, i) = m(i, j);
        }
    }
    return t;
}

std::vector<double> matvec(const Matrix& m, const std::vector<double>& x) {
    if (x.size() != m.cols()) {
        throw DimensionError("matvec: vector length does not match matrix cols");
    }
    std::vector<double> y(m.rows(), 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        y[i] = dot(m.row(i), x.data(), m.cols());
    }
    return y;
}

std::vector<double> matvec_transposed(const Matrix& m, const std::vector<double>& x) {
    if (x.size() != m.rows()) {
        throw DimensionError("matvec_transposed: vector length does not match matrix rows");
    }
    std::vector<double> y(m.cols(), 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        const double xi = x[i];
        if (xi == 0.0) continue;
        const double* row = m.row(i);
        for (std::size_t j = 0; j < m.cols(); ++j) {
            y[j] += xi * row[j];
        }
    }
    return y;
}

double dot(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw DimensionError("dot: length mismatch");
    return dot(a.data(), b.data(), a.size());
}

double norm2(const std::vector<double>& v) {
    return std::sqrt(dot(v.data(), v.data(), v.size()));
}

double frobenius_norm(const Matrix& m) {
    double s = 0.0;
    for (double v : m.data()) s += v * v;
    return std::sqrt(s);
}

double max_abs(const Matrix& m) {
    double s = 0.0;
    for (double v : m.data()) s = std::max(s, std::fabs(v));
    return s;
}

}  // namespace ecca
