#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

#include "ecca/errors.hpp"

namespace ecca {

/// Dense row-major matrix of doubles. Entries are required to be finite:
/// construction from data rejects NaN/Inf so downstream tolerances can
/// assume clean arithmetic.
class Matrix {
  public:
    Matrix() = default;

    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);

    // Takes ownership of `entries` (row-major, length rows*cols).
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

    // Convenience for small literals in tests: {{1,2},{3,4}}.
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    static Matrix identity(std::size_t n);

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    double* row(std::size_t i) { return data_.data() + i * cols_; }
    const double* row(std::size_t i) const { return data_.data() + i * cols_; }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    bool same_shape(const Matrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }

    // Throws ValueError if any entry is NaN or infinite.
    void ensure_finite(const char* context = "matrix") const;

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Matrix matmul(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& m);

// y = M * x for a vector x of length m.cols().
std::vector<double> matvec(const Matrix& m, const std::vector<double>& x);
// y = M^T * x for a vector x of length m.rows().
std::vector<double> matvec_transposed(const Matrix& m, const std::vector<double>& x);

double dot(const double* a, const double* b, std::size_t n);
double dot(const std::vector<double>& a, const std::vector<double>& b);
double norm2(const std::vector<double>& v);
double frobenius_norm(const Matrix& m);
double max_abs(const Matrix& m);

}  // namespace ecca
