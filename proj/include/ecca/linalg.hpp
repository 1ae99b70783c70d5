#pragma once

#include <cstdint>
#include <vector>

#include "ecca/matrix.hpp"

namespace ecca {

/// Eigendecomposition of a symmetric matrix: values sorted descending,
/// vectors stored as columns of an orthonormal matrix, each column's sign
/// fixed so its first entry of magnitude > 1e-12 is positive.
struct SymEigen {
    std::vector<double> values;
    Matrix vectors;
};

// scale * M * M^T with the upper triangle mirrored onto the lower so the
// result is bitwise symmetric.
Matrix gram(const Matrix& m, double scale);

// Lower-triangular L with S = L L^T. Rejects inputs that are not symmetric
// to 1e-10 relative; throws NotPositiveDefiniteError (naming the pivot)
// when a pivot falls at or below 1e-12 times the largest diagonal entry.
Matrix cholesky(const Matrix& s);

// Cyclic Jacobi rotations; deterministic for identical input bits.
// Dimension capped at 512; throws NumericError after 100 sweeps without
// convergence.
SymEigen sym_eigen(const Matrix& s);

// Solves S Z = rhs for symmetric positive definite S via Cholesky.
Matrix solve_spd(const Matrix& s, const Matrix& rhs);

// Triangular solves used by the Cholesky-based reductions.
// solve_lower:            L X = rhs
// solve_lower_transposed: L^T X = rhs
Matrix solve_lower(const Matrix& l, const Matrix& rhs);
Matrix solve_lower_transposed(const Matrix& l, const Matrix& rhs);
std::vector<double> solve_lower_transposed(const Matrix& l, const std::vector<double>& rhs);

// Number of sym_eigen invocations since process start. Test hook for the
// one-eigensolve-per-fit contract.
std::uint64_t sym_eigen_call_count();

// Sign convention shared by every canonical-vector producer: flip v so its
// first entry with |entry| > 1e-12 is positive. Zero vectors pass through.
void fix_sign(double* v, std::size_t n);
void fix_sign(std::vector<double>& v);
// Applies the rule to each column of m.
void fix_column_signs(Matrix& m);

}  // namespace ecca
