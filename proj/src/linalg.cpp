#include "ecca/linalg.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <string>

#include "ecca/errors.hpp"

namespace ecca {

namespace {

std::atomic<std::uint64_t> g_sym_eigen_calls{0};

constexpr double kSymmetryTol = 1e-10;
constexpr double kSignTol = 1e-12;

void require_symmetric(const Matrix& s, const char* op) {
    if (s.rows() != s.cols()) {
        throw DimensionError(std::string(op) + ": matrix is " + std::to_string(s.rows()) + "x" +
                             std::to_string(s.cols()) + ", expected square");
    }
    const double scale = max_abs(s);
    const double tol = kSymmetryTol * std::max(scale, 1e-300);
    for (std::size_t i = 0; i < s.rows(); ++i) {
        for (std::size_t j = i + 1; j < s.cols(); ++j) {
            if (std::fabs(s(i, j) - s(j, i)) > tol) {
                throw ValueError(std::string(op) + ": input not symmetric at (" +
                                 std::to_string(i) + "," + std::to_string(j) + ")");
            }
        }
    }
}

}  // namespace

Matrix gram(const Matrix& m, double scale) {
    const std::size_t r = m.rows();
    Matrix g(r, r);
    for (std::size_t i = 0; i < r; ++i) {
        const double* ri = m.row(i);
        for (std::size_t j = i; j < r; ++j) {
            const double v = dot(ri, m.row(j), m.cols()) * scale;
            g(i, j) = v;
            g(j, i) = v;
        }
    }
    return g;
}

Matrix cholesky(const Matrix& s) {
    require_symmetric(s, "cholesky");
    const std::size_t n = s.rows();
    double max_diag = 0.0;
    for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, s(i, i));
    const double pivot_floor = 1e-12 * max_diag;

    Matrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double diag = s(j, j);
        for (std::size_t k = 0; k < j; ++k) diag -= l(j, k) * l(j, k);
        if (diag <= pivot_floor) {
            throw NotPositiveDefiniteError(
                "cholesky: non-positive pivot at index " + std::to_string(j), j);
        }
        const double ljj = std::sqrt(diag);
        l(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double v = s(i, j);
            for (std::size_t k = 0; k < j; ++k) v -= l(i, k) * l(j, k);
            l(i, j) = v / ljj;
        }
    }
    return l;
}

SymEigen sym_eigen(const Matrix& s) {
    require_symmetric(s, "sym_eigen");
    const std::size_t n = s.rows();
    if (n > 512) {
        throw ValueError("sym_eigen: dimension " + std::to_string(n) + " exceeds 512");
    }
    g_sym_eigen_calls.fetch_add(1, std::memory_order_relaxed);

    Matrix a = s;
    Matrix v = Matrix::identity(n);
    if (n <= 1) {
        SymEigen out;
        out.values.assign(n, n == 1 ? a(0, 0) : 0.0);
        out.vectors = v;
        return out;
    }

    double norm_sq = 0.0;
    for (double e : a.data()) norm_sq += e * e;
    // off(A) <= 1e-14 * ||A||_F ends the iteration; squared to avoid sqrt.
    const double stop = 1e-28 * norm_sq;

    const int max_sweeps = 100;
    int sweep = 0;
    for (; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off += 2.0 * a(i, j) * a(i, j);
        if (off <= stop) break;

        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double app = a(p, p);
                const double aqq = a(q, q);
                // Skip rotations already at roundoff level.
                if (std::fabs(apq) <= 1e-18 * (std::fabs(app) + std::fabs(aqq))) {
                    continue;
                }
                const double theta = (aqq - app) / (2.0 * apq);
                const double t = (theta >= 0.0)
                                     ? 1.0 / (theta + std::sqrt(1.0 + theta * theta))
                                     : 1.0 / (theta - std::sqrt(1.0 + theta * theta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double sn = t * c;

                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - sn * akq;
                    a(k, q) = sn * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - sn * aqk;
                    a(q, k) = sn * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = c * vkp - sn * vkq;
                    v(k, q) = sn * vkp + c * vkq;
                }
            }
        }
    }
    if (sweep == max_sweeps) {
        throw NumericError("sym_eigen: no convergence after 100 sweeps");
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return a(x, x) > a(y, y); });

    SymEigen out;
    out.values.resize(n);
    out.vectors = Matrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t src = order[k];
        out.values[k] = a(src, src);
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, src);
    }
    fix_column_signs(out.vectors);
    return out;
}

Matrix solve_lower(const Matrix& l, const Matrix& rhs) {
    const std::size_t n = l.rows();
    if (rhs.rows() != n) throw DimensionError("solve_lower: rhs rows mismatch");
    Matrix x = rhs;
    for (std::size_t c = 0; c < rhs.cols(); ++c) {
        for (std::size_t i = 0; i < n; ++i) {
            double v = x(i, c);
            for (std::size_t k = 0; k < i; ++k) v -= l(i, k) * x(k, c);
            x(i, c) = v / l(i, i);
        }
    }
    return x;
}

Matrix solve_lower_transposed(const Matrix& l, const Matrix& rhs) {
    const std::size_t n = l.rows();
    if (rhs.rows() != n) throw DimensionError("solve_lower_transposed: rhs rows mismatch");
    Matrix x = rhs;
    for (std::size_t c = 0; c < rhs.cols(); ++c) {
        for (std::size_t ii = n; ii-- > 0;) {
            double v = x(ii, c);
            for (std::size_t k = ii + 1; k < n; ++k) v -= l(k, ii) * x(k, c);
            x(ii, c) = v / l(ii, ii);
        }
    }
    return x;
}

std::vector<double> solve_lower_transposed(const Matrix& l, const std::vector<double>& rhs) {
    const std::size_t n = l.rows();
    if (rhs.size() != n) throw DimensionError("solve_lower_transposed: rhs length mismatch");
    std::vector<double> x = rhs;
    for (std::size_t ii = n; ii-- > 0;) {
        double v = x[ii];
        for (std::size_t k = ii + 1; k < n; ++k) v -= l(k, ii) * x[k];
        x[ii] = v / l(ii, ii);
    }
    return x;
}

Matrix solve_spd(const Matrix& s, const Matrix& rhs) {
    const Matrix l = cholesky(s);
    return solve_lower_transposed(l, solve_lower(l, rhs));
}

std::uint64_t sym_eigen_call_count() {
    return g_sym_eigen_calls.load(std::memory_order_relaxed);
}

void fix_sign(double* v, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        if (std::fabs(v[i]) > kSignTol) {
            if (v[i] < 0.0) {
                for (std::size_t k = 0; k < n; ++k) v[k] = -v[k];
            }
            return;
        }
    }
}

void fix_sign(std::vector<double>& v) {
    fix_sign(v.data(), v.size());
}

void fix_column_signs(Matrix& m) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
        for (std::size_t i = 0; i < m.rows(); ++i) {
            const double e = m(i, c);
            if (std::fabs(e) > kSignTol) {
                if (e < 0.0) {
                    for (std::size_t k = 0; k < m.rows(); ++k) m(k, c) = -m(k, c);
                }
                break;
            }
        }
    }
}

}  // namespace ecca
