#include "ecca/lasso.hpp"

#include <cassert>
#include <cmath>
#include <string>

#include "ecca/errors.hpp"
#include "ecca/linalg.hpp"
#include "ecca/parallel.hpp"

namespace ecca {

void LassoConfig::validate() const {
    if (lambda1 < 0.0 || !std::isfinite(lambda1)) {
        throw ValueError("lasso: lambda1 must be finite and >= 0");
    }
    if (tol <= 0.0) throw ValueError("lasso: tol must be > 0");
    if (max_iters < 1) throw ValueError("lasso: max_iters must be >= 1");
}

namespace {

inline double soft_threshold(double z, double t) {
    if (z > t) return z - t;
    if (z < -t) return z + t;
    return 0.0;
}

#ifndef NDEBUG
double objective_of(const std::vector<double>& residual, const std::vector<double>& beta,
                    double lambda1) {
    double obj = 0.0;
    for (double r : residual) obj += r * r;
    for (double b : beta) obj += lambda1 * std::fabs(b);
    return obj;
}
#endif

}  // namespace

namespace {

// Shared solver core. Two equivalent gradient bookkeeping strategies:
// residual mode keeps r = y - X^T beta and prices each coordinate at O(n);
// covariance mode keeps g_j = x_j^T r via a precomputed X X^T and prices a
// coordinate change at O(p), which wins when n >> p. Both converge to the
// same fixpoint; the certificate is always a full cyclic sweep whose max
// relative coefficient change falls below tol.
LassoRowResult fit_row_impl(const Matrix& x, const std::vector<double>& y_row,
                            const LassoConfig& config, const Matrix* xtx) {
    config.validate();
    const std::size_t p = x.rows();
    const std::size_t n = x.cols();
    if (y_row.size() != n) {
        throw DimensionError("fit_row: response length " + std::to_string(y_row.size()) +
                             " does not match sample count " + std::to_string(n));
    }

    std::vector<double> norm_sq(p);
    for (std::size_t j = 0; j < p; ++j) {
        norm_sq[j] = xtx ? (*xtx)(j, j) : dot(x.row(j), x.row(j), n);
    }

    LassoRowResult out;
    out.beta.assign(p, 0.0);

    std::vector<double> residual;
    std::vector<double> grad;  // covariance mode: x_j^T (y - X^T beta)
    if (xtx) {
        grad.resize(p);
        for (std::size_t j = 0; j < p; ++j) grad[j] = dot(x.row(j), y_row.data(), n);
    } else {
        residual = y_row;
    }

    if (config.warm_start) {
        if (config.warm_start->size() != p) {
            throw DimensionError("fit_row: warm start length mismatch");
        }
        for (std::size_t j = 0; j < p; ++j) {
            const double b = (*config.warm_start)[j];
            if (b == 0.0 || norm_sq[j] == 0.0) continue;
            out.beta[j] = b;
            if (xtx) {
                const double* row = xtx->row(j);
                for (std::size_t k = 0; k < p; ++k) grad[k] -= b * row[k];
            } else {
                const double* xj = x.row(j);
                for (std::size_t i = 0; i < n; ++i) residual[i] -= b * xj[i];
            }
        }
    }

    const double threshold = config.lambda1 * 0.5;

#ifndef NDEBUG
    double prev_obj = 0.0;
    bool have_prev_obj = false;
    auto debug_objective = [&]() {
        double obj = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double r = y_row[i];
            for (std::size_t j = 0; j < p; ++j) {
                if (out.beta[j] != 0.0) r -= out.beta[j] * x(j, i);
            }
            obj += r * r;
        }
        for (double b : out.beta) obj += config.lambda1 * std::fabs(b);
        return obj;
    };
#endif

    // One cyclic pass over the given coordinates (index order).
    auto sweep_over = [&](const std::vector<std::size_t>& coords) {
        double max_rel_change = 0.0;
        for (std::size_t j : coords) {
            const double old_b = out.beta[j];
            const double rho = (xtx ? grad[j] : dot(x.row(j), residual.data(), n)) +
                               old_b * norm_sq[j];
            const double new_b = soft_threshold(rho, threshold) / norm_sq[j];
            if (new_b != old_b) {
                const double delta = new_b - old_b;
                if (xtx) {
                    const double* row = xtx->row(j);
                    for (std::size_t k = 0; k < p; ++k) grad[k] -= delta * row[k];
                } else {
                    const double* xj = x.row(j);
                    for (std::size_t i = 0; i < n; ++i) residual[i] -= delta * xj[i];
                }
                out.beta[j] = new_b;
                const double rel = std::fabs(delta) / std::max(1.0, std::fabs(new_b));
                if (rel > max_rel_change) max_rel_change = rel;
            }
        }
#ifndef NDEBUG
        // Coordinate descent never increases the objective; allow roundoff.
        const double obj = debug_objective();
        assert(!have_prev_obj || obj <= prev_obj * (1.0 + 1e-12) + 1e-12);
        prev_obj = obj;
        have_prev_obj = true;
#endif
        return max_rel_change;
    };

    std::vector<std::size_t> all_coords;
    all_coords.reserve(p);
    for (std::size_t j = 0; j < p; ++j) {
        if (norm_sq[j] != 0.0) all_coords.push_back(j);  // zero-norm rows stay pinned
    }

    // Full sweeps certify convergence; between them the active set is
    // iterated to its own fixpoint, which leaves the solution unchanged
    // and saves most of the work at sparse solutions.
    std::vector<std::size_t> active;
    std::size_t sweeps = 0;
    while (sweeps < config.max_iters) {
        const double full_change = sweep_over(all_coords);
        out.iters = ++sweeps;
        if (full_change < config.tol) {
            out.converged = true;
            break;
        }
        active.clear();
        for (std::size_t j : all_coords) {
            if (out.beta[j] != 0.0) active.push_back(j);
        }
        if (active.empty() || active.size() == all_coords.size()) continue;
        while (sweeps < config.max_iters) {
            const double active_change = sweep_over(active);
            out.iters = ++sweeps;
            if (active_change < config.tol) break;
        }
    }

    // Recompute the objective from scratch so the reported value does not
    // carry gradient-update drift.
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double r = y_row[i];
        for (std::size_t j = 0; j < p; ++j) {
            if (out.beta[j] != 0.0) r -= out.beta[j] * x(j, i);
        }
        rss += r * r;
    }
    double l1 = 0.0;
    for (double b : out.beta) l1 += std::fabs(b);
    out.objective = rss + config.lambda1 * l1;
    return out;
}

// Covariance bookkeeping pays p^2 memory and an O(p^2 n) setup; worth it
// only when samples dominate features and the Gram fits comfortably.
bool covariance_mode(std::size_t p, std::size_t n) {
    return p <= n && p <= 1024;
}

}  // namespace

LassoRowResult fit_row(const Matrix& x, const std::vector<double>& y_row,
                       const LassoConfig& config) {
    if (covariance_mode(x.rows(), x.cols())) {
        const Matrix xtx = gram(x, 1.0);
        return fit_row_impl(x, y_row, config, &xtx);
    }
    return fit_row_impl(x, y_row, config, nullptr);
}

LassoFit fit_all(const Dataset& data, const LassoConfig& config, const Matrix* warm_b,
                 std::size_t threads) {
    config.validate();
    const std::size_t d = data.y_dim();
    const std::size_t p = data.x_dim();
    if (warm_b && (warm_b->rows() != d || warm_b->cols() != p)) {
        throw DimensionError("fit_all: warm start shape mismatch");
    }

    LassoFit fit;
    fit.b_hat = Matrix(d, p);
    fit.supports.resize(d);
    fit.lambda1 = config.lambda1;
    fit.iters.assign(d, 0);
    fit.converged.assign(d, false);
    fit.objective.assign(d, 0.0);

    // One Gram shared read-only across rows.
    Matrix shared_xtx;
    const bool use_xtx = covariance_mode(p, data.n_samples());
    if (use_xtx) shared_xtx = gram(data.x, 1.0);

    parallel_for(
        d,
        [&](std::size_t k) {
            LassoConfig row_config = config;
            if (warm_b) {
                row_config.warm_start.emplace(warm_b->row(k), warm_b->row(k) + p);
            }
            std::vector<double> y_row(data.y.row(k), data.y.row(k) + data.n_samples());
            LassoRowResult r =
                fit_row_impl(data.x, y_row, row_config, use_xtx ? &shared_xtx : nullptr);
            for (std::size_t j = 0; j < p; ++j) {
                fit.b_hat(k, j) = r.beta[j];
                if (r.beta[j] != 0.0) fit.supports[k].push_back(j);
            }
            fit.iters[k] = r.iters;
            fit.converged[k] = r.converged;
            fit.objective[k] = r.objective;
        },
        threads);

    return fit;
}

std::vector<double> kkt_check(const LassoFit& fit, const Dataset& data) {
    const std::size_t d = fit.b_hat.rows();
    const std::size_t p = fit.b_hat.cols();
    const std::size_t n = data.n_samples();
    if (data.x_dim() != p || data.y_dim() != d) {
        throw DimensionError("kkt_check: fit and data shapes disagree");
    }

    std::vector<double> violations(d, 0.0);
    for (std::size_t k = 0; k < d; ++k) {
        std::vector<double> residual(data.y.row(k), data.y.row(k) + n);
        for (std::size_t j = 0; j < p; ++j) {
            const double b = fit.b_hat(k, j);
            if (b == 0.0) continue;
            const double* xj = data.x.row(j);
            for (std::size_t i = 0; i < n; ++i) residual[i] -= b * xj[i];
        }
        double worst = 0.0;
        for (std::size_t j = 0; j < p; ++j) {
            const double g = 2.0 * dot(data.x.row(j), residual.data(), n);
            const double b = fit.b_hat(k, j);
            double v;
            if (b != 0.0) {
                v = std::fabs(g - fit.lambda1 * (b > 0.0 ? 1.0 : -1.0));
            } else {
                v = std::max(0.0, std::fabs(g) - fit.lambda1);
            }
            if (v > worst) worst = v;
        }
        violations[k] = worst;
    }
    return violations;
}

double full_shrinkage_lambda(const Matrix& x, const std::vector<double>& y_row) {
    double m = 0.0;
    for (std::size_t j = 0; j < x.rows(); ++j) {
        m = std::max(m, std::fabs(dot(x.row(j), y_row.data(), y_row.size())));
    }
    return 2.0 * m;
}

}  // namespace ecca
