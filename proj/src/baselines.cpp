#include "ecca/baselines.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "ecca/errors.hpp"
#include "ecca/linalg.hpp"

namespace ecca {

void NuggetConfig::validate() const {
    if (mu_x < 0.0 || mu_y < 0.0 || !std::isfinite(mu_x) || !std::isfinite(mu_y)) {
        throw ValueError("nugget: mu_x and mu_y must be finite and >= 0");
    }
}

namespace {

Matrix add_ridge(Matrix g, double mu) {
    for (std::size_t i = 0; i < g.rows(); ++i) g(i, i) += mu;
    return g;
}

// Shared covariance-pencil path: a_k from the pencil
// (Sigma_YX Rxx^-1 Sigma_XY, Ryy) and b_k proportional to Rxx^-1 Sigma_XY a_k,
// where Rxx/Ryy are the (possibly ridged) Gram matrices.
CanonicalModel covariance_cca(const Dataset& data, double mu_x, double mu_y,
                              std::size_t k_pairs) {
    const Dataset centered = data.centered ? data : center(data);
    const std::size_t n = centered.n_samples();
    const double inv_n = 1.0 / static_cast<double>(n);

    const Matrix sxx = add_ridge(gram(centered.x, inv_n), mu_x);
    const Matrix syy = add_ridge(gram(centered.y, inv_n), mu_y);
    Matrix sxy = matmul(centered.x, transpose(centered.y));  // p x d
    for (double& e : sxy.data()) e *= inv_n;

    const Matrix z = solve_spd(sxx, sxy);     // p x d
    Matrix m = matmul(transpose(sxy), z);     // d x d
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = i + 1; j < m.cols(); ++j) {
            const double avg = 0.5 * (m(i, j) + m(j, i));
            m(i, j) = avg;
            m(j, i) = avg;
        }
    }

    const PencilPairs pairs = pencil_eigenpairs(m, syy, k_pairs);

    CanonicalModel model;
    model.k_pairs = k_pairs;
    model.a = pairs.vectors;
    model.eigenvalues = pairs.values;
    model.b = Matrix(centered.x_dim(), k_pairs);
    model.b_orientation.assign(k_pairs, 1.0);

    for (std::size_t k = 0; k < k_pairs; ++k) {
        std::vector<double> ak(model.a.rows());
        for (std::size_t i = 0; i < ak.size(); ++i) ak[i] = model.a(i, k);
        std::vector<double> bk = matvec(z, ak);
        const double nrm = norm2(bk);
        if (nrm <= 1e-12) {
            model.degenerate_pairs.insert(k);
            continue;
        }
        for (double& e : bk) e /= nrm;
        for (double e : bk) {
            if (std::fabs(e) > 1e-12) {
                if (e < 0.0) model.b_orientation[k] = -1.0;
                break;
            }
        }
        fix_sign(bk);
        for (std::size_t j = 0; j < bk.size(); ++j) model.b(j, k) = bk[j];
    }

    const Projection proj = project(model, centered);
    model.train_correlations = proj.correlations;
    return model;
}

}  // namespace

CanonicalModel classical_cca(const Dataset& data, std::size_t k_pairs) {
    const std::size_t n = data.n_samples();
    if (data.x_dim() >= n || data.y_dim() >= n) {
        throw ValueError("classical_cca: requires p < n and d < n (p=" +
                         std::to_string(data.x_dim()) + ", d=" + std::to_string(data.y_dim()) +
                         ", n=" + std::to_string(n) + "); use nugget_cca for p >= n");
    }
    try {
        return covariance_cca(data, 0.0, 0.0, k_pairs);
    } catch (const NotPositiveDefiniteError&) {
        throw NumericError(
            "classical_cca: singular sample Gram matrix; use nugget_cca with mu > 0");
    }
}

CanonicalModel nugget_cca(const Dataset& data, const NuggetConfig& config, std::size_t k_pairs) {
    config.validate();
    return covariance_cca(data, config.mu_x, config.mu_y, k_pairs);
}

PcaResult pca_reduce(const Matrix& y, std::size_t num_components) {
    const std::size_t d = y.rows();
    const std::size_t n = y.cols();
    if (num_components < 1 || num_components > std::min(d, n)) {
        throw ValueError("pca_reduce: num_components must be in [1, min(d, n)]");
    }

    Matrix centered = y;
    std::vector<double> means(d, 0.0);
    for (std::size_t i = 0; i < d; ++i) {
        double* row = centered.row(i);
        double sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) sum += row[j];
        means[i] = sum / static_cast<double>(n);
        for (std::size_t j = 0; j < n; ++j) row[j] -= means[i];
    }

    const SymEigen eig = sym_eigen(gram(centered, 1.0 / static_cast<double>(n)));

    PcaResult out;
    out.components = Matrix(num_components, d);
    out.variances.resize(num_components);
    for (std::size_t k = 0; k < num_components; ++k) {
        out.variances[k] = eig.values[k] < 0.0 ? 0.0 : eig.values[k];
        for (std::size_t i = 0; i < d; ++i) out.components(k, i) = eig.vectors(i, k);
    }
    out.reduced = matmul(out.components, centered);
    out.y_means = std::move(means);
    return out;
}

std::size_t default_pca_components(std::size_t d) {
    return (d + 1) / 2;
}

}  // namespace ecca
