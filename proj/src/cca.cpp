#include "ecca/cca.hpp"

#include <cmath>
#include <string>

#include "ecca/errors.hpp"
#include "ecca/linalg.hpp"

namespace ecca {

PencilPairs pencil_eigenpairs(const Matrix& m, const Matrix& s, std::size_t k_pairs) {
    const std::size_t d = s.rows();
    if (m.rows() != d || m.cols() != d) {
        throw DimensionError("pencil_eigenpairs: m and s shapes disagree");
    }
    if (k_pairs < 1 || k_pairs > d) {
        throw ValueError("pencil_eigenpairs: k_pairs must be in [1, " + std::to_string(d) + "]");
    }

    const Matrix l = cholesky(s);
    // W = L^-1 m L^-T is symmetric with the same eigenvalues as s^-1 m.
    const Matrix t = solve_lower(l, m);
    Matrix w = solve_lower(l, transpose(t));
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = i + 1; j < d; ++j) {
            const double avg = 0.5 * (w(i, j) + w(j, i));
            w(i, j) = avg;
            w(j, i) = avg;
        }
    }

    const SymEigen eig = sym_eigen(w);

    PencilPairs out;
    out.vectors = Matrix(d, k_pairs);
    out.values.resize(k_pairs);
    for (std::size_t k = 0; k < k_pairs; ++k) {
        out.values[k] = eig.values[k] < 0.0 ? 0.0 : eig.values[k];
        std::vector<double> wk(d);
        for (std::size_t i = 0; i < d; ++i) wk[i] = eig.vectors(i, k);
        std::vector<double> ak = solve_lower_transposed(l, wk);
        const double nrm = norm2(ak);
        if (nrm > 0.0) {
            for (double& e : ak) e /= nrm;
        }
        fix_sign(ak);
        for (std::size_t i = 0; i < d; ++i) out.vectors(i, k) = ak[i];
    }
    return out;
}

GammaPencil assemble_gamma(const LassoFit& fit, const Dataset& data) {
    if (fit.b_hat.cols() != data.x_dim() || fit.b_hat.rows() != data.y_dim()) {
        throw DimensionError("assemble_gamma: fit and data shapes disagree");
    }
    const double inv_n = 1.0 / static_cast<double>(data.n_samples());
    const Matrix bx = matmul(fit.b_hat, data.x);  // d x n
    GammaPencil pencil;
    pencil.m = gram(bx, inv_n);
    pencil.s = gram(data.y, inv_n);
    return pencil;
}

double pearson(const double* u, const double* v, std::size_t n, bool* degenerate) {
    if (degenerate) *degenerate = false;
    double mu = 0.0, mv = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mu += u[i];
        mv += v[i];
    }
    mu /= static_cast<double>(n);
    mv /= static_cast<double>(n);
    double suu = 0.0, svv = 0.0, suv = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double du = u[i] - mu;
        const double dv = v[i] - mv;
        suu += du * du;
        svv += dv * dv;
        suv += du * dv;
    }
    if (suu <= 1e-300 || svv <= 1e-300) {
        if (degenerate) *degenerate = true;
        return 0.0;
    }
    return suv / std::sqrt(suu * svv);
}

namespace {

double leading_sign(const std::vector<double>& v) {
    for (double e : v) {
        if (std::fabs(e) > 1e-12) return e < 0.0 ? -1.0 : 1.0;
    }
    return 1.0;
}

}  // namespace

CanonicalModel solve_pairs(const GammaPencil& pencil, std::size_t k_pairs, const LassoFit& fit,
                           const Dataset& data) {
    PencilPairs pairs;
    try {
        pairs = pencil_eigenpairs(pencil.m, pencil.s, k_pairs);
    } catch (const NotPositiveDefiniteError&) {
        throw NumericError("solve_pairs: YY^T/n singular: requires d < n and non-degenerate Y");
    }

    const std::size_t p = fit.b_hat.cols();

    CanonicalModel model;
    model.k_pairs = k_pairs;
    model.a = pairs.vectors;
    model.eigenvalues = pairs.values;
    model.b = Matrix(p, k_pairs);
    model.lambda1 = fit.lambda1;
    model.b_orientation.assign(k_pairs, 1.0);

    for (std::size_t k = 0; k < k_pairs; ++k) {
        std::vector<double> ak(model.a.rows());
        for (std::size_t i = 0; i < ak.size(); ++i) ak[i] = model.a(i, k);
        std::vector<double> bk = matvec_transposed(fit.b_hat, ak);
        const double nrm = norm2(bk);
        if (nrm <= 1e-12) {
            model.degenerate_pairs.insert(k);
            continue;  // column stays zero
        }
        for (double& e : bk) e /= nrm;
        model.b_orientation[k] = leading_sign(bk);
        fix_sign(bk);
        for (std::size_t j = 0; j < p; ++j) model.b(j, k) = bk[j];
    }

    const Projection proj = project(model, data);
    model.train_correlations = proj.correlations;
    return model;
}

std::vector<double> intrinsic_correlations(const CanonicalModel& model, const Projection& proj) {
    std::vector<double> out = proj.correlations;
    for (std::size_t k = 0; k < out.size() && k < model.b_orientation.size(); ++k) {
        out[k] *= model.b_orientation[k];
    }
    return out;
}

CanonicalModel fit_ecca(const Dataset& data, const LassoConfig& config, std::size_t k_pairs,
                        std::size_t threads) {
    const std::size_t d = data.y_dim();
    const std::size_t n = data.n_samples();
    if (data.x_dim() < 1) throw ValueError("fit_ecca: x has no features");
    if (d >= n) {
        throw ValueError("fit_ecca: requires d < n (d=" + std::to_string(d) +
                         ", n=" + std::to_string(n) + ")");
    }
    if (k_pairs < 1 || k_pairs > d) {
        throw ValueError("fit_ecca: k_pairs must be in [1, d]");
    }

    const Dataset centered = data.centered ? data : center(data);
    const LassoFit fit = fit_all(centered, config, nullptr, threads);
    const GammaPencil pencil = assemble_gamma(fit, centered);
    return solve_pairs(pencil, k_pairs, fit, centered);
}

Projection project(const CanonicalModel& model, const Dataset& data) {
    if (model.a.rows() != data.y_dim() || model.b.rows() != data.x_dim()) {
        throw DimensionError("project: model dims do not match data");
    }
    const std::size_t n = data.n_samples();
    const std::size_t k_pairs = model.k_pairs;

    Projection out;
    out.u = matmul(transpose(model.a), data.y);  // K x n
    out.v = matmul(transpose(model.b), data.x);
    out.correlations.assign(k_pairs, 0.0);
    out.zero_variance.assign(k_pairs, false);

    for (std::size_t k = 0; k < k_pairs; ++k) {
        if (model.degenerate_pairs.count(k)) {
            out.zero_variance[k] = true;
            continue;
        }
        bool degenerate = false;
        out.correlations[k] = pearson(out.u.row(k), out.v.row(k), n, &degenerate);
        out.zero_variance[k] = degenerate;
    }
    return out;
}

}  // namespace ecca
