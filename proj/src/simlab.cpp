#include "ecca/simlab.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "ecca/baselines.hpp"
#include "ecca/cca.hpp"
#include "ecca/errors.hpp"
#include "ecca/linalg.hpp"
#include "ecca/parallel.hpp"
#include "ecca/tuning.hpp"

namespace ecca {

Matrix make_bstar(int case_id, std::size_t d, std::size_t p) {
    if (p <= d + 1) {
        throw ValueError("make_bstar: requires p > d + 1");
    }
    Matrix b(d, p);
    if (case_id == 1) {
        // Leading d x (d+1) band, 1-indexed columns 1..d+1.
        for (std::size_t i = 1; i <= d; ++i) {
            auto put = [&](long long col, double v) {
                if (col >= 1 && col <= static_cast<long long>(d + 1)) {
                    b(i - 1, static_cast<std::size_t>(col - 1)) = v;
                }
            };
            put(static_cast<long long>(i), 1.0);
            put(static_cast<long long>(i) - 1, 0.4);
            put(static_cast<long long>(i) + 1, 0.2);
            put(static_cast<long long>(i) - 2, 0.1);
        }
    } else if (case_id == 2) {
        // Trailing d x d anti-diagonal band; block starts at column p - d.
        const std::size_t offset = p - d;
        for (std::size_t i = 1; i <= d; ++i) {
            auto put = [&](long long col, double v) {
                if (col >= 1 && col <= static_cast<long long>(d)) {
                    b(i - 1, offset + static_cast<std::size_t>(col - 1)) = v;
                }
            };
            const long long anti = static_cast<long long>(d - i + 1);
            put(anti, 2.0);
            put(anti + 1, 1.0);
            put(anti - 1, 1.0);
        }
    } else {
        throw ValueError("make_bstar: case must be 1 or 2");
    }
    return b;
}

SimScenario make_example2_scenario(int case_id, std::size_t n, std::size_t p, std::size_t d,
                                   double sigma2, std::uint64_t seed) {
    if (sigma2 < 0.0) throw ValueError("example2: sigma2 must be >= 0");
    SimScenario sc;
    sc.kind = case_id == 1 ? ScenarioKind::Example2Case1 : ScenarioKind::Example2Case2;
    sc.n = n;
    sc.p = p;
    sc.d = d;
    sc.sigma2 = sigma2;
    sc.seed = seed;
    sc.b_star = make_bstar(case_id, d, p);

    Rng rng(substream_seed(seed, 0));
    sc.a1 = Matrix(p, d);
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            const double keep = rng.uniform();
            const double value = rng.uniform(0.0, 2.0);
            sc.a1(i, j) = keep < 0.3 ? value : 0.0;
        }
    }

    Matrix sigma_xx = gram(sc.a1, 1.0);
    for (std::size_t i = 0; i < p; ++i) sigma_xx(i, i) += 0.1;
    sc.sigma_xx_chol = cholesky(sigma_xx);

    sc.true_pairs = true_pairs(sc);
    return sc;
}

TruePairs true_pairs(const SimScenario& scenario) {
    if (scenario.kind == ScenarioKind::Example1) {
        throw ValueError("true_pairs: defined for the regression scenarios only");
    }
    const std::size_t d = scenario.d;
    // B* Sigma_xx B*^T = (B* L)(B* L)^T with L the Cholesky factor.
    const Matrix bl = matmul(scenario.b_star, scenario.sigma_xx_chol);
    const Matrix m = gram(bl, 1.0);
    Matrix s = m;
    for (std::size_t i = 0; i < d; ++i) s(i, i) += scenario.sigma2;

    const PencilPairs all = pencil_eigenpairs(m, s, d);
    const std::size_t k = std::min<std::size_t>(3, d);

    TruePairs out;
    out.a = Matrix(d, k);
    out.b = Matrix(scenario.p, k);
    out.values.assign(all.values.begin(), all.values.begin() + k);

    const double gap_tol = 1e-8 * std::max(1.0, all.values[0]);
    for (std::size_t i = 0; i + 1 < d && i < k; ++i) {
        if (all.values[i] - all.values[i + 1] < gap_tol) {
            out.degenerate_warning = true;
        }
    }

    for (std::size_t c = 0; c < k; ++c) {
        std::vector<double> a(d);
        for (std::size_t i = 0; i < d; ++i) a[i] = all.vectors(i, c);
        std::vector<double> b = matvec_transposed(scenario.b_star, a);
        const double nrm = norm2(b);
        if (nrm > 0.0) {
            for (double& e : b) e /= nrm;
        }
        fix_sign(b);
        for (std::size_t i = 0; i < d; ++i) out.a(i, c) = a[i];
        for (std::size_t j = 0; j < scenario.p; ++j) out.b(j, c) = b[j];
    }
    return out;
}

Dataset draw_example2(const SimScenario& scenario, std::size_t n, Rng& rng) {
    const std::size_t p = scenario.p;
    const std::size_t d = scenario.d;
    const Matrix& l = scenario.sigma_xx_chol;
    const double noise_sd = std::sqrt(scenario.sigma2);

    Matrix x(p, n);
    Matrix y(d, n);
    std::vector<double> z(p);
    for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t i = 0; i < p; ++i) z[i] = rng.normal();
        // x = L z, lower-triangular.
        for (std::size_t i = 0; i < p; ++i) {
            x(i, s) = dot(l.row(i), z.data(), i + 1);
        }
        for (std::size_t r = 0; r < d; ++r) {
            double v = rng.normal(0.0, noise_sd);
            const double* brow = scenario.b_star.row(r);
            for (std::size_t j = 0; j < p; ++j) {
                if (brow[j] != 0.0) v += brow[j] * x(j, s);
            }
            y(r, s) = v;
        }
    }
    Dataset data;
    data.x = std::move(x);
    data.y = std::move(y);
    return data;
}

Example2Data gen_example2(int case_id, std::size_t n, std::size_t p, std::size_t d, double sigma2,
                          std::uint64_t seed) {
    Example2Data out;
    out.scenario = make_example2_scenario(case_id, n, p, d, sigma2, seed);
    Rng train_rng(substream_seed(seed, 1));
    Rng val_rng(substream_seed(seed, 2));
    out.train = draw_example2(out.scenario, n, train_rng);
    out.validation = draw_example2(out.scenario, n, val_rng);
    return out;
}

SimScenario make_example1_scenario(std::uint64_t seed, double noise_variance) {
    if (noise_variance < 0.0) throw ValueError("example1: noise variance must be >= 0");
    SimScenario sc;
    sc.kind = ScenarioKind::Example1;
    sc.n = 50;
    sc.p = 1000;
    sc.d = 30;
    sc.factor_dim = 50;
    sc.seed = seed;
    sc.noise_variance = noise_variance;

    Rng rng(substream_seed(seed, 0));
    sc.a1 = Matrix(sc.d, sc.factor_dim);
    for (std::size_t i = 0; i < sc.d; ++i) {
        for (std::size_t j = 0; j < sc.factor_dim; ++j) {
            sc.a1(i, j) = rng.uniform(0.0, 2.0);
        }
    }
    // Each column of a2 has exactly 50 nonzero entries.
    sc.a2 = Matrix(sc.p, sc.factor_dim);
    for (std::size_t c = 0; c < sc.factor_dim; ++c) {
        const std::vector<std::size_t> order = rng.permutation(sc.p);
        for (std::size_t k = 0; k < 50; ++k) {
            sc.a2(order[k], c) = rng.uniform(0.0, 2.0);
        }
    }
    return sc;
}

Dataset draw_example1(const SimScenario& scenario, std::size_t n, Rng& rng) {
    const std::size_t d = scenario.d;
    const std::size_t p = scenario.p;
    const std::size_t f = scenario.factor_dim;
    const double noise_sd = std::sqrt(scenario.noise_variance);

    Matrix x(p, n);
    Matrix y(d, n);
    std::vector<double> u(f);
    for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t i = 0; i < f; ++i) u[i] = rng.uniform(-0.5, 0.5);
        for (std::size_t i = 0; i < d; ++i) {
            y(i, s) = dot(scenario.a1.row(i), u.data(), f) + rng.normal(0.0, noise_sd);
        }
        for (std::size_t i = 0; i < p; ++i) {
            x(i, s) = dot(scenario.a2.row(i), u.data(), f) + rng.normal(0.0, noise_sd);
        }
    }
    Dataset data;
    data.x = std::move(x);
    data.y = std::move(y);
    return data;
}

Example1Data gen_example1(std::uint64_t seed, double noise_variance) {
    Example1Data out;
    out.scenario = make_example1_scenario(seed, noise_variance);
    Rng train_rng(substream_seed(seed, 1));
    Rng test_rng(substream_seed(seed, 2));
    out.train = draw_example1(out.scenario, 50, train_rng);
    out.test = draw_example1(out.scenario, 50, test_rng);
    return out;
}

std::string MethodSpec::label() const {
    switch (kind) {
        case Kind::Ecca:
            return "ecca";
        case Kind::Classical:
            return "classical";
        case Kind::Nugget: {
            auto trim = [](double v) {
                std::string s = std::to_string(v);
                while (s.size() > 1 && s.back() == '0') s.pop_back();
                if (!s.empty() && s.back() == '.') s.pop_back();
                return s;
            };
            std::string s = "nugget:" + trim(mu_x);
            if (mu_y != 0.0) s += ":" + trim(mu_y);
            return s;
        }
    }
    return "?";
}

MethodSpec MethodSpec::parse(const std::string& text) {
    MethodSpec spec;
    if (text == "ecca") {
        spec.kind = Kind::Ecca;
        return spec;
    }
    if (text == "classical") {
        spec.kind = Kind::Classical;
        return spec;
    }
    if (text.rfind("nugget", 0) == 0) {
        spec.kind = Kind::Nugget;
        spec.mu_x = 0.1;
        spec.mu_y = 0.0;
        if (text.size() > 6 && text[6] == ':') {
            const std::string rest = text.substr(7);
            const auto sep = rest.find(':');
            try {
                spec.mu_x = std::stod(rest.substr(0, sep));
                if (sep != std::string::npos) spec.mu_y = std::stod(rest.substr(sep + 1));
            } catch (const std::exception&) {
                throw ValueError("method: cannot parse nugget values in '" + text + "'");
            }
        }
        return spec;
    }
    throw ValueError("method: unknown method '" + text + "'");
}

namespace {

// l2 distance per pair with the estimate's sign aligned to the truth.
// The first-entry-positive rule misaligns vectors whose leading support
// entries are noise (a sparse truth supported on trailing coordinates can
// sit 4 degrees from its estimate yet difference at the full diameter), so
// the error uses the sign that actually matches the estimated direction.
void pair_errors(const Matrix& estimated, const Matrix& truth, std::size_t k,
                 std::array<double, 3>& out) {
    for (std::size_t c = 0; c < k; ++c) {
        double cross = 0.0;
        for (std::size_t i = 0; i < estimated.rows(); ++i) {
            cross += estimated(i, c) * truth(i, c);
        }
        const double sign = cross < 0.0 ? -1.0 : 1.0;
        double s = 0.0;
        for (std::size_t i = 0; i < estimated.rows(); ++i) {
            const double diff = sign * estimated(i, c) - truth(i, c);
            s += diff * diff;
        }
        out[c] = std::sqrt(s);
    }
}

}  // namespace

std::vector<MethodSummary> summarize_records(const std::vector<ReplicateRecord>& records,
                                             const std::vector<MethodSpec>& methods) {
    std::vector<MethodSummary> out;
    for (const MethodSpec& m : methods) {
        const std::string label = m.label();
        MethodSummary s;
        s.method = label;
        double sum_a = 0.0, sum_b = 0.0, sum_t = 0.0;
        std::size_t count = 0;
        for (const ReplicateRecord& r : records) {
            if (r.method != label) continue;
            if (!r.ok) {
                ++s.failures;
                continue;
            }
            for (double e : r.err_a) sum_a += e * e;
            for (double e : r.err_b) sum_b += e * e;
            sum_t += r.seconds;
            ++count;
        }
        if (count > 0) {
            s.rmse_a = std::sqrt(sum_a / static_cast<double>(count));
            s.rmse_b = std::sqrt(sum_b / static_cast<double>(count));
            s.total = s.rmse_a + s.rmse_b;
            s.mean_seconds = sum_t / static_cast<double>(count);
        }
        out.push_back(std::move(s));
    }
    return out;
}

ReplicateReport run_replicates(const ReplicateConfig& config) {
    if (config.case_id != 1 && config.case_id != 2) {
        throw ValueError("run_replicates: case must be 1 or 2");
    }
    if (config.n_reps < 1) throw ValueError("run_replicates: need at least 1 replicate");

    ReplicateReport report;
    report.scenario = make_example2_scenario(config.case_id, config.n, config.p, config.d,
                                             config.sigma2, config.seed);
    const std::size_t k = std::min<std::size_t>(3, config.d);
    report.pairs_compared = k;

    const std::vector<double> grid = config.lambda_grid.empty()
                                         ? default_lambda_grid(config.n, config.p)
                                         : config.lambda_grid;

    const std::size_t n_methods = config.methods.size();
    report.records.resize(config.n_reps * n_methods);

    parallel_for(
        config.n_reps,
        [&](std::size_t rep) {
            Rng rng(substream_seed(config.seed, rep + 1));
            const Dataset train = draw_example2(report.scenario, config.n, rng);
            const Dataset validation = draw_example2(report.scenario, config.n, rng);

            for (std::size_t mi = 0; mi < n_methods; ++mi) {
                const MethodSpec& method = config.methods[mi];
                ReplicateRecord rec;
                rec.replicate = rep;
                rec.method = method.label();
                const auto start = std::chrono::steady_clock::now();
                try {
                    CanonicalModel model;
                    switch (method.kind) {
                        case MethodSpec::Kind::Ecca: {
                            TuneOptions opts;
                            opts.lasso = config.lasso;
                            opts.threads = 1;  // replicates already run in parallel
                            model = tune_lambda(train, validation, grid, k, opts).model;
                            break;
                        }
                        case MethodSpec::Kind::Nugget: {
                            NuggetConfig nc{method.mu_x, method.mu_y};
                            model = nugget_cca(train, nc, k);
                            break;
                        }
                        case MethodSpec::Kind::Classical:
                            model = classical_cca(train, k);
                            break;
                    }
                    pair_errors(model.a, report.scenario.true_pairs.a, k, rec.err_a);
                    pair_errors(model.b, report.scenario.true_pairs.b, k, rec.err_b);
                    rec.ok = true;
                } catch (const std::exception& e) {
                    rec.ok = false;
                    rec.error = e.what();
                }
                rec.seconds =
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                        .count();
                report.records[rep * n_methods + mi] = std::move(rec);
            }
        },
        config.threads);

    report.summaries = summarize_records(report.records, config.methods);
    return report;
}

Example1Result run_example1(const Example1Config& config) {
    if (config.n_reps < 1) throw ValueError("run_example1: need at least 1 replicate");

    Example1Result result;
    result.test_correlations.assign(config.n_reps, 0.0);
    result.chosen_lambdas.assign(config.n_reps, 0.0);

    const std::vector<double> grid =
        config.lambda_grid.empty() ? default_lambda_grid(50, 1000) : config.lambda_grid;

    // One fixed pair of loading matrices for the whole experiment;
    // replicates redraw only the factor and noise.
    const SimScenario scenario =
        make_example1_scenario(substream_seed(config.seed, 0), config.noise_variance);

    parallel_for(
        config.n_reps,
        [&](std::size_t rep) {
            Rng rng(substream_seed(config.seed, rep + 1));
            const Dataset train = draw_example1(scenario, 50, rng);
            const Dataset validation = draw_example1(scenario, 50, rng);
            const Dataset test = draw_example1(scenario, 50, rng);

            TuneOptions opts;
            opts.lasso = config.lasso;
            opts.threads = 1;
            const TuneResult tuned = tune_lambda(train, validation, grid, 1, opts);

            const Dataset train_centered = center(train);
            const Dataset test_centered =
                center_with(test, train_centered.x_means, train_centered.y_means);
            const Projection proj = project(tuned.model, test_centered);
            result.test_correlations[rep] =
                intrinsic_correlations(tuned.model, proj)[0];
            result.chosen_lambdas[rep] = tuned.chosen_lambda;
        },
        config.threads);

    for (double c : result.test_correlations) {
        if (c > 0.0) ++result.positives;
    }
    return result;
}

}  // namespace ecca
