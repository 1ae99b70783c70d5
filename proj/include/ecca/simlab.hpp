#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "ecca/dataset.hpp"
#include "ecca/lasso.hpp"
#include "ecca/matrix.hpp"
#include "ecca/rng.hpp"

namespace ecca {

enum class ScenarioKind { Example1, Example2Case1, Example2Case2 };

/// Population canonical pairs of a synthetic scenario, derived from the
/// generating covariances rather than data.
struct TruePairs {
    Matrix a;                    // d x k
    Matrix b;                    // p x k
    std::vector<double> values;  // pencil eigenvalues (squared correlations)
    bool degenerate_warning = false;  // adjacent population eigenvalues nearly equal
};

/// Fully describes a data-generating process. For the regression designs
/// (Example2*): x ~ N(0, A1 A1^T + 0.1 I) and y = B* x + noise with
/// variance sigma2. For Example1 both views load on a shared 50-dim
/// uniform factor through a1 (dense) and a2 (column-sparse).
struct SimScenario {
    ScenarioKind kind = ScenarioKind::Example2Case1;
    std::size_t n = 0;
    std::size_t p = 0;
    std::size_t d = 0;
    double sigma2 = 0.0;
    std::uint64_t seed = 0;
    Matrix a1;
    Matrix a2;             // Example1 only
    Matrix b_star;         // d x p (Example2 only)
    Matrix sigma_xx_chol;  // lower Cholesky of A1 A1^T + 0.1 I (Example2 only)
    TruePairs true_pairs;  // Example2 only
    double noise_variance = 0.1;  // Example1 noise
    std::size_t factor_dim = 50;  // Example1 shared-factor dimension
};

// Banded coefficient patterns. Case 1 fills the leading d x (d+1) block:
// row i has 1 on the diagonal, 0.4 / 0.1 one and two columns to the left,
// 0.2 one column to the right. Case 2 fills the trailing d x d block along
// the anti-diagonal: 2 at column d-i+1 flanked by 1s. Out-of-range band
// indices are dropped. Requires p > d + 1.
Matrix make_bstar(int case_id, std::size_t d, std::size_t p);

SimScenario make_example2_scenario(int case_id, std::size_t n, std::size_t p, std::size_t d,
                                   double sigma2, std::uint64_t seed);
Dataset draw_example2(const SimScenario& scenario, std::size_t n, Rng& rng);

struct Example2Data {
    Dataset train;
    Dataset validation;
    SimScenario scenario;
};
Example2Data gen_example2(int case_id, std::size_t n, std::size_t p, std::size_t d, double sigma2,
                          std::uint64_t seed);

// First min(3, d) population canonical pairs of an Example2 scenario,
// solved from the exact covariances and sign-fixed like every estimator.
TruePairs true_pairs(const SimScenario& scenario);

SimScenario make_example1_scenario(std::uint64_t seed, double noise_variance = 0.1);
Dataset draw_example1(const SimScenario& scenario, std::size_t n, Rng& rng);

struct Example1Data {
    Dataset train;  // 50 samples
    Dataset test;   // 50 samples
    SimScenario scenario;
};
Example1Data gen_example1(std::uint64_t seed, double noise_variance = 0.1);

/// One estimator entry in a replicate run. Ecca tunes lambda1 on the
/// validation draw; Nugget and Classical fit directly.
struct MethodSpec {
    enum class Kind { Ecca, Nugget, Classical };
    Kind kind = Kind::Ecca;
    double mu_x = 0.1;
    double mu_y = 0.0;

    std::string label() const;
    static MethodSpec parse(const std::string& text);  // "ecca" | "nugget:MU[:MUY]" | "classical"
};

struct ReplicateConfig {
    int case_id = 1;
    std::size_t n = 500;
    std::size_t p = 100;
    std::size_t d = 5;
    double sigma2 = 0.5;
    std::vector<double> lambda_grid;  // empty -> default_lambda_grid(n, p)
    std::vector<MethodSpec> methods{MethodSpec{}};
    std::size_t n_reps = 50;
    std::uint64_t seed = 0;
    LassoConfig lasso;
    std::size_t threads = 0;
};

struct ReplicateRecord {
    std::size_t replicate = 0;
    std::string method;
    bool ok = false;
    std::string error;
    std::array<double, 3> err_a{};  // per-pair ||a_hat_i - a_i||_2
    std::array<double, 3> err_b{};
    double seconds = 0.0;
};

struct MethodSummary {
    std::string method;
    double rmse_a = 0.0;   // sqrt(mean over replicates of sum_i err_a_i^2)
    double rmse_b = 0.0;
    double total = 0.0;    // rmse_a + rmse_b
    double mean_seconds = 0.0;
    std::size_t failures = 0;
};

struct ReplicateReport {
    SimScenario scenario;
    std::size_t pairs_compared = 0;
    std::vector<ReplicateRecord> records;  // replicate-major, method order preserved
    std::vector<MethodSummary> summaries;
};

// Fresh train+validation draw per replicate against one fixed scenario;
// replicate j draws from substream_seed(seed, j+1). Per-replicate failures
// are recorded, never fatal. Aggregation is recomputable from the records.
ReplicateReport run_replicates(const ReplicateConfig& config);

// Recomputes the per-method summaries from the stored records.
std::vector<MethodSummary> summarize_records(const std::vector<ReplicateRecord>& records,
                                             const std::vector<MethodSpec>& methods);

struct Example1Config {
    std::size_t n_reps = 50;
    std::uint64_t seed = 0;
    std::vector<double> lambda_grid;  // empty -> default for n=50, p=1000
    double noise_variance = 0.1;
    LassoConfig lasso;
    std::size_t threads = 0;
};

struct Example1Result {
    std::vector<double> test_correlations;  // first pair, signed, per replicate
    std::vector<double> chosen_lambdas;
    std::size_t positives = 0;
};

// Shared-factor protocol: per replicate, tune lambda1 on an independent
// validation draw, fit on the training draw, report the signed first-pair
// correlation on the test draw.
Example1Result run_example1(const Example1Config& config);

}  // namespace ecca
