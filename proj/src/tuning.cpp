#include "ecca/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ecca/errors.hpp"
#include "ecca/rng.hpp"

namespace ecca {

std::pair<Dataset, Dataset> split(const Dataset& data, const SplitSpec& spec) {
    const std::size_t n = data.n_samples();
    if (n < 2) throw ValueError("split: need at least 2 samples");
    if (spec.ratio_train == 0 || spec.ratio_holdout == 0) {
        throw ValueError("split: ratio parts must be positive");
    }

    const double frac = static_cast<double>(spec.ratio_train) /
                        static_cast<double>(spec.ratio_train + spec.ratio_holdout);
    const std::size_t n_train =
        static_cast<std::size_t>(std::llround(frac * static_cast<double>(n)));
    if (n_train == 0 || n_train >= n) {
        throw ValueError("split: ratio " + std::to_string(spec.ratio_train) + ":" +
                         std::to_string(spec.ratio_holdout) + " leaves a part empty for n=" +
                         std::to_string(n));
    }

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    if (spec.shuffle) {
        Rng rng(spec.seed);
        order = rng.permutation(n);
    }

    std::vector<std::size_t> train_idx(order.begin(), order.begin() + n_train);
    std::vector<std::size_t> holdout_idx(order.begin() + n_train, order.end());
    return {select_columns(data, train_idx), select_columns(data, holdout_idx)};
}

std::vector<double> default_lambda_grid(std::size_t n, std::size_t p) {
    const double base =
        std::sqrt(static_cast<double>(n) * std::log(static_cast<double>(std::max<std::size_t>(p, 2))));
    std::vector<double> grid;
    for (double c : {0.01, 0.03, 0.1, 0.3, 1.0, 3.0}) grid.push_back(c * base);
    return grid;
}

TuneResult tune_lambda(const Dataset& train, const Dataset& val,
                       const std::vector<double>& grid, std::size_t k_pairs,
                       const TuneOptions& options) {
    if (grid.empty()) throw ValueError("tune_lambda: empty grid");
    for (std::size_t g = 0; g < grid.size(); ++g) {
        if (grid[g] < 0.0) throw ValueError("tune_lambda: negative lambda in grid");
        if (g > 0 && grid[g] <= grid[g - 1]) {
            throw ValueError("tune_lambda: grid must be strictly ascending");
        }
    }

    const Dataset train_centered = train.centered ? train : center(train);
    const Dataset val_centered = center_with(val, train_centered.x_means, train_centered.y_means);

    const std::size_t m = grid.size();
    TuneResult result;
    result.lambda_grid = grid;
    result.val_correlations.assign(m, 0.0);
    result.degenerate.assign(m, false);

    std::vector<CanonicalModel> models(m);

    // Largest lambda first so each fit warm-starts from a sparser solution.
    Matrix warm;
    bool have_warm = false;
    for (std::size_t gi = m; gi-- > 0;) {
        LassoConfig cfg = options.lasso;
        cfg.lambda1 = grid[gi];
        cfg.warm_start.reset();
        const LassoFit fit =
            fit_all(train_centered, cfg, (options.warm_start && have_warm) ? &warm : nullptr,
                    options.threads);
        if (options.warm_start) {
            warm = fit.b_hat;
            have_warm = true;
        }
        const GammaPencil pencil = assemble_gamma(fit, train_centered);
        models[gi] = solve_pairs(pencil, k_pairs, fit, train_centered);

        // Selection scores the pair as mapped, (a, B^T a): the reporting
        // sign convention flips b independently of a, which would turn a
        // strongly correlated pair into a strongly negative score.
        const Projection proj = project(models[gi], val_centered);
        const std::vector<double> scores = intrinsic_correlations(models[gi], proj);
        double score = scores[0];
        if (options.criterion == TuneCriterion::SumPairs) {
            score = 0.0;
            for (double c : scores) score += c;
        }
        result.val_correlations[gi] = score;
        result.degenerate[gi] = models[gi].degenerate_pairs.count(0) > 0;
    }

    // Ascending scan with strict improvement keeps the smallest lambda on
    // exact ties; degenerate points are never eligible.
    bool found = false;
    for (std::size_t gi = 0; gi < m; ++gi) {
        if (result.degenerate[gi]) continue;
        if (!found || result.val_correlations[gi] > result.val_correlations[result.chosen_index]) {
            result.chosen_index = gi;
            found = true;
        }
    }
    if (!found) {
        throw NumericError("tune_lambda: grid fully shrinks coefficients");
    }
    result.chosen_lambda = grid[result.chosen_index];
    result.model = std::move(models[result.chosen_index]);
    return result;
}

}  // namespace ecca
