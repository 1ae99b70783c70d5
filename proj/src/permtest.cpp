#include "ecca/permtest.hpp"

#include <utility>

#include "ecca/cca.hpp"
#include "ecca/errors.hpp"
#include "ecca/parallel.hpp"
#include "ecca/rng.hpp"

namespace ecca {

namespace {

struct Statistic {
    double value = 0.0;
    bool degenerate = false;
    double chosen_lambda = 0.0;
};

// First-pair training correlation of the configured pipeline. run_seed
// feeds the internal validation split when tuning is involved.
Statistic first_pair_statistic(const Dataset& data, const FitProcedure& proc,
                               std::uint64_t run_seed) {
    Statistic out;
    CanonicalModel model;
    switch (proc.kind) {
        case FitProcedure::Kind::EccaTuned: {
            SplitSpec split_spec = proc.split;
            split_spec.seed = run_seed;
            auto [train, val] = split(data, split_spec);
            const std::vector<double> grid =
                proc.lambda_grid.empty() ? default_lambda_grid(train.n_samples(), data.x_dim())
                                         : proc.lambda_grid;
            TuneOptions opts;
            opts.lasso = proc.lasso;
            opts.threads = 1;
            const TuneResult tuned = tune_lambda(train, val, grid, 1, opts);
            out.chosen_lambda = tuned.chosen_lambda;
            LassoConfig cfg = proc.lasso;
            cfg.lambda1 = tuned.chosen_lambda;
            model = fit_ecca(data, cfg, 1, 1);
            break;
        }
        case FitProcedure::Kind::EccaFixed: {
            LassoConfig cfg = proc.lasso;
            cfg.lambda1 = proc.lambda1;
            out.chosen_lambda = proc.lambda1;
            model = fit_ecca(data, cfg, 1, 1);
            break;
        }
        case FitProcedure::Kind::Classical:
            model = classical_cca(data, 1);
            break;
        case FitProcedure::Kind::Nugget:
            model = nugget_cca(data, proc.nugget, 1);
            break;
    }
    if (model.degenerate_pairs.count(0) > 0) {
        out.degenerate = true;
        out.value = 0.0;
    } else {
        // Statistic of the pair as mapped: the reporting sign flip on b
        // would otherwise randomize the sign of a strong correlation.
        out.value = model.train_correlations[0] * model.b_orientation[0];
    }
    return out;
}

Dataset permute_x_columns(const Dataset& data, const std::vector<std::size_t>& perm) {
    Dataset out;
    out.y = data.y;
    out.x = Matrix(data.x_dim(), data.n_samples());
    for (std::size_t c = 0; c < perm.size(); ++c) {
        for (std::size_t i = 0; i < out.x.rows(); ++i) {
            out.x(i, c) = data.x(i, perm[c]);
        }
    }
    out.centered = false;
    return out;
}

}  // namespace

PermTestResult perm_test(const Dataset& data, const FitProcedure& procedure,
                         std::size_t permutations, std::uint64_t seed, std::size_t threads) {
    if (permutations < 1) throw ValueError("perm_test: need at least 1 permutation");

    const Statistic observed = first_pair_statistic(data, procedure, substream_seed(seed, 0));

    // Non-retuning mode freezes the observed run's lambda for the null.
    FitProcedure null_proc = procedure;
    if (procedure.kind == FitProcedure::Kind::EccaTuned && !procedure.retune_per_permutation) {
        null_proc.kind = FitProcedure::Kind::EccaFixed;
        null_proc.lambda1 = observed.chosen_lambda;
    }

    PermTestResult result;
    result.observed = observed.value;
    result.permutations = permutations;
    result.seed = seed;
    result.chosen_lambda = observed.chosen_lambda;
    result.null_sample.assign(permutations, 0.0);

    std::vector<std::uint8_t> degenerate(permutations, 0);
    parallel_for(
        permutations,
        [&](std::size_t i) {
            const std::uint64_t perm_seed = substream_seed(seed, i + 1);
            Rng rng(perm_seed);
            const std::vector<std::size_t> perm = rng.permutation(data.n_samples());
            const Dataset shuffled = permute_x_columns(data, perm);
            const Statistic stat =
                first_pair_statistic(shuffled, null_proc, substream_seed(perm_seed, 1));
            result.null_sample[i] = stat.value;
            degenerate[i] = stat.degenerate ? 1 : 0;
        },
        threads);

    std::size_t at_least = 0;
    for (double v : result.null_sample) {
        if (v >= result.observed) ++at_least;
    }
    for (std::uint8_t f : degenerate) result.degenerate_count += f;
    result.p_value = static_cast<double>(1 + at_least) / static_cast<double>(permutations + 1);
    return result;
}

}  // namespace ecca
