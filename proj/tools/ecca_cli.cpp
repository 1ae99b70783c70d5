// Command-line front end: CSV in, model/report CSVs out.
//
// Subcommands: fit | tune | simulate | permtest | baseline | pca-reduce.
// Data CSVs are samples-as-rows with one header row; matrices are
// transposed to samples-as-columns on ingest. Numbers are printed with 17
// significant digits so a write/read round-trip is lossless.
//
// Exit codes: 0 success, 2 user/input error, 3 numerical failure.

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "ecca/baselines.hpp"
#include "ecca/cca.hpp"
#include "ecca/csv.hpp"
#include "ecca/dataset.hpp"
#include "ecca/errors.hpp"
#include "ecca/parallel.hpp"
#include "ecca/permtest.hpp"
#include "ecca/simlab.hpp"
#include "ecca/tuning.hpp"

namespace fs = std::filesystem;
using namespace ecca;

namespace {

// ---------------------------------------------------------------------
// Config files: flat "key = value" lines, '#' comments, order-insensitive.
// Values from the file are appended as --key=value tokens for keys absent
// from the command line, so explicit flags always win.
// ---------------------------------------------------------------------

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
    return s.substr(b, e - b);
}

std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DimensionError(path + ": cannot open config file");
    std::vector<std::pair<std::string, std::string>> entries;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw DimensionError(path + ": line " + std::to_string(line_no) +
                                 ": expected key = value");
        }
        entries.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return entries;
}

std::vector<std::string> merge_config_args(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    std::string config_path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            config_path = args[i + 1];
        } else if (args[i].rfind("--config=", 0) == 0) {
            config_path = args[i].substr(9);
        }
    }
    if (config_path.empty()) return args;

    auto has_flag = [&](const std::string& key) {
        const std::string plain = "--" + key;
        const std::string prefixed = plain + "=";
        for (const std::string& a : args) {
            if (a == plain || a.rfind(prefixed, 0) == 0) return true;
        }
        return false;
    };

    for (const auto& [key, value] : read_config_file(config_path)) {
        if (has_flag(key)) continue;
        args.push_back("--" + key + "=" + value);
    }
    return args;
}

// ---------------------------------------------------------------------
// Shared I/O helpers
// ---------------------------------------------------------------------

// Samples-as-rows on disk -> samples-as-columns in memory.
Matrix load_data_matrix(const std::string& path) {
    return transpose(read_matrix_csv(path));
}

Dataset load_dataset(const std::string& x_path, const std::string& y_path) {
    Matrix x = load_data_matrix(x_path);
    Matrix y = load_data_matrix(y_path);
    if (x.cols() != y.cols()) {
        throw DimensionError(x_path + " has " + std::to_string(x.cols()) + " samples (" +
                             std::to_string(x.cols()) + "x" + std::to_string(x.rows()) +
                             "), " + y_path + " has " + std::to_string(y.cols()) +
                             " samples (" + std::to_string(y.cols()) + "x" +
                             std::to_string(y.rows()) + ")");
    }
    Dataset data;
    data.x = std::move(x);
    data.y = std::move(y);
    return data;
}

void write_resolved_config(const fs::path& out_dir,
                           const std::vector<std::pair<std::string, std::string>>& entries) {
    std::ofstream out(out_dir / "resolved.cfg");
    out << "# resolved run configuration\n";
    for (const auto& [key, value] : entries) {
        out << key << " = " << value << "\n";
    }
}

void write_model_files(const fs::path& out_dir, const CanonicalModel& model) {
    const std::size_t k = model.k_pairs;
    write_matrix_csv((out_dir / "a.csv").string(), model.a, numbered_columns("a", k));
    write_matrix_csv((out_dir / "b.csv").string(), model.b, numbered_columns("b", k));

    Matrix eig(k, 1);
    for (std::size_t i = 0; i < k; ++i) eig(i, 0) = model.eigenvalues[i];
    write_matrix_csv((out_dir / "eigenvalues.csv").string(), eig, {"eigenvalue"});

    Matrix corr(k, 2);
    for (std::size_t i = 0; i < k; ++i) {
        corr(i, 0) = model.train_correlations[i];
        corr(i, 1) = model.degenerate_pairs.count(i) ? 1.0 : 0.0;
    }
    write_matrix_csv((out_dir / "correlations.csv").string(), corr,
                     {"correlation", "degenerate"});
}

std::vector<double> parse_value_list(const std::string& text, const char* what) {
    std::vector<double> values;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = text.find(',', start);
        const std::string field =
            trim(text.substr(start, comma == std::string::npos ? comma : comma - start));
        if (!field.empty()) {
            try {
                values.push_back(std::stod(field));
            } catch (const std::exception&) {
                throw ValueError(std::string(what) + ": cannot parse '" + field + "'");
            }
        }
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (values.empty()) throw ValueError(std::string(what) + ": empty list");
    return values;
}

// "0.5", "0.3,0.5,0.9", or "start:stop:step" (inclusive stop).
std::vector<double> parse_sigma2_grid(const std::string& text) {
    if (text.find(':') != std::string::npos) {
        std::vector<double> parts;
        std::size_t start = 0;
        for (int i = 0; i < 3; ++i) {
            const std::size_t colon = text.find(':', start);
            parts.push_back(std::stod(text.substr(start, colon - start)));
            if (colon == std::string::npos) break;
            start = colon + 1;
        }
        if (parts.size() != 3 || parts[2] <= 0.0) {
            throw ValueError("sigma2: range must be start:stop:step with step > 0");
        }
        std::vector<double> grid;
        for (double v = parts[0]; v <= parts[1] + 1e-12; v += parts[2]) grid.push_back(v);
        return grid;
    }
    return parse_value_list(text, "sigma2");
}

SplitSpec parse_split(const std::string& text, std::uint64_t seed, bool shuffle) {
    const std::size_t colon = text.find(':');
    if (colon == std::string::npos) throw ValueError("split: expected R1:R2, e.g. 5:1");
    SplitSpec spec;
    try {
        spec.ratio_train = std::stoul(text.substr(0, colon));
        spec.ratio_holdout = std::stoul(text.substr(colon + 1));
    } catch (const std::exception&) {
        throw ValueError("split: cannot parse '" + text + "'");
    }
    spec.seed = seed;
    spec.shuffle = shuffle;
    return spec;
}

std::string bool_str(bool v) { return v ? "true" : "false"; }

// ---------------------------------------------------------------------
// Subcommand option structs
// ---------------------------------------------------------------------

struct CommonOpts {
    std::string out = ".";
    std::uint64_t seed = 12345;
    std::size_t threads = 0;
    std::string config;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--out", o.out, "Output directory");
    cmd->add_option("--seed", o.seed, "Base seed for all randomness");
    cmd->add_option("--threads", o.threads, "Worker cap (0 = ECCA_THREADS or hardware)");
    cmd->add_option("--config", o.config, "key = value config file; flags override");
}

fs::path prepare_out(const CommonOpts& o) {
    fs::path dir(o.out);
    fs::create_directories(dir);
    if (o.threads > 0) set_default_threads(o.threads);
    return dir;
}

int run_fit(const CommonOpts& common, const std::string& x_path, const std::string& y_path,
            double lambda, bool lambda_given, std::size_t k_pairs, const LassoConfig& lasso_base) {
    const fs::path out_dir = prepare_out(common);
    const Dataset data = load_dataset(x_path, y_path);
    LassoConfig cfg = lasso_base;
    cfg.lambda1 = lambda_given
                      ? lambda
                      : 0.3 * std::sqrt(static_cast<double>(data.n_samples()) *
                                        std::log(static_cast<double>(
                                            std::max<std::size_t>(data.x_dim(), 2))));
    const CanonicalModel model = fit_ecca(data, cfg, k_pairs);
    write_model_files(out_dir, model);
    write_resolved_config(out_dir, {{"x", x_path},
                                    {"y", y_path},
                                    {"lambda", format_double(cfg.lambda1)},
                                    {"k-pairs", std::to_string(k_pairs)},
                                    {"max-iters", std::to_string(cfg.max_iters)},
                                    {"tol", format_double(cfg.tol)},
                                    {"seed", std::to_string(common.seed)},
                                    {"threads", std::to_string(common.threads)},
                                    {"out", common.out}});
    std::cout << "fit: wrote " << k_pairs << " pair(s) to " << out_dir.string() << "\n";
    for (std::size_t i = 0; i < model.k_pairs; ++i) {
        std::cout << "  pair " << (i + 1) << ": corr=" << format_double(model.train_correlations[i])
                  << (model.degenerate_pairs.count(i) ? " (degenerate)" : "") << "\n";
    }
    return 0;
}

int run_tune(const CommonOpts& common, const std::string& x_path, const std::string& y_path,
             const std::string& grid_text, const std::string& split_text, bool shuffle,
             std::size_t k_pairs, const std::string& criterion, const LassoConfig& lasso_base) {
    const fs::path out_dir = prepare_out(common);
    const Dataset data = load_dataset(x_path, y_path);

    const SplitSpec spec = parse_split(split_text, common.seed, shuffle);
    const auto [train, holdout] = split(data, spec);

    const std::vector<double> grid =
        grid_text.empty() ? default_lambda_grid(train.n_samples(), data.x_dim())
                          : parse_value_list(grid_text, "grid");

    TuneOptions opts;
    opts.lasso = lasso_base;
    if (criterion == "sum") {
        opts.criterion = TuneCriterion::SumPairs;
    } else if (criterion != "first") {
        throw ValueError("criterion: expected 'first' or 'sum'");
    }
    const TuneResult result = tune_lambda(train, holdout, grid, k_pairs, opts);

    Matrix table(grid.size(), 4);
    for (std::size_t g = 0; g < grid.size(); ++g) {
        table(g, 0) = result.lambda_grid[g];
        table(g, 1) = result.val_correlations[g];
        table(g, 2) = result.degenerate[g] ? 1.0 : 0.0;
        table(g, 3) = g == result.chosen_index ? 1.0 : 0.0;
    }
    write_matrix_csv((out_dir / "tuning.csv").string(), table,
                     {"lambda", "val_correlation", "degenerate", "chosen"});
    write_model_files(out_dir, result.model);
    write_resolved_config(out_dir, {{"x", x_path},
                                    {"y", y_path},
                                    {"grid", grid_text.empty() ? "default" : grid_text},
                                    {"chosen-lambda", format_double(result.chosen_lambda)},
                                    {"split", split_text},
                                    {"shuffle", bool_str(shuffle)},
                                    {"k-pairs", std::to_string(k_pairs)},
                                    {"criterion", criterion},
                                    {"seed", std::to_string(common.seed)},
                                    {"threads", std::to_string(common.threads)},
                                    {"out", common.out}});
    std::cout << "tune: chose lambda=" << format_double(result.chosen_lambda) << " (index "
              << result.chosen_index << ") with validation correlation "
              << format_double(result.val_correlations[result.chosen_index]) << "\n";
    return 0;
}

int run_simulate(const CommonOpts& common, const std::string& case_name, std::size_t n,
                 std::size_t p, std::size_t d, const std::string& sigma2_text, std::size_t reps,
                 const std::string& methods_text, const std::string& lambda_grid_text,
                 const LassoConfig& lasso_base) {
    const fs::path out_dir = prepare_out(common);

    if (case_name == "example1") {
        Example1Config cfg;
        cfg.n_reps = reps;
        cfg.seed = common.seed;
        cfg.lasso = lasso_base;
        if (!lambda_grid_text.empty()) {
            cfg.lambda_grid = parse_value_list(lambda_grid_text, "lambda-grid");
        }
        const Example1Result result = run_example1(cfg);

        Matrix table(reps, 3);
        for (std::size_t r = 0; r < reps; ++r) {
            table(r, 0) = static_cast<double>(r);
            table(r, 1) = result.test_correlations[r];
            table(r, 2) = result.chosen_lambdas[r];
        }
        write_matrix_csv((out_dir / "example1.csv").string(), table,
                         {"replicate", "test_correlation", "chosen_lambda"});
        Matrix summary(1, 3);
        summary(0, 0) = static_cast<double>(reps);
        summary(0, 1) = static_cast<double>(result.positives);
        summary(0, 2) = static_cast<double>(result.positives) / static_cast<double>(reps);
        write_matrix_csv((out_dir / "summary.csv").string(), summary,
                         {"replicates", "positives", "fraction_positive"});
        write_resolved_config(out_dir, {{"case", case_name},
                                        {"reps", std::to_string(reps)},
                                        {"seed", std::to_string(common.seed)},
                                        {"threads", std::to_string(common.threads)},
                                        {"out", common.out}});
        std::cout << "simulate example1: " << result.positives << "/" << reps
                  << " positive test correlations\n";
        return 0;
    }

    int case_id = 0;
    if (case_name == "case1") case_id = 1;
    else if (case_name == "case2") case_id = 2;
    else throw ValueError("case: expected case1, case2, or example1");

    const std::vector<double> sigma_grid = parse_sigma2_grid(sigma2_text);

    std::vector<MethodSpec> methods;
    {
        std::size_t start = 0;
        while (start <= methods_text.size()) {
            const std::size_t comma = methods_text.find(',', start);
            const std::string field = trim(
                methods_text.substr(start, comma == std::string::npos ? comma : comma - start));
            if (!field.empty()) methods.push_back(MethodSpec::parse(field));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (methods.empty()) throw ValueError("methods: empty list");
    }

    std::ofstream replicates(out_dir / "replicates.csv");
    replicates << "sigma2,replicate,method,ok,err_a1,err_a2,err_a3,err_b1,err_b2,err_b3\n";
    std::ofstream summary(out_dir / "summary.csv");
    summary << "sigma2,method,rmse_a,rmse_b,total,failures\n";
    std::ofstream timings(out_dir / "timings.csv");
    timings << "sigma2,method,mean_seconds\n";

    for (std::size_t gi = 0; gi < sigma_grid.size(); ++gi) {
        ReplicateConfig cfg;
        cfg.case_id = case_id;
        cfg.n = n;
        cfg.p = p;
        cfg.d = d;
        cfg.sigma2 = sigma_grid[gi];
        cfg.methods = methods;
        cfg.n_reps = reps;
        cfg.seed = substream_seed(common.seed, gi);
        cfg.lasso = lasso_base;
        if (!lambda_grid_text.empty()) {
            cfg.lambda_grid = parse_value_list(lambda_grid_text, "lambda-grid");
        }
        const ReplicateReport report = run_replicates(cfg);

        for (const ReplicateRecord& r : report.records) {
            replicates << format_double(cfg.sigma2) << ',' << r.replicate << ',' << r.method
                       << ',' << (r.ok ? 1 : 0);
            for (double e : r.err_a) replicates << ',' << format_double(e);
            for (double e : r.err_b) replicates << ',' << format_double(e);
            replicates << '\n';
        }
        for (const MethodSummary& s : report.summaries) {
            summary << format_double(cfg.sigma2) << ',' << s.method << ','
                    << format_double(s.rmse_a) << ',' << format_double(s.rmse_b) << ','
                    << format_double(s.total) << ',' << s.failures << '\n';
            timings << format_double(cfg.sigma2) << ',' << s.method << ','
                    << format_double(s.mean_seconds) << '\n';
            std::cout << "simulate " << case_name << " sigma2=" << format_double(cfg.sigma2)
                      << " " << s.method << ": total=" << format_double(s.total) << "\n";
        }
    }

    write_resolved_config(out_dir, {{"case", case_name},
                                    {"n", std::to_string(n)},
                                    {"p", std::to_string(p)},
                                    {"d", std::to_string(d)},
                                    {"sigma2", sigma2_text},
                                    {"reps", std::to_string(reps)},
                                    {"methods", methods_text},
                                    {"lambda-grid",
                                     lambda_grid_text.empty() ? "default" : lambda_grid_text},
                                    {"seed", std::to_string(common.seed)},
                                    {"threads", std::to_string(common.threads)},
                                    {"out", common.out}});
    return 0;
}

int run_permtest(const CommonOpts& common, const std::string& x_path, const std::string& y_path,
                 const std::string& procedure, std::size_t permutations, double lambda,
                 const std::string& grid_text, double mu_x, double mu_y,
                 const std::string& split_text, bool retune, const LassoConfig& lasso_base) {
    const fs::path out_dir = prepare_out(common);
    const Dataset data = load_dataset(x_path, y_path);

    FitProcedure proc;
    proc.lasso = lasso_base;
    if (procedure == "ecca-tuned") {
        proc.kind = FitProcedure::Kind::EccaTuned;
    } else if (procedure == "ecca-fixed") {
        proc.kind = FitProcedure::Kind::EccaFixed;
        proc.lambda1 = lambda;
    } else if (procedure == "classical") {
        proc.kind = FitProcedure::Kind::Classical;
    } else if (procedure == "nugget") {
        proc.kind = FitProcedure::Kind::Nugget;
        proc.nugget = NuggetConfig{mu_x, mu_y};
    } else {
        throw ValueError("procedure: expected ecca-tuned, ecca-fixed, classical, or nugget");
    }
    if (!grid_text.empty()) proc.lambda_grid = parse_value_list(grid_text, "grid");
    proc.split = parse_split(split_text, common.seed, true);
    proc.retune_per_permutation = retune;

    const PermTestResult result = perm_test(data, proc, permutations, common.seed);

    Matrix main(1, 6);
    main(0, 0) = result.observed;
    main(0, 1) = result.p_value;
    main(0, 2) = static_cast<double>(result.permutations);
    main(0, 3) = static_cast<double>(result.seed);
    main(0, 4) = static_cast<double>(result.degenerate_count);
    main(0, 5) = result.chosen_lambda;
    write_matrix_csv((out_dir / "permtest.csv").string(), main,
                     {"observed", "p_value", "permutations", "seed", "degenerate_count",
                      "chosen_lambda"});
    Matrix null_col(result.null_sample.size(), 1);
    for (std::size_t i = 0; i < result.null_sample.size(); ++i) {
        null_col(i, 0) = result.null_sample[i];
    }
    write_matrix_csv((out_dir / "null.csv").string(), null_col, {"null_correlation"});
    write_resolved_config(out_dir, {{"x", x_path},
                                    {"y", y_path},
                                    {"procedure", procedure},
                                    {"permutations", std::to_string(permutations)},
                                    {"lambda", format_double(lambda)},
                                    {"grid", grid_text.empty() ? "default" : grid_text},
                                    {"mu-x", format_double(mu_x)},
                                    {"mu-y", format_double(mu_y)},
                                    {"split", split_text},
                                    {"retune", bool_str(retune)},
                                    {"seed", std::to_string(common.seed)},
                                    {"threads", std::to_string(common.threads)},
                                    {"out", common.out}});
    std::cout << "permtest: observed=" << format_double(result.observed)
              << " p=" << format_double(result.p_value) << " (P=" << permutations << ")\n";
    return 0;
}

int run_baseline(const CommonOpts& common, const std::string& x_path, const std::string& y_path,
                 const std::string& method, double mu_x, double mu_y, std::size_t k_pairs) {
    const fs::path out_dir = prepare_out(common);
    const Dataset data = load_dataset(x_path, y_path);

    CanonicalModel model;
    if (method == "classical") {
        model = classical_cca(data, k_pairs);
    } else if (method == "nugget") {
        model = nugget_cca(data, NuggetConfig{mu_x, mu_y}, k_pairs);
    } else {
        throw ValueError("method: expected classical or nugget");
    }
    write_model_files(out_dir, model);
    write_resolved_config(out_dir, {{"x", x_path},
                                    {"y", y_path},
                                    {"method", method},
                                    {"mu-x", format_double(mu_x)},
                                    {"mu-y", format_double(mu_y)},
                                    {"k-pairs", std::to_string(k_pairs)},
                                    {"seed", std::to_string(common.seed)},
                                    {"threads", std::to_string(common.threads)},
                                    {"out", common.out}});
    std::cout << "baseline " << method << ": first correlation "
              << format_double(model.train_correlations[0]) << "\n";
    return 0;
}

int run_pca_reduce(const CommonOpts& common, const std::string& y_path,
                   std::size_t num_components) {
    const fs::path out_dir = prepare_out(common);
    const Matrix y = load_data_matrix(y_path);  // d x n
    const std::size_t k = num_components == 0 ? default_pca_components(y.rows()) : num_components;
    const PcaResult result = pca_reduce(y, k);

    write_matrix_csv((out_dir / "components.csv").string(), result.components,
                     numbered_columns("y", y.rows()));
    // Scores go back out samples-as-rows.
    write_matrix_csv((out_dir / "reduced.csv").string(), transpose(result.reduced),
                     numbered_columns("pc", k));
    Matrix var(k, 1);
    for (std::size_t i = 0; i < k; ++i) var(i, 0) = result.variances[i];
    write_matrix_csv((out_dir / "variances.csv").string(), var, {"variance"});
    write_resolved_config(out_dir, {{"y", y_path},
                                    {"num-components", std::to_string(k)},
                                    {"seed", std::to_string(common.seed)},
                                    {"threads", std::to_string(common.threads)},
                                    {"out", common.out}});
    std::cout << "pca-reduce: kept " << k << " of " << y.rows() << " components\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Eigenvector-based sparse canonical correlation analysis"};
    app.require_subcommand(1);

    // fit
    CommonOpts fit_common;
    std::string fit_x, fit_y;
    double fit_lambda = 0.0;
    std::size_t fit_k = 1;
    LassoConfig fit_lasso;
    auto* fit_cmd = app.add_subcommand("fit", "Fit canonical pairs at a fixed lambda");
    fit_cmd->add_option("x", fit_x, "X data CSV (samples as rows)")->required();
    fit_cmd->add_option("y", fit_y, "Y data CSV (samples as rows)")->required();
    auto* fit_lambda_opt =
        fit_cmd->add_option("--lambda", fit_lambda, "Penalty (default 0.3*sqrt(n log p))");
    fit_cmd->add_option("--k-pairs", fit_k, "Number of canonical pairs");
    fit_cmd->add_option("--max-iters", fit_lasso.max_iters, "Coordinate-descent sweep cap");
    fit_cmd->add_option("--tol", fit_lasso.tol, "Coordinate-descent tolerance");
    add_common(fit_cmd, fit_common);

    // tune
    CommonOpts tune_common;
    std::string tune_x, tune_y, tune_grid, tune_split = "5:1", tune_criterion = "first";
    bool tune_shuffle = true;
    std::size_t tune_k = 1;
    LassoConfig tune_lasso;
    auto* tune_cmd = app.add_subcommand("tune", "Select lambda on a validation split");
    tune_cmd->add_option("x", tune_x, "X data CSV")->required();
    tune_cmd->add_option("y", tune_y, "Y data CSV")->required();
    tune_cmd->add_option("--grid", tune_grid, "Comma-separated lambdas (default: six-point grid)");
    tune_cmd->add_option("--split", tune_split, "train:holdout ratio");
    tune_cmd->add_flag("--shuffle,!--no-shuffle", tune_shuffle, "Shuffle before splitting");
    tune_cmd->add_option("--k-pairs", tune_k, "Number of canonical pairs");
    tune_cmd->add_option("--criterion", tune_criterion, "first | sum");
    tune_cmd->add_option("--max-iters", tune_lasso.max_iters, "Coordinate-descent sweep cap");
    tune_cmd->add_option("--tol", tune_lasso.tol, "Coordinate-descent tolerance");
    add_common(tune_cmd, tune_common);

    // simulate
    CommonOpts sim_common;
    std::string sim_case = "case1", sim_sigma2 = "0.5", sim_methods = "ecca", sim_grid;
    std::size_t sim_n = 500, sim_p = 100, sim_d = 5, sim_reps = 50;
    LassoConfig sim_lasso;
    auto* sim_cmd = app.add_subcommand("simulate", "Replicate the synthetic benchmarks");
    sim_cmd->add_option("--case", sim_case, "case1 | case2 | example1");
    sim_cmd->add_option("--n", sim_n, "Training sample size");
    sim_cmd->add_option("--p", sim_p, "X dimension");
    sim_cmd->add_option("--d", sim_d, "Y dimension");
    sim_cmd->add_option("--sigma2", sim_sigma2, "Noise grid: value, list, or start:stop:step");
    sim_cmd->add_option("--reps", sim_reps, "Replicates per grid point");
    sim_cmd->add_option("--methods", sim_methods, "ecca | nugget[:MUX[:MUY]] | classical list");
    sim_cmd->add_option("--lambda-grid", sim_grid, "Lambda candidates for tuning");
    sim_cmd->add_option("--max-iters", sim_lasso.max_iters, "Coordinate-descent sweep cap");
    sim_cmd->add_option("--tol", sim_lasso.tol, "Coordinate-descent tolerance");
    add_common(sim_cmd, sim_common);

    // permtest
    CommonOpts perm_common;
    std::string perm_x, perm_y, perm_procedure = "ecca-tuned", perm_grid, perm_split = "5:1";
    std::size_t perm_count = 1000;
    double perm_lambda = 0.0, perm_mu_x = 0.1, perm_mu_y = 0.0;
    bool perm_retune = true;
    LassoConfig perm_lasso;
    auto* perm_cmd = app.add_subcommand("permtest", "Permutation test of the first correlation");
    perm_cmd->add_option("x", perm_x, "X data CSV")->required();
    perm_cmd->add_option("y", perm_y, "Y data CSV")->required();
    perm_cmd->add_option("--procedure", perm_procedure,
                         "ecca-tuned | ecca-fixed | classical | nugget");
    perm_cmd->add_option("-P,--permutations", perm_count, "Number of permutations");
    perm_cmd->add_option("--lambda", perm_lambda, "Penalty for ecca-fixed");
    perm_cmd->add_option("--grid", perm_grid, "Lambda candidates for ecca-tuned");
    perm_cmd->add_option("--mu-x", perm_mu_x, "Nugget for x");
    perm_cmd->add_option("--mu-y", perm_mu_y, "Nugget for y");
    perm_cmd->add_option("--split", perm_split, "Validation ratio for ecca-tuned");
    perm_cmd->add_flag("--retune,!--no-retune", perm_retune,
                       "Re-tune lambda inside every permutation");
    perm_cmd->add_option("--max-iters", perm_lasso.max_iters, "Coordinate-descent sweep cap");
    perm_cmd->add_option("--tol", perm_lasso.tol, "Coordinate-descent tolerance");
    add_common(perm_cmd, perm_common);

    // baseline
    CommonOpts base_common;
    std::string base_x, base_y, base_method = "classical";
    double base_mu_x = 0.1, base_mu_y = 0.0;
    std::size_t base_k = 1;
    auto* base_cmd = app.add_subcommand("baseline", "Classical or nugget CCA");
    base_cmd->add_option("x", base_x, "X data CSV")->required();
    base_cmd->add_option("y", base_y, "Y data CSV")->required();
    base_cmd->add_option("--method", base_method, "classical | nugget");
    base_cmd->add_option("--mu-x", base_mu_x, "Nugget for x");
    base_cmd->add_option("--mu-y", base_mu_y, "Nugget for y");
    base_cmd->add_option("--k-pairs", base_k, "Number of canonical pairs");
    add_common(base_cmd, base_common);

    // pca-reduce
    CommonOpts pca_common;
    std::string pca_y;
    std::size_t pca_num = 0;
    auto* pca_cmd = app.add_subcommand("pca-reduce", "Project y onto leading principal components");
    pca_cmd->add_option("y", pca_y, "Y data CSV")->required();
    pca_cmd->add_option("--num-components", pca_num, "Components to keep (default: ceil(d/2))");
    add_common(pca_cmd, pca_common);

    std::vector<std::string> args;
    try {
        args = merge_config_args(argc, argv);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    std::reverse(args.begin(), args.end());
    try {
        app.parse(std::move(args));
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (fit_cmd->parsed()) {
            return run_fit(fit_common, fit_x, fit_y, fit_lambda, fit_lambda_opt->count() > 0,
                           fit_k, fit_lasso);
        }
        if (tune_cmd->parsed()) {
            return run_tune(tune_common, tune_x, tune_y, tune_grid, tune_split, tune_shuffle,
                            tune_k, tune_criterion, tune_lasso);
        }
        if (sim_cmd->parsed()) {
            return run_simulate(sim_common, sim_case, sim_n, sim_p, sim_d, sim_sigma2, sim_reps,
                                sim_methods, sim_grid, sim_lasso);
        }
        if (perm_cmd->parsed()) {
            return run_permtest(perm_common, perm_x, perm_y, perm_procedure, perm_count,
                                perm_lambda, perm_grid, perm_mu_x, perm_mu_y, perm_split,
                                perm_retune, perm_lasso);
        }
        if (base_cmd->parsed()) {
            return run_baseline(base_common, base_x, base_y, base_method, base_mu_x, base_mu_y,
                                base_k);
        }
        if (pca_cmd->parsed()) {
            return run_pca_reduce(pca_common, pca_y, pca_num);
        }
    } catch (const NumericError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
