#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "istail/asymptotics.hpp"
#include "istail/config.hpp"
#include "istail/oracle.hpp"
#include "istail/report_io.hpp"
#include "istail/stats.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitFile = 2;
constexpr int kExitSchema = 3;
constexpr int kExitSamplerConfig = 4;

/// Writes to the path, or to stdout when the path is empty.
int with_output(const std::string& path, const std::function<void(std::ostream&)>& emit) {
    if (path.empty()) {
        emit(std::cout);
        return kExitOk;
    }
    std::ofstream out(path);
    if (!out) {
        std::cerr << "error: cannot open output file: " << path << "\n";
        return kExitFile;
    }
    emit(out);
    out.flush();
    if (!out) {
        std::cerr << "error: cannot write output file: " << path << "\n";
        return kExitFile;
    }
    return kExitOk;
}

struct CommonFlags {
    std::optional<std::uint64_t> seed;
    std::optional<int> workers;
    std::optional<std::string> format;
    std::string out_path;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--seed", flags.seed, "Override the experiment seed");
    cmd->add_option("--workers", flags.workers, "Worker threads (0 = hardware concurrency)");
    cmd->add_option("--format", flags.format, "Output format: csv or table")
        ->check(CLI::IsMember({"csv", "table"}));
    cmd->add_option("--out", flags.out_path, "Output file (default stdout)");
}

int cmd_estimate(const std::string& config_path, const CommonFlags& flags) {
    istail::CliConfig cli = istail::load_cli_config(config_path);
    if (flags.seed) cli.experiment.seed = *flags.seed;
    if (flags.workers) cli.experiment.workers = *flags.workers;
    if (flags.format) cli.format = *flags.format;
    if (!flags.out_path.empty()) cli.output = flags.out_path;

    const istail::ExperimentReport report = istail::run_experiment(cli.experiment);
    return with_output(cli.output, [&](std::ostream& os) {
        if (cli.format == "table")
            istail::io::write_report_table(os, report);
        else
            istail::io::write_report_csv(os, report);
    });
}

int cmd_reproduce_table(int table_id, std::size_t num_samples, int replications,
                        const CommonFlags& flags) {
    const istail::TableRun run =
        istail::run_table(table_id, num_samples, replications, flags.seed.value_or(1),
                          flags.workers.value_or(0));
    const std::string format = flags.format.value_or("csv");
    return with_output(flags.out_path, [&](std::ostream& os) {
        if (format == "table")
            istail::io::write_table_text(os, run);
        else
            istail::io::write_table_csv(os, run);
    });
}

std::vector<double> parse_c_grid(const std::string& text) {
    std::vector<double> grid;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        char* end = nullptr;
        const double c = std::strtod(item.c_str(), &end);
        if (end == item.c_str() || *end != '\0' || !(c > 0.0))
            throw istail::ConfigSchemaError("--c-grid entries must be positive numbers");
        grid.push_back(c);
    }
    if (grid.empty()) throw istail::ConfigSchemaError("--c-grid must be a non-empty list");
    return grid;
}

int cmd_diagnose(const std::string& config_path, const std::string& c_grid_text,
                 const CommonFlags& flags) {
    istail::CliConfig cli = istail::load_cli_config(config_path);
    if (flags.seed) cli.experiment.seed = *flags.seed;
    if (flags.workers) cli.experiment.workers = *flags.workers;
    if (flags.format) cli.format = *flags.format;
    if (!flags.out_path.empty()) cli.output = flags.out_path;
    const std::vector<double> c_grid = parse_c_grid(c_grid_text);

    const istail::ExperimentConfig& exp = cli.experiment;
    exp.validate();
    const istail::HeavyTailDistribution dist = istail::HeavyTailDistribution::pareto(exp.alpha);
    const double p = exp.levels.front();
    const double lambda = istail::asymptotic_quantile(exp.alpha, exp.n, p);
    const istail::MixtureConfig mix = exp.mixture_for(lambda);

    istail::RandomStream stream(exp.seed);
    const istail::WeightedSampleSet samples = istail::batch(dist, mix, exp.num_samples, stream);

    // Normalizing tail: exact for n <= 2, first-order approximation beyond.
    const istail::AsymptoticContext ctx{dist, exp.n, mix};
    const auto tail_fn = [&](double x) {
        if (exp.n == 1) return dist.tail(x);
        if (exp.n == 2) return istail::oracle_tail_n2(dist, x);
        return istail::tail_approx_U(ctx, x);
    };

    std::optional<double> var_bound;
    if (mix.algorithm != istail::Algorithm::StandardMC) var_bound = istail::var_ratio_bound(ctx);
    std::optional<double> es_bound;
    if (var_bound && exp.alpha > 2.0) {
        const double phi1 = (mix.algorithm == istail::Algorithm::ConditionalMixture)
                                ? istail::phi_conditional(ctx, 1.0)
                                : istail::phi_scaling(ctx, 1.0, lambda);
        es_bound = istail::es_ratio_bound(exp.alpha, phi1);
    }

    struct Row {
        double c, ratio, ratio_se, phi, max_w;
    };
    std::vector<Row> rows;
    const double tl = tail_fn(lambda);
    for (double c : c_grid) {
        const double threshold = c * lambda;
        istail::RunningStats moment;
        for (const auto& ws : samples)
            moment.add(ws.value > threshold ? ws.weight * ws.weight : 0.0);
        const double ratio = moment.mean() / (tl * tl);
        const double se =
            moment.stddev() / std::sqrt(static_cast<double>(moment.count())) / (tl * tl);
        double phi = std::numeric_limits<double>::quiet_NaN();
        if (mix.algorithm == istail::Algorithm::ConditionalMixture)
            phi = istail::phi_conditional(ctx, c);
        else if (mix.algorithm == istail::Algorithm::ScalingMixture)
            phi = istail::phi_scaling(ctx, c, lambda);
        rows.push_back({c, ratio, se, phi, istail::max_scaled_weight(samples, c, lambda, dist)});
    }

    return with_output(cli.output, [&](std::ostream& os) {
        char buf[240];
        if (cli.format == "table") {
            os << "algorithm: " << istail::algorithm_name(mix.algorithm) << "  alpha: " << exp.alpha
               << "  n: " << exp.n << "  p: " << p << "  lambda: " << lambda
               << "  N: " << exp.num_samples << "  seed: " << exp.seed << '\n';
            if (var_bound)
                os << "var_ratio_bound: " << *var_bound << '\n';
            else
                os << "var_ratio_bound: not applicable (standard_mc)\n";
            if (es_bound)
                os << "es_ratio_bound: " << *es_bound << '\n';
            else
                os << "es_ratio_bound: not applicable (alpha <= 2)\n";
            std::snprintf(buf, sizeof(buf), "%-8s %-22s %-14s %-14s %s\n", "c",
                          "second_moment_ratio", "ratio_se", "phi", "max_scaled_weight");
            os << buf;
            for (const auto& r : rows) {
                std::snprintf(buf, sizeof(buf), "%-8.4g %-22.8g %-14.4g %-14.8g %.8g\n", r.c,
                              r.ratio, r.ratio_se, r.phi, r.max_w);
                os << buf;
            }
        } else {
            os << "c,second_moment_ratio,ratio_se,phi,var_ratio_bound,es_ratio_bound,"
                  "max_scaled_weight\n";
            const double vb = var_bound.value_or(std::numeric_limits<double>::quiet_NaN());
            const double eb = es_bound.value_or(std::numeric_limits<double>::quiet_NaN());
            for (const auto& r : rows) {
                std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                              r.c, r.ratio, r.ratio_se, r.phi, vb, eb, r.max_w);
                os << buf;
            }
        }
    });
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Importance-sampling estimation of extreme quantiles and expected shortfall "
                 "for heavy-tailed random walks"};
    app.require_subcommand(1);

    std::string config_path;
    CommonFlags est_flags;
    CLI::App* estimate = app.add_subcommand("estimate", "Run the experiment in a JSON config");
    estimate->add_option("--config", config_path, "JSON experiment config")->required();
    add_common_flags(estimate, est_flags);

    int table_id = 1;
    std::size_t table_samples = 10000;
    int table_reps = 100;
    CommonFlags tbl_flags;
    CLI::App* reproduce =
        app.add_subcommand("reproduce-table", "Reproduce one of the four benchmark tables");
    reproduce->add_option("--table", table_id, "Table id (1-4)")
        ->required()
        ->check(CLI::Range(1, 4));
    reproduce->add_option("--samples", table_samples, "Samples per replication");
    reproduce->add_option("--reps", table_reps, "Replications per estimate");
    add_common_flags(reproduce, tbl_flags);

    std::string diag_config_path;
    std::string c_grid = "1,2,4";
    CommonFlags diag_flags;
    CLI::App* diagnose =
        app.add_subcommand("diagnose", "Second-moment diagnostics against the phi bounds");
    diagnose->add_option("--config", diag_config_path, "JSON experiment config")->required();
    diagnose->add_option("--c-grid", c_grid, "Comma-separated threshold multiples of lambda");
    add_common_flags(diagnose, diag_flags);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*estimate) return cmd_estimate(config_path, est_flags);
        if (*reproduce)
            return cmd_reproduce_table(table_id, table_samples, table_reps, tbl_flags);
        if (*diagnose) return cmd_diagnose(diag_config_path, c_grid, diag_flags);
    } catch (const istail::ConfigFileError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFile;
    } catch (const istail::ConfigSchemaError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSchema;
    } catch (const istail::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSamplerConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitRuntime;
}
