// smoothcut command line: run one experiment, sweep a grid, verify the
// geometric invariant suite, or plot traces to SVG.

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <iostream>

#include "smoothcut/config.hpp"
#include "smoothcut/plot.hpp"
#include "smoothcut/report_io.hpp"
#include "smoothcut/verify.hpp"

namespace fs = std::filesystem;
using namespace smoothcut;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

std::string default_out_dir() {
    const char* env = std::getenv("SMOOTHCUT_OUT");
    return env ? env : "out";
}

struct CommonArgs {
    std::string config_path;
    std::string out_dir = default_out_dir();
    bool out_given = false;
    std::int64_t seed_override = -1;
    int trials_override = -1;
    bool verbose = false;
};

ExperimentConfig load_config(CommonArgs& args, nlohmann::json& echo) {
    ConfigFile cf = ConfigFile::parse_file(args.config_path);
    ExperimentConfig cfg = cf.to_experiment_config();
    if (args.seed_override >= 0) cfg.master_seed = static_cast<std::uint64_t>(args.seed_override);
    if (args.trials_override >= 1) cfg.trials = args.trials_override;
    // precedence: explicit --out, then run.out from the file, then the default
    if (!args.out_given && !cfg.out_dir.empty()) args.out_dir = cfg.out_dir;
    echo = cf.echo();
    echo["run"]["seed"] = std::to_string(cfg.master_seed);
    echo["run"]["trials"] = std::to_string(cfg.trials);
    return cfg;
}

int cmd_run(CommonArgs args) {
    nlohmann::json echo;
    ExperimentConfig cfg;
    try {
        cfg = load_config(args, echo);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }

    fs::create_directories(args.out_dir);
    try {
        for (int trial = 0; trial < cfg.trials; ++trial) {
            std::string suffix = cfg.trials > 1 ? "_trial" + std::to_string(trial) : "";
            if (cfg.learner_kind == "igw") {
                BanditResult br = run_bandit_experiment(cfg, static_cast<std::uint64_t>(trial));
                write_trace_csv(br.trace, args.out_dir + "/trace" + suffix + ".csv");
                nlohmann::json cp = nlohmann::json::array();
                for (auto [t, reg] : br.regret_checkpoints) cp.push_back({{"t", t}, {"regret", reg}});
                nlohmann::json summary = {{"config", echo},
                                          {"total_mistakes", br.trace.total_mistakes()},
                                          {"cumulative_regret", br.cum_regret},
                                          {"regret_checkpoints", cp},
                                          {"distributions_valid", br.distributions_valid}};
                std::ofstream out(args.out_dir + "/summary" + suffix + ".json", std::ios::binary);
                out << summary.dump(2) << '\n';
                if (args.verbose)
                    std::cout << "trial " << trial << ": regret " << br.cum_regret << "\n";
            } else {
                auto [trace, summary] = run_experiment(cfg, static_cast<std::uint64_t>(trial));
                write_trace_csv(trace, args.out_dir + "/trace" + suffix + ".csv");
                write_summary_json(summary, echo, args.out_dir + "/summary" + suffix + ".json");
                if (args.verbose)
                    std::cout << "trial " << trial << ": " << summary.total_mistakes
                              << " mistakes, decay " << (summary.decay.pass ? "ok" : "VIOLATED")
                              << "\n";
            }
        }
    } catch (const RunError& e) {
        std::cerr << "runtime error (" << e.inner_kind << ") at " << e.what() << "\n";
        return kExitRuntime;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }
    std::cout << "wrote " << args.out_dir << "/trace*.csv and summary*.json\n";
    return kExitOk;
}

int cmd_sweep(CommonArgs args) {
    nlohmann::json echo;
    ExperimentConfig cfg;
    try {
        cfg = load_config(args, echo);
        if (cfg.sweep_horizons.empty() && cfg.sweep_sigmas.empty())
            throw ConfigError("sweep requires sweep.horizons and/or sweep.sigmas");
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }
    fs::create_directories(args.out_dir);
    try {
        SweepResult sweep = run_sweep(cfg);
        write_sweep_csv(sweep, args.out_dir + "/sweep.csv");
        nlohmann::json summary = sweep_json(sweep);
        summary["config"] = echo;
        std::ofstream out(args.out_dir + "/sweep_summary.json", std::ios::binary);
        out << summary.dump(2) << '\n';
        if (sweep.slope_vs_log_T)
            std::cout << "slope of mistakes vs ln T: " << *sweep.slope_vs_log_T << "\n";
        if (sweep.slope_vs_log_inv_sigma)
            std::cout << "slope of mistakes vs ln(1/sigma): " << *sweep.slope_vs_log_inv_sigma << "\n";
    } catch (const RunError& e) {
        std::cerr << "runtime error (" << e.inner_kind << ") at " << e.what() << "\n";
        return kExitRuntime;
    }
    std::cout << "wrote " << args.out_dir << "/sweep.csv\n";
    return kExitOk;
}

int cmd_verify(bool quick) {
    std::vector<CheckResult> results;
    results.push_back(check_analytic_ellipsoids());
    results.push_back(check_sandwich_batch(quick ? 20 : 100, quick ? 2000 : 10000));
    results.push_back(check_tarasov_batch(quick ? 100 : 1000, 5));
    results.push_back(check_erm_crosscheck(quick ? 60 : 300));

    bool all = true;
    std::printf("%-24s %-6s %s\n", "check", "result", "detail");
    for (const auto& r : results) {
        all = all && r.pass;
        std::printf("%-24s %-6s %s\n", r.name.c_str(), r.pass ? "pass" : "FAIL", r.detail.c_str());
    }
    return all ? kExitOk : kExitConfig;
}

int cmd_plot(const std::string& out_dir, const std::string& trace_path,
             const std::string& sweep_path) {
    fs::create_directories(out_dir);
    try {
        bool any = false;
        if (!trace_path.empty()) {
            TraceRows rows = read_trace_csv(trace_path);
            plot_cumulative_mistakes(rows, out_dir + "/mistakes_vs_t.svg");
            plot_volume_decay(rows, out_dir + "/volume_decay.svg");
            any = true;
        }
        if (!sweep_path.empty()) {
            auto rows = read_sweep_csv(sweep_path);
            plot_mistakes_vs_sigma(rows, out_dir + "/mistakes_vs_sigma.svg");
            any = true;
        }
        if (!any) {
            std::cerr << "plot: need --trace and/or --sweep\n";
            return kExitConfig;
        }
    } catch (const std::exception& e) {
        std::cerr << "plot error: " << e.what() << "\n";
        return kExitConfig;
    }
    std::cout << "wrote SVG figures to " << out_dir << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"smoothed online learning simulator"};
    app.require_subcommand(1);

    CommonArgs args;

    auto* run = app.add_subcommand("run", "run one experiment from a config file");
    run->add_option("--config", args.config_path, "experiment config file")->required();
    auto* run_out = run->add_option("--out", args.out_dir, "output directory");
    run->add_option("--seed", args.seed_override, "master seed override");
    run->add_option("--trials", args.trials_override, "trial count override");
    run->add_flag("-v,--verbose", args.verbose, "per-trial progress");

    auto* sweep = app.add_subcommand("sweep", "run a horizon/sigma sweep");
    sweep->add_option("--config", args.config_path, "experiment config file")->required();
    auto* sweep_out = sweep->add_option("--out", args.out_dir, "output directory");
    sweep->add_option("--seed", args.seed_override, "master seed override");
    sweep->add_option("--trials", args.trials_override, "trial count override");
    sweep->add_flag("-v,--verbose", args.verbose, "per-trial progress");

    bool quick = false;
    auto* verify = app.add_subcommand("verify", "run the geometric invariant suite");
    verify->add_flag("--quick", quick, "smaller batches for a fast smoke check");

    std::string trace_path, sweep_path, plot_out = default_out_dir();
    auto* plot = app.add_subcommand("plot", "emit SVG figures from trace/sweep CSVs");
    plot->add_option("--trace", trace_path, "trace CSV path");
    plot->add_option("--sweep", sweep_path, "sweep CSV path");
    plot->add_option("--out", plot_out, "output directory");

    CLI11_PARSE(app, argc, argv);

    args.out_given = run_out->count() > 0 || sweep_out->count() > 0;
    if (run->parsed()) return cmd_run(args);
    if (sweep->parsed()) return cmd_sweep(args);
    if (verify->parsed()) return cmd_verify(quick);
    if (plot->parsed()) return cmd_plot(plot_out, trace_path, sweep_path);
    return kExitConfig;
}
