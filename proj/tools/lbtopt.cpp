/*
   Copyright 2026 The lbtopt Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lbt/lbt.hpp"

namespace {

// Exit codes shared by all subcommands.
constexpr int kExitOk = 0;
constexpr int kExitConfigInvalid = 2;
constexpr int kExitSolverFailure = 3;
constexpr int kExitSimGuard = 4;

struct CommonArgs {
    std::string config_path;
    std::string out_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> periods;
    std::optional<int> threads;
    std::string log_base;  // "2" or "e"
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "config file (key = value)");
    cmd->add_option("--out", args.out_path, "write CSV output to this file");
    cmd->add_option("--seed", args.seed, "override sim.seed");
    cmd->add_option("--periods", args.periods, "override sim.periods");
    cmd->add_option("--threads", args.threads, "override sim.threads");
    cmd->add_option("--log-base", args.log_base, "rate log base: 2 or e")
        ->check(CLI::IsMember({"2", "e"}));
}

struct Loaded {
    lbt::config::Settings settings;
    std::filesystem::path base_dir;
};

Loaded load_settings(const CommonArgs& args) {
    Loaded loaded;
    if (!args.config_path.empty()) {
        loaded.settings = lbt::config::parse_settings_file(args.config_path);
        loaded.base_dir = std::filesystem::path(args.config_path).parent_path();
    }
    if (args.seed) lbt::config::apply(loaded.settings, "sim.seed", std::to_string(*args.seed));
    if (args.periods) {
        lbt::config::apply(loaded.settings, "sim.periods", std::to_string(*args.periods));
    }
    if (args.threads) {
        lbt::config::apply(loaded.settings, "sim.threads", std::to_string(*args.threads));
    }
    if (!args.log_base.empty()) lbt::config::apply(loaded.settings, "log-base", args.log_base);
    return loaded;
}

// Validation gate used by every subcommand that feeds the solver/simulator.
lbt::LbtParams checked_params(const lbt::config::Settings& settings) {
    const lbt::LbtParams prm = lbt::config::params_from(settings);
    const lbt::ValidationReport report = lbt::validate(prm);
    for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
    if (!report.ok()) {
        for (const auto& v : report.violations) std::cerr << "invalid config: " << v << '\n';
        std::exit(kExitConfigInvalid);
    }
    return prm;
}

void emit(const CommonArgs& args, const std::string& csv_text) {
    if (args.out_path.empty()) {
        std::cout << csv_text;
        return;
    }
    std::ofstream out(args.out_path, std::ios::binary);
    if (!out) {
        std::cerr << "cannot open output file: " << args.out_path << '\n';
        std::exit(1);
    }
    out << csv_text;
}

int guard_exit(const lbt::SimReport& report) {
    if (report.capped_periods > 0) {
        std::cerr << "simulation guard tripped: " << report.capped_periods
                  << " period(s) hit the ECCA phase cap (threshold above channel support?)\n";
        return kExitSimGuard;
    }
    return kExitOk;
}

int cmd_validate(const CommonArgs& args) {
    const Loaded loaded = load_settings(args);
    const lbt::LbtParams prm = lbt::config::params_from(loaded.settings);
    const lbt::ValidationReport report = lbt::validate(prm);
    for (const auto& w : report.warnings) std::cout << "warning: " << w << '\n';
    for (const auto& v : report.violations) std::cout << "violation: " << v << '\n';
    if (!report.ok()) return kExitConfigInvalid;
    std::cout << "ok\n";
    return kExitOk;
}

int cmd_solve(const CommonArgs& args) {
    const Loaded loaded = load_settings(args);
    const lbt::LbtParams prm = checked_params(loaded.settings);
    const lbt::ChannelModel model = lbt::config::channel_from(loaded.settings, loaded.base_dir);

    const lbt::SolverResult fp = lbt::solve_fixed_point(prm, model);
    const lbt::SolverResult bis = lbt::solve_bisection(prm, model);
    std::printf("lambda_star_bps   %.10g\n", fp.lambda_star_bps);
    std::printf("threshold_bpshz   %.10g\n", fp.threshold_bpshz());
    std::printf("iterations        %d\n", fp.iterations);
    std::printf("residual_bps      %.3g\n", fp.residual_bps);
    std::printf("bisection_bps     %.10g  (cross-check, %d iterations)\n", bis.lambda_star_bps,
                bis.iterations);
    if (fp.degenerate_channel) std::printf("note              zero-rate channel; lambda* = 0\n");

    if (!args.out_path.empty()) {
        emit(args, lbt::kSolveCsvHeader + '\n' + lbt::solve_csv_row(fp) + '\n' +
                       lbt::solve_csv_row(bis) + '\n');
    }
    return kExitOk;
}

int cmd_analyze(const CommonArgs& args) {
    const Loaded loaded = load_settings(args);
    const lbt::LbtParams prm = checked_params(loaded.settings);
    const lbt::ChannelModel model = lbt::config::channel_from(loaded.settings, loaded.base_dir);

    const double z = lbt::zeta(prm);
    const lbt::SolverResult solved = lbt::solve_fixed_point(prm, model);
    std::printf("zeta                      %.10g\n", z);
    std::printf("mean_checks_per_phase     %.10g\n", lbt::expected_ecca_checks(prm));
    std::printf("mean_rate_bpshz           %.10g\n", model.mean());
    std::printf("baseline_probe_bps        %.10g\n", lbt::baseline_throughput(prm, model, true));
    std::printf("baseline_noprobe_bps      %.10g\n", lbt::baseline_throughput(prm, model, false));
    std::printf("lambda_star_bps           %.10g\n", solved.lambda_star_bps);
    std::printf("threshold_bpshz           %.10g\n", solved.threshold_bpshz());
    if (solved.degenerate_channel) {
        std::printf("note                      zero-rate channel; lambda* = 0\n");
        return kExitOk;
    }
    const lbt::PeriodStats stats =
        lbt::stopped_period_stats(prm, model, solved.lambda_star_bps);
    std::printf("expected_period_s         %.10g\n", stats.expected_duration_s);
    std::printf("expected_bits_per_period  %.10g\n", stats.expected_bits);
    std::printf("mean_phases_per_period    %.10g\n",
                1.0 / model.prob_at_least(solved.threshold_bpshz()));
    return kExitOk;
}

int cmd_simulate(const CommonArgs& args) {
    const Loaded loaded = load_settings(args);
    const lbt::LbtParams prm = checked_params(loaded.settings);
    lbt::ChannelModel model = lbt::config::channel_from(loaded.settings, loaded.base_dir);
    lbt::config::SimSpec spec =
        lbt::config::sim_from(loaded.settings, prm, std::move(model));

    double threshold = spec.config.policy.cutoff_bpshz;
    if (spec.threshold_auto) {
        const lbt::SolverResult solved = lbt::solve_fixed_point(prm, spec.config.model);
        threshold = solved.threshold_bpshz();
        spec.config.policy = lbt::StoppingPolicy::threshold(threshold);
    }
    if (spec.config.policy.kind == lbt::StoppingPolicy::Kind::always_transmit) threshold = 0.0;

    const lbt::SimReport report = lbt::run(spec.config);
    emit(args, lbt::kSimCsvHeader + '\n' + lbt::sim_csv_row(threshold, report) + '\n');
    return guard_exit(report);
}

int cmd_sweep(const CommonArgs& args, double grid_min, double grid_max, int grid_count) {
    const Loaded loaded = load_settings(args);
    const lbt::LbtParams prm = checked_params(loaded.settings);
    lbt::ChannelModel model = lbt::config::channel_from(loaded.settings, loaded.base_dir);
    lbt::config::SimSpec spec = lbt::config::sim_from(loaded.settings, prm, std::move(model));

    if (!(grid_max > 0.0)) {
        const lbt::SolverResult solved = lbt::solve_fixed_point(prm, spec.config.model);
        grid_max = 1.5 * solved.threshold_bpshz();
    }
    std::vector<double> grid(grid_count);
    for (int i = 0; i < grid_count; ++i) {
        grid[i] = grid_min + (grid_max - grid_min) * i / (grid_count - 1);
    }

    const auto points = lbt::sweep_thresholds(spec.config, grid);
    emit(args, lbt::sweep_csv(points));
    for (const auto& [threshold, report] : points) {
        if (const int code = guard_exit(report); code != kExitOk) return code;
    }
    return kExitOk;
}

int cmd_fig2(const CommonArgs& args, double p, int grid_count, double grid_max) {
    const Loaded loaded = load_settings(args);
    const lbt::LbtParams base = lbt::config::params_from(loaded.settings);
    const lbt::ChannelModel model = lbt::config::channel_from(loaded.settings, loaded.base_dir);
    lbt::config::SimSpec spec = lbt::config::sim_from(loaded.settings, base, model);

    lbt::Fig2Options opt;
    opt.tuples = lbt::default_fig2_tuples(p);
    opt.grid_count = grid_count;
    opt.grid_max_bpshz = grid_max;
    opt.periods = spec.config.periods;
    opt.seed = spec.config.seed;
    opt.threads = spec.config.threads;

    const auto curves = lbt::run_fig2(base, model, opt);
    emit(args, lbt::fig2_csv(curves));
    for (const auto& curve : curves) {
        for (const auto& report : curve.reports) {
            if (const int code = guard_exit(report); code != kExitOk) return code;
        }
    }
    return kExitOk;
}

int cmd_fig3(const CommonArgs& args) {
    const Loaded loaded = load_settings(args);
    checked_params(loaded.settings);
    lbt::config::SimSpec spec = lbt::config::sim_from(
        loaded.settings, lbt::config::params_from(loaded.settings),
        lbt::config::channel_from(loaded.settings, loaded.base_dir));

    lbt::Fig3Options opt;
    opt.periods = spec.config.periods;
    opt.seed = spec.config.seed;
    opt.threads = spec.config.threads;

    const auto points = lbt::run_fig3(loaded.settings, opt);
    emit(args, lbt::fig3_csv(points));
    for (const auto& pt : points) {
        for (const auto* r : {&pt.optimal, &pt.baseline_probe, &pt.baseline_noprobe}) {
            if (const int code = guard_exit(*r); code != kExitOk) return code;
        }
    }
    return kExitOk;
}

int cmd_regopt(const CommonArgs& args) {
    const Loaded loaded = load_settings(args);
    const lbt::LbtParams prm = lbt::config::params_from(loaded.settings);
    const lbt::ChannelModel model = lbt::config::channel_from(loaded.settings, loaded.base_dir);

    const auto rows =
        lbt::regulation_scan(prm.t_ecca_s, prm.tau, prm.p, model, prm.bandwidth_hz);
    emit(args, lbt::regopt_csv(rows, prm.bandwidth_hz));

    const auto best = *std::max_element(rows.begin(), rows.end(),
                                        [](const auto& a, const auto& b) {
                                            return a.lambda_star_bps < b.lambda_star_bps;
                                        });
    std::fprintf(stderr, "optimum: q=%d t_cot_max=%.9gms lambda*=%.10g bps\n", best.q,
                 best.t_cot_max_s * 1e3, best.lambda_star_bps);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Throughput-optimal listen-before-talk: solver, analysis, and simulator"};
    app.require_subcommand(1);

    CommonArgs args;
    double sweep_min = 0.0, sweep_max = 0.0, fig2_p = 0.5, fig2_grid_max = 0.0;
    int sweep_count = 50, fig2_grid_count = 50;

    CLI::App* validate = app.add_subcommand("validate", "check config against the parameter rules");
    add_common(validate, args);
    CLI::App* solve = app.add_subcommand("solve", "maximum throughput and optimal threshold");
    add_common(solve, args);
    CLI::App* analyze = app.add_subcommand("analyze", "closed-form period/throughput quantities");
    add_common(analyze, args);
    CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo run at one policy");
    add_common(simulate, args);
    CLI::App* sweep = app.add_subcommand("sweep", "Monte Carlo sweep over stopping thresholds");
    add_common(sweep, args);
    sweep->add_option("--min", sweep_min, "lowest threshold (bits/s/Hz)");
    sweep->add_option("--max", sweep_max, "highest threshold (default: 2x optimal)");
    sweep->add_option("--count", sweep_count, "number of grid points")->check(CLI::Range(2, 100000));
    CLI::App* fig2 = app.add_subcommand(
        "fig2", "threshold sweeps across (T_cot_max, q) operating points");
    add_common(fig2, args);
    fig2->add_option("--p", fig2_p, "clear-ECCA probability for all curves");
    fig2->add_option("--grid-count", fig2_grid_count, "threshold grid size")
        ->check(CLI::Range(2, 100000));
    fig2->add_option("--grid-max", fig2_grid_max, "largest threshold (default: 2x optimal)");
    CLI::App* fig3 = app.add_subcommand(
        "fig3", "optimal stopping vs always-transmit baseline over (p, k)");
    add_common(fig3, args);
    CLI::App* regopt = app.add_subcommand("regopt", "best (q, T_cot_max) under the regulation");
    add_common(regopt, args);

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate->parsed()) return cmd_validate(args);
        if (solve->parsed()) return cmd_solve(args);
        if (analyze->parsed()) return cmd_analyze(args);
        if (simulate->parsed()) return cmd_simulate(args);
        if (sweep->parsed()) return cmd_sweep(args, sweep_min, sweep_max, sweep_count);
        if (fig2->parsed()) return cmd_fig2(args, fig2_p, fig2_grid_count, fig2_grid_max);
        if (fig3->parsed()) return cmd_fig3(args);
        if (regopt->parsed()) return cmd_regopt(args);
    } catch (const lbt::config::ParseError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfigInvalid;
    } catch (const lbt::Error& e) {
        std::cerr << "solver error: " << e.what() << '\n';
        return kExitSolverFailure;
    } catch (const std::invalid_argument& e) {
        // domain errors from model/policy construction are config problems
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfigInvalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return kExitOk;
}
