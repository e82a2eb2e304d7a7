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

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "lbt/analysis.hpp"
#include "lbt/config.hpp"
#include "lbt/csv.hpp"
#include "lbt/sim.hpp"
#include "lbt/solver.hpp"

namespace lbt {

/// One swept parameter: a config key plus the values it takes.
struct ExperimentAxis {
    std::string path;                 // dotted config key, e.g. "params.p"
    std::vector<std::string> values;  // config-syntax values, e.g. "0.5", "12ms"
};

/// A named experiment: base settings plus axes expanded as a cross
/// product. Axis paths must name existing config keys and value lists
/// must be nonempty.
struct ExperimentSpec {
    std::string name;
    config::Settings base;
    std::vector<ExperimentAxis> axes;
    std::string output_path;

    void validate() const {
        for (const auto& axis : axes) {
            if (!config::is_known_key(axis.path)) {
                throw config::ParseError("experiment '" + name + "': unknown axis path '" +
                                         axis.path + "'");
            }
            if (axis.values.empty()) {
                throw config::ParseError("experiment '" + name + "': axis '" + axis.path +
                                         "' has no values");
            }
        }
    }

    /// Cross product of the axes applied over the base settings, last
    /// axis fastest.
    std::vector<config::Settings> expand() const {
        validate();
        std::vector<config::Settings> combos{base};
        for (const auto& axis : axes) {
            std::vector<config::Settings> next;
            next.reserve(combos.size() * axis.values.size());
            for (const auto& combo : combos) {
                for (const auto& value : axis.values) {
                    config::Settings s = combo;
                    config::apply(s, axis.path, value);
                    next.push_back(std::move(s));
                }
            }
            combos = std::move(next);
        }
        return combos;
    }
};

inline const std::string kSimCsvHeader =
    "threshold_bpshz,throughput_bps,stderr_bps,mean_phases,mean_checks,periods,seed";

inline std::string sim_csv_row(double threshold_bpshz, const SimReport& r) {
    return csv::num(threshold_bpshz) + ',' + csv::num(r.throughput_bps) + ',' +
           csv::num(r.throughput_stderr_bps) + ',' + csv::num(r.mean_ecca_phases_per_period) +
           ',' + csv::num(r.mean_ecca_checks_per_phase) + ',' + csv::num(r.periods) + ',' +
           csv::num(r.seed);
}

inline std::string sweep_csv(const std::vector<std::pair<double, SimReport>>& points) {
    std::string out = kSimCsvHeader + '\n';
    for (const auto& [threshold, report] : points) {
        out += sim_csv_row(threshold, report) + '\n';
    }
    return out;
}

inline const std::string kSolveCsvHeader =
    "method,lambda_star_bps,threshold_bpshz,iterations,residual_bps";

inline std::string solve_csv_row(const SolverResult& r) {
    return std::string(r.method == SolveMethod::fixed_point ? "fixed_point" : "bisection") + ',' +
           csv::num(r.lambda_star_bps) + ',' + csv::num(r.threshold_bpshz()) + ',' +
           csv::num(static_cast<std::int64_t>(r.iterations)) + ',' + csv::num(r.residual_bps);
}

// ---------------------------------------------------------------------------
// Threshold-sweep study over (T_cot,max, q, p) operating points.

struct Fig2Tuple {
    double t_cot_max_s = 12e-3;
    int q = 32;
    double p = 0.5;
};

/// Operating points contrasted in the sweep study: each counter range at
/// its scaled occupancy time (12/32*q ms), plus the cross combinations
/// that isolate the occupancy-time effect at fixed q and the counter-range
/// effect at a fixed occupancy time.
inline std::vector<Fig2Tuple> default_fig2_tuples(double p) {
    return {{12e-3, 32, p}, {1.5e-3, 4, p}, {12e-3, 4, p}, {1.5e-3, 32, p}};
}

struct Fig2Options {
    std::vector<Fig2Tuple> tuples = default_fig2_tuples(0.5);
    int grid_count = 50;
    double grid_max_bpshz = 0.0;  // 0 = auto: twice the largest solver threshold
    std::int64_t periods = 100000;
    std::uint64_t seed = 1;
    int threads = 1;
};

struct Fig2Curve {
    Fig2Tuple tuple;
    double zeta = 0.0;
    double lambda_star_bps = 0.0;
    double threshold_bpshz = 0.0;
    std::vector<double> grid;
    std::vector<SimReport> reports;
    int argmax_index = 0;  // grid index with the largest simulated throughput
    int solver_index = 0;  // grid index nearest the solver threshold

    double max_throughput_bps() const { return reports[argmax_index].throughput_bps; }
};

inline std::vector<Fig2Curve> run_fig2(const LbtParams& base, const ChannelModel& model,
                                       const Fig2Options& opt) {
    std::vector<Fig2Curve> curves;
    curves.reserve(opt.tuples.size());
    for (const auto& tuple : opt.tuples) {
        Fig2Curve curve;
        curve.tuple = tuple;
        LbtParams prm = base;
        prm.t_cot_max_s = tuple.t_cot_max_s;
        prm.q = tuple.q;
        prm.p = tuple.p;
        curve.zeta = zeta(prm);
        const SolverResult solved = solve_fixed_point(prm, model);
        curve.lambda_star_bps = solved.lambda_star_bps;
        curve.threshold_bpshz = solved.threshold_bpshz();
        curves.push_back(std::move(curve));
    }

    // Auto span: 1.5x the largest optimum keeps every maximum interior while
    // avoiding deep-tail thresholds whose periods run thousands of phases.
    double grid_max = opt.grid_max_bpshz;
    if (!(grid_max > 0.0)) {
        for (const auto& c : curves) grid_max = std::max(grid_max, 1.5 * c.threshold_bpshz);
    }

    std::vector<double> grid(opt.grid_count);
    for (int i = 0; i < opt.grid_count; ++i) {
        grid[i] = grid_max * i / (opt.grid_count - 1);
    }

    for (std::size_t ci = 0; ci < curves.size(); ++ci) {
        Fig2Curve& curve = curves[ci];
        SimConfig cfg;
        cfg.params = base;
        cfg.params.t_cot_max_s = curve.tuple.t_cot_max_s;
        cfg.params.q = curve.tuple.q;
        cfg.params.p = curve.tuple.p;
        cfg.model = model;
        cfg.periods = opt.periods;
        cfg.seed = derived_seed(opt.seed, ci);
        cfg.threads = opt.threads;
        curve.grid = grid;
        auto points = sweep_thresholds(cfg, grid);
        curve.reports.reserve(points.size());
        for (auto& [threshold, report] : points) curve.reports.push_back(std::move(report));

        for (int i = 1; i < opt.grid_count; ++i) {
            if (curve.reports[i].throughput_bps >
                curve.reports[curve.argmax_index].throughput_bps) {
                curve.argmax_index = i;
            }
            if (std::fabs(grid[i] - curve.threshold_bpshz) <
                std::fabs(grid[curve.solver_index] - curve.threshold_bpshz)) {
                curve.solver_index = i;
            }
        }
    }
    return curves;
}

inline const std::string kFig2CsvHeader =
    "curve,t_cot_max_s,q,p,threshold_bpshz,throughput_bps,stderr_bps,periods,seed";

inline std::string fig2_csv(const std::vector<Fig2Curve>& curves) {
    std::string out = kFig2CsvHeader + '\n';
    for (std::size_t ci = 0; ci < curves.size(); ++ci) {
        const Fig2Curve& c = curves[ci];
        for (std::size_t i = 0; i < c.grid.size(); ++i) {
            out += csv::num(static_cast<std::int64_t>(ci)) + ',' + csv::num(c.tuple.t_cot_max_s) +
                   ',' + csv::num(c.tuple.q) + ',' + csv::num(c.tuple.p) + ',' +
                   csv::num(c.grid[i]) + ',' + csv::num(c.reports[i].throughput_bps) + ',' +
                   csv::num(c.reports[i].throughput_stderr_bps) + ',' +
                   csv::num(c.reports[i].periods) + ',' + csv::num(c.reports[i].seed) + '\n';
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Optimal stopping versus always-transmit baseline over (p, k).

struct Fig3Options {
    std::vector<double> p_grid = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
    std::vector<double> k_values = {1.0, 4.0};
    std::int64_t periods = 100000;
    std::uint64_t seed = 1;
    int threads = 1;
};

struct Fig3Point {
    double p = 0.0;
    double k = 0.0;
    double lambda_star_bps = 0.0;
    double threshold_bpshz = 0.0;
    SimReport optimal;
    SimReport baseline_probe;
    SimReport baseline_noprobe;
};

/// Runs the (p, k) cross product through an ExperimentSpec so axis paths
/// go through the same validation as config files.
inline std::vector<Fig3Point> run_fig3(const config::Settings& base, const Fig3Options& opt) {
    ExperimentSpec spec;
    spec.name = "fig3";
    spec.base = base;
    ExperimentAxis p_axis{"params.p", {}};
    for (double p : opt.p_grid) p_axis.values.push_back(csv::num(p));
    ExperimentAxis k_axis{"channel.k", {}};
    for (double k : opt.k_values) k_axis.values.push_back(csv::num(k));
    spec.axes = {p_axis, k_axis};

    std::vector<Fig3Point> points;
    const auto combos = spec.expand();
    points.reserve(combos.size());
    for (std::size_t i = 0; i < combos.size(); ++i) {
        const auto& settings = combos[i];
        const LbtParams prm = config::params_from(settings);
        const ChannelModel model = config::channel_from(settings);

        Fig3Point point;
        point.p = prm.p;
        point.k = model.fading_shape();
        const SolverResult solved = solve_fixed_point(prm, model);
        point.lambda_star_bps = solved.lambda_star_bps;
        point.threshold_bpshz = solved.threshold_bpshz();

        SimConfig cfg;
        cfg.params = prm;
        cfg.model = model;
        cfg.periods = opt.periods;
        cfg.threads = opt.threads;

        cfg.policy = StoppingPolicy::threshold(point.threshold_bpshz);
        cfg.seed = derived_seed(opt.seed, 3 * i);
        point.optimal = run(cfg);

        cfg.policy = StoppingPolicy::always_transmit();
        cfg.baseline_probes = true;
        cfg.seed = derived_seed(opt.seed, 3 * i + 1);
        point.baseline_probe = run(cfg);

        cfg.baseline_probes = false;
        cfg.seed = derived_seed(opt.seed, 3 * i + 2);
        point.baseline_noprobe = run(cfg);

        points.push_back(std::move(point));
    }
    return points;
}

inline const std::string kFig3CsvHeader =
    "p,k,lambda_star_bps,threshold_bpshz,opt_throughput_bps,opt_stderr_bps,"
    "baseline_probe_bps,baseline_probe_stderr_bps,baseline_noprobe_bps,"
    "baseline_noprobe_stderr_bps,periods,seed";

inline std::string fig3_csv(const std::vector<Fig3Point>& points) {
    std::string out = kFig3CsvHeader + '\n';
    for (const auto& pt : points) {
        out += csv::num(pt.p) + ',' + csv::num(pt.k) + ',' + csv::num(pt.lambda_star_bps) + ',' +
               csv::num(pt.threshold_bpshz) + ',' + csv::num(pt.optimal.throughput_bps) + ',' +
               csv::num(pt.optimal.throughput_stderr_bps) + ',' +
               csv::num(pt.baseline_probe.throughput_bps) + ',' +
               csv::num(pt.baseline_probe.throughput_stderr_bps) + ',' +
               csv::num(pt.baseline_noprobe.throughput_bps) + ',' +
               csv::num(pt.baseline_noprobe.throughput_stderr_bps) + ',' +
               csv::num(pt.optimal.periods) + ',' + csv::num(pt.optimal.seed) + '\n';
    }
    return out;
}

// ---------------------------------------------------------------------------
// Regulation-parameter optimum.

inline const std::string kRegoptCsvHeader = "q,t_cot_max_s,lambda_star_bps,threshold_bpshz";

inline std::string regopt_csv(const std::vector<RegulationPoint>& rows, double w_hz) {
    std::string out = kRegoptCsvHeader + '\n';
    for (const auto& row : rows) {
        out += csv::num(row.q) + ',' + csv::num(row.t_cot_max_s) + ',' +
               csv::num(row.lambda_star_bps) + ',' + csv::num(row.lambda_star_bps / w_hz) + '\n';
    }
    return out;
}

}  // namespace lbt
