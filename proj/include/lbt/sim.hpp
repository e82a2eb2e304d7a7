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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <thread>
#include <utility>
#include <vector>

#include "lbt/channel.hpp"
#include "lbt/params.hpp"
#include "lbt/policy.hpp"
#include "lbt/rng.hpp"

namespace lbt {

/// Per-slot simulation mode. `exact` runs one Bernoulli trial per ECCA
/// observation slot; `geometric` samples the slot count of each counter
/// decrement directly (same distribution, fewer draws when p is small).
enum class SlotMode { exact, geometric };

struct SimConfig {
    LbtParams params;
    ChannelModel model = ChannelModel::point_mass(0.0);
    StoppingPolicy policy = StoppingPolicy::always_transmit();
    std::int64_t periods = 100000;
    std::uint64_t seed = 1;
    bool baseline_probes = true;  // always-transmit baseline still pays the probing time
    int batches = 30;             // batch-means groups for standard errors
    int threads = 1;
    SlotMode slot_mode = SlotMode::exact;
    std::int64_t phase_cap = 1000000;  // guard against thresholds above the channel support
};

/// One simulated communication period.
struct PeriodOutcome {
    double bits = 0.0;
    double seconds = 0.0;
    std::int64_t phases = 0;
    std::int64_t checks = 0;
    bool capped = false;
};

/// Aggregate simulation report. Standard errors come from batch means,
/// so they remain valid for the ratio estimators.
struct SimReport {
    double total_bits = 0.0;
    double total_time_s = 0.0;
    double throughput_bps = 0.0;
    double throughput_stderr_bps = 0.0;
    double mean_ecca_phases_per_period = 0.0;
    double phases_per_period_stderr = 0.0;
    double mean_ecca_checks_per_phase = 0.0;
    double checks_per_phase_stderr = 0.0;
    double mean_period_duration_s = 0.0;
    double period_duration_stderr_s = 0.0;
    std::int64_t periods = 0;
    std::int64_t capped_periods = 0;
    std::uint64_t seed = 0;
};

/// Counter draw at the start of an ECCA phase: uniform on {1..q}.
inline int draw_counter(Rng& rng, int q) { return rng.uniform_range(q); }

/// Number of ECCA observation slots needed to count a counter of z down
/// to zero when each slot is clear with probability p.
inline std::int64_t slots_for_counter(Rng& rng, int z, double p, SlotMode mode) {
    if (mode == SlotMode::exact) {
        std::int64_t slots = 0;
        int remaining = z;
        while (remaining > 0) {
            ++slots;
            if (rng.uniform01() < p) --remaining;
        }
        return slots;
    }
    // geometric shortcut: each decrement takes 1 + Geometric(p) - 1 slots
    if (p >= 1.0) return z;
    const double log_q = std::log1p(-p);
    std::int64_t slots = 0;
    for (int i = 0; i < z; ++i) {
        // clamp before the cast; absurdly small p would overflow int64
        const double extra = std::min(std::log(rng.uniform_pos()) / log_q, 4.0e18);
        slots += 1 + static_cast<std::int64_t>(extra);
    }
    return slots;
}

/// Simulates one communication period: ECCA phases (counter draw plus
/// clear-channel slots), link probing, the stop/skip decision, and the
/// final data transmission. Draw order per phase is fixed (counter,
/// slots, rate), which pins the stream layout for reproducibility.
inline PeriodOutcome run_period(const SimConfig& cfg, Rng& rng) {
    const LbtParams& prm = cfg.params;
    const double t_cot = prm.t_cot_max_s;
    const double probe_time = prm.tau * t_cot;
    const double data_time = (1.0 - prm.tau) * t_cot;
    const double w = prm.bandwidth_hz;

    PeriodOutcome out;
    for (;;) {
        if (out.phases >= cfg.phase_cap) {
            out.capped = true;
            return out;
        }
        const int z = draw_counter(rng, prm.q);
        const std::int64_t slots = slots_for_counter(rng, z, prm.p, cfg.slot_mode);
        ++out.phases;
        out.checks += slots;
        out.seconds += slots * prm.t_ecca_s;

        if (cfg.policy.kind == StoppingPolicy::Kind::always_transmit) {
            if (cfg.baseline_probes) {
                // same accumulation order as the threshold branch, so a zero
                // threshold reproduces this policy bit-for-bit
                out.seconds += probe_time;
                const double rate = cfg.model.sample(rng);
                out.seconds += data_time;
                out.bits = data_time * w * rate;
            } else {
                const double rate = cfg.model.sample(rng);
                out.seconds += t_cot;
                out.bits = t_cot * w * rate;
            }
            return out;
        }

        out.seconds += probe_time;
        const double rate = cfg.model.sample(rng);
        if (rate >= cfg.policy.cutoff_bpshz) {
            out.seconds += data_time;
            out.bits = data_time * w * rate;
            return out;
        }
    }
}

namespace detail {

struct BatchAccum {
    double bits = 0.0;
    double time_s = 0.0;
    std::int64_t periods = 0;
    std::int64_t phases = 0;
    std::int64_t checks = 0;
    std::int64_t capped = 0;
};

inline double batch_stderr(const std::vector<double>& values) {
    const std::size_t n = values.size();
    if (n < 2) return 0.0;
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    return std::sqrt(ss / (static_cast<double>(n) - 1.0) / static_cast<double>(n));
}

}  // namespace detail

/// Runs `periods` independent communication periods and aggregates them.
///
/// Every period gets its own RNG stream derived from (seed, period index),
/// and batches are combined in index order, so the report is bit-identical
/// for a given (config, seed, batch layout) regardless of thread count.
inline SimReport run(const SimConfig& cfg) {
    if (cfg.periods < 1) throw std::invalid_argument("run: periods must be >= 1");
    const std::int64_t n = cfg.periods;
    const int batches = static_cast<int>(std::clamp<std::int64_t>(cfg.batches, 1, n));

    std::vector<detail::BatchAccum> acc(batches);
    auto run_batch = [&](int b) {
        const std::int64_t lo = n * b / batches;
        const std::int64_t hi = n * (b + 1) / batches;
        detail::BatchAccum& a = acc[b];
        for (std::int64_t i = lo; i < hi; ++i) {
            Rng rng = Rng::stream(cfg.seed, static_cast<std::uint64_t>(i));
            const PeriodOutcome out = run_period(cfg, rng);
            a.bits += out.bits;
            a.time_s += out.seconds;
            a.phases += out.phases;
            a.checks += out.checks;
            a.capped += out.capped ? 1 : 0;
            ++a.periods;
        }
    };

    const int workers = static_cast<int>(std::clamp(cfg.threads, 1, batches));
    if (workers <= 1) {
        for (int b = 0; b < batches; ++b) run_batch(b);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int t = 0; t < workers; ++t) {
            pool.emplace_back([&, t] {
                for (int b = t; b < batches; b += workers) run_batch(b);
            });
        }
        for (auto& th : pool) th.join();
    }

    SimReport report;
    report.periods = n;
    report.seed = cfg.seed;
    std::vector<double> ratio_tp, ratio_phases, ratio_checks, ratio_duration;
    ratio_tp.reserve(batches);
    ratio_phases.reserve(batches);
    ratio_checks.reserve(batches);
    ratio_duration.reserve(batches);
    for (const auto& a : acc) {
        report.total_bits += a.bits;
        report.total_time_s += a.time_s;
        report.capped_periods += a.capped;
        ratio_tp.push_back(a.bits / a.time_s);
        ratio_phases.push_back(static_cast<double>(a.phases) / static_cast<double>(a.periods));
        ratio_checks.push_back(static_cast<double>(a.checks) / static_cast<double>(a.phases));
        ratio_duration.push_back(a.time_s / static_cast<double>(a.periods));
    }
    std::int64_t total_phases = 0, total_checks = 0;
    for (const auto& a : acc) {
        total_phases += a.phases;
        total_checks += a.checks;
    }
    report.throughput_bps = report.total_bits / report.total_time_s;
    report.throughput_stderr_bps = detail::batch_stderr(ratio_tp);
    report.mean_ecca_phases_per_period =
        static_cast<double>(total_phases) / static_cast<double>(n);
    report.phases_per_period_stderr = detail::batch_stderr(ratio_phases);
    report.mean_ecca_checks_per_phase =
        static_cast<double>(total_checks) / static_cast<double>(total_phases);
    report.checks_per_phase_stderr = detail::batch_stderr(ratio_checks);
    report.mean_period_duration_s = report.total_time_s / static_cast<double>(n);
    report.period_duration_stderr_s = detail::batch_stderr(ratio_duration);
    return report;
}

/// One run() per threshold, each with its own derived seed. Reports come
/// back paired with the threshold that produced them.
inline std::vector<std::pair<double, SimReport>> sweep_thresholds(
    const SimConfig& cfg, const std::vector<double>& thresholds_bpshz) {
    std::vector<std::pair<double, SimReport>> out;
    out.reserve(thresholds_bpshz.size());
    for (std::size_t i = 0; i < thresholds_bpshz.size(); ++i) {
        SimConfig point = cfg;
        point.policy = StoppingPolicy::threshold(thresholds_bpshz[i]);
        point.seed = derived_seed(cfg.seed, i);
        out.emplace_back(thresholds_bpshz[i], run(point));
    }
    return out;
}

}  // namespace lbt
