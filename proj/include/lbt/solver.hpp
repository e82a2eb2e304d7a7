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
#include <vector>

#include "lbt/analysis.hpp"
#include "lbt/channel.hpp"
#include "lbt/error.hpp"
#include "lbt/params.hpp"
#include "lbt/policy.hpp"

namespace lbt {

enum class SolveMethod { fixed_point, bisection };

/**
 * \brief Maximum-throughput solve outcome.
 *
 * lambda_star_bps is the unique root of the optimality residual
 * h(lambda) = E[(W*R - lambda)^+] - zeta*lambda; the optimal stopping
 * threshold is the derived view lambda_star_bps / bandwidth (stored once).
 */
struct SolverResult {
    double lambda_star_bps = 0.0;
    double bandwidth_hz = 0.0;
    int iterations = 0;
    double residual_bps = 0.0;  // |h(lambda_star)|
    SolveMethod method = SolveMethod::fixed_point;
    bool degenerate_channel = false;  // E[R] = 0, lambda* pinned to 0
    std::vector<double> trace;        // fixed-point iterates (capped)
    bool monotone_after_first = true;

    double threshold_bpshz() const { return lambda_star_bps / bandwidth_hz; }
};

struct SolverOptions {
    double lambda0_bps = 0.0;       // any nonnegative start converges
    double step_tol_rel = 1e-12;    // stop when |step| < step_tol_rel * W * E[R]
    double residual_tol_rel = 1e-9; // accept when |h| <= residual_tol_rel * W * E[R]
    int max_iter = 100000;
};

namespace detail {

inline constexpr std::size_t kTraceCap = 1000;

inline void require_positive_overhead(double zeta_value) {
    if (!(zeta_value > 0.0)) {
        throw DegenerateInput(
            "zeta = 0: with no listening or probing cost the optimal threshold is the "
            "channel's essential supremum and the throughput problem has no interior solution");
    }
}

inline SolverResult degenerate_result(SolveMethod method, double w_hz) {
    SolverResult res;
    res.method = method;
    res.bandwidth_hz = w_hz;
    res.degenerate_channel = true;
    return res;
}

inline void check_residual(SolverResult& res, double zeta_value, const ChannelModel& model,
                           double scale_bps) {
    res.residual_bps =
        std::fabs(stopping_residual(zeta_value, model, res.bandwidth_hz, res.lambda_star_bps));
    if (res.residual_bps > 1e-9 * scale_bps) {
        throw SolverFailure("solver converged but the optimality residual is out of tolerance");
    }
}

}  // namespace detail

/// Fixed-point iteration x <- g(x). The map increases below the fixed
/// point and is bounded above by it, so the iteration climbs monotonically
/// after the first step and converges superlinearly near the solution.
inline SolverResult solve_fixed_point(double zeta_value, const ChannelModel& model, double w_hz,
                                      SolverOptions opt = {}) {
    detail::require_positive_overhead(zeta_value);
    if (!(opt.lambda0_bps >= 0.0)) {
        throw std::invalid_argument("solve_fixed_point: lambda0 must be nonnegative");
    }
    if (!(model.mean() > 0.0)) return detail::degenerate_result(SolveMethod::fixed_point, w_hz);

    SolverResult res;
    res.method = SolveMethod::fixed_point;
    res.bandwidth_hz = w_hz;

    const double scale = w_hz * model.mean();
    double x = opt.lambda0_bps;
    res.trace.push_back(x);
    bool converged = false;
    for (int t = 0; t < opt.max_iter; ++t) {
        const double next = fixed_point_map(zeta_value, model, w_hz, x);
        const double step = std::fabs(next - x);
        x = next;
        if (res.trace.size() < detail::kTraceCap) res.trace.push_back(x);
        ++res.iterations;
        if (step < opt.step_tol_rel * scale) {
            converged = true;
            break;
        }
    }
    if (!converged) {
        throw MaxIterExceeded("fixed-point iteration did not converge", res.trace);
    }

    res.lambda_star_bps = x;
    for (std::size_t t = 2; t < res.trace.size(); ++t) {
        if (res.trace[t] < res.trace[t - 1] - 1e-12 * scale) res.monotone_after_first = false;
    }
    detail::check_residual(res, zeta_value, model, scale);
    return res;
}

inline SolverResult solve_fixed_point(const LbtParams& prm, const ChannelModel& model,
                                      SolverOptions opt = {}) {
    return solve_fixed_point(zeta(prm), model, prm.bandwidth_hz, opt);
}

/// Bisection on the optimality residual h over [0, W*E[R]/zeta]:
/// h(0) = W*E[R] >= 0 and h at the upper bracket is <= 0 because
/// J(t) <= E[R]. Used as the independent cross-check of the iteration.
inline SolverResult solve_bisection(double zeta_value, const ChannelModel& model, double w_hz,
                                    double tol_rel = 1e-12) {
    detail::require_positive_overhead(zeta_value);
    if (!(model.mean() > 0.0)) return detail::degenerate_result(SolveMethod::bisection, w_hz);

    SolverResult res;
    res.method = SolveMethod::bisection;
    res.bandwidth_hz = w_hz;

    const double scale = w_hz * model.mean();
    double lo = 0.0;
    double hi = scale / zeta_value;
    const double h_lo = stopping_residual(zeta_value, model, w_hz, lo);
    if (h_lo < -1e-9 * scale) {
        throw BracketFailure("residual negative at lambda = 0; channel tail integral is broken");
    }
    if (stopping_residual(zeta_value, model, w_hz, hi) > 1e-9 * scale) {
        throw BracketFailure("residual positive at the upper bracket; channel mean is inconsistent");
    }

    const double width_tol = tol_rel * hi;
    while (hi - lo > width_tol) {
        const double mid = 0.5 * (lo + hi);
        if (stopping_residual(zeta_value, model, w_hz, mid) > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
        ++res.iterations;
    }
    res.lambda_star_bps = 0.5 * (lo + hi);
    detail::check_residual(res, zeta_value, model, scale);
    return res;
}

inline SolverResult solve_bisection(const LbtParams& prm, const ChannelModel& model,
                                    double tol_rel = 1e-12) {
    return solve_bisection(zeta(prm), model, prm.bandwidth_hz, tol_rel);
}

/// The optimal rule is a pure threshold: transmit iff the probed spectral
/// efficiency is at least lambda*/W. A zero threshold degenerates to
/// always-transmit behavior.
inline StoppingPolicy optimal_policy(const SolverResult& result) {
    return StoppingPolicy::threshold(result.threshold_bpshz());
}

/// One row of the regulation search: counter range q, the occupancy time
/// used for it, and the resulting maximum throughput.
struct RegulationPoint {
    int q = 0;
    double t_cot_max_s = 0.0;
    double lambda_star_bps = 0.0;
};

/// Scans q = 4..32 with the occupancy time pinned to the largest
/// representable value below its regulatory bound 13/32*q ms.
inline std::vector<RegulationPoint> regulation_scan(double t_ecca_s, double tau, double p,
                                                    const ChannelModel& model, double w_hz) {
    std::vector<RegulationPoint> rows;
    rows.reserve(kMaxCounterRange - kMinCounterRange + 1);
    for (int q = kMinCounterRange; q <= kMaxCounterRange; ++q) {
        LbtParams prm;
        prm.q = q;
        prm.t_ecca_s = t_ecca_s;
        prm.tau = tau;
        prm.p = p;
        prm.bandwidth_hz = w_hz;
        prm.t_cot_max_s = std::nextafter(prm.cot_bound_s(), 0.0);
        rows.push_back({q, prm.t_cot_max_s, solve_fixed_point(prm, model).lambda_star_bps});
    }
    return rows;
}

/// Argmax of the regulation scan. Under the admissible ranges this is
/// q = 32 with the occupancy time just below 13 ms.
inline RegulationPoint regulation_optimum(double t_ecca_s, double tau, double p,
                                          const ChannelModel& model, double w_hz) {
    const auto rows = regulation_scan(t_ecca_s, tau, p, model, w_hz);
    return *std::max_element(rows.begin(), rows.end(),
                             [](const RegulationPoint& a, const RegulationPoint& b) {
                                 return a.lambda_star_bps < b.lambda_star_bps;
                             });
}

}  // namespace lbt
