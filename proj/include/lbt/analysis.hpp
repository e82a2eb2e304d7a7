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

#include "lbt/channel.hpp"
#include "lbt/error.hpp"
#include "lbt/params.hpp"

namespace lbt {

/// Closed-form description of one communication period under a policy.
struct PeriodStats {
    double expected_duration_s = 0.0;
    double expected_bits = 0.0;
    double throughput_bps = 0.0;  // expected_bits / expected_duration_s
};

/// Mean ECCA checks per phase, (q+1)/(2p).
inline double expected_ecca_checks(const LbtParams& prm) {
    return mean_checks_per_phase(prm);
}

/// Expected duration of a communication period that runs exactly n ECCA
/// phases (n-1 skipped opportunities, then one transmission):
///
///   T_cot,max + (n-1)*tau*T_cot,max + n*(q+1)/(2p)*T_ecca
inline double expected_period_duration(const LbtParams& prm, int n_phases) {
    if (n_phases < 1) throw std::invalid_argument("expected_period_duration: n_phases must be >= 1");
    return prm.t_cot_max_s + (n_phases - 1) * prm.tau * prm.t_cot_max_s +
           n_phases * mean_checks_per_phase(prm) * prm.t_ecca_s;
}

namespace detail {

// P(R >= lambda/W); throws when the threshold sits above the channel
// support (the policy would listen forever).
inline double stop_probability(const ChannelModel& model, double lambda_bps, double w_hz) {
    const double prob = model.prob_at_least(lambda_bps / w_hz);
    if (!(prob > 0.0)) {
        throw DegenerateInput("stopping threshold above channel support; the policy never transmits");
    }
    return prob;
}

}  // namespace detail

/// Expected period duration under the threshold policy with cutoff
/// lambda/W. The number of phases is geometric with success probability
/// P(R >= lambda/W):
///
///   (1-tau)*T_cot,max + (tau*T_cot,max + (q+1)/(2p)*T_ecca) / P(R >= lambda/W)
inline double expected_stopped_duration(const LbtParams& prm, const ChannelModel& model,
                                        double lambda_bps) {
    const double prob = detail::stop_probability(model, lambda_bps, prm.bandwidth_hz);
    const double per_phase =
        prm.tau * prm.t_cot_max_s + mean_checks_per_phase(prm) * prm.t_ecca_s;
    return (1.0 - prm.tau) * prm.t_cot_max_s + per_phase / prob;
}

/// Expected bits delivered per period under the threshold policy,
/// (1-tau)*T_cot,max*W*E[R | R >= lambda/W]. The conditional mean is
/// evaluated through the tail-expectation identity
///
///   E[R | R >= t] = t + J(t) / P(R >= t),   J(t) = integral_t^inf (1 - F_R)
///
/// rather than by integrating the stopped CDF's complement directly:
/// the integrand (F(x) - F(t))/(1 - F(t)) tends to 1, so that form is
/// not integrable as written.
inline double expected_stopped_bits(const LbtParams& prm, const ChannelModel& model,
                                    double lambda_bps) {
    const double w = prm.bandwidth_hz;
    const double threshold = lambda_bps / w;
    const double prob = detail::stop_probability(model, lambda_bps, w);
    const double stopped_mean = threshold + model.tail_integral(threshold) / prob;
    return (1.0 - prm.tau) * prm.t_cot_max_s * w * stopped_mean;
}

inline PeriodStats stopped_period_stats(const LbtParams& prm, const ChannelModel& model,
                                        double lambda_bps) {
    PeriodStats stats;
    stats.expected_duration_s = expected_stopped_duration(prm, model, lambda_bps);
    stats.expected_bits = expected_stopped_bits(prm, model, lambda_bps);
    stats.throughput_bps = stats.expected_bits / stats.expected_duration_s;
    return stats;
}

/// Residual of the optimality condition at rate lambda:
///
///   h(lambda) = E[(W*R - lambda)^+] - zeta*lambda
///             = W*J(lambda/W) - zeta*lambda.
///
/// h is strictly decreasing with h(0) = W*E[R]; its unique root is the
/// maximum ergodic throughput.
inline double stopping_residual(double zeta_value, const ChannelModel& model, double w_hz,
                                double lambda_bps) {
    return w_hz * model.tail_integral(lambda_bps / w_hz) - zeta_value * lambda_bps;
}

/// One step of the throughput fixed-point map,
///
///   g(x) = W * [ (x/W)*P(R >= x/W) + J(x/W) ] / [ P(R >= x/W) + zeta ],
///
/// which equals expected_stopped_bits/expected_stopped_duration at
/// threshold x/W. g - identity has the sign of stopping_residual, so the
/// unique fixed point of g is the maximum throughput.
inline double fixed_point_map(double zeta_value, const ChannelModel& model, double w_hz,
                              double x_bps) {
    if (x_bps < 0.0) throw std::invalid_argument("fixed_point_map: rate must be nonnegative");
    const double threshold = x_bps / w_hz;
    const double prob = model.prob_at_least(threshold);
    const double tail = model.tail_integral(threshold);
    return w_hz * (threshold * prob + tail) / (prob + zeta_value);
}

inline double fixed_point_map(const LbtParams& prm, const ChannelModel& model, double x_bps) {
    return fixed_point_map(zeta(prm), model, prm.bandwidth_hz, x_bps);
}

/// Throughput of the always-transmit policy (one ECCA phase per period).
/// With probe = true the probing time is still spent (rate adaptation
/// needs channel knowledge), so this equals fixed_point_map at x = 0;
/// with probe = false the whole occupancy time carries data.
inline double baseline_throughput(const LbtParams& prm, const ChannelModel& model, bool probe) {
    const double listen = mean_checks_per_phase(prm) * prm.t_ecca_s;
    const double data_time = probe ? (1.0 - prm.tau) * prm.t_cot_max_s : prm.t_cot_max_s;
    return data_time * prm.bandwidth_hz * model.mean() / (prm.t_cot_max_s + listen);
}

}  // namespace lbt
