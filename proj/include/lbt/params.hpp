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

#include <string>
#include <vector>

#include "lbt/error.hpp"

namespace lbt {

// ETSI bounds for load-based equipment channel access.
inline constexpr int kMinCounterRange = 4;
inline constexpr int kMaxCounterRange = 32;
inline constexpr double kCotBoundMsPerQ = 13.0 / 32.0;  // T_cot,max < 13/32 * q ms
inline constexpr double kCcaFloorSeconds = 20e-6;       // minimum CCA observation time

/**
 * \brief Regulation and protocol parameters of one load-based equipment link.
 *
 * All durations are seconds and the bandwidth is Hz; unit suffixes only
 * exist at the config-file boundary. Values are immutable in spirit: the
 * library never mutates a LbtParams it is handed.
 */
struct LbtParams {
    int q = 32;                  // ECCA counter drawn uniformly from {1..q}
    double t_ecca_s = 20e-6;     // one ECCA observation slot
    double t_cot_max_s = 12e-3;  // maximum channel occupancy time
    double tau = 0.1;            // fraction of the occupancy time spent probing
    double p = 1.0;              // probability that one ECCA check sees a clear channel
    double bandwidth_hz = 1e6;   // operating channel bandwidth W

    /// Regulatory supremum for t_cot_max_s given q (exclusive bound).
    /// 13/32*q is exact in binary for q <= 32; dividing by the exact 1e3
    /// gives the correctly rounded bound, matching what "<q*13/32>ms"
    /// parses to from a config file.
    double cot_bound_s() const { return kCotBoundMsPerQ * q / 1e3; }
};

/// Outcome of validate(): violations are hard failures, warnings are not.
struct ValidationReport {
    std::vector<std::string> violations;
    std::vector<std::string> warnings;

    bool ok() const { return violations.empty(); }
};

/// Checks a candidate parameter set against the regulation ranges and the
/// model's own sanity constraints. Violations are returned as data; this
/// never throws and never mutates the input.
inline ValidationReport validate(const LbtParams& prm) {
    ValidationReport report;
    auto fail = [&](std::string msg) { report.violations.push_back(std::move(msg)); };

    if (prm.q < kMinCounterRange) fail("q below 4");
    if (prm.q > kMaxCounterRange) fail("q above 32");
    if (!(prm.t_cot_max_s > 0.0)) fail("t_cot_max not positive");
    if (!(prm.t_cot_max_s < prm.cot_bound_s())) fail("t_cot_max not < 13/32*q ms");
    if (prm.t_ecca_s < 0.0) fail("t_ecca negative");
    if (!(prm.tau >= 0.0 && prm.tau <= 1.0)) fail("tau outside [0, 1]");
    if (!(prm.p > 0.0 && prm.p <= 1.0)) fail("p outside (0, 1]");
    if (!(prm.bandwidth_hz > 0.0)) fail("bandwidth not positive");

    // The 20 us CCA floor is advisory here so exploratory sweeps can go below it.
    if (prm.t_ecca_s >= 0.0 && prm.t_ecca_s < kCcaFloorSeconds) {
        report.warnings.push_back("t_ecca below the 20 us CCA observation floor");
    }
    return report;
}

/// Mean number of ECCA checks per phase, (q+1)/(2p).
inline double mean_checks_per_phase(const LbtParams& prm) {
    return (prm.q + 1) / (2.0 * prm.p);
}

/// Listening-plus-probing overhead normalized by the transmission time:
///
///   zeta = (tau*T_cot,max + (q+1)/(2p)*T_ecca) / ((1-tau)*T_cot,max)
///
/// Throws DegenerateInput when tau = 1 (no transmission time left).
inline double zeta(const LbtParams& prm) {
    const double tx_time = (1.0 - prm.tau) * prm.t_cot_max_s;
    if (!(tx_time > 0.0)) {
        throw DegenerateInput("zeta undefined: tau = 1 leaves zero transmission time");
    }
    const double listening = prm.tau * prm.t_cot_max_s + mean_checks_per_phase(prm) * prm.t_ecca_s;
    return listening / tx_time;
}

}  // namespace lbt
