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

#include <cmath>
#include <string>

#include "doctest.h"
#include "lbt/params.hpp"
#include "lbt/rng.hpp"

using lbt::LbtParams;

namespace {

bool has_violation(const lbt::ValidationReport& report, const std::string& needle) {
    for (const auto& v : report.violations) {
        if (v.find(needle) != std::string::npos) return true;
    }
    return false;
}

LbtParams reference_params() {
    LbtParams prm;
    prm.q = 32;
    prm.t_ecca_s = 20e-6;
    prm.t_cot_max_s = 12e-3;
    prm.tau = 0.1;
    prm.p = 0.5;
    prm.bandwidth_hz = 1e6;
    return prm;
}

}  // namespace

TEST_CASE("validate accepts the reference operating point") {
    const auto report = lbt::validate(reference_params());
    CHECK(report.ok());
    CHECK(report.warnings.empty());
}

TEST_CASE("validate flags out-of-range counter values") {
    LbtParams prm = reference_params();
    prm.q = 3;
    CHECK(has_violation(lbt::validate(prm), "q below 4"));
    prm.q = 33;
    CHECK(has_violation(lbt::validate(prm), "q above 32"));
}

TEST_CASE("occupancy-time bound is strict") {
    LbtParams prm = reference_params();
    prm.t_cot_max_s = prm.cot_bound_s();  // 13/32 * 32 ms exactly; must be rejected
    CHECK(has_violation(lbt::validate(prm), "t_cot_max"));
    prm.t_cot_max_s = std::nextafter(prm.cot_bound_s(), 0.0);
    CHECK(lbt::validate(prm).ok());
    prm.t_cot_max_s = 12.999e-3;
    CHECK(lbt::validate(prm).ok());
}

TEST_CASE("short ECCA slots warn but do not fail") {
    LbtParams prm = reference_params();
    prm.t_ecca_s = 10e-6;
    const auto report = lbt::validate(prm);
    CHECK(report.ok());
    CHECK(report.warnings.size() == 1);
}

TEST_CASE("validate flags nonsense fractions and bandwidth") {
    LbtParams prm = reference_params();
    prm.tau = 1.5;
    prm.p = 0.0;
    prm.bandwidth_hz = 0.0;
    const auto report = lbt::validate(prm);
    CHECK(has_violation(report, "tau"));
    CHECK(has_violation(report, "p outside"));
    CHECK(has_violation(report, "bandwidth"));
}

TEST_CASE("zeta matches hand-evaluated values") {
    LbtParams prm = reference_params();
    // (0.1*12ms + 33*20us) / (0.9*12ms) = 1.86/10.8
    CHECK(lbt::zeta(prm) == doctest::Approx(0.1722222222222222).epsilon(1e-12));

    prm.tau = 0.0;
    prm.t_ecca_s = 0.0;
    CHECK(lbt::zeta(prm) == 0.0);

    prm.t_ecca_s = 20e-6;
    prm.p = 1.0;  // (16.5*20us) / 12ms
    CHECK(lbt::zeta(prm) == doctest::Approx(0.0275).epsilon(1e-12));
}

TEST_CASE("zeta rejects tau = 1") {
    LbtParams prm = reference_params();
    prm.tau = 1.0;
    CHECK_THROWS_AS(lbt::zeta(prm), lbt::DegenerateInput);
}

TEST_CASE("zeta is positive whenever some overhead exists") {
    lbt::Rng rng(7);
    for (int i = 0; i < 200; ++i) {
        LbtParams prm = reference_params();
        prm.tau = 0.9 * rng.uniform01();
        prm.t_ecca_s = 50e-6 * rng.uniform01();
        if (prm.tau == 0.0 && prm.t_ecca_s == 0.0) continue;
        CHECK(lbt::zeta(prm) > 0.0);
    }
}

TEST_CASE("zeta monotonicity in each parameter") {
    lbt::Rng rng(11);
    for (int i = 0; i < 50; ++i) {
        LbtParams prm = reference_params();
        prm.q = 4 + static_cast<int>(rng.uniform01() * 28);
        prm.tau = 0.05 + 0.6 * rng.uniform01();
        prm.p = 0.1 + 0.9 * rng.uniform01();
        prm.t_ecca_s = (5 + 40 * rng.uniform01()) * 1e-6;
        prm.t_cot_max_s = 0.9 * prm.cot_bound_s();
        const double base = lbt::zeta(prm);

        LbtParams up = prm;
        up.p = std::min(1.0, prm.p * 1.1);
        CHECK(lbt::zeta(up) < base);
        up = prm;
        up.t_cot_max_s *= 1.05;
        CHECK(lbt::zeta(up) < base);
        up = prm;
        up.tau = std::min(0.95, prm.tau * 1.1);
        CHECK(lbt::zeta(up) > base);
        up = prm;
        up.t_ecca_s *= 1.1;
        CHECK(lbt::zeta(up) > base);
        up = prm;
        up.q = prm.q + 1;
        CHECK(lbt::zeta(up) > base);
    }
}

TEST_CASE("zeta at the occupancy-time supremum reduces to the scaled form") {
    // With T_cot,max pinned at 13/32*q ms:
    //   zeta = (tau + 16/(13p)*T_ecca_ms*(1 + 1/q)) / (1 - tau)
    lbt::Rng rng(13);
    for (int i = 0; i < 50; ++i) {
        LbtParams prm;
        prm.q = 4 + static_cast<int>(rng.uniform01() * 28);
        prm.tau = 0.7 * rng.uniform01();
        prm.p = 0.1 + 0.9 * rng.uniform01();
        prm.t_ecca_s = (5 + 40 * rng.uniform01()) * 1e-6;
        prm.t_cot_max_s = prm.cot_bound_s();
        const double t_ecca_ms = prm.t_ecca_s * 1e3;
        const double scaled =
            (prm.tau + 16.0 / (13.0 * prm.p) * t_ecca_ms * (1.0 + 1.0 / prm.q)) / (1.0 - prm.tau);
        CHECK(lbt::zeta(prm) == doctest::Approx(scaled).epsilon(1e-12));
    }
}
