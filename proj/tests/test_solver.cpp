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
#include <vector>

#include "doctest.h"
#include "lbt/rng.hpp"
#include "lbt/solver.hpp"

using lbt::ChannelModel;
using lbt::LbtParams;

namespace {

LbtParams reference_params(double p = 0.5) {
    LbtParams prm;
    prm.q = 32;
    prm.t_ecca_s = 20e-6;
    prm.t_cot_max_s = 12e-3;
    prm.tau = 0.1;
    prm.p = p;
    prm.bandwidth_hz = 1e6;
    return prm;
}

// Parameters engineered to hit a target zeta (tau = 0, p = 1, q = 32).
LbtParams params_for_zeta(double zeta_target, double w_hz = 1.0) {
    LbtParams prm;
    prm.q = 32;
    prm.tau = 0.0;
    prm.p = 1.0;
    prm.t_cot_max_s = 10e-3;
    prm.t_ecca_s = zeta_target * prm.t_cot_max_s / 16.5;
    prm.bandwidth_hz = w_hz;
    return prm;
}

}  // namespace

TEST_CASE("point-mass channel has the closed-form optimum") {
    const LbtParams prm = params_for_zeta(1.0);
    const auto m = ChannelModel::point_mass(1.0);
    REQUIRE(lbt::zeta(prm) == doctest::Approx(1.0).epsilon(1e-12));

    const auto fp = lbt::solve_fixed_point(prm, m);
    const auto bis = lbt::solve_bisection(prm, m);
    CHECK(fp.lambda_star_bps == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(bis.lambda_star_bps == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(fp.residual_bps <= 1e-9);
}

TEST_CASE("zero-rate channel is reported as degenerate") {
    const auto res = lbt::solve_fixed_point(reference_params(), ChannelModel::point_mass(0.0));
    CHECK(res.degenerate_channel);
    CHECK(res.lambda_star_bps == 0.0);
}

TEST_CASE("fixed point and bisection agree on the reference instance") {
    const LbtParams prm = reference_params(0.5);
    const auto m = ChannelModel::gamma_fading(1.0, 10.0);
    const auto fp = lbt::solve_fixed_point(prm, m);
    const auto bis = lbt::solve_bisection(prm, m);
    CHECK(std::fabs(fp.lambda_star_bps - bis.lambda_star_bps) <=
          1e-9 * fp.lambda_star_bps);
    CHECK(fp.threshold_bpshz() * prm.bandwidth_hz ==
          doctest::Approx(fp.lambda_star_bps).epsilon(1e-15));
}

TEST_CASE("any nonnegative start converges to the same fixed point") {
    const LbtParams prm = reference_params(0.5);
    const auto m = ChannelModel::gamma_fading(1.0, 10.0);
    const double scale = prm.bandwidth_hz * m.mean();
    std::vector<double> results;
    for (double x0 : {0.0, scale, 10.0 * scale}) {
        lbt::SolverOptions opt;
        opt.lambda0_bps = x0;
        results.push_back(lbt::solve_fixed_point(prm, m, opt).lambda_star_bps);
    }
    CHECK(results[1] == doctest::Approx(results[0]).epsilon(1e-9));
    CHECK(results[2] == doctest::Approx(results[0]).epsilon(1e-9));
}

TEST_CASE("empirical channel converges to the analytic optimum") {
    const LbtParams prm = reference_params(0.5);
    const auto analytic_model = ChannelModel::gamma_fading(1.0, 10.0);
    lbt::Rng rng(21);
    std::vector<double> samples(1000000);
    for (auto& s : samples) s = analytic_model.sample(rng);
    const auto empirical_model = ChannelModel::empirical(std::move(samples));

    const double analytic = lbt::solve_fixed_point(prm, analytic_model).lambda_star_bps;
    const double estimated = lbt::solve_fixed_point(prm, empirical_model).lambda_star_bps;
    CHECK(std::fabs(estimated - analytic) < 0.01 * analytic);
}

TEST_CASE("zero overhead is rejected with a dedicated error") {
    LbtParams prm = reference_params();
    prm.tau = 0.0;
    prm.t_ecca_s = 0.0;
    const auto m = ChannelModel::gamma_fading(1.0, 10.0);
    CHECK_THROWS_AS(lbt::solve_fixed_point(prm, m), lbt::DegenerateInput);
    CHECK_THROWS_AS(lbt::solve_bisection(prm, m), lbt::DegenerateInput);
}

TEST_CASE("iteration budget exhaustion carries the trace") {
    const LbtParams prm = reference_params(0.5);
    const auto m = ChannelModel::gamma_fading(1.0, 10.0);
    lbt::SolverOptions opt;
    opt.max_iter = 1;
    try {
        lbt::solve_fixed_point(prm, m, opt);
        FAIL("expected MaxIterExceeded");
    } catch (const lbt::MaxIterExceeded& e) {
        CHECK(e.trace.size() >= 2);
    }
}

TEST_CASE("optimal policy is the threshold rule") {
    const LbtParams prm = reference_params(0.5);
    const auto m = ChannelModel::gamma_fading(1.0, 10.0);
    const auto res = lbt::solve_fixed_point(prm, m);
    const auto policy = lbt::optimal_policy(res);
    CHECK(policy.kind == lbt::StoppingPolicy::Kind::threshold);
    CHECK(policy.cutoff_bpshz == doctest::Approx(res.lambda_star_bps / 1e6).epsilon(1e-15));

    const auto degenerate = lbt::solve_fixed_point(prm, ChannelModel::point_mass(0.0));
    CHECK(lbt::optimal_policy(degenerate).cutoff_bpshz == 0.0);
}

TEST_CASE("residual at lambda = 0 is the full mean rate") {
    const LbtParams prm = reference_params(0.5);
    const auto m = ChannelModel::gamma_fading(1.0, 10.0);
    CHECK(lbt::stopping_residual(lbt::zeta(prm), m, prm.bandwidth_hz, 0.0) ==
          doctest::Approx(prm.bandwidth_hz * m.mean()).epsilon(1e-12));
}

TEST_CASE("lambda* moves the right way with each parameter") {
    const auto m = ChannelModel::gamma_fading(1.0, 10.0);
    auto solve = [&](const LbtParams& prm) {
        return lbt::solve_fixed_point(prm, m).lambda_star_bps;
    };
    const LbtParams base = reference_params(0.5);
    const double at_base = solve(base);

    LbtParams prm = base;
    prm.p = 0.7;
    CHECK(solve(prm) > at_base);
    prm = base;
    prm.t_cot_max_s = 12.9e-3;
    CHECK(solve(prm) > at_base);
    prm = base;
    prm.tau = 0.2;
    CHECK(solve(prm) < at_base);
    prm = base;
    prm.t_ecca_s = 30e-6;
    CHECK(solve(prm) < at_base);
}

TEST_CASE("lambda* is strictly decreasing in zeta for a fixed channel") {
    const auto m = ChannelModel::gamma_fading(1.0, 10.0);
    double prev = 1e300;
    for (double z : {0.05, 0.1, 0.2, 0.4, 0.8, 1.6}) {
        const double lam = lbt::solve_bisection(z, m, 1e6).lambda_star_bps;
        CHECK(lam < prev);
        prev = lam;
    }
}

TEST_CASE("bandwidth scaling moves lambda* linearly and leaves the threshold alone") {
    const auto m = ChannelModel::gamma_fading(1.0, 10.0);
    const LbtParams base = reference_params(0.5);
    const auto at_1mhz = lbt::solve_fixed_point(base, m);
    for (double c : {0.25, 3.0, 17.0}) {
        LbtParams prm = base;
        prm.bandwidth_hz = c * base.bandwidth_hz;
        const auto scaled = lbt::solve_fixed_point(prm, m);
        CHECK(scaled.lambda_star_bps ==
              doctest::Approx(c * at_1mhz.lambda_star_bps).epsilon(1e-9));
        CHECK(scaled.threshold_bpshz() ==
              doctest::Approx(at_1mhz.threshold_bpshz()).epsilon(1e-9));
    }
}

TEST_CASE("fixed-point trace climbs monotonically after the first step") {
    const LbtParams prm = reference_params(0.5);
    const auto m = ChannelModel::gamma_fading(1.0, 10.0);
    for (double x0 : {0.0, 5e6}) {
        lbt::SolverOptions opt;
        opt.lambda0_bps = x0;
        const auto res = lbt::solve_fixed_point(prm, m, opt);
        CHECK(res.monotone_after_first);
    }
}

TEST_CASE("regulation search prefers the largest counter range") {
    const auto m = ChannelModel::gamma_fading(1.0, 10.0);
    const auto best = lbt::regulation_optimum(20e-6, 0.1, 0.5, m, 1e6);
    CHECK(best.q == 32);
    LbtParams at_32 = reference_params();
    CHECK(best.t_cot_max_s == doctest::Approx(13e-3).epsilon(1e-9));
    CHECK(best.t_cot_max_s < at_32.cot_bound_s());
    CHECK(best.t_cot_max_s == std::nextafter(at_32.cot_bound_s(), 0.0));

    // scaled occupancy time: lambda* never decreases as q grows
    const auto rows = lbt::regulation_scan(20e-6, 0.1, 0.5, m, 1e6);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(rows[i].lambda_star_bps >= rows[i - 1].lambda_star_bps);
    }
}

TEST_CASE("with a fixed occupancy time smaller counter ranges win") {
    const auto m = ChannelModel::gamma_fading(1.0, 10.0);
    double prev = 1e300;
    for (int q : {4, 8, 16, 32}) {
        LbtParams prm = reference_params(0.5);
        prm.q = q;
        prm.t_cot_max_s = 1.5e-3;  // admissible for every q in range
        const double lam = lbt::solve_fixed_point(prm, m).lambda_star_bps;
        CHECK(lam < prev);
        prev = lam;
    }
}
