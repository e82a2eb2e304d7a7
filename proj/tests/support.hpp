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

// Test-only oracles, kept independent of the library's numerical paths:
// fixed-step Simpson integration, an exponential-integral series, sample
// statistics, and a Kolmogorov-Smirnov distance.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace testsup {

/// Composite Simpson rule with a fixed step count (no adaptivity; this is
/// deliberately a different algorithm than the library's quadrature).
template <class F>
double simpson(F&& f, double a, double b, int intervals = 200000) {
    if (intervals % 2 != 0) ++intervals;
    const double h = (b - a) / intervals;
    double sum = f(a) + f(b);
    for (int i = 1; i < intervals; ++i) {
        sum += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    }
    return sum * h / 3.0;
}

/// Exponential integral E1(x) for small x via the convergent series
/// E1(x) = -gamma - ln x + sum_{n>=1} (-1)^{n+1} x^n / (n * n!).
inline double expint_e1(double x) {
    constexpr double kEulerGamma = 0.5772156649015329;
    double sum = 0.0;
    double term = 1.0;  // x^n / n!
    for (int n = 1; n <= 60; ++n) {
        term *= x / n;
        const double add = term / n;
        sum += (n % 2 == 1) ? add : -add;
        if (add < 1e-18) break;
    }
    return -kEulerGamma - std::log(x) + sum;
}

/// Mean of ln(1 + a*X) with X ~ Exp(1): exp(1/a) * E1(1/a).
inline double mean_log1p_exp(double a) { return std::exp(1.0 / a) * expint_e1(1.0 / a); }

struct SampleStats {
    double mean = 0.0;
    double stderr_mean = 0.0;
    std::size_t n = 0;
};

inline SampleStats stats_of(const std::vector<double>& xs) {
    SampleStats s;
    s.n = xs.size();
    for (double x : xs) s.mean += x;
    s.mean /= static_cast<double>(s.n);
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.stderr_mean = std::sqrt(ss / (static_cast<double>(s.n) - 1.0) / static_cast<double>(s.n));
    return s;
}

/// Kolmogorov-Smirnov distance between a sample and a CDF.
template <class Cdf>
double ks_distance(std::vector<double> xs, Cdf&& cdf) {
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double f = cdf(xs[i]);
        d = std::max(d, std::fabs((i + 1) / n - f));
        d = std::max(d, std::fabs(i / n - f));
    }
    return d;
}

}  // namespace testsup
