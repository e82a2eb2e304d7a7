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

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "lbt/error.hpp"

namespace lbt {

namespace detail {

// Gauss-Kronrod 15-point nodes/weights on [-1, 1] (abscissae by symmetry).
inline constexpr double kGk15Nodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

inline constexpr double kGk15Weights[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

// Embedded 7-point Gauss weights (odd Kronrod nodes).
inline constexpr double kG7Weights[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

template <class F>
std::pair<double, double> gk15(F& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double kronrod = kGk15Weights[7] * f(c);
    double gauss = kG7Weights[3] * f(c);
    for (int i = 0; i < 7; ++i) {
        const double dx = h * kGk15Nodes[i];
        const double fsum = f(c - dx) + f(c + dx);
        kronrod += kGk15Weights[i] * fsum;
        if (i % 2 == 1) gauss += kG7Weights[i / 2] * fsum;
    }
    kronrod *= h;
    gauss *= h;
    return {kronrod, std::fabs(kronrod - gauss)};
}

}  // namespace detail

/// Adaptive Gauss-Kronrod integration of f over [a, b] to a relative
/// tolerance. Globally adaptive: the segment with the largest embedded-rule
/// error is split until the summed error meets the tolerance, which stays
/// anchored to the current total rather than the first coarse estimate
/// (the integrands here can concentrate their mass in a tiny corner).
template <class F>
double integrate(F&& f, double a, double b, double rel_tol = 1e-10) {
    if (!(b > a)) return 0.0;
    struct Segment {
        double a, b, value, err;
    };
    std::vector<Segment> segments;
    {
        auto [value, err] = detail::gk15(f, a, b);
        segments.push_back({a, b, value, err});
    }
    for (int splits = 0; splits < 2000; ++splits) {
        double total = 0.0;
        double total_err = 0.0;
        for (const auto& s : segments) {
            total += s.value;
            total_err += s.err;
        }
        if (total_err <= rel_tol * std::max(std::fabs(total), 1e-300)) return total;

        std::size_t worst = 0;
        for (std::size_t i = 1; i < segments.size(); ++i) {
            if (segments[i].err > segments[worst].err) worst = i;
        }
        const Segment s = segments[worst];
        const double mid = 0.5 * (s.a + s.b);
        if (!(mid > s.a && mid < s.b)) break;  // interval exhausted at machine precision
        auto [lv, le] = detail::gk15(f, s.a, mid);
        auto [rv, re] = detail::gk15(f, mid, s.b);
        segments[worst] = {s.a, mid, lv, le};
        segments.push_back({mid, s.b, rv, re});
    }
    throw QuadratureFailure("adaptive integration did not reach tolerance");
}

}  // namespace lbt
