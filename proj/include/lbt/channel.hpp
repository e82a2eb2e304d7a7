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
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lbt/error.hpp"
#include "lbt/quadrature.hpp"
#include "lbt/rng.hpp"
#include "lbt/special.hpp"

namespace lbt {

/// Base of the rate-vs-SNR logarithm. Base two makes W*R a bit rate.
enum class LogBase { two, natural };

inline double log_base_value(LogBase b) { return b == LogBase::two ? 2.0 : std::exp(1.0); }

/**
 * \brief Distribution of the per-period spectral efficiency R (bits/s/Hz).
 *
 * Three shapes are supported:
 *  - gamma_fading: R = log(1 + G*snr)/log(base) with G ~ Gamma(k, 1), the
 *    fast-fading link abstraction (k = 1 is Rayleigh);
 *  - point_mass:   R = r0 with probability one;
 *  - empirical:    R drawn uniformly from a fixed sample set.
 *
 * Construction precomputes E[R] and, for gamma fading, an upper rate
 * beyond which the survival function is below 1e-12. Instances are
 * immutable and safe to share across threads; sampling draws from an
 * explicitly passed Rng.
 */
class ChannelModel {
public:
    enum class Kind { gamma_fading, point_mass, empirical };

    static ChannelModel gamma_fading(double k, double snr_avg_db, LogBase base = LogBase::two) {
        if (!(k > 0.0)) throw std::invalid_argument("gamma_fading: shape k must be positive");
        ChannelModel m;
        m.kind_ = Kind::gamma_fading;
        m.shape_ = k;
        m.snr_ = std::pow(10.0, snr_avg_db / 10.0);
        m.ln_base_ = std::log(log_base_value(base));
        m.upper_ = m.find_upper();
        m.mean_ = m.integrate_tail(0.0);
        return m;
    }

    static ChannelModel point_mass(double r0) {
        if (!(r0 >= 0.0)) throw std::invalid_argument("point_mass: r0 must be nonnegative");
        ChannelModel m;
        m.kind_ = Kind::point_mass;
        m.r0_ = r0;
        m.upper_ = r0;
        m.mean_ = r0;
        return m;
    }

    static ChannelModel empirical(std::vector<double> samples) {
        if (samples.empty()) throw std::invalid_argument("empirical: sample set is empty");
        for (double s : samples) {
            if (!(s >= 0.0) || !std::isfinite(s)) {
                throw std::invalid_argument("empirical: samples must be finite and nonnegative");
            }
        }
        ChannelModel m;
        m.kind_ = Kind::empirical;
        m.samples_ = std::move(samples);
        std::sort(m.samples_.begin(), m.samples_.end());
        // suffix_sum_[i] = sum of samples_[i..n)
        m.suffix_sum_.assign(m.samples_.size() + 1, 0.0);
        for (std::size_t i = m.samples_.size(); i-- > 0;) {
            m.suffix_sum_[i] = m.suffix_sum_[i + 1] + m.samples_[i];
        }
        m.upper_ = m.samples_.back();
        m.mean_ = m.suffix_sum_[0] / static_cast<double>(m.samples_.size());
        return m;
    }

    Kind kind() const { return kind_; }

    /// F_R(r) = P(R <= r). Right-continuous; throws for r < 0.
    double cdf(double r) const {
        if (r < 0.0) throw std::invalid_argument("cdf: rate must be nonnegative");
        switch (kind_) {
            case Kind::gamma_fading: {
                const double x = snr_arg(r);
                if (!std::isfinite(x)) return 1.0;
                return gamma_p(shape_, x);
            }
            case Kind::point_mass:
                return r >= r0_ ? 1.0 : 0.0;
            case Kind::empirical: {
                const auto it = std::upper_bound(samples_.begin(), samples_.end(), r);
                return static_cast<double>(it - samples_.begin()) / samples_.size();
            }
        }
        return 0.0;
    }

    /// P(R >= r). Equals 1 - F_R(r) for continuous models but differs at
    /// atoms, which is what threshold policies ("transmit iff R >= cutoff")
    /// actually see.
    double prob_at_least(double r) const {
        if (r <= 0.0) return 1.0;  // R >= 0 almost surely
        switch (kind_) {
            case Kind::gamma_fading: {
                const double x = snr_arg(r);
                if (!std::isfinite(x)) return 0.0;
                return gamma_q(shape_, x);
            }
            case Kind::point_mass:
                return r <= r0_ ? 1.0 : 0.0;
            case Kind::empirical: {
                const auto it = std::lower_bound(samples_.begin(), samples_.end(), r);
                return static_cast<double>(samples_.end() - it) / samples_.size();
            }
        }
        return 0.0;
    }

    /// Tail integral J(t) = integral_t^inf (1 - F_R(r)) dr = E[(R - t)^+].
    /// Nonincreasing and convex in t; J(0) = E[R].
    double tail_integral(double threshold) const {
        if (threshold < 0.0) throw std::invalid_argument("tail_integral: threshold must be nonnegative");
        switch (kind_) {
            case Kind::point_mass:
                return std::max(r0_ - threshold, 0.0);
            case Kind::empirical: {
                const auto it = std::upper_bound(samples_.begin(), samples_.end(), threshold);
                const std::size_t i = static_cast<std::size_t>(it - samples_.begin());
                const std::size_t n = samples_.size();
                return (suffix_sum_[i] - threshold * static_cast<double>(n - i)) / n;
            }
            case Kind::gamma_fading:
                return integrate_tail(threshold);
        }
        return 0.0;
    }

    /// E[R].
    double mean() const { return mean_; }

    /// Rate beyond which P(R >= r) < 1e-12 (exact support bound for the
    /// discrete models).
    double upper_rate() const { return upper_; }

    /// One i.i.d. draw of R.
    double sample(Rng& rng) const {
        switch (kind_) {
            case Kind::gamma_fading:
                return std::log1p(rng.gamma(shape_) * snr_) / ln_base_;
            case Kind::point_mass:
                return r0_;
            case Kind::empirical: {
                auto i = static_cast<std::size_t>(rng.uniform01() * samples_.size());
                if (i >= samples_.size()) i = samples_.size() - 1;
                return samples_[i];
            }
        }
        return 0.0;
    }

    double fading_shape() const { return shape_; }
    double snr_linear() const { return snr_; }

private:
    ChannelModel() = default;

    // Gamma argument corresponding to rate r: (base^r - 1)/snr.
    double snr_arg(double r) const { return std::expm1(r * ln_base_) / snr_; }

    double find_upper() const {
        double r = 1.0;
        while (gamma_q(shape_, snr_arg(r)) >= 1e-12) {
            r *= 2.0;
            if (r > 1e9) throw QuadratureFailure("channel survival function does not decay");
        }
        return r;
    }

    double integrate_tail(double threshold) const {
        const double hi = std::max(upper_, threshold + 4.0);
        auto survival = [this](double r) { return gamma_q(shape_, snr_arg(r)); };
        return integrate(survival, threshold, hi, 1e-10);
    }

    Kind kind_ = Kind::point_mass;
    double shape_ = 1.0;    // gamma fading
    double snr_ = 1.0;      // gamma fading, linear
    double ln_base_ = std::log(2.0);
    double r0_ = 0.0;       // point mass
    std::vector<double> samples_;     // empirical, sorted
    std::vector<double> suffix_sum_;  // empirical, suffix sums of samples_
    double mean_ = 0.0;
    double upper_ = 0.0;
};

}  // namespace lbt
