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

#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "lbt/channel.hpp"
#include "lbt/error.hpp"
#include "lbt/params.hpp"
#include "lbt/sim.hpp"

namespace lbt::config {

struct ParseError : Error {
    using Error::Error;
};

/// Flat dotted-key configuration. Values stay strings until a typed
/// builder consumes them, so CLI overrides can be merged in as text.
using Settings = std::map<std::string, std::string>;

inline const std::vector<std::string>& known_keys() {
    static const std::vector<std::string> keys = {
        "log-base",
        "params.q", "params.t-ecca", "params.t-cot-max", "params.tau", "params.p", "params.w",
        "channel.kind", "channel.k", "channel.snr-db", "channel.r0", "channel.samples-file",
        "sim.periods", "sim.seed", "sim.policy", "sim.threshold", "sim.baseline-probes",
        "sim.batches", "sim.threads", "sim.slot-mode", "sim.phase-cap",
    };
    return keys;
}

inline bool is_known_key(std::string_view key) {
    for (const auto& k : known_keys()) {
        if (k == key) return true;
    }
    return false;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

}  // namespace detail

/// Locale-independent double parse; the whole string must be consumed.
inline double parse_number(std::string_view text, std::string_view what) {
    const std::string_view s = detail::trim(text);
    double value = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), value);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw ParseError("bad " + std::string(what) + ": '" + std::string(text) + "'");
    }
    return value;
}

inline long long parse_integer(std::string_view text, std::string_view what) {
    const std::string_view s = detail::trim(text);
    long long value = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), value);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw ParseError("bad " + std::string(what) + ": '" + std::string(text) + "'");
    }
    return value;
}

inline bool parse_bool(std::string_view text, std::string_view what) {
    const std::string_view s = detail::trim(text);
    if (s == "true" || s == "yes" || s == "1") return true;
    if (s == "false" || s == "no" || s == "0") return false;
    throw ParseError("bad " + std::string(what) + ": '" + std::string(text) + "'");
}

/// Duration with optional unit suffix (s, ms, us, µs, ns); bare numbers
/// are seconds. Dividing by the exact power of ten keeps "20us" equal to
/// the literal 20e-6 (both are the correctly rounded value), so boundary
/// comparisons behave the way the config reads.
inline double parse_duration_s(std::string_view text, std::string_view what) {
    const std::string_view s = detail::trim(text);
    struct Unit {
        std::string_view suffix;
        double divisor;
    };
    static constexpr Unit units[] = {
        {"ms", 1e3}, {"us", 1e6}, {"\xC2\xB5s", 1e6}, {"ns", 1e9}, {"s", 1.0}};
    for (const auto& u : units) {
        if (s.size() > u.suffix.size() && s.ends_with(u.suffix)) {
            return parse_number(s.substr(0, s.size() - u.suffix.size()), what) / u.divisor;
        }
    }
    return parse_number(s, what);
}

/// Frequency with optional unit suffix (Hz, kHz, MHz, GHz); bare numbers
/// are Hz.
inline double parse_frequency_hz(std::string_view text, std::string_view what) {
    const std::string_view s = detail::trim(text);
    struct Unit {
        std::string_view suffix;
        double scale;
    };
    static constexpr Unit units[] = {{"GHz", 1e9}, {"MHz", 1e6}, {"kHz", 1e3}, {"Hz", 1.0}};
    for (const auto& u : units) {
        if (s.size() > u.suffix.size() && s.ends_with(u.suffix)) {
            return u.scale * parse_number(s.substr(0, s.size() - u.suffix.size()), what);
        }
    }
    return parse_number(s, what);
}

/// Parses `key = value` lines; '#' starts a comment, blank lines are
/// skipped, later assignments win. Unknown keys are rejected.
inline Settings parse_settings(std::istream& in) {
    Settings out;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view = line;
        if (const auto hash = view.find('#'); hash != std::string_view::npos) {
            view = view.substr(0, hash);
        }
        view = detail::trim(view);
        if (view.empty()) continue;
        const auto eq = view.find('=');
        if (eq == std::string_view::npos) {
            throw ParseError("line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        const std::string key(detail::trim(view.substr(0, eq)));
        const std::string value(detail::trim(view.substr(eq + 1)));
        if (!is_known_key(key)) {
            throw ParseError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        }
        if (value.empty()) {
            throw ParseError("line " + std::to_string(line_no) + ": empty value for '" + key + "'");
        }
        out[key] = value;
    }
    return out;
}

inline Settings parse_settings_text(const std::string& text) {
    std::istringstream in(text);
    return parse_settings(in);
}

inline Settings parse_settings_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file: " + path.string());
    return parse_settings(in);
}

/// Sets a single key, validating the key name (CLI overrides, experiment
/// axes).
inline void apply(Settings& settings, const std::string& key, const std::string& value) {
    if (!is_known_key(key)) throw ParseError("unknown key '" + key + "'");
    if (value.empty()) throw ParseError("empty value for '" + key + "'");
    settings[key] = value;
}

namespace detail {

inline const std::string* find(const Settings& s, const std::string& key) {
    const auto it = s.find(key);
    return it == s.end() ? nullptr : &it->second;
}

}  // namespace detail

inline LbtParams params_from(const Settings& s) {
    LbtParams prm;  // defaults: q=32, 20us slots, 12ms occupancy, tau=0.1, p=1, 1 MHz
    if (const auto* v = detail::find(s, "params.q")) {
        prm.q = static_cast<int>(parse_integer(*v, "params.q"));
    }
    if (const auto* v = detail::find(s, "params.t-ecca")) {
        prm.t_ecca_s = parse_duration_s(*v, "params.t-ecca");
    }
    if (const auto* v = detail::find(s, "params.t-cot-max")) {
        prm.t_cot_max_s = parse_duration_s(*v, "params.t-cot-max");
    }
    if (const auto* v = detail::find(s, "params.tau")) prm.tau = parse_number(*v, "params.tau");
    if (const auto* v = detail::find(s, "params.p")) prm.p = parse_number(*v, "params.p");
    if (const auto* v = detail::find(s, "params.w")) {
        prm.bandwidth_hz = parse_frequency_hz(*v, "params.w");
    }
    return prm;
}

inline std::vector<double> read_samples_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open samples file: " + path.string());
    std::vector<double> samples;
    std::string line;
    while (std::getline(in, line)) {
        std::string_view view = line;
        if (const auto hash = view.find('#'); hash != std::string_view::npos) {
            view = view.substr(0, hash);
        }
        view = detail::trim(view);
        if (view.empty()) continue;
        samples.push_back(parse_number(view, "sample"));
    }
    if (samples.empty()) throw ParseError("samples file is empty: " + path.string());
    return samples;
}

inline LogBase log_base_from(const Settings& s) {
    const auto* v = detail::find(s, "log-base");
    if (!v || *v == "2") return LogBase::two;
    if (*v == "e") return LogBase::natural;
    throw ParseError("log-base must be 2 or e");
}

/// Builds the channel model; relative sample paths resolve against
/// base_dir (normally the config file's directory).
inline ChannelModel channel_from(const Settings& s,
                                 const std::filesystem::path& base_dir = {}) {
    const auto* kind = detail::find(s, "channel.kind");
    const std::string name = kind ? *kind : "gamma";
    if (name == "gamma") {
        double k = 1.0, snr_db = 10.0;
        if (const auto* v = detail::find(s, "channel.k")) k = parse_number(*v, "channel.k");
        if (const auto* v = detail::find(s, "channel.snr-db")) {
            snr_db = parse_number(*v, "channel.snr-db");
        }
        return ChannelModel::gamma_fading(k, snr_db, log_base_from(s));
    }
    if (name == "point") {
        const auto* v = detail::find(s, "channel.r0");
        if (!v) throw ParseError("channel.kind = point requires channel.r0");
        return ChannelModel::point_mass(parse_number(*v, "channel.r0"));
    }
    if (name == "empirical") {
        const auto* v = detail::find(s, "channel.samples-file");
        if (!v) throw ParseError("channel.kind = empirical requires channel.samples-file");
        std::filesystem::path path(*v);
        if (path.is_relative() && !base_dir.empty()) path = base_dir / path;
        return ChannelModel::empirical(read_samples_file(path));
    }
    throw ParseError("channel.kind must be gamma, point, or empirical");
}

/// Simulation config assembled from settings. When sim.threshold is
/// "auto" (the default) the policy is left for the caller to resolve via
/// the solver; threshold_auto reports that.
struct SimSpec {
    SimConfig config;
    bool threshold_auto = true;
};

inline SimSpec sim_from(const Settings& s, LbtParams prm, ChannelModel model) {
    SimSpec spec;
    spec.config.params = prm;
    spec.config.model = std::move(model);
    if (const auto* v = detail::find(s, "sim.periods")) {
        spec.config.periods = parse_integer(*v, "sim.periods");
    }
    if (const auto* v = detail::find(s, "sim.seed")) {
        spec.config.seed = static_cast<std::uint64_t>(parse_integer(*v, "sim.seed"));
    }
    if (const auto* v = detail::find(s, "sim.baseline-probes")) {
        spec.config.baseline_probes = parse_bool(*v, "sim.baseline-probes");
    }
    if (const auto* v = detail::find(s, "sim.batches")) {
        spec.config.batches = static_cast<int>(parse_integer(*v, "sim.batches"));
    }
    if (const auto* v = detail::find(s, "sim.threads")) {
        spec.config.threads = static_cast<int>(parse_integer(*v, "sim.threads"));
    }
    if (const auto* v = detail::find(s, "sim.phase-cap")) {
        spec.config.phase_cap = parse_integer(*v, "sim.phase-cap");
    }
    if (const auto* v = detail::find(s, "sim.slot-mode")) {
        if (*v == "exact") {
            spec.config.slot_mode = SlotMode::exact;
        } else if (*v == "geometric") {
            spec.config.slot_mode = SlotMode::geometric;
        } else {
            throw ParseError("sim.slot-mode must be exact or geometric");
        }
    }

    std::string policy = "threshold";
    if (const auto* v = detail::find(s, "sim.policy")) policy = *v;
    if (policy == "always") {
        spec.config.policy = StoppingPolicy::always_transmit();
        spec.threshold_auto = false;
    } else if (policy == "threshold") {
        const auto* v = detail::find(s, "sim.threshold");
        if (v && *v != "auto") {
            const double cutoff = parse_number(*v, "sim.threshold");
            if (!(cutoff >= 0.0)) throw ParseError("sim.threshold must be nonnegative");
            spec.config.policy = StoppingPolicy::threshold(cutoff);
            spec.threshold_auto = false;
        }
    } else {
        throw ParseError("sim.policy must be threshold or always");
    }
    return spec;
}

}  // namespace lbt::config
