// Copyright 2026 The dzne Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

/**
 * Run configuration for the command-line tool.
 *
 * Config files are flat `key = value` text; `#` starts a comment. Keys:
 *
 *   n_steps                int      30
 *   t1, t2                 ns       50000, 70000
 *   u1_duration            ns       0
 *   u3_duration            ns       70
 *   delay_unit             ns       70
 *   noiseless              bool     false
 *   scheme                 type1|type2|type3
 *   n_values               list     0..10     (e.g. "0,1,2" or "0..10" or "0,2..4")
 *   shots                  int      (absent = exact expectations)
 *   seed                   uint64   (required with shots)
 *   method                 linear|richardson
 *   axes                   all|z
 *   target_n               real     0         (linear, when calibrate = false)
 *   calibrate              bool     true      (linear)
 *   richardson_t           real     2
 *   richardson_k           estimated|<real>
 *   richardson_fallback_k  real     1
 *   richardson_subset      list     (empty = geometric selection)
 *   richardson_max_levels  int      8
 *   min_denominator        real     1e-12
 *   compare_schemes        bool     true      (report)
 *   svg_max_trajectories   int      11
 *   out                    path     out
 *   format                 csv|json|svg
 */

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "dzne/extrapolate.hpp"
#include "dzne/qsim.hpp"
#include "dzne/trajectory.hpp"

namespace dzne {

class ConfigError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

enum class OutputFormat { Csv, Json, Svg };

struct RunConfig {
    AlgorithmSpec spec;
    NoiseModel noise;
    SchemeKind scheme = SchemeKind::Type1;
    std::vector<std::int64_t> n_values{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    std::optional<std::int64_t> shots;
    std::optional<std::uint64_t> seed;
    std::string method = "linear";
    AxisMask axes = AxisMask::All;
    double target_n = 0.0;
    bool calibrate = true;
    RichardsonConfig richardson = [] {
        RichardsonConfig r;
        r.fallback_k = 1.0;
        return r;
    }();
    bool compare_schemes = true;
    int svg_max_trajectories = 11;
    std::string out = "out";
    OutputFormat format = OutputFormat::Csv;

    void validate() const {
        spec.validate();
        noise.validate();
        if (n_values.empty()) throw ConfigError("n_values must not be empty");
        for (std::size_t i = 0; i < n_values.size(); ++i) {
            if (n_values[i] < 0) throw ConfigError("n_values must be non-negative");
            if (i > 0 && n_values[i] <= n_values[i - 1]) throw ConfigError("n_values must be strictly increasing");
        }
        if (shots && *shots < 1) throw ConfigError("shots must be >= 1");
        if (shots && !seed) throw ConfigError("seed is required when shots is set");
        if (method != "linear" && method != "richardson") throw ConfigError("method must be linear or richardson");
        richardson.validate();
        if (svg_max_trajectories < 1) throw ConfigError("svg_max_trajectories must be >= 1");
    }

    std::optional<SamplingOptions> sampling() const {
        if (!shots) return std::nullopt;
        return SamplingOptions{*shots, *seed};
    }

    ExtrapolationConfig extrapolation() const {
        ExtrapolationConfig c;
        c.axes = axes;
        if (method == "linear") c.method = LinearConfig{target_n, calibrate};
        else c.method = richardson;
        return c;
    }
};

namespace config_detail {

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

inline std::int64_t to_int(const std::string& key, const std::string& v) {
    std::size_t used = 0;
    std::int64_t out = 0;
    try {
        out = std::stoll(v, &used);
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected an integer, got '" + v + "'");
    }
    if (used != v.size()) throw ConfigError(key + ": expected an integer, got '" + v + "'");
    return out;
}

inline double to_real(const std::string& key, const std::string& v) {
    std::size_t used = 0;
    double out = 0;
    try {
        out = std::stod(v, &used);
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected a number, got '" + v + "'");
    }
    if (used != v.size()) throw ConfigError(key + ": expected a number, got '" + v + "'");
    return out;
}

inline bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError(key + ": expected a boolean, got '" + v + "'");
}

}  // namespace config_detail

/// "0,1,5" or "0..10" or mixtures such as "0,2..4".
inline std::vector<std::int64_t> parse_int_list(const std::string& key, std::string_view text) {
    using namespace config_detail;
    std::vector<std::int64_t> out;
    std::string item;
    std::string s(text);
    std::size_t pos = 0;
    while (pos <= s.size()) {
        const auto comma = s.find(',', pos);
        item = trim(std::string_view(s).substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
        pos = comma == std::string::npos ? s.size() + 1 : comma + 1;
        if (item.empty()) continue;
        const auto dots = item.find("..");
        if (dots == std::string::npos) {
            out.push_back(to_int(key, item));
        } else {
            const auto a = to_int(key, trim(item.substr(0, dots)));
            const auto b = to_int(key, trim(item.substr(dots + 2)));
            if (b < a) throw ConfigError(key + ": empty range '" + item + "'");
            for (auto v = a; v <= b; ++v) out.push_back(v);
        }
    }
    return out;
}

inline OutputFormat parse_format(std::string_view s) {
    if (s == "csv") return OutputFormat::Csv;
    if (s == "json") return OutputFormat::Json;
    if (s == "svg") return OutputFormat::Svg;
    throw ConfigError("format must be csv, json or svg");
}

inline std::string_view to_string(OutputFormat f) {
    switch (f) {
        case OutputFormat::Csv: return "csv";
        case OutputFormat::Json: return "json";
        case OutputFormat::Svg: return "svg";
    }
    return "?";
}

inline AxisMask parse_axes(std::string_view s) {
    if (s == "all") return AxisMask::All;
    if (s == "z") return AxisMask::ZOnly;
    throw ConfigError("axes must be all or z");
}

inline std::string_view to_string(AxisMask a) { return a == AxisMask::All ? "all" : "z"; }

/// Applies one `key = value` setting.
inline void set_option(RunConfig& c, const std::string& key, const std::string& raw) {
    using namespace config_detail;
    const std::string v = trim(raw);
    if (key == "n_steps") c.spec.n_steps = static_cast<int>(to_int(key, v));
    else if (key == "t1") c.noise.t1 = to_real(key, v);
    else if (key == "t2") c.noise.t2 = to_real(key, v);
    else if (key == "u1_duration") c.noise.u1_duration = to_real(key, v);
    else if (key == "u3_duration") c.noise.u3_duration = to_real(key, v);
    else if (key == "delay_unit") c.noise.delay_unit_duration = to_real(key, v);
    else if (key == "noiseless") c.noise.noiseless = to_bool(key, v);
    else if (key == "scheme") {
        try {
            c.scheme = parse_scheme(v);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
    } else if (key == "n_values") c.n_values = parse_int_list(key, v);
    else if (key == "shots") c.shots = to_int(key, v);
    else if (key == "seed") {
        const auto s = to_int(key, v);
        if (s < 0) throw ConfigError("seed must be non-negative");
        c.seed = static_cast<std::uint64_t>(s);
    } else if (key == "method") c.method = v;
    else if (key == "axes") c.axes = parse_axes(v);
    else if (key == "target_n") c.target_n = to_real(key, v);
    else if (key == "calibrate") c.calibrate = to_bool(key, v);
    else if (key == "richardson_t") c.richardson.t = to_real(key, v);
    else if (key == "richardson_k") {
        if (v == "estimated") c.richardson.fixed_k.reset();
        else c.richardson.fixed_k = to_real(key, v);
    } else if (key == "richardson_fallback_k") c.richardson.fallback_k = to_real(key, v);
    else if (key == "richardson_subset") c.richardson.subset_n = parse_int_list(key, v);
    else if (key == "richardson_max_levels") c.richardson.max_levels = static_cast<int>(to_int(key, v));
    else if (key == "min_denominator") c.richardson.min_denominator = to_real(key, v);
    else if (key == "compare_schemes") c.compare_schemes = to_bool(key, v);
    else if (key == "svg_max_trajectories") c.svg_max_trajectories = static_cast<int>(to_int(key, v));
    else if (key == "out") c.out = v;
    else if (key == "format") c.format = parse_format(v);
    else throw ConfigError("unknown config key '" + key + "'");
}

inline void apply_config_text(RunConfig& c, std::string_view text) {
    std::size_t line_no = 0, pos = 0;
    const std::string s(text);
    while (pos < s.size()) {
        const auto nl = s.find('\n', pos);
        std::string line = s.substr(pos, nl == std::string::npos ? std::string::npos : nl - pos);
        pos = nl == std::string::npos ? s.size() : nl + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        line = config_detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
        set_option(c, config_detail::trim(std::string_view(line).substr(0, eq)), line.substr(eq + 1));
    }
}

/// Every effective setting, defaults included.
inline nlohmann::json to_json(const RunConfig& c) {
    nlohmann::json j;
    j["n_steps"] = c.spec.n_steps;
    j["t1"] = c.noise.t1;
    j["t2"] = c.noise.t2;
    j["u1_duration"] = c.noise.u1_duration;
    j["u3_duration"] = c.noise.u3_duration;
    j["delay_unit"] = c.noise.delay_unit_duration;
    j["noiseless"] = c.noise.noiseless;
    j["scheme"] = std::string(to_string(c.scheme));
    j["n_values"] = c.n_values;
    j["shots"] = c.shots ? nlohmann::json(*c.shots) : nlohmann::json(nullptr);
    j["seed"] = c.seed ? nlohmann::json(*c.seed) : nlohmann::json(nullptr);
    j["method"] = c.method;
    j["axes"] = std::string(to_string(c.axes));
    j["target_n"] = c.target_n;
    j["calibrate"] = c.calibrate;
    j["richardson_t"] = c.richardson.t;
    j["richardson_k"] = c.richardson.fixed_k ? nlohmann::json(*c.richardson.fixed_k) : nlohmann::json("estimated");
    j["richardson_fallback_k"] =
        c.richardson.fallback_k ? nlohmann::json(*c.richardson.fallback_k) : nlohmann::json(nullptr);
    j["richardson_subset"] = c.richardson.subset_n;
    j["richardson_max_levels"] = c.richardson.max_levels;
    j["min_denominator"] = c.richardson.min_denominator;
    j["compare_schemes"] = c.compare_schemes;
    j["svg_max_trajectories"] = c.svg_max_trajectories;
    j["out"] = c.out;
    j["format"] = std::string(to_string(c.format));
    return j;
}

}  // namespace dzne
