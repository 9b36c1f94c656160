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
 * Zero-noise extrapolation of noisy trajectory families.
 *
 * Every trajectory point contributes one scalar series per Bloch axis: the
 * coordinate's value at each injection strength n, together with the total
 * circuit execution time h of that run. Two extrapolators operate on a
 * series:
 *
 *  - Linear: least-squares line in n, evaluated at a target n. The target
 *    can be calibrated so that the final point's z matches a known value,
 *    and the calibrated target is then reused for every series.
 *
 *  - Richardson: a tableau in h toward h = 0. Samples are first thinned to an
 *    approximately geometric grid h, h/t, h/t^2, ...; each adjacent pair is
 *    combined as
 *
 *        A* ~ (r^k A(h/r) - A(h)) / (r^k - 1),   r = h_i / h_{i+1},
 *
 *    which cancels a leading error term c h^k exactly for any spacing.
 *    The first exponent is either fixed or estimated from the first three
 *    samples; each further level uses k + 1.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "dzne/trajectory.hpp"

namespace dzne {

/// Raised when an extrapolation cannot be carried out for the given data.
class ExtrapolationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

inline constexpr std::string_view kAxisNames[3] = {"x", "y", "z"};

struct Sample {
    std::int64_t n = 0;
    double h = 0.0;  // ns
    double value = 0.0;
};

struct NoisySeries {
    std::vector<Sample> samples;
    int step = 0;
    int axis = 2;

    /// n strictly increasing, h non-decreasing, finite values.
    void validate() const {
        for (std::size_t i = 0; i < samples.size(); ++i) {
            const Sample& s = samples[i];
            if (!std::isfinite(s.value) || !std::isfinite(s.h))
                throw std::invalid_argument("series contains a non-finite sample");
            if (i > 0 && s.n <= samples[i - 1].n) throw std::invalid_argument("series n must be strictly increasing");
            if (i > 0 && s.h < samples[i - 1].h) throw std::invalid_argument("series h must be non-decreasing");
        }
    }
};

/// One coordinate of one trajectory point across a sweep.
inline NoisySeries series_of(const SweepResult& sweep, int step, int axis) {
    NoisySeries s;
    s.step = step;
    s.axis = axis;
    const auto j = static_cast<std::size_t>(step);
    for (std::size_t i = 0; i < sweep.n_values.size(); ++i)
        s.samples.push_back({sweep.n_values[i], sweep.durations[i][j], sweep.trajectories[i][j][axis]});
    return s;
}

// -----------------------------------------------------------------------------
// Linear

enum class Abscissa { N, Duration };

struct LinearFit {
    double intercept = 0.0;
    double slope = 0.0;
    double residual_rms = 0.0;

    double at(double x) const { return intercept + slope * x; }
};

inline LinearFit linear_fit(const NoisySeries& series, Abscissa abscissa = Abscissa::N) {
    series.validate();
    const auto& s = series.samples;
    const auto xs = [&](const Sample& p) { return abscissa == Abscissa::N ? static_cast<double>(p.n) : p.h; };
    if (s.size() < 2) throw ExtrapolationError("linear fit needs at least 2 samples");

    const double m = static_cast<double>(s.size());
    double xbar = 0.0, ybar = 0.0;
    for (const Sample& p : s) {
        xbar += xs(p);
        ybar += p.value;
    }
    xbar /= m;
    ybar /= m;
    double sxx = 0.0, sxy = 0.0;
    for (const Sample& p : s) {
        const double dx = xs(p) - xbar;
        sxx += dx * dx;
        sxy += dx * (p.value - ybar);
    }
    if (!(sxx > 0.0)) throw ExtrapolationError("linear fit needs at least 2 distinct abscissae");

    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = ybar - fit.slope * xbar;
    double ssr = 0.0;
    for (const Sample& p : s) {
        const double r = p.value - fit.at(xs(p));
        ssr += r * r;
    }
    fit.residual_rms = std::sqrt(ssr / m);
    return fit;
}

inline double linear_extrapolate(const NoisySeries& series, double target_n) {
    return linear_fit(series, Abscissa::N).at(target_n);
}

/// Injection strength n* at which the fitted line reaches `exact_final_z`.
inline double calibrate_target_n(const NoisySeries& final_z_series, double exact_final_z, double min_slope = 1e-9) {
    const LinearFit fit = linear_fit(final_z_series, Abscissa::N);
    if (std::abs(fit.slope) < min_slope)
        throw ExtrapolationError("calibration undefined: final z does not vary with injected noise");
    return (exact_final_z - fit.intercept) / fit.slope;
}

// -----------------------------------------------------------------------------
// Richardson

inline double richardson_pair(double a_h, double a_h_over_t, double t, double k0, double min_denominator = 1e-12) {
    if (!(t > 1.0)) throw std::invalid_argument("richardson step ratio must exceed 1");
    if (!(k0 > 0.0)) throw std::invalid_argument("richardson exponent must be positive");
    const double tk = std::pow(t, k0);
    const double denom = tk - 1.0;
    if (!(std::abs(denom) >= min_denominator)) throw ExtrapolationError("richardson denominator underflow");
    return (tk * a_h_over_t - a_h) / denom;
}

/// Leading error exponent from values at h, h/t, h/t^2.
inline double estimate_exponent(double a0, double a1, double a2, double t, double min_denominator = 1e-12) {
    if (!(t > 1.0)) throw std::invalid_argument("richardson step ratio must exceed 1");
    if (!(std::abs(a1 - a2) >= min_denominator)) throw ExtrapolationError("exponent estimate: vanishing difference");
    const double ratio = (a0 - a1) / (a1 - a2);
    if (!(ratio > 0.0)) throw ExtrapolationError("exponent estimate: differences change sign");
    const double k = std::log(ratio) / std::log(t);
    if (!(k > 0.0) || !std::isfinite(k)) throw ExtrapolationError("exponent estimate: non-positive exponent");
    return k;
}

/// Same as estimate_exponent for arbitrary h0 > h1 > h2 > 0: solves
/// (a0 - a1)/(a1 - a2) = (h0^k - h1^k)/(h1^k - h2^k) for k by bisection.
inline double estimate_exponent_spaced(double a0, double a1, double a2, double h0, double h1, double h2,
                                       double min_denominator = 1e-12) {
    if (!(h0 > h1 && h1 > h2 && h2 > 0.0)) throw std::invalid_argument("exponent estimate needs h0 > h1 > h2 > 0");
    const double t01 = h0 / h1, t12 = h1 / h2;
    if (std::abs(std::log(t01) - std::log(t12)) <= 1e-12 * std::log(t12))
        return estimate_exponent(a0, a1, a2, t12, min_denominator);

    if (!(std::abs(a1 - a2) >= min_denominator)) throw ExtrapolationError("exponent estimate: vanishing difference");
    const double ratio = (a0 - a1) / (a1 - a2);
    if (!(ratio > 0.0)) throw ExtrapolationError("exponent estimate: differences change sign");

    const double x = h0 / h2, y = h1 / h2;
    // g(k) = log((x^k - y^k)/(y^k - 1)) is increasing in k.
    const auto g = [&](double k) { return std::log((std::pow(x, k) - std::pow(y, k)) / (std::pow(y, k) - 1.0)); };
    const double target = std::log(ratio);
    double lo = 1e-9, hi = 64.0;
    if (!(target > g(lo))) throw ExtrapolationError("exponent estimate: non-positive exponent");
    if (!(target < g(hi))) throw ExtrapolationError("exponent estimate: exponent out of range");
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

struct RichardsonConfig {
    /// Nominal step ratio used to pick a geometric sample subset.
    double t = 2.0;
    /// Fixed leading exponent; empty means estimate it from the data.
    std::optional<double> fixed_k;
    /// Exponent used when estimation fails; empty means fail.
    std::optional<double> fallback_k;
    double min_denominator = 1e-12;
    int max_levels = 8;
    /// Explicit sample subset by n. Empty selects a geometric grid by t.
    std::vector<std::int64_t> subset_n;

    void validate() const {
        if (!(t > 1.0)) throw std::invalid_argument("richardson t must exceed 1");
        if (fixed_k && !(*fixed_k > 0.0)) throw std::invalid_argument("fixed exponent must be positive");
        if (fallback_k && !(*fallback_k > 0.0)) throw std::invalid_argument("fallback exponent must be positive");
        if (!(min_denominator > 0.0)) throw std::invalid_argument("min_denominator must be positive");
        if (max_levels < 1) throw std::invalid_argument("max_levels must be >= 1");
    }
};

struct RichardsonResult {
    double value = 0.0;
    /// Leading exponent actually used (0 when the series was constant).
    double k0 = 0.0;
    bool fallback = false;
    int levels = 0;
    std::vector<std::int64_t> used_n;
};

/// Samples ordered by decreasing h, as close to h, h/t, h/t^2, ... as the data allows.
inline std::vector<Sample> geometric_subset(const NoisySeries& series, const RichardsonConfig& cfg) {
    std::vector<Sample> out;
    if (!cfg.subset_n.empty()) {
        for (std::int64_t n : cfg.subset_n) {
            auto it = std::find_if(series.samples.begin(), series.samples.end(),
                                   [&](const Sample& s) { return s.n == n; });
            if (it == series.samples.end())
                throw ExtrapolationError("richardson subset n = " + std::to_string(n) + " not in series");
            out.push_back(*it);
        }
        std::sort(out.begin(), out.end(), [](const Sample& a, const Sample& b) { return a.h > b.h; });
        for (std::size_t i = 0; i < out.size(); ++i) {
            if (!(out[i].h > 0.0)) throw ExtrapolationError("richardson needs positive h");
            if (i > 0 && !(out[i].h < out[i - 1].h)) throw ExtrapolationError("richardson needs distinct h");
        }
        return out;
    }

    std::vector<Sample> pool = series.samples;
    std::sort(pool.begin(), pool.end(), [](const Sample& a, const Sample& b) { return a.h > b.h; });
    if (pool.empty() || !(pool.front().h > 0.0)) return out;
    out.push_back(pool.front());
    const double tolerance = 0.5 * std::log(cfg.t);
    for (;;) {
        const double current = out.back().h;
        const double target = current / cfg.t;
        const Sample* best = nullptr;
        double best_err = std::numeric_limits<double>::infinity();
        for (const Sample& s : pool) {
            if (!(s.h > 0.0) || !(s.h < current)) continue;
            const double err = std::abs(std::log(s.h / target));
            if (err < best_err) {
                best_err = err;
                best = &s;
            }
        }
        if (best == nullptr || best_err > tolerance) break;
        out.push_back(*best);
    }
    return out;
}

inline RichardsonResult richardson_sequence(const NoisySeries& series, const RichardsonConfig& cfg) {
    series.validate();
    cfg.validate();
    if (series.samples.size() < 2) throw ExtrapolationError("richardson needs at least 2 samples");

    RichardsonResult res;
    const auto [lo, hi] = std::minmax_element(series.samples.begin(), series.samples.end(),
                                              [](const Sample& a, const Sample& b) { return a.value < b.value; });
    if (hi->value - lo->value <= cfg.min_denominator) {
        res.value = series.samples.front().value;
        for (const Sample& s : series.samples) res.used_n.push_back(s.n);
        return res;
    }

    const std::vector<Sample> grid = geometric_subset(series, cfg);
    if (grid.size() < 2) throw ExtrapolationError("richardson needs at least 2 usable samples");
    for (const Sample& s : grid) res.used_n.push_back(s.n);

    if (cfg.fixed_k) {
        res.k0 = *cfg.fixed_k;
    } else {
        try {
            if (grid.size() < 3) throw ExtrapolationError("exponent estimate needs 3 samples");
            res.k0 = estimate_exponent_spaced(grid[0].value, grid[1].value, grid[2].value, grid[0].h, grid[1].h, grid[2].h,
                                              cfg.min_denominator);
        } catch (const ExtrapolationError&) {
            if (!cfg.fallback_k) throw;
            res.k0 = *cfg.fallback_k;
            res.fallback = true;
        }
    }

    std::vector<double> level;
    std::vector<double> hs;
    for (const Sample& s : grid) {
        level.push_back(s.value);
        hs.push_back(s.h);
    }
    const double settle = cfg.min_denominator * 1e3;
    while (level.size() > 1 && res.levels < cfg.max_levels) {
        const double k = res.k0 + res.levels;
        std::vector<double> next(level.size() - 1);
        for (std::size_t i = 0; i + 1 < level.size(); ++i)
            next[i] = richardson_pair(level[i], level[i + 1], hs[i] / hs[i + 1], k, cfg.min_denominator);
        ++res.levels;
        const bool settled = std::abs(next.back() - level.back()) < settle;
        level = std::move(next);
        if (settled) break;
    }
    res.value = level.back();
    return res;
}

// -----------------------------------------------------------------------------
// Whole trajectories

enum class AxisMask { All, ZOnly };

struct LinearConfig {
    double target_n = 0.0;
    /// Replace target_n by the value that makes the final z match the exact trajectory.
    bool calibrate = false;
    double min_slope = 1e-9;
};

struct ExtrapolationConfig {
    std::variant<LinearConfig, RichardsonConfig> method = LinearConfig{};
    AxisMask axes = AxisMask::All;
};

struct SeriesDiagnostic {
    int step = 0;
    int axis = 2;
    bool ok = true;
    double value = 0.0;
    // linear
    double intercept = 0.0;
    double slope = 0.0;
    double residual_rms = 0.0;
    // richardson
    double k0 = 0.0;
    int levels = 0;
    bool fallback = false;
    std::vector<std::int64_t> used_n;
    std::string error;
};

struct ExtrapolationResult {
    Trajectory trajectory;
    Trajectory control;
    std::vector<SeriesDiagnostic> series;
    /// Per-point annotations; empty string means no annotation.
    std::vector<std::string> flags;
    /// Target n actually used by the linear method.
    std::optional<double> target_n;
};

namespace detail {

inline void append_flag(std::string& flags, std::string_view f) {
    if (!flags.empty()) flags += ';';
    flags += f;
}

}  // namespace detail

inline ExtrapolationResult extrapolate_trajectory(const SweepResult& family, const ExtrapolationConfig& cfg,
                                                  const std::optional<Trajectory>& exact = std::nullopt) {
    if (family.trajectories.empty()) throw std::invalid_argument("empty trajectory family");
    const std::size_t points = family.points();
    if (exact && exact->size() != points) throw std::invalid_argument("exact trajectory length mismatch");

    ExtrapolationResult out;
    out.control = family.control();
    out.trajectory = out.control;
    out.flags.assign(points, "");

    const auto* linear = std::get_if<LinearConfig>(&cfg.method);
    RichardsonConfig rich;
    if (linear) {
        out.target_n = linear->target_n;
        if (linear->calibrate) {
            if (!exact) throw std::invalid_argument("linear calibration needs the exact trajectory");
            const int last = family.spec.n_steps;
            out.target_n = calibrate_target_n(series_of(family, last, 2), (*exact)[static_cast<std::size_t>(last)].z,
                                              linear->min_slope);
        }
    } else {
        rich = std::get<RichardsonConfig>(cfg.method);
        rich.validate();
        if (family.n_values.size() < 2) throw ExtrapolationError("richardson needs at least two noise levels");
        if (!rich.fallback_k) rich.fallback_k = 1.0;
    }

    const int first_axis = cfg.axes == AxisMask::ZOnly ? 2 : 0;
    for (std::size_t j = 0; j < points; ++j) {
        BlochVector p = out.control[j];
        bool failed = false;
        for (int axis = first_axis; axis < 3; ++axis) {
            const NoisySeries s = series_of(family, static_cast<int>(j), axis);
            SeriesDiagnostic d;
            d.step = static_cast<int>(j);
            d.axis = axis;
            try {
                if (linear) {
                    const LinearFit fit = linear_fit(s, Abscissa::N);
                    d.intercept = fit.intercept;
                    d.slope = fit.slope;
                    d.residual_rms = fit.residual_rms;
                    d.value = fit.at(*out.target_n);
                } else {
                    const RichardsonResult r = richardson_sequence(s, rich);
                    d.value = r.value;
                    d.k0 = r.k0;
                    d.levels = r.levels;
                    d.fallback = r.fallback;
                    d.used_n = r.used_n;
                }
                if (!std::isfinite(d.value)) throw ExtrapolationError("non-finite extrapolated value");
                p[axis] = d.value;
            } catch (const std::exception& e) {
                d.ok = false;
                d.error = e.what();
                failed = true;
            }
            if (d.fallback) detail::append_flag(out.flags[j], std::string("k-fallback:") + std::string(kAxisNames[axis]));
            out.series.push_back(std::move(d));
        }

        if (failed) {
            out.trajectory[j] = out.control[j];
            detail::append_flag(out.flags[j], "failed:control");
            continue;
        }
        if (p.norm() > 1.0) {
            if (cfg.axes == AxisMask::All) {
                const double s = 1.0 / p.norm();
                p = {p.x * s, p.y * s, p.z * s};
            } else {
                // x and y stay exactly as in the control.
                const double room = std::max(0.0, 1.0 - p.x * p.x - p.y * p.y);
                p.z = std::copysign(std::sqrt(room), p.z);
            }
            detail::append_flag(out.flags[j], "clamped");
        }
        out.trajectory[j] = p;
    }
    return out;
}

}  // namespace dzne
