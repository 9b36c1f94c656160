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

// Trajectory quality metrics. All of them depend only on Euclidean
// distances in Bloch space.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "dzne/qsim.hpp"
#include "dzne/trajectory.hpp"

namespace dzne {

struct TrajectoryReport {
    std::vector<double> per_point_deviation;
    double mean_deviation = 0.0;
    double max_deviation = 0.0;
    double final_point_deviation = 0.0;
    std::vector<std::string> flags;
};

inline TrajectoryReport deviation_report(const Trajectory& traj, const Trajectory& exact,
                                         std::vector<std::string> flags = {}) {
    if (traj.size() != exact.size()) throw std::invalid_argument("trajectory length mismatch");
    if (traj.empty()) throw std::invalid_argument("empty trajectory");
    TrajectoryReport r;
    r.per_point_deviation.reserve(traj.size());
    double sum = 0.0;
    for (std::size_t j = 0; j < traj.size(); ++j) {
        const double d = distance(traj[j], exact[j]);
        r.per_point_deviation.push_back(d);
        sum += d;
        r.max_deviation = std::max(r.max_deviation, d);
    }
    r.mean_deviation = sum / static_cast<double>(traj.size());
    r.final_point_deviation = r.per_point_deviation.back();
    r.flags = std::move(flags);
    r.flags.resize(traj.size());
    return r;
}

/// Fraction of (point, adjacent n pair) where the deviation from exact does not shrink as n grows.
/// `family` is ordered by increasing n.
inline double monotonicity_score(const std::vector<Trajectory>& family, const Trajectory& exact,
                                 double tie_tolerance = 1e-12) {
    if (family.size() < 2) throw std::invalid_argument("monotonicity needs at least two noise levels");
    std::vector<std::vector<double>> dev;
    for (const Trajectory& t : family) dev.push_back(deviation_report(t, exact).per_point_deviation);
    std::size_t good = 0, total = 0;
    for (std::size_t i = 0; i + 1 < dev.size(); ++i) {
        for (std::size_t j = 0; j < exact.size(); ++j) {
            ++total;
            if (dev[i + 1][j] >= dev[i][j] - tie_tolerance) ++good;
        }
    }
    return static_cast<double>(good) / static_cast<double>(total);
}

inline double monotonicity_score(const SweepResult& sweep, const Trajectory& exact) {
    return monotonicity_score(sweep.trajectories, exact);
}

/// RMS norm of the second differences p[j+1] - 2 p[j] + p[j-1].
inline double smoothness_score(const Trajectory& traj) {
    if (traj.size() < 3) throw std::invalid_argument("smoothness needs at least 3 points");
    double sum = 0.0;
    for (std::size_t j = 1; j + 1 < traj.size(); ++j) {
        double sq = 0.0;
        for (int a = 0; a < 3; ++a) {
            const double d = traj[j + 1][a] - 2.0 * traj[j][a] + traj[j - 1][a];
            sq += d * d;
        }
        sum += sq;
    }
    return std::sqrt(sum / static_cast<double>(traj.size() - 2));
}

/// Below 1 means the extrapolated trajectory is closer to exact than the control.
inline double improvement_ratio(const TrajectoryReport& extrapolated, const TrajectoryReport& control) {
    if (!(control.mean_deviation > 0.0)) throw std::invalid_argument("control has zero deviation");
    return extrapolated.mean_deviation / control.mean_deviation;
}

}  // namespace dzne
