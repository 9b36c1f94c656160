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

// Bloch-trajectory circuits and identity-delay noise injection.
//
// Step j of the algorithm applies, in order,
//   u1(-4 j pi/N), rx(-j pi/N), rx((j+1) pi/N), u1(4 (j+1) pi/N)
// with rx(b) = u3(b, -pi/2, pi/2). The product telescopes, so after j steps
// the qubit is rz(4 j pi/N) rx(j pi/N)|0> (up to a global phase) and its
// z coordinate is cos(j pi/N). Trajectory point j is the state after the
// first j steps; there are N + 1 points.

#include <cstdint>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dzne/qsim.hpp"

namespace dzne {

inline constexpr std::size_t kGatesPerStep = 4;

struct AlgorithmSpec {
    int n_steps = 30;

    void validate() const {
        if (n_steps < 1) throw std::invalid_argument("n_steps must be >= 1");
    }
};

enum class SchemeKind { Type1, Type2, Type3 };

inline std::string_view to_string(SchemeKind k) {
    switch (k) {
        case SchemeKind::Type1: return "type1";
        case SchemeKind::Type2: return "type2";
        case SchemeKind::Type3: return "type3";
    }
    return "?";
}

inline SchemeKind parse_scheme(std::string_view s) {
    if (s == "type1") return SchemeKind::Type1;
    if (s == "type2") return SchemeKind::Type2;
    if (s == "type3") return SchemeKind::Type3;
    throw std::invalid_argument("unknown scheme '" + std::string(s) + "'");
}

/// `n` identity pulses per insertion set. n = 0 is the control circuit.
struct InjectionScheme {
    SchemeKind kind = SchemeKind::Type1;
    std::int64_t n = 0;
};

using Trajectory = std::vector<BlochVector>;

inline std::vector<Gate> step_gates(int j, const AlgorithmSpec& spec) {
    spec.validate();
    if (j < 0 || j >= spec.n_steps) throw std::out_of_range("step index out of range");
    const double unit = std::numbers::pi / spec.n_steps;
    const double half_pi = 0.5 * std::numbers::pi;
    return {U1{-4.0 * j * unit}, U3{-j * unit, -half_pi, half_pi}, U3{(j + 1) * unit, -half_pi, half_pi},
            U1{4.0 * (j + 1) * unit}};
}

/// The first j steps; j = 0 is the bare |0> preparation.
inline Circuit circuit_for_step(int j, const AlgorithmSpec& spec) {
    spec.validate();
    if (j < 0 || j > spec.n_steps) throw std::out_of_range("step index out of range");
    Circuit c;
    c.gates.reserve(kGatesPerStep * static_cast<std::size_t>(j));
    for (int s = 0; s < j; ++s) {
        auto g = step_gates(s, spec);
        c.gates.insert(c.gates.end(), g.begin(), g.end());
    }
    return c;
}

/// Number of places a delay set is inserted for this scheme kind.
inline std::size_t insertion_sites(SchemeKind kind, const Circuit& c) {
    switch (kind) {
        case SchemeKind::Type1: return c.size();
        case SchemeKind::Type2: return 1;
        case SchemeKind::Type3:
            if (c.size() % kGatesPerStep != 0) throw std::invalid_argument("type3 needs a circuit of whole steps");
            for (const Gate& g : c.gates)
                if (is_delay(g)) throw std::invalid_argument("type3 needs an uninjected circuit");
            return c.size() / kGatesPerStep;
    }
    return 0;
}

inline Circuit inject(const Circuit& c, const InjectionScheme& scheme) {
    if (scheme.n < 0) throw std::invalid_argument("injection count must be non-negative");
    const std::size_t sites = insertion_sites(scheme.kind, c);
    if (scheme.n == 0) return c;

    const Gate pause = Delay{scheme.n};
    Circuit out;
    switch (scheme.kind) {
        case SchemeKind::Type1:
            out.gates.reserve(2 * c.size());
            for (const Gate& g : c.gates) {
                out.gates.push_back(g);
                out.gates.push_back(pause);
            }
            break;
        case SchemeKind::Type2:
            out = c;
            out.gates.push_back(pause);
            break;
        case SchemeKind::Type3:
            out.gates.reserve(c.size() + sites);
            for (std::size_t i = 0; i < c.size(); ++i) {
                out.gates.push_back(c.gates[i]);
                if ((i + 1) % kGatesPerStep == 0) out.gates.push_back(pause);
            }
            break;
    }
    return out;
}

inline std::int64_t delay_units(const Circuit& c) {
    std::int64_t total = 0;
    for (const Gate& g : c.gates)
        if (const auto* d = std::get_if<Delay>(&g)) total += d->count;
    return total;
}

/// Scheme of the given kind whose injected total is exactly `total_units` on c.
inline InjectionScheme equivalent_budget(std::int64_t total_units, SchemeKind kind, const Circuit& c) {
    if (total_units < 0) throw std::invalid_argument("budget must be non-negative");
    const auto sites = static_cast<std::int64_t>(insertion_sites(kind, c));
    if (total_units == 0) return {kind, 0};
    if (sites == 0 || total_units % sites != 0)
        throw std::invalid_argument("budget of " + std::to_string(total_units) + " units is not divisible over " +
                                    std::to_string(sites) + " " + std::string(to_string(kind)) + " sites");
    return {kind, total_units / sites};
}

/// Wall-clock execution time in ns.
inline double circuit_duration(const Circuit& c, const NoiseModel& model) {
    double total = 0.0;
    for (const Gate& g : c.gates) total += model.duration(g);
    return total;
}

/// Noisy trajectories for a sweep of injection strengths.
struct SweepResult {
    AlgorithmSpec spec;
    SchemeKind kind = SchemeKind::Type1;
    std::vector<std::int64_t> n_values;
    /// trajectories[i][j]: point j under n_values[i].
    std::vector<Trajectory> trajectories;
    /// durations[i][j]: execution time in ns of the circuit for point j under n_values[i].
    std::vector<std::vector<double>> durations;

    std::size_t points() const { return static_cast<std::size_t>(spec.n_steps) + 1; }

    const Trajectory& control() const { return trajectories.front(); }
};

struct SamplingOptions {
    std::int64_t shots = 0;
    std::uint64_t seed = 0;
};

/// Simulates every (n, j) cell. Sampled cells use a seed derived from
/// (seed, n, j) so results do not depend on evaluation order.
inline SweepResult run_sweep(const AlgorithmSpec& spec, SchemeKind kind, const std::vector<std::int64_t>& n_values,
                             const NoiseModel& model, std::optional<SamplingOptions> sampling = std::nullopt) {
    spec.validate();
    model.validate();
    if (n_values.empty()) throw std::invalid_argument("n_values must not be empty");
    for (std::size_t i = 0; i < n_values.size(); ++i) {
        if (n_values[i] < 0) throw std::invalid_argument("n_values must be non-negative");
        if (i > 0 && n_values[i] <= n_values[i - 1]) throw std::invalid_argument("n_values must be strictly increasing");
    }

    SweepResult out;
    out.spec = spec;
    out.kind = kind;
    out.n_values = n_values;
    out.trajectories.assign(n_values.size(), Trajectory(out.points()));
    out.durations.assign(n_values.size(), std::vector<double>(out.points()));

    std::vector<Circuit> bases;
    for (int j = 0; j <= spec.n_steps; ++j) bases.push_back(circuit_for_step(j, spec));

    for (std::size_t i = 0; i < n_values.size(); ++i) {
        for (int j = 0; j <= spec.n_steps; ++j) {
            const Circuit c = inject(bases[static_cast<std::size_t>(j)], {kind, n_values[i]});
            const DensityMatrix rho = simulate(c, model);
            const auto jj = static_cast<std::size_t>(j);
            out.durations[i][jj] = circuit_duration(c, model);
            out.trajectories[i][jj] =
                sampling ? sample_bloch(rho, sampling->shots,
                                        derive_seed(sampling->seed, static_cast<std::uint64_t>(n_values[i]),
                                                    static_cast<std::uint64_t>(j)))
                         : bloch(rho);
        }
    }
    return out;
}

inline Trajectory exact_trajectory(const AlgorithmSpec& spec) {
    return run_sweep(spec, SchemeKind::Type1, {0}, NoiseModel::ideal()).control();
}

}  // namespace dzne
