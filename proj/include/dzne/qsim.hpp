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
 * Exact single-qubit density-matrix simulation.
 *
 * A circuit is a list of native gates (u1, u3) and idle delays. Each gate is
 * applied as a unitary and is then followed by a closed-form T1/T2 channel
 * for the gate's duration. The channel is amplitude damping toward |0> with
 * population decay exp(-dt/T1), and total coherence decay exp(-dt/T2). Both
 * factors are exponentials in time, so the channel composes exactly:
 * decohere(decohere(rho, a), b) == decohere(rho, a + b).
 *
 * Bloch convention: z = +1 is |0>, z = -1 is |1>, and (x, y, z) are the
 * Pauli expectations Tr(rho sigma).
 */

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace dzne {

using complex = std::complex<double>;

/// Row-major 2x2 complex matrix.
struct Matrix2 {
    std::array<complex, 4> m{complex{1.0}, complex{}, complex{}, complex{1.0}};

    complex& operator()(int r, int c) { return m[static_cast<std::size_t>(2 * r + c)]; }
    const complex& operator()(int r, int c) const { return m[static_cast<std::size_t>(2 * r + c)]; }

    static Matrix2 identity() { return {}; }

    Matrix2 adjoint() const {
        Matrix2 a;
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c) a(r, c) = std::conj((*this)(c, r));
        return a;
    }

    friend Matrix2 operator*(const Matrix2& a, const Matrix2& b) {
        Matrix2 out;
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c) out(r, c) = a(r, 0) * b(0, c) + a(r, 1) * b(1, c);
        return out;
    }
};

struct BlochVector {
    double x = 0.0;
    double y = 0.0;
    double z = 1.0;

    double norm() const { return std::sqrt(x * x + y * y + z * z); }

    double operator[](int axis) const { return axis == 0 ? x : (axis == 1 ? y : z); }
    double& operator[](int axis) { return axis == 0 ? x : (axis == 1 ? y : z); }

    friend bool operator==(const BlochVector&, const BlochVector&) = default;
};

inline double distance(const BlochVector& a, const BlochVector& b) {
    const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

class DensityMatrix {
  public:
    /// |0><0|
    DensityMatrix() = default;

    DensityMatrix(complex rho00, complex rho01, complex rho10, complex rho11)
        : rho00_(rho00), rho01_(rho01), rho10_(rho10), rho11_(rho11) {}

    static DensityMatrix ground() { return {}; }
    static DensityMatrix excited() { return {0.0, 0.0, 0.0, 1.0}; }
    static DensityMatrix maximally_mixed() { return {0.5, 0.0, 0.0, 0.5}; }

    /// State with the given Bloch vector; requires |v| <= 1.
    static DensityMatrix from_bloch(const BlochVector& v) {
        if (!(v.norm() <= 1.0 + 1e-9))
            throw std::invalid_argument("Bloch vector outside the unit ball");
        return {0.5 * (1.0 + v.z), complex{0.5 * v.x, -0.5 * v.y}, complex{0.5 * v.x, 0.5 * v.y},
                0.5 * (1.0 - v.z)};
    }

    static DensityMatrix from_matrix(const Matrix2& a) { return {a(0, 0), a(0, 1), a(1, 0), a(1, 1)}; }

    Matrix2 matrix() const {
        Matrix2 a;
        a(0, 0) = rho00_;
        a(0, 1) = rho01_;
        a(1, 0) = rho10_;
        a(1, 1) = rho11_;
        return a;
    }

    complex rho00() const { return rho00_; }
    complex rho01() const { return rho01_; }
    complex rho10() const { return rho10_; }
    complex rho11() const { return rho11_; }

    complex trace() const { return rho00_ + rho11_; }

    /// Checks hermiticity, unit trace and positivity to within tol.
    bool is_valid(double tol = 1e-12) const {
        if (std::abs(rho10_ - std::conj(rho01_)) > tol) return false;
        if (std::abs(rho00_.imag()) > tol || std::abs(rho11_.imag()) > tol) return false;
        if (std::abs(trace() - 1.0) > tol) return false;
        const double p0 = rho00_.real(), p1 = rho11_.real();
        return p0 >= -tol && p1 >= -tol && p0 * p1 - std::norm(rho01_) >= -tol;
    }

  private:
    complex rho00_{1.0};
    complex rho01_{};
    complex rho10_{};
    complex rho11_{};
};

// -----------------------------------------------------------------------------
// Gates

struct U1 {
    double alpha = 0.0;
    friend bool operator==(const U1&, const U1&) = default;
};

struct U3 {
    double theta = 0.0;
    double phi = 0.0;
    double lambda = 0.0;
    friend bool operator==(const U3&, const U3&) = default;
};

/// Idle for `count` atomic identity pulses.
struct Delay {
    std::int64_t count = 1;
    friend bool operator==(const Delay&, const Delay&) = default;
};

using Gate = std::variant<U1, U3, Delay>;

inline bool is_delay(const Gate& g) { return std::holds_alternative<Delay>(g); }

inline void validate(const Gate& g) {
    std::visit(
        [](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, U1>) {
                if (!std::isfinite(v.alpha)) throw std::invalid_argument("u1 angle is not finite");
            } else if constexpr (std::is_same_v<T, U3>) {
                if (!std::isfinite(v.theta) || !std::isfinite(v.phi) || !std::isfinite(v.lambda))
                    throw std::invalid_argument("u3 angle is not finite");
            } else {
                if (v.count < 1) throw std::invalid_argument("delay count must be >= 1");
            }
        },
        g);
}

struct Circuit {
    std::vector<Gate> gates;

    std::size_t size() const { return gates.size(); }
    bool empty() const { return gates.empty(); }

    friend bool operator==(const Circuit&, const Circuit&) = default;
};

/// u1(a) = diag(1, e^{ia}); u3 follows the usual native-gate convention, so
/// u3(b, -pi/2, pi/2) is exactly the x rotation by b. Delays are identities.
inline Matrix2 gate_unitary(const Gate& g) {
    validate(g);
    Matrix2 u;
    if (const auto* p = std::get_if<U1>(&g)) {
        u(1, 1) = std::polar(1.0, p->alpha);
    } else if (const auto* q = std::get_if<U3>(&g)) {
        const double c = std::cos(0.5 * q->theta), s = std::sin(0.5 * q->theta);
        u(0, 0) = c;
        u(0, 1) = -std::polar(s, q->lambda);
        u(1, 0) = std::polar(s, q->phi);
        u(1, 1) = std::polar(c, q->phi + q->lambda);
    }
    return u;
}

/// rho -> U rho U^dagger
inline DensityMatrix apply_unitary(const DensityMatrix& rho, const Matrix2& u) {
    DensityMatrix out = DensityMatrix::from_matrix(u * rho.matrix() * u.adjoint());
    // Restore exact hermiticity lost to rounding.
    const complex off = 0.5 * (out.rho01() + std::conj(out.rho10()));
    return {out.rho00().real(), off, std::conj(off), out.rho11().real()};
}

// -----------------------------------------------------------------------------
// Noise

/// Decoherence parameters. All times in nanoseconds.
struct NoiseModel {
    double t1 = 50'000.0;
    double t2 = 70'000.0;
    double u1_duration = 0.0;
    double u3_duration = 70.0;
    double delay_unit_duration = 70.0;
    /// Skip decoherence entirely; durations still count for bookkeeping.
    bool noiseless = false;

    static NoiseModel reference() { return {}; }

    static NoiseModel ideal() {
        NoiseModel m;
        m.noiseless = true;
        return m;
    }

    void validate() const {
        if (!(t1 > 0.0) || !std::isfinite(t1)) throw std::invalid_argument("t1 must be positive");
        if (!(t2 > 0.0) || !std::isfinite(t2)) throw std::invalid_argument("t2 must be positive");
        if (t2 > 2.0 * t1) throw std::invalid_argument("t2 must not exceed 2*t1");
        if (!(u1_duration >= 0.0) || !(u3_duration >= 0.0))
            throw std::invalid_argument("gate durations must be non-negative");
        if (!(delay_unit_duration > 0.0)) throw std::invalid_argument("delay unit duration must be positive");
    }

    double duration(const Gate& g) const {
        if (std::holds_alternative<U1>(g)) return u1_duration;
        if (std::holds_alternative<U3>(g)) return u3_duration;
        return static_cast<double>(std::get<Delay>(g).count) * delay_unit_duration;
    }
};

inline DensityMatrix apply_decoherence(const DensityMatrix& rho, double dt, const NoiseModel& model) {
    if (!(dt >= 0.0)) throw std::invalid_argument("decoherence interval must be non-negative");
    if (model.noiseless || dt == 0.0) return rho;
    const double keep = std::exp(-dt / model.t1);
    const double coherence = std::exp(-dt / model.t2);
    const double p1 = rho.rho11().real() * keep;
    const double p0 = rho.rho00().real() + rho.rho11().real() * (1.0 - keep);
    const complex off = rho.rho01() * coherence;
    return {p0, off, std::conj(off), p1};
}

/// Each gate: unitary, then decoherence for the gate's full duration.
inline DensityMatrix simulate(const Circuit& c, const NoiseModel& model,
                              const DensityMatrix& initial = DensityMatrix::ground()) {
    model.validate();
    DensityMatrix rho = initial;
    for (const Gate& g : c.gates) {
        if (!is_delay(g)) rho = apply_unitary(rho, gate_unitary(g));
        else validate(g);
        rho = apply_decoherence(rho, model.duration(g), model);
    }
    return rho;
}

inline BlochVector bloch(const DensityMatrix& rho) {
    return {2.0 * rho.rho01().real(), 2.0 * rho.rho10().imag(), rho.rho00().real() - rho.rho11().real()};
}

// -----------------------------------------------------------------------------
// Finite-shot readout

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Uniform double in [0, 1) from the top 53 bits; portable across standard libraries.
inline double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace detail

/// Deterministic seed for an independent stream derived from (seed, a, b).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    return detail::splitmix64(detail::splitmix64(detail::splitmix64(seed) ^ a) ^ b);
}

/// Empirical Pauli expectations from `shots` single-axis measurements per axis.
inline BlochVector sample_bloch(const DensityMatrix& rho, std::int64_t shots, std::uint64_t seed) {
    if (shots < 1) throw std::invalid_argument("shots must be >= 1");
    const BlochVector exact = bloch(rho);
    std::mt19937_64 rng(seed);
    BlochVector out;
    for (int axis = 0; axis < 3; ++axis) {
        const double p = 0.5 * (1.0 + exact[axis]);
        std::int64_t up = 0;
        if (p >= 1.0) {
            up = shots;
        } else if (p > 0.0) {
            for (std::int64_t s = 0; s < shots; ++s) up += detail::unit_uniform(rng) < p ? 1 : 0;
        }
        out[axis] = (2.0 * static_cast<double>(up) - static_cast<double>(shots)) / static_cast<double>(shots);
    }
    return out;
}

}  // namespace dzne
