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

// Test-only reference computations. Nothing here includes the library: the
// oracles work on plain arrays and textbook definitions so they stay
// independent of the code under test.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace oracle {

using cd = std::complex<double>;
using Mat = std::array<std::array<cd, 2>, 2>;
using Vec3 = std::array<double, 3>;

inline Mat mul(const Mat& a, const Mat& b) {
    Mat c{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) c[i][j] += a[i][k] * b[k][j];
    return c;
}

inline Mat dagger(const Mat& a) {
    Mat c{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) c[i][j] = std::conj(a[j][i]);
    return c;
}

inline Mat eye() { return {{{1.0, 0.0}, {0.0, 1.0}}}; }

/// exp(-i b X / 2)
inline Mat rx(double b) {
    const double c = std::cos(b / 2), s = std::sin(b / 2);
    return {{{c, cd(0, -s)}, {cd(0, -s), c}}};
}

/// exp(-i a Z / 2)
inline Mat rz(double a) { return {{{std::polar(1.0, -a / 2), 0.0}, {0.0, std::polar(1.0, a / 2)}}}; }

/// Pauli expectations Tr(rho sigma) by explicit trace.
inline Vec3 pauli_expectations(const Mat& rho) {
    const Mat X{{{0.0, 1.0}, {1.0, 0.0}}};
    const Mat Y{{{0.0, cd(0, -1)}, {cd(0, 1), 0.0}}};
    const Mat Z{{{1.0, 0.0}, {0.0, -1.0}}};
    Vec3 out{};
    const Mat* ps[3] = {&X, &Y, &Z};
    for (int a = 0; a < 3; ++a) {
        const Mat m = mul(rho, *ps[a]);
        out[a] = (m[0][0] + m[1][1]).real();
    }
    return out;
}

inline Mat ground() { return {{{1.0, 0.0}, {0.0, 0.0}}}; }

inline Mat conjugate(const Mat& u, const Mat& rho) { return mul(mul(u, rho), dagger(u)); }

/// Distance between two unitaries modulo global phase: min over phase of max |u - e^{ip} v|.
inline double phase_distance(const Mat& u, const Mat& v) {
    cd overlap = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) overlap += std::conj(v[i][j]) * u[i][j];
    const cd phase = std::abs(overlap) > 0 ? overlap / std::abs(overlap) : cd(1.0);
    double worst = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) worst = std::max(worst, std::abs(u[i][j] - phase * v[i][j]));
    return worst;
}

/// Cumulative algorithm unitary after j steps, as the telescoped rotation pair.
inline Mat telescoped(int j, int n_steps) {
    const double unit = std::numbers::pi / n_steps;
    return mul(rz(4.0 * j * unit), rx(j * unit));
}

/// Cumulative unitary after j steps, as the literal product of the four rotations per step.
inline Mat recursive(int j, int n_steps) {
    const double unit = std::numbers::pi / n_steps;
    Mat u = eye();
    for (int s = 0; s < j; ++s) {
        u = mul(rz(-4.0 * s * unit), u);
        u = mul(rx(-s * unit), u);
        u = mul(rx((s + 1) * unit), u);
        u = mul(rz(4.0 * (s + 1) * unit), u);
    }
    return u;
}

/// Least squares through the 2x2 normal equations, solved by Cramer's rule.
struct Line {
    double intercept;
    double slope;
};

inline Line normal_equations(const std::vector<double>& x, const std::vector<double>& y) {
    double s0 = 0, s1 = 0, s2 = 0, t0 = 0, t1 = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        s0 += 1;
        s1 += x[i];
        s2 += x[i] * x[i];
        t0 += y[i];
        t1 += x[i] * y[i];
    }
    const double det = s0 * s2 - s1 * s1;
    return {(t0 * s2 - s1 * t1) / det, (s0 * t1 - s1 * t0) / det};
}

/// Full Richardson tableau on values at h, h/t, h/t^2, ... with exponents k, k+1, ...
inline double richardson_tableau(std::vector<double> a, double t, double k) {
    for (int level = 0; a.size() > 1; ++level) {
        const double w = std::pow(t, k + level);
        std::vector<double> next;
        for (std::size_t i = 0; i + 1 < a.size(); ++i) next.push_back((w * a[i + 1] - a[i]) / (w - 1));
        a = next;
    }
    return a.front();
}

}  // namespace oracle
