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

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "dzne/qsim.hpp"
#include "oracle.hpp"

using namespace dzne;

namespace {

constexpr double kPi = std::numbers::pi;
const U3 kXPi{kPi, -kPi / 2, kPi / 2};

double unitarity_error(const Matrix2& u) {
    const Matrix2 p = u.adjoint() * u;
    double worst = 0.0;
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) worst = std::max(worst, std::abs(p(r, c) - (r == c ? 1.0 : 0.0)));
    return worst;
}

DensityMatrix random_state(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    BlochVector v{u(rng), u(rng), u(rng)};
    while (v.norm() > 1.0) v = {u(rng), u(rng), u(rng)};
    return DensityMatrix::from_bloch(v);
}

Gate random_gate(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> angle(-4 * kPi, 4 * kPi);
    switch (rng() % 3) {
        case 0: return U1{angle(rng)};
        case 1: return U3{angle(rng), angle(rng), angle(rng)};
        default: return Delay{static_cast<std::int64_t>(1 + rng() % 20)};
    }
}

NoiseModel random_model(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> t1(1e3, 1e5), frac(0.01, 2.0), dur(0.0, 200.0);
    NoiseModel m;
    m.t1 = t1(rng);
    m.t2 = frac(rng) * m.t1;
    m.u1_duration = dur(rng);
    m.u3_duration = dur(rng);
    m.delay_unit_duration = 1.0 + dur(rng);
    return m;
}

}  // namespace

TEST(GateUnitary, U1ZeroIsIdentity) {
    const Matrix2 u = gate_unitary(U1{0.0});
    EXPECT_EQ(u(0, 0), complex(1.0));
    EXPECT_EQ(u(0, 1), complex(0.0));
    EXPECT_EQ(u(1, 0), complex(0.0));
    EXPECT_EQ(u(1, 1), complex(1.0));
}

TEST(GateUnitary, DelayIsIdentity) {
    const Matrix2 u = gate_unitary(Delay{5});
    EXPECT_EQ(u(0, 0), complex(1.0));
    EXPECT_EQ(u(1, 1), complex(1.0));
    EXPECT_EQ(u(0, 1), complex(0.0));
}

TEST(GateUnitary, U3WithQuarterPhasesIsXRotation) {
    for (double b : {kPi, kPi / 2, 0.3, -1.7}) {
        const Matrix2 u = gate_unitary(U3{b, -kPi / 2, kPi / 2});
        const oracle::Mat r = oracle::rx(b);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) EXPECT_NEAR(std::abs(u(i, j) - r[i][j]), 0.0, 1e-15);
    }
    const DensityMatrix one = apply_unitary(DensityMatrix::ground(), gate_unitary(kXPi));
    EXPECT_NEAR(one.rho11().real(), 1.0, 1e-15);
}

TEST(GateUnitary, RandomAnglesAreUnitary) {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 2000; ++i) EXPECT_LT(unitarity_error(gate_unitary(random_gate(rng))), 1e-12);
}

TEST(GateUnitary, RejectsInvalidGates) {
    EXPECT_THROW(gate_unitary(Delay{0}), std::invalid_argument);
    EXPECT_THROW(gate_unitary(U1{std::nan("")}), std::invalid_argument);
    EXPECT_THROW(gate_unitary(U3{1.0, INFINITY, 0.0}), std::invalid_argument);
}

TEST(ApplyUnitary, IdentityAndFlip) {
    EXPECT_EQ(bloch(apply_unitary(DensityMatrix::ground(), Matrix2::identity())), (BlochVector{0, 0, 1}));
    const BlochVector v = bloch(apply_unitary(DensityMatrix::ground(), gate_unitary(kXPi)));
    EXPECT_NEAR(v.z, -1.0, 1e-15);
}

TEST(ApplyUnitary, HalfXRotationMatchesMatrixOracle) {
    // Oracle: explicit exp(-i pi/4 X)|0><0|exp(+i pi/4 X), then Tr(rho sigma).
    const oracle::Vec3 expect = oracle::pauli_expectations(oracle::conjugate(oracle::rx(kPi / 2), oracle::ground()));
    const BlochVector v = bloch(apply_unitary(DensityMatrix::ground(), gate_unitary(U3{kPi / 2, -kPi / 2, kPi / 2})));
    EXPECT_NEAR(v.x, expect[0], 1e-15);
    EXPECT_NEAR(v.y, expect[1], 1e-15);
    EXPECT_NEAR(v.z, expect[2], 1e-15);
    // Frozen from the oracle.
    EXPECT_NEAR(v.x, 0.0, 1e-15);
    EXPECT_NEAR(v.y, -1.0, 1e-15);
    EXPECT_NEAR(v.z, 0.0, 1e-15);
}

TEST(Bloch, SignConventionAgreesWithPauliTrace) {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 200; ++i) {
        const DensityMatrix rho = apply_unitary(random_state(rng), gate_unitary(random_gate(rng)));
        oracle::Mat m{};
        m[0][0] = rho.rho00();
        m[0][1] = rho.rho01();
        m[1][0] = rho.rho10();
        m[1][1] = rho.rho11();
        const oracle::Vec3 e = oracle::pauli_expectations(m);
        const BlochVector v = bloch(rho);
        EXPECT_NEAR(v.x, e[0], 1e-14);
        EXPECT_NEAR(v.y, e[1], 1e-14);
        EXPECT_NEAR(v.z, e[2], 1e-14);
    }
}

TEST(Bloch, BasisAndMixed) {
    EXPECT_EQ(bloch(DensityMatrix::ground()), (BlochVector{0, 0, 1}));
    EXPECT_EQ(bloch(DensityMatrix::excited()), (BlochVector{0, 0, -1}));
    EXPECT_EQ(bloch(DensityMatrix::maximally_mixed()), (BlochVector{0, 0, 0}));
}

TEST(Decoherence, ZeroTimeIsNoop) {
    std::mt19937_64 rng(3);
    const DensityMatrix rho = random_state(rng);
    const DensityMatrix out = apply_decoherence(rho, 0.0, NoiseModel::reference());
    EXPECT_EQ(out.rho01(), rho.rho01());
    EXPECT_EQ(out.rho11(), rho.rho11());
}

TEST(Decoherence, FullRelaxationToGround) {
    const DensityMatrix out = apply_decoherence(DensityMatrix::excited(), 1e12, NoiseModel::reference());
    EXPECT_NEAR(out.rho00().real(), 1.0, 1e-15);
    EXPECT_NEAR(out.rho11().real(), 0.0, 1e-15);
}

TEST(Decoherence, OneT1LeavesInverseE) {
    const NoiseModel m = NoiseModel::reference();
    const DensityMatrix once = apply_decoherence(DensityMatrix::excited(), m.t1, m);
    EXPECT_NEAR(once.rho11().real(), 0.36787944117144233, 1e-15);
    EXPECT_NEAR(once.rho00().real(), 1.0 - 0.36787944117144233, 1e-15);
    const DensityMatrix twice =
        apply_decoherence(apply_decoherence(DensityMatrix::excited(), m.t1 / 2, m), m.t1 / 2, m);
    EXPECT_NEAR(twice.rho11().real(), once.rho11().real(), 1e-15);
}

TEST(Decoherence, RejectsNegativeTime) {
    EXPECT_THROW(apply_decoherence(DensityMatrix::ground(), -1.0, NoiseModel::reference()), std::invalid_argument);
}

TEST(Decoherence, ComposesOverTime) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> dt(0.0, 1e5);
    for (int i = 0; i < 1000; ++i) {
        const NoiseModel m = random_model(rng);
        const DensityMatrix rho = random_state(rng);
        const double a = dt(rng), b = dt(rng);
        const DensityMatrix split = apply_decoherence(apply_decoherence(rho, a, m), b, m);
        const DensityMatrix joint = apply_decoherence(rho, a + b, m);
        EXPECT_NEAR(std::abs(split.rho00() - joint.rho00()), 0.0, 1e-12);
        EXPECT_NEAR(std::abs(split.rho01() - joint.rho01()), 0.0, 1e-12);
        EXPECT_NEAR(std::abs(split.rho11() - joint.rho11()), 0.0, 1e-12);
    }
}

TEST(Decoherence, MovesTowardGroundAndShrinksCoherence) {
    std::mt19937_64 rng(17);
    const NoiseModel m = NoiseModel::reference();
    for (int i = 0; i < 200; ++i) {
        const DensityMatrix rho = random_state(rng);
        double z = bloch(rho).z, coh = std::abs(rho.rho01());
        for (double dt : {10.0, 100.0, 1e3, 1e4, 1e5}) {
            const DensityMatrix next = apply_decoherence(rho, dt, m);
            EXPECT_GE(bloch(next).z, z - 1e-15);
            EXPECT_LE(std::abs(next.rho01()), coh + 1e-15);
            z = bloch(next).z;
            coh = std::abs(next.rho01());
        }
    }
}

TEST(NoiseModel, RejectsNonPhysicalParameters) {
    NoiseModel m;
    m.t2 = 2.5 * m.t1;
    EXPECT_THROW(m.validate(), std::invalid_argument);
    m = NoiseModel{};
    m.t1 = 0;
    EXPECT_THROW(m.validate(), std::invalid_argument);
    m = NoiseModel{};
    m.delay_unit_duration = 0;
    EXPECT_THROW(m.validate(), std::invalid_argument);
}

TEST(Simulate, EmptyCircuitKeepsInitialState) {
    std::mt19937_64 rng(23);
    const DensityMatrix rho = random_state(rng);
    const DensityMatrix out = simulate({}, NoiseModel::reference(), rho);
    EXPECT_EQ(out.rho01(), rho.rho01());
    EXPECT_EQ(out.rho00(), rho.rho00());
}

TEST(Simulate, NoiselessFlip) {
    const DensityMatrix out = simulate({{kXPi}}, NoiseModel::ideal());
    EXPECT_NEAR(bloch(out).z, -1.0, 1e-15);
}

TEST(Simulate, FlipThenDelayMatchesSequentialChannels) {
    // Oracle: unitary leaves |1>, then exponential decay over u3 + 3 delay units.
    const NoiseModel m = NoiseModel::reference();
    const DensityMatrix out = simulate({{kXPi, Delay{3}}}, m);
    const double expect = 1.0 - 2.0 * std::exp(-(m.u3_duration + 3 * m.delay_unit_duration) / m.t1);
    EXPECT_NEAR(bloch(out).z, expect, 1e-14);
    EXPECT_NEAR(bloch(out).z, -0.9888313015431958, 1e-14);
}

TEST(Simulate, NoiselessEqualsUnitaryProduct) {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 200; ++trial) {
        Circuit c;
        oracle::Mat u = oracle::eye();
        for (int g = 0; g < 12; ++g) {
            c.gates.push_back(random_gate(rng));
            const Matrix2 m = gate_unitary(c.gates.back());
            oracle::Mat o{};
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) o[i][j] = m(i, j);
            u = oracle::mul(o, u);
        }
        const oracle::Vec3 e = oracle::pauli_expectations(oracle::conjugate(u, oracle::ground()));
        const BlochVector v = bloch(simulate(c, NoiseModel::ideal()));
        EXPECT_NEAR(v.x, e[0], 1e-12);
        EXPECT_NEAR(v.y, e[1], 1e-12);
        EXPECT_NEAR(v.z, e[2], 1e-12);
    }
}

TEST(Simulate, U1ChangesOnlyCoherencePhase) {
    std::mt19937_64 rng(31);
    for (int i = 0; i < 200; ++i) {
        const DensityMatrix rho = random_state(rng);
        const DensityMatrix out = apply_unitary(rho, gate_unitary(U1{std::uniform_real_distribution<>(-7, 7)(rng)}));
        EXPECT_NEAR(out.rho00().real(), rho.rho00().real(), 1e-15);
        EXPECT_NEAR(out.rho11().real(), rho.rho11().real(), 1e-15);
        EXPECT_NEAR(std::abs(out.rho01()), std::abs(rho.rho01()), 1e-15);
    }
}

TEST(Simulate, RandomCircuitsStayPhysical) {
    std::mt19937_64 rng(37);
    for (int trial = 0; trial < 2000; ++trial) {
        Circuit c;
        const int len = static_cast<int>(rng() % 40);
        for (int g = 0; g < len; ++g) c.gates.push_back(random_gate(rng));
        const DensityMatrix out = simulate(c, random_model(rng), random_state(rng));
        ASSERT_TRUE(out.is_valid(1e-12));
        ASSERT_LE(bloch(out).norm(), 1.0 + 1e-9);
    }
}

TEST(SampleBloch, GroundStateIsExact) {
    for (std::int64_t shots : {1, 7, 1000}) EXPECT_EQ(sample_bloch(DensityMatrix::ground(), shots, 99).z, 1.0);
}

TEST(SampleBloch, Deterministic) {
    std::mt19937_64 rng(41);
    const DensityMatrix rho = random_state(rng);
    EXPECT_EQ(sample_bloch(rho, 500, 1234), sample_bloch(rho, 500, 1234));
    EXPECT_NE(sample_bloch(rho, 500, 1234), sample_bloch(rho, 500, 1235));
}

TEST(SampleBloch, ConvergesWithinFiveStandardErrors) {
    std::mt19937_64 rng(43);
    const std::int64_t shots = 1'000'000;
    for (int i = 0; i < 3; ++i) {
        const DensityMatrix rho = random_state(rng);
        const BlochVector exact = bloch(rho), est = sample_bloch(rho, shots, 1000 + i);
        for (int a = 0; a < 3; ++a) {
            const double se = std::sqrt((1.0 - exact[a] * exact[a]) / static_cast<double>(shots));
            EXPECT_LE(std::abs(est[a] - exact[a]), 5.0 * se + 1e-12) << "axis " << a;
        }
    }
}

TEST(SampleBloch, RejectsZeroShots) {
    EXPECT_THROW(sample_bloch(DensityMatrix::ground(), 0, 1), std::invalid_argument);
}
