// Copyright 2026 The hywf Authors.

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "../support/oracles.hpp"
#include "hywf/encode.hpp"
#include "hywf/error.hpp"
#include "hywf/md.hpp"
#include "hywf/qsim.hpp"
#include "hywf/swaptest.hpp"

using namespace hywf;
using swaptest::estimate_distance;
using swaptest::swap_test;

namespace {

qsim::QuantumRegister state(std::vector<qsim::Complex> a) {
    return qsim::QuantumRegister::from_amplitudes(std::move(a));
}

/// Pr(0) = 1/2 + Tr(rho_phi rho_A) / 2, with rho_A the reduced state of the
/// first phi-sized block of psi.
double swap_oracle(const qsim::QuantumRegister &phi, const qsim::QuantumRegister &psi) {
    const auto m = static_cast<Eigen::Index>(phi.dim());
    const auto rest = static_cast<Eigen::Index>(psi.dim()) / m;
    oracle::CMat rho_a = oracle::CMat::Zero(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = 0; j < m; ++j) {
            for (Eigen::Index r = 0; r < rest; ++r) {
                rho_a(i, j) += psi.amplitude(static_cast<std::size_t>(i * rest + r)) *
                               std::conj(psi.amplitude(static_cast<std::size_t>(j * rest + r)));
            }
        }
    }
    oracle::CVec p(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        p(i) = phi.amplitude(static_cast<std::size_t>(i));
    }
    const auto overlap = p.dot(rho_a * p);
    return 0.5 + 0.5 * overlap.real();
}

} // namespace

TEST(SwapTest, IdenticalStates) {
    const auto s = state({0.6, qsim::Complex(0, 0.8)});
    const auto r = swap_test(s, s, 0, 0);
    EXPECT_NEAR(r.prob_zero, 1.0, 1e-12);
    EXPECT_NEAR(r.fidelity, 1.0, 1e-12);
}

TEST(SwapTest, OrthogonalStates) {
    EXPECT_NEAR(swap_test(state({1, 0}), state({0, 1}), 0, 0).prob_zero, 0.5, 1e-12);
}

TEST(SwapTest, PlusAgainstZero) {
    const double r = 1.0 / std::sqrt(2.0);
    EXPECT_NEAR(swap_test(state({r, r}), state({1, 0}), 0, 0).prob_zero, 0.75, 1e-12);
}

TEST(SwapTest, MatchesReducedStateOracle) {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<qsim::Complex> a(2);
        std::vector<qsim::Complex> b(8);
        double na = 0;
        double nb = 0;
        for (auto &x : a) {
            x = {g(rng), g(rng)};
            na += std::norm(x);
        }
        for (auto &x : b) {
            x = {g(rng), g(rng)};
            nb += std::norm(x);
        }
        for (auto &x : a) {
            x /= std::sqrt(na);
        }
        for (auto &x : b) {
            x /= std::sqrt(nb);
        }
        const auto phi = state(a);
        const auto psi = state(b);
        EXPECT_NEAR(swap_test(phi, psi, 0, 0).prob_zero, swap_oracle(phi, psi), 1e-12);
    }
}

TEST(SwapTest, ShotsAreSeeded) {
    const double r = 1.0 / std::sqrt(2.0);
    const auto a = swap_test(state({r, r}), state({1, 0}), 4000, 12);
    const auto b = swap_test(state({r, r}), state({1, 0}), 4000, 12);
    EXPECT_EQ(a.prob_zero, b.prob_zero);
    EXPECT_EQ(a.shots, 4000U);
    EXPECT_NEAR(a.prob_zero, 0.75, 4 * std::sqrt(0.75 * 0.25 / 4000));
}

TEST(SwapTest, CircuitShape) {
    const auto c = swaptest::swap_test_circuit(1, 3);
    EXPECT_EQ(c.num_qubits(), 5U);
    EXPECT_EQ(c.count(qsim::GateKind::H), 2U);
    EXPECT_EQ(c.count(qsim::GateKind::FREDKIN), 1U);
    EXPECT_EQ(c.measured(), std::vector<unsigned>{0});
    EXPECT_THROW((void)swaptest::swap_test_circuit(3, 2), Error);
}

TEST(EstimateDistance, Examples) {
    const auto same = estimate_distance({1, 2, 3}, {1, 2, 3}, 0, 0);
    EXPECT_NEAR(same.value, 0.0, 1e-6);
    EXPECT_EQ(same.exact, 0.0);

    const auto orth = estimate_distance({1, 0, 0}, {0, 1, 0}, 0, 0);
    EXPECT_NEAR(orth.prob_zero, 0.75, 1e-12);
    EXPECT_NEAR(orth.value, std::sqrt(2.0), 1e-9);

    const auto origin = estimate_distance({0, 0, 0}, {3, 4, 0}, 0, 0);
    EXPECT_NEAR(origin.value, 5.0, 1e-9);
    EXPECT_DOUBLE_EQ(origin.exact, 5.0);

    EXPECT_THROW((void)estimate_distance({0, 0, 0}, {0, 0, 0}, 0, 0), hywf::Error);
}

TEST(EstimateDistance, ExactModeEqualsEuclidean) {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(-10, 10);
    for (int trial = 0; trial < 200; ++trial) {
        const md::Vec3 a{u(rng), u(rng), u(rng)};
        const md::Vec3 b{u(rng), u(rng), u(rng)};
        const auto e = estimate_distance(a, b, 0, 0);
        EXPECT_NEAR(e.value, oracle::distance(a.x, a.y, a.z, b.x, b.y, b.z), 1e-6);
        EXPECT_GE(e.prob_zero, 0.5 - 1e-12);
        EXPECT_LE(e.prob_zero, 1.0 + 1e-12);
    }
}

TEST(EstimateDistance, ShotModeFourSigma) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0, 10);
    const std::uint64_t shots = 20000;
    for (int trial = 0; trial < 30; ++trial) {
        const md::Vec3 a{u(rng), u(rng), u(rng)};
        const md::Vec3 b{u(rng), u(rng), u(rng)};
        const auto e = estimate_distance(a, b, shots, 1000 + static_cast<std::uint64_t>(trial));
        const double w = a.x * a.x + a.y * a.y + a.z * a.z + b.x * b.x + b.y * b.y + b.z * b.z;
        const double bound = 4 * w * (4 * 0.5 / std::sqrt(static_cast<double>(shots)));
        EXPECT_LE(std::abs(e.value * e.value - e.exact * e.exact), bound);
    }
}

TEST(DistanceMatrix, ShapesAndErrors) {
    const std::vector<md::Vec3> one = {{1, 1, 1}};
    const auto m = swaptest::distance_matrix_quantum(one, one, 0, 0);
    ASSERT_EQ(m.size(), 1U);
    ASSERT_EQ(m[0].size(), 1U);
    EXPECT_NEAR(m[0][0].value, 0.0, 1e-6);

    const std::vector<md::Vec3> a = {{0, 0, 0}, {1, 2, 3}};
    const std::vector<md::Vec3> b = {{4, 0, 0}, {1, 1, 1}, {-2, 5, 0.5}};
    const auto d = swaptest::distance_matrix_quantum(a, b, 0, 0);
    ASSERT_EQ(d.size(), 2U);
    for (std::size_t i = 0; i < 2; ++i) {
        ASSERT_EQ(d[i].size(), 3U);
        for (std::size_t j = 0; j < 3; ++j) {
            EXPECT_NEAR(d[i][j].value,
                        oracle::distance(a[i].x, a[i].y, a[i].z, b[j].x, b[j].y, b[j].z), 1e-6);
        }
    }
    EXPECT_THROW((void)swaptest::distance_matrix_quantum({}, b, 0, 0), Error);
}
