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
/**
 * @file
 * SWAP test for state overlap and the pairwise Euclidean distance
 * estimator built on it.
 */
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hywf/md.hpp"
#include "hywf/qsim.hpp"

namespace hywf::swaptest {

struct SwapTestResult {
    double prob_zero = 0.0;
    double fidelity = 0.0; ///< 2 Pr(0) - 1, clamped to [0, 1]
    std::uint64_t shots = 0;
    std::uint64_t seed = 0;
};

/// Ancilla + phi + psi layout: qubit 0 is the ancilla, then phi's m
/// qubits, then psi. The swap pairs phi's qubits with psi's first m.
[[nodiscard]] qsim::Circuit swap_test_circuit(unsigned phi_qubits,
                                              unsigned psi_qubits);

/// `shots == 0` reads Pr(0) from the statevector.
/// InvalidArgument if phi has more qubits than psi.
[[nodiscard]] SwapTestResult swap_test(const qsim::QuantumRegister &phi,
                                       const qsim::QuantumRegister &psi,
                                       std::uint64_t shots, std::uint64_t seed,
                                       double readout_flip = 0.0);

struct DistanceEstimate {
    double value = 0.0; ///< Angstrom
    double exact = 0.0; ///< classical Euclidean distance
    double prob_zero = 0.0;
    std::uint64_t shots = 0;
};

/// sqrt(max(0, 4W (Pr(0) - 1/2))). A zero vector moves both points by
/// (1,1,1) until neither is zero; two zero vectors are an Encoding error.
[[nodiscard]] DistanceEstimate estimate_distance(const md::Vec3 &u,
                                                 const md::Vec3 &v,
                                                 std::uint64_t shots,
                                                 std::uint64_t seed,
                                                 double readout_flip = 0.0);

using DistanceEstimates = std::vector<std::vector<DistanceEstimate>>;

/// One swap test per atom pair, row-major, pair p seeded with seed + p.
[[nodiscard]] DistanceEstimates
distance_matrix_quantum(std::span<const md::Vec3> seg_a,
                        std::span<const md::Vec3> seg_b, std::uint64_t shots,
                        std::uint64_t seed, double readout_flip = 0.0);

} // namespace hywf::swaptest
