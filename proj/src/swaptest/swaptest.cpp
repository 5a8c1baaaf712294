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
#include <algorithm>
#include <array>
#include <cmath>

#include "hywf/encode.hpp"
#include "hywf/error.hpp"
#include "hywf/swaptest.hpp"

namespace hywf::swaptest {

qsim::Circuit swap_test_circuit(unsigned phi_qubits, unsigned psi_qubits) {
    if (phi_qubits == 0 || phi_qubits > psi_qubits) {
        fail(ErrorCode::InvalidArgument,
             "controlled swap needs 1 <= |phi| <= |psi| qubits, got " +
                 std::to_string(phi_qubits) + " and " + std::to_string(psi_qubits));
    }
    qsim::Circuit c(1 + phi_qubits + psi_qubits);
    c.add(qsim::GateKind::H, {0});
    for (unsigned i = 0; i < phi_qubits; ++i) {
        c.add(qsim::GateKind::FREDKIN, {0, 1 + i, 1 + phi_qubits + i});
    }
    c.add(qsim::GateKind::H, {0});
    c.measure({0});
    return c;
}

SwapTestResult swap_test(const qsim::QuantumRegister &phi,
                         const qsim::QuantumRegister &psi, std::uint64_t shots,
                         std::uint64_t seed, double readout_flip) {
    const auto circuit = swap_test_circuit(phi.num_qubits(), psi.num_qubits());
    auto state = qsim::tensor_product(qsim::QuantumRegister(1),
                                      qsim::tensor_product(phi, psi));
    state.apply(circuit);

    double p0 = 0.0;
    if (shots == 0) {
        p0 = qsim::marginal_probability(state, 0, 0);
    } else {
        const std::array<unsigned, 1> anc{0};
        const auto hist = qsim::measure(state, anc, shots, seed, readout_flip);
        p0 = static_cast<double>(hist.count("0")) / static_cast<double>(shots);
    }
    const double fid = std::clamp(2.0 * p0 - 1.0, 0.0, 1.0);
    return SwapTestResult{p0, fid, shots, seed};
}

DistanceEstimate estimate_distance(const md::Vec3 &u, const md::Vec3 &v,
                                   std::uint64_t shots, std::uint64_t seed,
                                   double readout_flip) {
    if (u.is_zero() && v.is_zero()) {
        fail(ErrorCode::Encoding, "both coordinate vectors have zero norm");
    }
    md::Vec3 a = u;
    md::Vec3 b = v;
    const md::Vec3 step{1.0, 1.0, 1.0};
    while (a.is_zero() || b.is_zero()) {
        a = a + step;
        b = b + step;
    }
    const std::array<double, 3> ua{a.x, a.y, a.z};
    const std::array<double, 3> va{b.x, b.y, b.z};
    const auto in = encode::prepare_swap_inputs(ua, va);
    const auto r = swap_test(in.phi, in.psi, shots, seed, readout_flip);
    const double radicand = 4.0 * in.w * (r.prob_zero - 0.5);
    return DistanceEstimate{std::sqrt(std::max(0.0, radicand)),
                            md::euclidean_distance(u, v), r.prob_zero, shots};
}

DistanceEstimates distance_matrix_quantum(std::span<const md::Vec3> seg_a,
                                          std::span<const md::Vec3> seg_b,
                                          std::uint64_t shots, std::uint64_t seed,
                                          double readout_flip) {
    if (seg_a.empty() || seg_b.empty()) {
        fail(ErrorCode::InvalidArgument, "segments must be nonempty");
    }
    DistanceEstimates out(seg_a.size());
    std::uint64_t pair = 0;
    for (std::size_t i = 0; i < seg_a.size(); ++i) {
        out[i].reserve(seg_b.size());
        for (std::size_t j = 0; j < seg_b.size(); ++j) {
            out[i].push_back(estimate_distance(seg_a[i], seg_b[j], shots, seed + pair,
                                                 readout_flip));
            ++pair;
        }
    }
    return out;
}

} // namespace hywf::swaptest
