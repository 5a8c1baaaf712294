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
#include <numeric>
#include <bit>
#include <cmath>
#include <numbers>
#include <random>

#include "hywf/error.hpp"
#include "hywf/pauli.hpp"
#include "hywf/qsim.hpp"

namespace hywf::qsim {

std::uint64_t ShotHistogram::count(const std::string &bits) const {
    const auto it = counts.find(bits);
    return it == counts.end() ? 0 : it->second;
}

std::string ShotHistogram::mode() const {
    std::string best;
    std::uint64_t best_count = 0;
    // std::map iterates in lexicographic order, so strict > keeps the
    // smallest label among ties.
    for (const auto &[bits, c] : counts) {
        if (c > best_count) {
            best = bits;
            best_count = c;
        }
    }
    return best;
}

ShotHistogram measure(const QuantumRegister &reg,
                      std::span<const unsigned> qubits, std::uint64_t shots,
                      std::uint64_t seed, double readout_flip) {
    if (shots == 0) {
        fail(ErrorCode::InvalidArgument, "shots must be >= 1");
    }
    if (!(readout_flip >= 0.0 && readout_flip <= 1.0)) {
        fail(ErrorCode::InvalidArgument, "readout_flip must lie in [0, 1]");
    }
    const unsigned n = reg.num_qubits();
    for (unsigned q : qubits) {
        if (q >= n) {
            fail(ErrorCode::InvalidArgument,
                 "measured qubit " + std::to_string(q) + " out of range");
        }
    }

    std::vector<double> cumulative = reg.probabilities();
    std::partial_sum(cumulative.begin(), cumulative.end(), cumulative.begin());
    const double total = cumulative.back();

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    std::bernoulli_distribution flip(readout_flip);

    ShotHistogram h;
    h.shots = shots;
    std::string bits(qubits.size(), '0');
    for (std::uint64_t s = 0; s < shots; ++s) {
        const double u = uniform(rng) * total;
        auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        if (it == cumulative.end()) {
            --it;
        }
        const auto index =
            static_cast<std::size_t>(std::distance(cumulative.begin(), it));
        for (std::size_t k = 0; k < qubits.size(); ++k) {
            bool b = (index >> (n - 1 - qubits[k])) & 1U;
            if (readout_flip > 0.0 && flip(rng)) {
                b = !b;
            }
            bits[k] = b ? '1' : '0';
        }
        ++h.counts[bits];
    }
    return h;
}

ShotHistogram measure_all(const QuantumRegister &reg, std::uint64_t shots,
                          std::uint64_t seed, double readout_flip) {
    std::vector<unsigned> all(reg.num_qubits());
    std::iota(all.begin(), all.end(), 0U);
    return measure(reg, all, shots, seed, readout_flip);
}

double marginal_probability(const QuantumRegister &reg, unsigned qubit,
                            int value) {
    const unsigned n = reg.num_qubits();
    if (qubit >= n) {
        fail(ErrorCode::InvalidArgument, "qubit out of range");
    }
    const auto amps = reg.amplitudes();
    double p = 0.0;
    for (std::size_t i = 0; i < amps.size(); ++i) {
        const int b = static_cast<int>((i >> (n - 1 - qubit)) & 1U);
        if (b == value) {
            p += std::norm(amps[i]);
        }
    }
    return p;
}

double expectation(const QuantumRegister &reg, const pauli::PauliString &op) {
    if (op.num_qubits() != reg.num_qubits()) {
        fail(ErrorCode::InvalidArgument,
             "operator acts on " + std::to_string(op.num_qubits()) +
                 " qubits, register has " +
                 std::to_string(reg.num_qubits()));
    }
    const auto amps = reg.amplitudes();
    const auto flip = op.flip_mask();
    Complex acc{0.0, 0.0};
    for (std::size_t j = 0; j < amps.size(); ++j) {
        acc += std::conj(amps[j ^ flip]) * op.phase(j) * amps[j];
    }
    return acc.real();
}

double expectation(const QuantumRegister &reg,
                   const pauli::WeightedPauliSum &op) {
    if (op.num_qubits() != reg.num_qubits()) {
        fail(ErrorCode::InvalidArgument,
             "operator acts on " + std::to_string(op.num_qubits()) +
                 " qubits, register has " +
                 std::to_string(reg.num_qubits()));
    }
    double total = 0.0;
    for (const auto &[s, w] : op.terms()) {
        total += w * expectation(reg, s);
    }
    return total;
}

double sample_expectation(const QuantumRegister &reg,
                          const pauli::PauliString &op, std::uint64_t shots,
                          std::uint64_t seed, double readout_flip) {
    if (op.num_qubits() != reg.num_qubits()) {
        fail(ErrorCode::InvalidArgument, "operator / register size mismatch");
    }
    if (op.is_identity()) {
        return 1.0;
    }
    QuantumRegister rotated = reg;
    std::vector<unsigned> support;
    for (unsigned q = 0; q < op.num_qubits(); ++q) {
        const std::array<unsigned, 1> t{q};
        switch (op[q]) {
        case 'X':
            rotated.apply(standard_gate(GateKind::H), t);
            break;
        case 'Y':
            rotated.apply(standard_gate(GateKind::P, -std::numbers::pi / 2), t);
            rotated.apply(standard_gate(GateKind::H), t);
            break;
        default:
            break;
        }
        if (op[q] != 'I') {
            support.push_back(q);
        }
    }
    const auto h = measure(rotated, support, shots, seed, readout_flip);
    std::int64_t signed_sum = 0;
    for (const auto &[bits, c] : h.counts) {
        const auto ones = std::count(bits.begin(), bits.end(), '1');
        signed_sum += (ones % 2 == 0 ? 1 : -1) * static_cast<std::int64_t>(c);
    }
    return static_cast<double>(signed_sum) / static_cast<double>(shots);
}

} // namespace hywf::qsim
