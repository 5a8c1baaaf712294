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
#include <cmath>
#include <numeric>

#include "hywf/error.hpp"
#include "hywf/qsim.hpp"

namespace hywf::qsim {

namespace {

void check_qubit_count(unsigned n) {
    if (n < 1 || n > kMaxQubits) {
        fail(ErrorCode::Capacity, "register size " + std::to_string(n) +
                                      " outside [1, " +
                                      std::to_string(kMaxQubits) + "]");
    }
}

} // namespace

QuantumRegister::QuantumRegister(unsigned num_qubits)
    : num_qubits_(num_qubits) {
    check_qubit_count(num_qubits);
    amps_.assign(std::size_t{1} << num_qubits, Complex{0.0, 0.0});
    amps_[0] = 1.0;
}

QuantumRegister QuantumRegister::from_amplitudes(std::vector<Complex> amplitudes) {
    const std::size_t len = amplitudes.size();
    if (len < 2 || (len & (len - 1)) != 0) {
        fail(ErrorCode::InvalidArgument,
             "amplitude vector length must be a power of two >= 2");
    }
    unsigned n = 0;
    while ((std::size_t{1} << n) < len) {
        ++n;
    }
    check_qubit_count(n);
    double norm = 0.0;
    for (const auto &a : amplitudes) {
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
            fail(ErrorCode::InvalidArgument, "non-finite amplitude");
        }
        norm += std::norm(a);
    }
    if (std::abs(norm - 1.0) > 1e-9) {
        fail(ErrorCode::InvalidArgument, "amplitudes are not normalized");
    }
    QuantumRegister reg;
    reg.num_qubits_ = n;
    reg.amps_ = std::move(amplitudes);
    return reg;
}

double QuantumRegister::norm_squared() const noexcept {
    double s = 0.0;
    for (const auto &a : amps_) {
        s += std::norm(a);
    }
    return s;
}

std::vector<double> QuantumRegister::probabilities() const {
    std::vector<double> p(amps_.size());
    std::transform(amps_.begin(), amps_.end(), p.begin(),
                   [](const Complex &a) { return std::norm(a); });
    return p;
}

void QuantumRegister::apply(const GateMatrix &gate,
                            std::span<const unsigned> targets) {
    const unsigned k = gate.arity();
    if (targets.size() != k) {
        fail(ErrorCode::InvalidArgument,
             "gate arity " + std::to_string(k) + " but " +
                 std::to_string(targets.size()) + " targets");
    }
    std::size_t mask = 0;
    std::vector<unsigned> shift(k);
    for (unsigned j = 0; j < k; ++j) {
        if (targets[j] >= num_qubits_) {
            fail(ErrorCode::InvalidArgument,
                 "qubit index " + std::to_string(targets[j]) +
                     " out of range");
        }
        shift[j] = num_qubits_ - 1 - targets[j];
        const std::size_t bit = std::size_t{1} << shift[j];
        if (mask & bit) {
            fail(ErrorCode::InvalidArgument, "duplicate target qubit");
        }
        mask |= bit;
    }

    const std::size_t gdim = std::size_t{1} << k;
    std::vector<std::size_t> offset(gdim, 0);
    for (std::size_t m = 0; m < gdim; ++m) {
        for (unsigned j = 0; j < k; ++j) {
            if ((m >> (k - 1 - j)) & 1U) {
                offset[m] |= std::size_t{1} << shift[j];
            }
        }
    }

    const CMatrix &u = gate.entries();
    std::vector<Complex> in(gdim);
    for (std::size_t base = 0; base < amps_.size(); ++base) {
        if (base & mask) {
            continue;
        }
        for (std::size_t m = 0; m < gdim; ++m) {
            in[m] = amps_[base + offset[m]];
        }
        for (std::size_t r = 0; r < gdim; ++r) {
            Complex acc{0.0, 0.0};
            for (std::size_t c = 0; c < gdim; ++c) {
                acc += u(static_cast<Eigen::Index>(r),
                         static_cast<Eigen::Index>(c)) *
                       in[c];
            }
            amps_[base + offset[r]] = acc;
        }
    }
}

void QuantumRegister::apply(const Operation &op) { apply(op.gate, op.targets); }

void QuantumRegister::apply(const Circuit &circuit) {
    if (circuit.num_qubits() != num_qubits_) {
        fail(ErrorCode::InvalidArgument,
             "circuit has " + std::to_string(circuit.num_qubits()) +
                 " qubits, register has " + std::to_string(num_qubits_));
    }
    for (const auto &op : circuit.ops()) {
        apply(op);
    }
}

QuantumRegister init_register(unsigned n) { return QuantumRegister(n); }

QuantumRegister apply_gate(QuantumRegister reg, const GateMatrix &gate,
                           std::span<const unsigned> targets) {
    reg.apply(gate, targets);
    return reg;
}

QuantumRegister run_circuit(const Circuit &circuit) {
    return run_circuit(circuit, QuantumRegister(circuit.num_qubits()));
}

QuantumRegister run_circuit(const Circuit &circuit, QuantumRegister initial) {
    initial.apply(circuit);
    return initial;
}

QuantumRegister tensor_product(const QuantumRegister &a,
                               const QuantumRegister &b) {
    std::vector<Complex> out;
    out.reserve(a.dim() * b.dim());
    for (const auto &x : a.amplitudes()) {
        for (const auto &y : b.amplitudes()) {
            out.push_back(x * y);
        }
    }
    // Product of unit vectors; renormalize away accumulated rounding.
    double norm = 0.0;
    for (const auto &v : out) {
        norm += std::norm(v);
    }
    const double s = 1.0 / std::sqrt(norm);
    for (auto &v : out) {
        v *= s;
    }
    return QuantumRegister::from_amplitudes(std::move(out));
}

std::string bitstring(std::size_t index, unsigned num_qubits) {
    std::string s(num_qubits, '0');
    for (unsigned q = 0; q < num_qubits; ++q) {
        if ((index >> (num_qubits - 1 - q)) & 1U) {
            s[q] = '1';
        }
    }
    return s;
}

unsigned schmidt_rank(const QuantumRegister &reg, unsigned cut) {
    const unsigned n = reg.num_qubits();
    if (cut < 1 || cut >= n) {
        fail(ErrorCode::InvalidArgument,
             "cut " + std::to_string(cut) + " must lie in [1, " +
                 std::to_string(n - 1) + "]");
    }
    const Eigen::Index rows = Eigen::Index{1} << cut;
    const Eigen::Index cols = Eigen::Index{1} << (n - cut);
    CMatrix m(rows, cols);
    const auto amps = reg.amplitudes();
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < cols; ++c) {
            m(r, c) = amps[static_cast<std::size_t>(r * cols + c)];
        }
    }
    Eigen::JacobiSVD<CMatrix> svd(m);
    const auto &sv = svd.singularValues();
    return static_cast<unsigned>((sv.array() > 1e-9).count());
}

} // namespace hywf::qsim
