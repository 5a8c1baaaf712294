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
 * Dense statevector simulator: gates, registers, circuits, sampling.
 *
 * Qubit 0 is the leftmost label of |i0 i1 ... i(n-1)> and the most
 * significant bit of a basis index. Multi-qubit gates follow the same rule:
 * the first target is the most significant bit of the gate's row index.
 */
#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace hywf::pauli {
class PauliString;
class WeightedPauliSum;
} // namespace hywf::pauli

namespace hywf::qsim {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;

/// Dense register cap: 2^24 amplitudes of complex<double> is 256 MiB.
inline constexpr unsigned kMaxQubits = 24;

enum class GateKind {
    I,
    X,
    Y,
    Z,
    H,
    P,
    RY,
    CNOT,
    CZ,
    SWAP,
    TOFFOLI,
    FREDKIN,
    T,
    Tdag,
    V,
    Vdag,
    CV,
    CVdag,
    Custom,
};

[[nodiscard]] std::string_view gate_name(GateKind kind) noexcept;
/// Case-insensitive; also accepts CX, CCNOT, CSWAP, TDG, VDG.
[[nodiscard]] std::optional<GateKind> parse_gate_kind(std::string_view name);
[[nodiscard]] unsigned gate_arity(GateKind kind);
[[nodiscard]] bool gate_takes_angle(GateKind kind) noexcept;

class GateMatrix {
  public:
    /// Throws InvalidArgument unless `entries` is a 2^k x 2^k unitary.
    explicit GateMatrix(CMatrix entries, GateKind kind = GateKind::Custom);

    [[nodiscard]] unsigned arity() const noexcept { return arity_; }
    [[nodiscard]] std::size_t dim() const noexcept {
        return static_cast<std::size_t>(entries_.rows());
    }
    [[nodiscard]] const CMatrix &entries() const noexcept { return entries_; }
    [[nodiscard]] GateKind kind() const noexcept { return kind_; }
    [[nodiscard]] Complex operator()(std::size_t r, std::size_t c) const {
        return entries_(static_cast<Eigen::Index>(r),
                        static_cast<Eigen::Index>(c));
    }
    [[nodiscard]] GateMatrix adjoint() const;
    /// max |U U^dagger - I| over all entries.
    [[nodiscard]] double unitarity_defect() const;

  private:
    CMatrix entries_;
    unsigned arity_;
    GateKind kind_;
};

/// Gate matrices as printed in the gate tables. P and RY need an angle;
/// RY(theta) = exp(-i theta Y / 2).
[[nodiscard]] GateMatrix standard_gate(GateKind kind,
                                       std::optional<double> angle = {});
[[nodiscard]] GateMatrix standard_gate(std::string_view name,
                                       std::optional<double> angle = {});

[[nodiscard]] GateMatrix tensor_product(const GateMatrix &a,
                                        const GateMatrix &b);
[[nodiscard]] CMatrix kronecker(const CMatrix &a, const CMatrix &b);

struct Operation {
    GateKind kind;
    std::optional<double> angle;
    std::vector<unsigned> targets;
    GateMatrix gate;
};

class Circuit {
  public:
    explicit Circuit(unsigned num_qubits);

    [[nodiscard]] unsigned num_qubits() const noexcept { return num_qubits_; }
    [[nodiscard]] const std::vector<Operation> &ops() const noexcept {
        return ops_;
    }
    [[nodiscard]] const std::vector<unsigned> &measured() const noexcept {
        return measured_;
    }
    [[nodiscard]] std::size_t count(GateKind kind) const;

    Circuit &add(GateKind kind, std::vector<unsigned> targets,
                 std::optional<double> angle = {});
    Circuit &add(GateMatrix gate, std::vector<unsigned> targets);
    /// Appends every op of `other`, remapping its qubit i to `qubit_map[i]`.
    Circuit &append(const Circuit &other,
                    std::span<const unsigned> qubit_map);
    Circuit &measure(std::vector<unsigned> qubits);

    /// One op per line: `GATE t0[,t1...] [angle]`, preceded by
    /// `QUBITS n` and followed by `MEASURE q0[,q1...]` when present.
    [[nodiscard]] std::string to_text() const;
    [[nodiscard]] static Circuit from_text(std::string_view text);

  private:
    void check_targets(std::span<const unsigned> targets) const;

    unsigned num_qubits_;
    std::vector<Operation> ops_;
    std::vector<unsigned> measured_;
};

class QuantumRegister {
  public:
    /// |0...0> on n qubits; Capacity error outside [1, kMaxQubits].
    explicit QuantumRegister(unsigned num_qubits);

    /// Length must be a power of two and the vector must have unit norm
    /// within 1e-9.
    [[nodiscard]] static QuantumRegister
    from_amplitudes(std::vector<Complex> amplitudes);

    [[nodiscard]] unsigned num_qubits() const noexcept { return num_qubits_; }
    [[nodiscard]] std::size_t dim() const noexcept { return amps_.size(); }
    [[nodiscard]] std::span<const Complex> amplitudes() const noexcept {
        return amps_;
    }
    [[nodiscard]] Complex amplitude(std::size_t index) const {
        return amps_.at(index);
    }
    [[nodiscard]] double norm_squared() const noexcept;
    [[nodiscard]] std::vector<double> probabilities() const;

    void apply(const GateMatrix &gate, std::span<const unsigned> targets);
    void apply(const Operation &op);
    void apply(const Circuit &circuit);

  private:
    QuantumRegister() = default;

    unsigned num_qubits_ = 0;
    std::vector<Complex> amps_;
};

[[nodiscard]] QuantumRegister init_register(unsigned n);
[[nodiscard]] QuantumRegister apply_gate(QuantumRegister reg,
                                         const GateMatrix &gate,
                                         std::span<const unsigned> targets);
[[nodiscard]] QuantumRegister run_circuit(const Circuit &circuit);
[[nodiscard]] QuantumRegister run_circuit(const Circuit &circuit,
                                          QuantumRegister initial);
[[nodiscard]] QuantumRegister tensor_product(const QuantumRegister &a,
                                             const QuantumRegister &b);

/// Basis label of `index`, qubit 0 first.
[[nodiscard]] std::string bitstring(std::size_t index, unsigned num_qubits);

struct ShotHistogram {
    std::uint64_t shots = 0;
    std::map<std::string, std::uint64_t> counts;

    [[nodiscard]] std::uint64_t count(const std::string &bits) const;
    /// Most frequent outcome; ties go to the lexicographically smallest.
    [[nodiscard]] std::string mode() const;
};

/// Samples every qubit `shots` times. Each classical bit is then flipped
/// independently with probability `readout_flip`.
[[nodiscard]] ShotHistogram measure_all(const QuantumRegister &reg,
                                        std::uint64_t shots,
                                        std::uint64_t seed,
                                        double readout_flip = 0.0);
/// Same as measure_all restricted to `qubits`, in the order given.
[[nodiscard]] ShotHistogram measure(const QuantumRegister &reg,
                                    std::span<const unsigned> qubits,
                                    std::uint64_t shots, std::uint64_t seed,
                                    double readout_flip = 0.0);
/// Exact marginal probability that `qubit` reads `value`.
[[nodiscard]] double marginal_probability(const QuantumRegister &reg,
                                          unsigned qubit, int value);

[[nodiscard]] double expectation(const QuantumRegister &reg,
                                 const pauli::PauliString &op);
[[nodiscard]] double expectation(const QuantumRegister &reg,
                                 const pauli::WeightedPauliSum &op);
/// Estimates <P> by rotating into the eigenbasis of each letter and
/// averaging the parity of `shots` samples.
[[nodiscard]] double sample_expectation(const QuantumRegister &reg,
                                        const pauli::PauliString &op,
                                        std::uint64_t shots,
                                        std::uint64_t seed,
                                        double readout_flip = 0.0);

enum class NamedState { BellPhiPlus, BellPhiMinus, BellPsiPlus, BellPsiMinus, GHZ, W };

/// Accepts bell (= phi+), phi+, phi-, psi+, psi-, ghz, w.
[[nodiscard]] NamedState parse_named_state(std::string_view name);
/// Bell and GHZ states come from their H + CNOT circuits; W is injected.
[[nodiscard]] QuantumRegister prepare_named_state(NamedState name);
[[nodiscard]] QuantumRegister prepare_named_state(std::string_view name);
[[nodiscard]] Circuit named_state_circuit(NamedState name);

/// TOFFOLI -> {H, T, Tdag, CNOT}; FREDKIN -> {CNOT, CV, CVdag}.
[[nodiscard]] Circuit decompose_gate(GateKind kind);

/// Count of singular values above 1e-9 of the amplitude matrix split
/// between qubits [0, cut) and [cut, n).
[[nodiscard]] unsigned schmidt_rank(const QuantumRegister &reg, unsigned cut);

/// Dense unitary of a circuit, built column by column from basis states.
[[nodiscard]] CMatrix circuit_unitary(const Circuit &circuit);
/// max |a - e^{i phi} b| with phi fixed from the largest entry of b.
[[nodiscard]] double max_deviation_up_to_phase(const CMatrix &a,
                                               const CMatrix &b);

} // namespace hywf::qsim
