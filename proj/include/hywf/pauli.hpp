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
 * Pauli strings and the weighted-Pauli-sum representation of Hermitian
 * operators.
 */
#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "hywf/qsim.hpp"

namespace hywf::pauli {

using qsim::CMatrix;
using qsim::Complex;

/// Ordered letters over {I, X, Y, Z}; letter q acts on qubit q.
class PauliString {
  public:
    explicit PauliString(std::string letters);

    [[nodiscard]] unsigned num_qubits() const noexcept {
        return static_cast<unsigned>(letters_.size());
    }
    [[nodiscard]] const std::string &letters() const noexcept {
        return letters_;
    }
    [[nodiscard]] char operator[](std::size_t q) const { return letters_.at(q); }
    [[nodiscard]] bool is_identity() const noexcept;

    /// Basis-index bits flipped by the string (X or Y letters).
    [[nodiscard]] std::uint64_t flip_mask() const noexcept;
    /// Basis-index bits that contribute a (-1)^bit sign (Z or Y letters).
    [[nodiscard]] std::uint64_t sign_mask() const noexcept;
    [[nodiscard]] unsigned y_count() const noexcept;

    /// P|j> = phase(j) |j xor flip_mask()>.
    [[nodiscard]] Complex phase(std::uint64_t basis_index) const noexcept;

    auto operator<=>(const PauliString &) const = default;

  private:
    std::string letters_;
};

/// All 4^n strings in lexicographic I < X < Y < Z order.
[[nodiscard]] std::vector<PauliString> all_strings(unsigned n);

class WeightedPauliSum {
  public:
    /// Weights with |w| below this are dropped.
    static constexpr double kPruneBelow = 1e-12;

    explicit WeightedPauliSum(unsigned num_qubits);

    [[nodiscard]] unsigned num_qubits() const noexcept { return num_qubits_; }
    [[nodiscard]] const std::map<PauliString, double> &terms() const noexcept {
        return terms_;
    }
    [[nodiscard]] std::size_t size() const noexcept { return terms_.size(); }
    [[nodiscard]] bool empty() const noexcept { return terms_.empty(); }
    [[nodiscard]] double weight(const PauliString &s) const;

    /// Accumulates into an existing term; the result is pruned.
    WeightedPauliSum &add(const PauliString &s, double w);
    WeightedPauliSum &add(std::string_view letters, double w) {
        return add(PauliString(std::string(letters)), w);
    }
    [[nodiscard]] WeightedPauliSum scaled(double factor) const;

    /// Lines of `<string> <weight>`.
    [[nodiscard]] std::string to_text() const;
    [[nodiscard]] static WeightedPauliSum from_text(std::string_view text);

  private:
    unsigned num_qubits_;
    std::map<PauliString, double> terms_;
};

[[nodiscard]] qsim::GateMatrix pauli_matrix(const PauliString &s);

[[nodiscard]] bool is_hermitian(const CMatrix &m, double tol = 1e-9);

/// w_a = Tr(P_a m) / 2^n over every string. Throws InvalidArgument for a
/// non-Hermitian or non-power-of-two input.
[[nodiscard]] WeightedPauliSum decompose(const CMatrix &m);
[[nodiscard]] WeightedPauliSum decompose(const Eigen::MatrixXd &m);

/// Sum of w_a P_a as a dense matrix; the empty sum on n qubits is zero.
[[nodiscard]] CMatrix reconstruct(const WeightedPauliSum &p);

/// Embeds m as the top-left block of the next power-of-two dimension.
[[nodiscard]] CMatrix pad_to_power_of_two(const CMatrix &m);
[[nodiscard]] Eigen::MatrixXd pad_to_power_of_two(const Eigen::MatrixXd &m);

} // namespace hywf::pauli
