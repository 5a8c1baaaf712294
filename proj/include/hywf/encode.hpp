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
 * Classical-to-quantum data loading by amplitude encoding.
 */
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hywf/qsim.hpp"

namespace hywf::encode {

/// ceil(log2 p), never less than one qubit.
[[nodiscard]] unsigned required_qubits(std::size_t p);

struct EncodedState {
    qsim::QuantumRegister reg;
    std::size_t source_dim;
    std::size_t padded_dim;
};

/// Zero-pads x to the next power of two and loads x / |x| into a fresh
/// register. Encoding error on an empty, non-finite or zero-norm vector.
[[nodiscard]] EncodedState amplitude_encode(std::span<const double> x);

struct SwapInputs {
    qsim::QuantumRegister phi; ///< (|u| |0> - |v| |1>) / sqrt(W), one qubit
    qsim::QuantumRegister psi; ///< (|0>|u^> + |1>|v^>) / sqrt(2)
    double w;                  ///< |u|^2 + |v|^2
};

/// Two-register preparation for SWAP-test distance estimation. Each vector
/// is zero-padded to a power of two (3D points gain a fourth coordinate) and
/// normalized; psi stores the pair back to back, so its first qubit selects
/// u or v and its amplitude vector is (u^, v^) / sqrt(2).
[[nodiscard]] SwapInputs prepare_swap_inputs(std::span<const double> u,
                                             std::span<const double> v);

} // namespace hywf::encode
