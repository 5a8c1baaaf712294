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

#include "hywf/encode.hpp"
#include "hywf/error.hpp"

namespace hywf::encode {

namespace {

double checked_norm(std::span<const double> x) {
    if (x.empty()) {
        fail(ErrorCode::Encoding, "cannot encode an empty vector");
    }
    double s = 0.0;
    for (double v : x) {
        if (!std::isfinite(v)) {
            fail(ErrorCode::Encoding, "cannot encode a non-finite value");
        }
        s += v * v;
    }
    if (s <= 0.0) {
        fail(ErrorCode::Encoding, "cannot encode a zero-norm vector");
    }
    return std::sqrt(s);
}

} // namespace

unsigned required_qubits(std::size_t p) {
    if (p == 0) {
        fail(ErrorCode::InvalidArgument, "vector length must be >= 1");
    }
    unsigned n = 1;
    while ((std::size_t{1} << n) < p) {
        ++n;
    }
    return n;
}

EncodedState amplitude_encode(std::span<const double> x) {
    const double norm = checked_norm(x);
    const unsigned n = required_qubits(x.size());
    if (n > qsim::kMaxQubits) {
        fail(ErrorCode::Capacity, "vector too long for a dense register");
    }
    const std::size_t padded = std::size_t{1} << n;
    std::vector<qsim::Complex> amps(padded, qsim::Complex{0.0, 0.0});
    for (std::size_t i = 0; i < x.size(); ++i) {
        amps[i] = x[i] / norm;
    }
    return EncodedState{qsim::QuantumRegister::from_amplitudes(std::move(amps)),
                        x.size(), padded};
}

SwapInputs prepare_swap_inputs(std::span<const double> u,
                               std::span<const double> v) {
    if (u.size() != v.size()) {
        fail(ErrorCode::Encoding, "vectors to compare differ in length");
    }
    const double nu = checked_norm(u);
    const double nv = checked_norm(v);
    const double w = nu * nu + nv * nv;

    const std::size_t half = std::size_t{1} << required_qubits(u.size());
    std::vector<qsim::Complex> amps(2 * half, qsim::Complex{0.0, 0.0});
    const double r2 = 1.0 / std::sqrt(2.0);
    for (std::size_t i = 0; i < u.size(); ++i) {
        amps[i] = r2 * u[i] / nu;
        amps[half + i] = r2 * v[i] / nv;
    }

    const double sw = std::sqrt(w);
    auto phi = qsim::QuantumRegister::from_amplitudes({nu / sw, -nv / sw});
    auto psi = qsim::QuantumRegister::from_amplitudes(std::move(amps));
    return SwapInputs{std::move(phi), std::move(psi), w};
}

} // namespace hywf::encode
