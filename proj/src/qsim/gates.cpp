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
#include <cctype>
#include <cmath>
#include <numbers>

#include "hywf/error.hpp"
#include "hywf/qsim.hpp"

namespace hywf::qsim {

namespace {

struct GateInfo {
    GateKind kind;
    std::string_view name;
    unsigned arity;
    bool angle;
};

constexpr std::array<GateInfo, 18> kGates{{
    {GateKind::I, "I", 1, false},
    {GateKind::X, "X", 1, false},
    {GateKind::Y, "Y", 1, false},
    {GateKind::Z, "Z", 1, false},
    {GateKind::H, "H", 1, false},
    {GateKind::P, "P", 1, true},
    {GateKind::RY, "RY", 1, true},
    {GateKind::CNOT, "CNOT", 2, false},
    {GateKind::CZ, "CZ", 2, false},
    {GateKind::SWAP, "SWAP", 2, false},
    {GateKind::TOFFOLI, "TOFFOLI", 3, false},
    {GateKind::FREDKIN, "FREDKIN", 3, false},
    {GateKind::T, "T", 1, false},
    {GateKind::Tdag, "Tdag", 1, false},
    {GateKind::V, "V", 1, false},
    {GateKind::Vdag, "Vdag", 1, false},
    {GateKind::CV, "CV", 2, false},
    {GateKind::CVdag, "CVdag", 2, false},
}};

std::string upper(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return std::toupper(c); });
    return out;
}

CMatrix controlled(const CMatrix &u) {
    const auto d = u.rows();
    CMatrix m = CMatrix::Identity(2 * d, 2 * d);
    m.bottomRightCorner(d, d) = u;
    return m;
}

CMatrix permutation(std::initializer_list<int> images) {
    const auto n = static_cast<Eigen::Index>(images.size());
    CMatrix m = CMatrix::Zero(n, n);
    Eigen::Index col = 0;
    for (int row : images) {
        m(row, col++) = 1.0;
    }
    return m;
}

CMatrix sqrt_x(bool dagger) {
    const Complex a{0.5, dagger ? -0.5 : 0.5};
    const Complex b{0.5, dagger ? 0.5 : -0.5};
    CMatrix m(2, 2);
    m << a, b, b, a;
    return m;
}

} // namespace

std::string_view gate_name(GateKind kind) noexcept {
    for (const auto &g : kGates) {
        if (g.kind == kind) {
            return g.name;
        }
    }
    return "CUSTOM";
}

std::optional<GateKind> parse_gate_kind(std::string_view name) {
    const std::string u = upper(name);
    for (const auto &g : kGates) {
        if (upper(g.name) == u) {
            return g.kind;
        }
    }
    if (u == "CX") {
        return GateKind::CNOT;
    }
    if (u == "CCNOT" || u == "CCX") {
        return GateKind::TOFFOLI;
    }
    if (u == "CSWAP") {
        return GateKind::FREDKIN;
    }
    if (u == "TDG") {
        return GateKind::Tdag;
    }
    if (u == "VDG" || u == "SXDG") {
        return GateKind::Vdag;
    }
    if (u == "CVDG") {
        return GateKind::CVdag;
    }
    if (u == "SX") {
        return GateKind::V;
    }
    return std::nullopt;
}

unsigned gate_arity(GateKind kind) {
    for (const auto &g : kGates) {
        if (g.kind == kind) {
            return g.arity;
        }
    }
    fail(ErrorCode::UnsupportedGate, "custom gates have no fixed arity");
}

bool gate_takes_angle(GateKind kind) noexcept {
    return kind == GateKind::P || kind == GateKind::RY;
}

GateMatrix::GateMatrix(CMatrix entries, GateKind kind)
    : entries_(std::move(entries)), arity_(0), kind_(kind) {
    const auto rows = entries_.rows();
    if (rows == 0 || rows != entries_.cols() || (rows & (rows - 1)) != 0) {
        fail(ErrorCode::InvalidArgument,
             "gate matrix must be square with power-of-two dimension");
    }
    while ((Eigen::Index{1} << arity_) < rows) {
        ++arity_;
    }
    if (!entries_.allFinite() || unitarity_defect() > 1e-9) {
        fail(ErrorCode::InvalidArgument, "gate matrix is not unitary");
    }
}

GateMatrix GateMatrix::adjoint() const {
    GateKind k = GateKind::Custom;
    switch (kind_) {
    case GateKind::T:
        k = GateKind::Tdag;
        break;
    case GateKind::Tdag:
        k = GateKind::T;
        break;
    case GateKind::V:
        k = GateKind::Vdag;
        break;
    case GateKind::Vdag:
        k = GateKind::V;
        break;
    case GateKind::CV:
        k = GateKind::CVdag;
        break;
    case GateKind::CVdag:
        k = GateKind::CV;
        break;
    case GateKind::P:
    case GateKind::RY:
    case GateKind::Custom:
        break;
    default:
        k = kind_; // Hermitian gates
    }
    return GateMatrix(entries_.adjoint(), k);
}

double GateMatrix::unitarity_defect() const {
    const CMatrix prod = entries_ * entries_.adjoint();
    return (prod - CMatrix::Identity(prod.rows(), prod.cols()))
        .cwiseAbs()
        .maxCoeff();
}

GateMatrix standard_gate(GateKind kind, std::optional<double> angle) {
    using namespace std::complex_literals;
    if (gate_takes_angle(kind) && !angle) {
        fail(ErrorCode::MissingParameter,
             std::string(gate_name(kind)) + " requires an angle");
    }
    const double r2 = 1.0 / std::numbers::sqrt2;
    CMatrix m;
    switch (kind) {
    case GateKind::I:
        m = CMatrix::Identity(2, 2);
        break;
    case GateKind::X:
        m.resize(2, 2);
        m << 0, 1, 1, 0;
        break;
    case GateKind::Y:
        m.resize(2, 2);
        m << 0, -1i, 1i, 0;
        break;
    case GateKind::Z:
        m.resize(2, 2);
        m << 1, 0, 0, -1;
        break;
    case GateKind::H:
        m.resize(2, 2);
        m << r2, r2, r2, -r2;
        break;
    case GateKind::P:
        m.resize(2, 2);
        m << 1, 0, 0, std::exp(1i * *angle);
        break;
    case GateKind::RY: {
        const double c = std::cos(*angle / 2);
        const double s = std::sin(*angle / 2);
        m.resize(2, 2);
        m << c, -s, s, c;
        break;
    }
    case GateKind::T:
        m.resize(2, 2);
        m << 1, 0, 0, std::exp(1i * (std::numbers::pi / 4));
        break;
    case GateKind::Tdag:
        m.resize(2, 2);
        m << 1, 0, 0, std::exp(-1i * (std::numbers::pi / 4));
        break;
    case GateKind::V:
        m = sqrt_x(false);
        break;
    case GateKind::Vdag:
        m = sqrt_x(true);
        break;
    case GateKind::CNOT:
        m = permutation({0, 1, 3, 2});
        break;
    case GateKind::CZ:
        m = CMatrix::Identity(4, 4);
        m(3, 3) = -1;
        break;
    case GateKind::SWAP:
        m = permutation({0, 2, 1, 3});
        break;
    case GateKind::TOFFOLI:
        m = permutation({0, 1, 2, 3, 4, 5, 7, 6});
        break;
    case GateKind::FREDKIN:
        m = permutation({0, 1, 2, 3, 4, 6, 5, 7});
        break;
    case GateKind::CV:
        m = controlled(sqrt_x(false));
        break;
    case GateKind::CVdag:
        m = controlled(sqrt_x(true));
        break;
    case GateKind::Custom:
        fail(ErrorCode::UnsupportedGate,
             "custom gates have no standard matrix");
    }
    return GateMatrix(std::move(m), kind);
}

GateMatrix standard_gate(std::string_view name, std::optional<double> angle) {
    const auto kind = parse_gate_kind(name);
    if (!kind) {
        fail(ErrorCode::UnsupportedGate,
             "unsupported gate '" + std::string(name) + "'");
    }
    return standard_gate(*kind, angle);
}

CMatrix kronecker(const CMatrix &a, const CMatrix &b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) =
                a(i, j) * b;
        }
    }
    return out;
}

GateMatrix tensor_product(const GateMatrix &a, const GateMatrix &b) {
    return GateMatrix(kronecker(a.entries(), b.entries()));
}

} // namespace hywf::qsim
