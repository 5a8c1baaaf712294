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
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "hywf/error.hpp"
#include "hywf/qsim.hpp"

namespace hywf::qsim {

namespace {

std::vector<unsigned> parse_index_list(const std::string &field,
                                       std::size_t line_no) {
    std::vector<unsigned> out;
    std::size_t start = 0;
    while (start <= field.size()) {
        const auto comma = field.find(',', start);
        const auto token = field.substr(
            start, comma == std::string::npos ? std::string::npos
                                              : comma - start);
        unsigned value = 0;
        const auto *first = token.data();
        const auto *last = token.data() + token.size();
        const auto res = std::from_chars(first, last, value);
        if (token.empty() || res.ec != std::errc{} || res.ptr != last) {
            fail(ErrorCode::Parse, "circuit line " + std::to_string(line_no) +
                                       ": bad qubit list '" + field + "'");
        }
        out.push_back(value);
        if (comma == std::string::npos) {
            break;
        }
        start = comma + 1;
    }
    return out;
}

std::string join(const std::vector<unsigned> &v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) {
            s += ',';
        }
        s += std::to_string(v[i]);
    }
    return s;
}

} // namespace

Circuit::Circuit(unsigned num_qubits) : num_qubits_(num_qubits) {
    if (num_qubits < 1 || num_qubits > kMaxQubits) {
        fail(ErrorCode::Capacity,
             "circuit size " + std::to_string(num_qubits) + " out of range");
    }
}

void Circuit::check_targets(std::span<const unsigned> targets) const {
    for (std::size_t i = 0; i < targets.size(); ++i) {
        if (targets[i] >= num_qubits_) {
            fail(ErrorCode::InvalidArgument,
                 "qubit index " + std::to_string(targets[i]) +
                     " out of range for " + std::to_string(num_qubits_) +
                     "-qubit circuit");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (targets[i] == targets[j]) {
                fail(ErrorCode::InvalidArgument, "duplicate target qubit");
            }
        }
    }
}

std::size_t Circuit::count(GateKind kind) const {
    std::size_t c = 0;
    for (const auto &op : ops_) {
        c += op.kind == kind ? 1 : 0;
    }
    return c;
}

Circuit &Circuit::add(GateKind kind, std::vector<unsigned> targets,
                      std::optional<double> angle) {
    GateMatrix g = standard_gate(kind, angle);
    if (targets.size() != g.arity()) {
        fail(ErrorCode::InvalidArgument,
             std::string(gate_name(kind)) + " takes " +
                 std::to_string(g.arity()) + " targets");
    }
    check_targets(targets);
    ops_.push_back(Operation{kind, gate_takes_angle(kind) ? angle : std::nullopt,
                             std::move(targets), std::move(g)});
    return *this;
}

Circuit &Circuit::add(GateMatrix gate, std::vector<unsigned> targets) {
    if (targets.size() != gate.arity()) {
        fail(ErrorCode::InvalidArgument, "gate arity / target count mismatch");
    }
    check_targets(targets);
    const GateKind kind = gate.kind();
    ops_.push_back(Operation{kind, std::nullopt, std::move(targets),
                             std::move(gate)});
    return *this;
}

Circuit &Circuit::append(const Circuit &other,
                         std::span<const unsigned> qubit_map) {
    if (qubit_map.size() != other.num_qubits()) {
        fail(ErrorCode::InvalidArgument, "qubit map size mismatch");
    }
    for (const auto &op : other.ops()) {
        std::vector<unsigned> t;
        t.reserve(op.targets.size());
        for (unsigned q : op.targets) {
            t.push_back(qubit_map[q]);
        }
        check_targets(t);
        ops_.push_back(Operation{op.kind, op.angle, std::move(t), op.gate});
    }
    return *this;
}

Circuit &Circuit::measure(std::vector<unsigned> qubits) {
    check_targets(qubits);
    measured_ = std::move(qubits);
    return *this;
}

std::string Circuit::to_text() const {
    std::string out = "QUBITS " + std::to_string(num_qubits_) + "\n";
    for (const auto &op : ops_) {
        if (op.kind == GateKind::Custom) {
            fail(ErrorCode::UnsupportedGate,
                 "custom gates have no text form");
        }
        out += gate_name(op.kind);
        out += ' ';
        out += join(op.targets);
        if (op.angle) {
            char buf[32];
            std::snprintf(buf, sizeof buf, " %.17g", *op.angle);
            out += buf;
        }
        out += '\n';
    }
    if (!measured_.empty()) {
        out += "MEASURE " + join(measured_) + "\n";
    }
    return out;
}

Circuit Circuit::from_text(std::string_view text) {
    struct Line {
        std::size_t no;
        std::string gate;
        std::vector<unsigned> targets;
        std::optional<double> angle;
    };
    std::vector<Line> lines;
    std::optional<unsigned> declared;
    std::vector<unsigned> measured;
    unsigned max_index = 0;

    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::istringstream ls(raw);
        std::string gate;
        if (!(ls >> gate) || gate.starts_with('#')) {
            continue;
        }
        std::string field;
        if (!(ls >> field)) {
            fail(ErrorCode::Parse, "circuit line " + std::to_string(line_no) +
                                       ": missing operand");
        }
        if (gate == "QUBITS") {
            declared = parse_index_list(field, line_no).at(0);
            continue;
        }
        auto targets = parse_index_list(field, line_no);
        for (unsigned t : targets) {
            max_index = std::max(max_index, t);
        }
        if (gate == "MEASURE") {
            measured = std::move(targets);
            continue;
        }
        std::optional<double> angle;
        std::string angle_field;
        if (ls >> angle_field) {
            try {
                std::size_t used = 0;
                angle = std::stod(angle_field, &used);
                if (used != angle_field.size()) {
                    throw std::invalid_argument("trailing");
                }
            } catch (const std::exception &) {
                fail(ErrorCode::Parse, "circuit line " +
                                           std::to_string(line_no) +
                                           ": bad angle '" + angle_field + "'");
            }
        }
        lines.push_back(Line{line_no, gate, std::move(targets), angle});
    }
    const unsigned n = declared ? *declared : max_index + 1;
    Circuit c(n);
    for (auto &l : lines) {
        const auto kind = parse_gate_kind(l.gate);
        if (!kind) {
            fail(ErrorCode::UnsupportedGate,
                 "circuit line " + std::to_string(l.no) +
                     ": unsupported gate '" + l.gate + "'");
        }
        c.add(*kind, std::move(l.targets), l.angle);
    }
    if (!measured.empty()) {
        c.measure(std::move(measured));
    }
    return c;
}

CMatrix circuit_unitary(const Circuit &circuit) {
    const auto dim = Eigen::Index{1} << circuit.num_qubits();
    CMatrix u(dim, dim);
    for (Eigen::Index col = 0; col < dim; ++col) {
        std::vector<Complex> basis(static_cast<std::size_t>(dim));
        basis[static_cast<std::size_t>(col)] = 1.0;
        auto reg = QuantumRegister::from_amplitudes(std::move(basis));
        reg.apply(circuit);
        const auto amps = reg.amplitudes();
        for (Eigen::Index row = 0; row < dim; ++row) {
            u(row, col) = amps[static_cast<std::size_t>(row)];
        }
    }
    return u;
}

double max_deviation_up_to_phase(const CMatrix &a, const CMatrix &b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        fail(ErrorCode::InvalidArgument, "matrix shapes differ");
    }
    Eigen::Index r = 0;
    Eigen::Index c = 0;
    b.cwiseAbs().maxCoeff(&r, &c);
    Complex phase{1.0, 0.0};
    if (std::abs(b(r, c)) > 0.0 && std::abs(a(r, c)) > 0.0) {
        phase = a(r, c) / b(r, c);
        phase /= std::abs(phase);
    }
    return (a - phase * b).cwiseAbs().maxCoeff();
}

Circuit decompose_gate(GateKind kind) {
    Circuit c(3);
    switch (kind) {
    case GateKind::TOFFOLI:
        c.add(GateKind::H, {2})
            .add(GateKind::CNOT, {1, 2})
            .add(GateKind::Tdag, {2})
            .add(GateKind::CNOT, {0, 2})
            .add(GateKind::T, {2})
            .add(GateKind::CNOT, {1, 2})
            .add(GateKind::Tdag, {2})
            .add(GateKind::CNOT, {0, 2})
            .add(GateKind::T, {1})
            .add(GateKind::T, {2})
            .add(GateKind::H, {2})
            .add(GateKind::CNOT, {0, 1})
            .add(GateKind::T, {0})
            .add(GateKind::Tdag, {1})
            .add(GateKind::CNOT, {0, 1});
        return c;
    case GateKind::FREDKIN:
        // Toffoli from controlled-V gates, conjugated by CNOT(2 -> 1).
        c.add(GateKind::CNOT, {2, 1})
            .add(GateKind::CV, {1, 2})
            .add(GateKind::CV, {0, 2})
            .add(GateKind::CNOT, {0, 1})
            .add(GateKind::CVdag, {1, 2})
            .add(GateKind::CNOT, {0, 1})
            .add(GateKind::CNOT, {2, 1});
        return c;
    default:
        fail(ErrorCode::UnsupportedGate,
             "no decomposition for " + std::string(gate_name(kind)));
    }
}

NamedState parse_named_state(std::string_view name) {
    std::string s(name);
    for (auto &ch : s) {
        ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    }
    if (s == "bell" || s == "phi+" || s == "bell-phi+") {
        return NamedState::BellPhiPlus;
    }
    if (s == "phi-" || s == "bell-phi-") {
        return NamedState::BellPhiMinus;
    }
    if (s == "psi+" || s == "bell-psi+") {
        return NamedState::BellPsiPlus;
    }
    if (s == "psi-" || s == "bell-psi-") {
        return NamedState::BellPsiMinus;
    }
    if (s == "ghz") {
        return NamedState::GHZ;
    }
    if (s == "w") {
        return NamedState::W;
    }
    fail(ErrorCode::InvalidArgument,
         "unknown named state '" + std::string(name) + "'");
}

Circuit named_state_circuit(NamedState name) {
    switch (name) {
    case NamedState::GHZ: {
        Circuit c(3);
        c.add(GateKind::H, {0}).add(GateKind::CNOT, {0, 1}).add(GateKind::CNOT, {0, 2});
        return c;
    }
    case NamedState::W: {
        const double quarter = std::acos(-1.0) / 4;
        Circuit c(3);
        c.add(GateKind::RY, {0}, 2 * std::asin(1.0 / std::sqrt(3.0)))
            .add(GateKind::X, {0})
            .add(GateKind::RY, {1}, quarter)
            .add(GateKind::CNOT, {0, 1})
            .add(GateKind::RY, {1}, -quarter)
            .add(GateKind::CNOT, {0, 1})
            .add(GateKind::X, {0})
            .add(GateKind::X, {2})
            .add(GateKind::CNOT, {0, 2})
            .add(GateKind::CNOT, {1, 2});
        return c;
    }
    default:
        break;
    }
    Circuit c(2);
    if (name == NamedState::BellPsiPlus || name == NamedState::BellPsiMinus) {
        c.add(GateKind::X, {1});
    }
    if (name == NamedState::BellPhiMinus || name == NamedState::BellPsiMinus) {
        c.add(GateKind::X, {0});
    }
    c.add(GateKind::H, {0}).add(GateKind::CNOT, {0, 1});
    return c;
}

QuantumRegister prepare_named_state(NamedState name) {
    return run_circuit(named_state_circuit(name));
}

QuantumRegister prepare_named_state(std::string_view name) {
    return prepare_named_state(parse_named_state(name));
}

} // namespace hywf::qsim
