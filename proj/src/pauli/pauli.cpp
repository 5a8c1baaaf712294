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
#include <bit>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>

#include "hywf/error.hpp"
#include "hywf/pauli.hpp"

namespace hywf::pauli {

namespace {

std::uint64_t bit_of(unsigned q, unsigned n) {
    return std::uint64_t{1} << (n - 1 - q);
}

unsigned log2_exact(Eigen::Index dim) {
    if (dim < 1 || (dim & (dim - 1)) != 0) {
        fail(ErrorCode::InvalidArgument,
             "dimension " + std::to_string(dim) + " is not a power of two");
    }
    unsigned n = 0;
    while ((Eigen::Index{1} << n) < dim) {
        ++n;
    }
    return n;
}

} // namespace

PauliString::PauliString(std::string letters) : letters_(std::move(letters)) {
    if (letters_.empty()) {
        fail(ErrorCode::InvalidArgument, "empty Pauli string");
    }
    if (letters_.size() > qsim::kMaxQubits) {
        fail(ErrorCode::Capacity, "Pauli string too long");
    }
    for (char &c : letters_) {
        if (c >= 'a' && c <= 'z') {
            c = static_cast<char>(c - 'a' + 'A');
        }
        if (c != 'I' && c != 'X' && c != 'Y' && c != 'Z') {
            fail(ErrorCode::InvalidArgument,
                 "bad Pauli letter in '" + letters_ + "'");
        }
    }
}

bool PauliString::is_identity() const noexcept {
    return letters_.find_first_not_of('I') == std::string::npos;
}

std::uint64_t PauliString::flip_mask() const noexcept {
    std::uint64_t m = 0;
    const auto n = num_qubits();
    for (unsigned q = 0; q < n; ++q) {
        if (letters_[q] == 'X' || letters_[q] == 'Y') {
            m |= bit_of(q, n);
        }
    }
    return m;
}

std::uint64_t PauliString::sign_mask() const noexcept {
    std::uint64_t m = 0;
    const auto n = num_qubits();
    for (unsigned q = 0; q < n; ++q) {
        if (letters_[q] == 'Z' || letters_[q] == 'Y') {
            m |= bit_of(q, n);
        }
    }
    return m;
}

unsigned PauliString::y_count() const noexcept {
    unsigned c = 0;
    for (char l : letters_) {
        c += l == 'Y' ? 1 : 0;
    }
    return c;
}

Complex PauliString::phase(std::uint64_t basis_index) const noexcept {
    // Y|0> = i|1>, Y|1> = -i|0>: each Y contributes i, each Y or Z a sign.
    static constexpr Complex kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    Complex p = kIPow[y_count() % 4];
    if (std::popcount(basis_index & sign_mask()) % 2 == 1) {
        p = -p;
    }
    return p;
}

std::vector<PauliString> all_strings(unsigned n) {
    if (n < 1 || n > 12) {
        fail(ErrorCode::Capacity, "all_strings supports 1..12 qubits");
    }
    static constexpr char kLetters[4] = {'I', 'X', 'Y', 'Z'};
    const std::uint64_t total = std::uint64_t{1} << (2 * n);
    std::vector<PauliString> out;
    out.reserve(total);
    std::string s(n, 'I');
    for (std::uint64_t code = 0; code < total; ++code) {
        for (unsigned q = 0; q < n; ++q) {
            s[q] = kLetters[(code >> (2 * (n - 1 - q))) & 3U];
        }
        out.emplace_back(s);
    }
    return out;
}

WeightedPauliSum::WeightedPauliSum(unsigned num_qubits)
    : num_qubits_(num_qubits) {
    if (num_qubits < 1 || num_qubits > qsim::kMaxQubits) {
        fail(ErrorCode::Capacity, "Pauli sum size out of range");
    }
}

double WeightedPauliSum::weight(const PauliString &s) const {
    const auto it = terms_.find(s);
    return it == terms_.end() ? 0.0 : it->second;
}

WeightedPauliSum &WeightedPauliSum::add(const PauliString &s, double w) {
    if (s.num_qubits() != num_qubits_) {
        fail(ErrorCode::InvalidArgument,
             "string '" + s.letters() + "' does not act on " +
                 std::to_string(num_qubits_) + " qubits");
    }
    if (!std::isfinite(w)) {
        fail(ErrorCode::InvalidArgument, "non-finite Pauli weight");
    }
    const double total = weight(s) + w;
    if (std::abs(total) < kPruneBelow) {
        terms_.erase(s);
    } else {
        terms_.insert_or_assign(s, total);
    }
    return *this;
}

WeightedPauliSum WeightedPauliSum::scaled(double factor) const {
    WeightedPauliSum out(num_qubits_);
    for (const auto &[s, w] : terms_) {
        out.add(s, w * factor);
    }
    return out;
}

std::string WeightedPauliSum::to_text() const {
    std::string out;
    char buf[40];
    for (const auto &[s, w] : terms_) {
        std::snprintf(buf, sizeof buf, " %.17g\n", w);
        out += s.letters();
        out += buf;
    }
    return out;
}

WeightedPauliSum WeightedPauliSum::from_text(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    std::optional<WeightedPauliSum> sum;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string letters;
        std::string weight;
        if (!(ls >> letters)) {
            continue;
        }
        std::string extra;
        if (!(ls >> weight) || (ls >> extra)) {
            fail(ErrorCode::Parse, "Pauli sum line " + std::to_string(line_no) +
                                       ": expected '<string> <weight>'");
        }
        double w = 0.0;
        try {
            std::size_t used = 0;
            w = std::stod(weight, &used);
            if (used != weight.size()) {
                throw std::invalid_argument("trailing");
            }
        } catch (const std::exception &) {
            fail(ErrorCode::Parse, "Pauli sum line " + std::to_string(line_no) +
                                       ": bad weight '" + weight + "'");
        }
        PauliString s(letters);
        if (!sum) {
            sum.emplace(s.num_qubits());
        }
        sum->add(s, w);
    }
    if (!sum) {
        fail(ErrorCode::Parse, "empty Pauli sum");
    }
    return *sum;
}

qsim::GateMatrix pauli_matrix(const PauliString &s) {
    const auto dim = Eigen::Index{1} << s.num_qubits();
    CMatrix m = CMatrix::Zero(dim, dim);
    const auto flip = s.flip_mask();
    for (Eigen::Index j = 0; j < dim; ++j) {
        const auto uj = static_cast<std::uint64_t>(j);
        m(static_cast<Eigen::Index>(uj ^ flip), j) = s.phase(uj);
    }
    return qsim::GateMatrix(std::move(m));
}

bool is_hermitian(const CMatrix &m, double tol) {
    if (m.rows() != m.cols()) {
        return false;
    }
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

WeightedPauliSum decompose(const CMatrix &m) {
    if (m.rows() != m.cols()) {
        fail(ErrorCode::InvalidArgument, "matrix is not square");
    }
    const unsigned n = log2_exact(m.rows());
    if (n == 0) {
        fail(ErrorCode::InvalidArgument, "matrix must be at least 2x2");
    }
    if (!is_hermitian(m)) {
        fail(ErrorCode::InvalidArgument, "matrix is not Hermitian");
    }
    const auto dim = static_cast<std::uint64_t>(m.rows());
    const double scale = 1.0 / static_cast<double>(dim);
    WeightedPauliSum out(n);
    for (const auto &s : all_strings(n)) {
        // Tr(P m) = sum_j phase(j) m(j, j xor flip)
        const auto flip = s.flip_mask();
        Complex tr{0.0, 0.0};
        for (std::uint64_t j = 0; j < dim; ++j) {
            tr += s.phase(j) * m(static_cast<Eigen::Index>(j),
                                 static_cast<Eigen::Index>(j ^ flip));
        }
        out.add(s, tr.real() * scale);
    }
    return out;
}

WeightedPauliSum decompose(const Eigen::MatrixXd &m) {
    return decompose(CMatrix(m.cast<Complex>()));
}

CMatrix reconstruct(const WeightedPauliSum &p) {
    const auto dim = Eigen::Index{1} << p.num_qubits();
    CMatrix m = CMatrix::Zero(dim, dim);
    for (const auto &[s, w] : p.terms()) {
        const auto flip = s.flip_mask();
        for (Eigen::Index j = 0; j < dim; ++j) {
            const auto uj = static_cast<std::uint64_t>(j);
            m(static_cast<Eigen::Index>(uj ^ flip), j) += w * s.phase(uj);
        }
    }
    return m;
}

namespace {

Eigen::Index next_power_of_two(Eigen::Index n) {
    Eigen::Index p = 2;
    while (p < n) {
        p <<= 1;
    }
    return p;
}

} // namespace

CMatrix pad_to_power_of_two(const CMatrix &m) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        fail(ErrorCode::InvalidArgument, "matrix is not square");
    }
    const auto p = next_power_of_two(m.rows());
    CMatrix out = CMatrix::Zero(p, p);
    out.topLeftCorner(m.rows(), m.cols()) = m;
    return out;
}

Eigen::MatrixXd pad_to_power_of_two(const Eigen::MatrixXd &m) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        fail(ErrorCode::InvalidArgument, "matrix is not square");
    }
    const auto p = next_power_of_two(m.rows());
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(p, p);
    out.topLeftCorner(m.rows(), m.cols()) = m;
    return out;
}

} // namespace hywf::pauli
