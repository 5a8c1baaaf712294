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
// Independent reference implementations used as test oracles. Nothing here
// calls into the library.
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using C = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

inline CMat kron(const CMat &a, const CMat &b) {
    CMat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            for (Eigen::Index k = 0; k < b.rows(); ++k) {
                for (Eigen::Index l = 0; l < b.cols(); ++l) {
                    out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
                }
            }
        }
    }
    return out;
}

inline CMat pauli(char p) {
    CMat m(2, 2);
    const C i(0, 1);
    switch (p) {
    case 'X':
        m << 0, 1, 1, 0;
        break;
    case 'Y':
        m << 0, -i, i, 0;
        break;
    case 'Z':
        m << 1, 0, 0, -1;
        break;
    default:
        m << 1, 0, 0, 1;
    }
    return m;
}

inline CMat pauli_string(const std::string &s) {
    CMat m = CMat::Identity(1, 1);
    for (char c : s) {
        m = kron(m, pauli(c));
    }
    return m;
}

/// Full 2^n operator for `gate` acting on `targets`, built by enumerating
/// basis states. Qubit 0 is the most significant bit.
inline CMat embed(const CMat &gate, const std::vector<unsigned> &targets, unsigned n) {
    const std::size_t dim = std::size_t{1} << n;
    const auto k = targets.size();
    CMat full = CMat::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    auto bit = [&](std::size_t idx, unsigned q) { return (idx >> (n - 1 - q)) & 1U; };
    for (std::size_t col = 0; col < dim; ++col) {
        std::size_t sub_col = 0;
        for (std::size_t t = 0; t < k; ++t) {
            sub_col = (sub_col << 1) | bit(col, targets[t]);
        }
        for (std::size_t sub_row = 0; sub_row < (std::size_t{1} << k); ++sub_row) {
            std::size_t row = col;
            for (std::size_t t = 0; t < k; ++t) {
                const unsigned q = targets[t];
                const std::size_t b = (sub_row >> (k - 1 - t)) & 1U;
                row = (row & ~(std::size_t{1} << (n - 1 - q))) | (b << (n - 1 - q));
            }
            full(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) +=
                gate(static_cast<Eigen::Index>(sub_row), static_cast<Eigen::Index>(sub_col));
        }
    }
    return full;
}

inline CVec basis(std::size_t index, unsigned n) {
    CVec v = CVec::Zero(Eigen::Index{1} << n);
    v(static_cast<Eigen::Index>(index)) = 1.0;
    return v;
}

inline CMat random_hermitian(Eigen::Index dim, std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    CMat a(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        for (Eigen::Index j = 0; j < dim; ++j) {
            a(i, j) = C(g(rng), g(rng));
        }
    }
    return (a + a.adjoint()) / 2.0;
}

inline Eigen::MatrixXd random_symmetric(Eigen::Index dim, std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    Eigen::MatrixXd a(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        for (Eigen::Index j = 0; j < dim; ++j) {
            a(i, j) = g(rng);
        }
    }
    return (a + a.transpose()) / 2.0;
}

/// Largest eigenvalue by shifted power iteration.
inline double power_iteration(const Eigen::MatrixXd &m, int iters = 20000) {
    const double shift = m.cwiseAbs().rowwise().sum().maxCoeff();
    const Eigen::MatrixXd s = m + shift * Eigen::MatrixXd::Identity(m.rows(), m.cols());
    Eigen::VectorXd v = Eigen::VectorXd::Ones(m.rows());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        v(i) += 0.01 * static_cast<double>(i);
    }
    v.normalize();
    double lambda = 0.0;
    for (int it = 0; it < iters; ++it) {
        Eigen::VectorXd w = s * v;
        const double next = v.dot(w);
        v = w.normalized();
        if (std::abs(next - lambda) < 1e-15 * std::max(1.0, std::abs(next)) && it > 100) {
            lambda = next;
            break;
        }
        lambda = next;
    }
    return lambda - shift;
}

inline double max_dev_up_to_phase(const CMat &a, const CMat &b) {
    Eigen::Index r = 0;
    Eigen::Index c = 0;
    b.cwiseAbs().maxCoeff(&r, &c);
    const C phase = a(r, c) / b(r, c);
    return (a - phase * b).cwiseAbs().maxCoeff();
}

/// Euclidean distance evaluated directly.
inline double distance(double ax, double ay, double az, double bx, double by, double bz) {
    return std::sqrt((ax - bx) * (ax - bx) + (ay - by) * (ay - by) + (az - bz) * (az - bz));
}

} // namespace oracle
