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
 * Variational eigensolver: hardware-efficient RY + CNOT ansatz, Pauli-sum
 * cost, classical optimizer loop, LEBM extraction and grid search.
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "hywf/pauli.hpp"
#include "hywf/qsim.hpp"

namespace hywf::vqe {

enum class Entangler { LinearChain, Ring };
enum class Optimizer { GradientDescent, Spsa };

[[nodiscard]] std::string_view to_string(Entangler e) noexcept;
[[nodiscard]] std::string_view to_string(Optimizer o) noexcept;
/// `linear-chain` / `ring`.
[[nodiscard]] Entangler parse_entangler(std::string_view name);
/// `gradient-descent` / `spsa-like-random-direction` (or `spsa`).
[[nodiscard]] Optimizer parse_optimizer(std::string_view name);

struct HyperparamSetting {
    unsigned ansatz_layers = 4;
    Entangler entangler = Entangler::LinearChain;
    Optimizer optimizer = Optimizer::GradientDescent;
    double learning_rate = 0.2;
    unsigned max_iters = 600;
    std::uint64_t shots = 0; ///< 0 = exact expectation
    std::uint64_t seed = 0;
    unsigned restarts = 5;
    double readout_flip = 0.0; ///< per-bit flip probability in shot mode

    /// InvalidArgument on a non-positive field.
    void validate() const;
    [[nodiscard]] std::string label() const;
};

[[nodiscard]] std::size_t parameter_count(unsigned n_qubits,
                                          const HyperparamSetting &pi);
/// CNOTs in one entangling layer.
[[nodiscard]] std::size_t entangler_cnots(unsigned n_qubits, Entangler e);

/// Per layer: RY(theta) on every qubit, then the entangler CNOTs.
[[nodiscard]] qsim::Circuit build_ansatz(unsigned n_qubits,
                                         const HyperparamSetting &pi,
                                         std::span<const double> thetas);
[[nodiscard]] qsim::QuantumRegister ansatz_state(unsigned n_qubits,
                                                 const HyperparamSetting &pi,
                                                 std::span<const double> thetas);

/// <psi(theta)|op|psi(theta)>. With shots > 0 every term is sampled
/// separately from `sample_seed`-derived streams.
[[nodiscard]] double cost(std::span<const double> thetas,
                          const pauli::WeightedPauliSum &op,
                          const HyperparamSetting &pi,
                          std::uint64_t sample_seed = 0);

struct TracePoint {
    std::size_t iter;
    double cost; ///< best cost seen so far
};

struct VqeResult {
    double lambda_vqe = 0.0;
    std::vector<double> best_thetas;
    std::vector<TracePoint> cost_trace; ///< of the winning restart
    std::size_t iterations_used = 0;
    bool converged = false;
    std::size_t evaluations = 0; ///< over all restarts
};

/// Called with every parameter vector the optimizer evaluates.
using CostObserver = std::function<void(std::span<const double>, double)>;

inline constexpr double kConvergenceTol = 1e-8;
inline constexpr std::size_t kConvergenceWindow = 20;
inline constexpr double kFiniteDifferenceStep = 1e-4;

[[nodiscard]] VqeResult minimize(const pauli::WeightedPauliSum &op,
                                 const HyperparamSetting &pi,
                                 const CostObserver &observer = {});

/// Largest eigenvalue of a real symmetric b: pads, minimizes over
/// decompose(-b) and negates. The trace keeps the costs of -b.
[[nodiscard]] VqeResult lebm_vqe(const Eigen::MatrixXd &b,
                                 const HyperparamSetting &pi,
                                 const CostObserver &observer = {});

struct BenchmarkEntry {
    double lambda_classic;
    double lambda_vqe;
};

struct BenchmarkReport {
    std::string matrix_set_id;
    std::vector<BenchmarkEntry> entries;
    double mse = 0.0;
};

/// sum (c - q)^2 / n. InvalidArgument on empty or mismatched input.
[[nodiscard]] double mse(std::span<const double> classic,
                         std::span<const double> quantum);

[[nodiscard]] BenchmarkReport mse_error(std::span<const Eigen::MatrixXd> matrices,
                                        const HyperparamSetting &pi,
                                        std::span<const double> classical_lebms,
                                        std::string matrix_set_id = "set");

struct GridSearchResult {
    std::size_t best_index = 0;
    HyperparamSetting best;
    std::vector<BenchmarkReport> reports; ///< one per candidate, in order
};

/// Lowest Err wins. Errors within 1e-12 absolute or 1e-9 relative tie and
/// fall back to fewer total parameters, then list order. Empty
/// `classical_lebms` computes them with the dense eigensolver.
[[nodiscard]] GridSearchResult
grid_search(std::span<const Eigen::MatrixXd> matrices,
            std::span<const HyperparamSetting> candidates,
            std::span<const double> classical_lebms = {},
            bool concurrent = false);

/// `matrix_id,lambda_classic,lambda_vqe,abs_err`
[[nodiscard]] std::string report_csv(const BenchmarkReport &report);
/// `iter,cost`
[[nodiscard]] std::string trace_csv(const VqeResult &result);

} // namespace hywf::vqe
