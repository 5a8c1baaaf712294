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
#include <bit>
#include <cmath>
#include <cstdio>
#include <future>
#include <limits>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

#include "hywf/error.hpp"
#include "hywf/md.hpp"
#include "hywf/vqe.hpp"

namespace hywf::vqe {

namespace {

constexpr double kPi = std::numbers::pi;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Maps an angle into (-pi, pi].
double wrap_angle(double t) {
    t = std::remainder(t, 2.0 * kPi);
    return t <= -kPi ? t + 2.0 * kPi : t;
}

struct CompiledTerm {
    std::uint64_t flip;
    std::uint64_t sign;
    qsim::Complex base;
    double weight;
};

std::vector<CompiledTerm> compile(const pauli::WeightedPauliSum &op) {
    std::vector<CompiledTerm> out;
    out.reserve(op.size());
    for (const auto &[s, w] : op.terms()) {
        out.push_back(CompiledTerm{s.flip_mask(), s.sign_mask(), s.phase(0), w});
    }
    return out;
}

/// RY and CNOT keep amplitudes real, so the exact path runs the ansatz on
/// a real vector. Must stay in step with build_ansatz.
void real_ansatz(unsigned n, const HyperparamSetting &pi,
                 std::span<const double> thetas, std::vector<double> &amps) {
    const std::size_t dim = std::size_t{1} << n;
    amps.assign(dim, 0.0);
    amps[0] = 1.0;
    const auto cnots = entangler_cnots(n, pi.entangler);
    std::size_t p = 0;
    for (unsigned layer = 0; layer < pi.ansatz_layers; ++layer) {
        for (unsigned q = 0; q < n; ++q) {
            const std::size_t bit = std::size_t{1} << (n - 1 - q);
            const double c = std::cos(thetas[p] / 2);
            const double s = std::sin(thetas[p] / 2);
            ++p;
            for (std::size_t i = 0; i < dim; ++i) {
                if ((i & bit) == 0) {
                    const double a0 = amps[i];
                    const double a1 = amps[i | bit];
                    amps[i] = c * a0 - s * a1;
                    amps[i | bit] = s * a0 + c * a1;
                }
            }
        }
        for (std::size_t k = 0; k < cnots; ++k) {
            const auto ctrl = static_cast<unsigned>(k);
            const auto tgt = (ctrl + 1) % n;
            const std::size_t cb = std::size_t{1} << (n - 1 - ctrl);
            const std::size_t tb = std::size_t{1} << (n - 1 - tgt);
            for (std::size_t i = 0; i < dim; ++i) {
                if ((i & cb) != 0 && (i & tb) == 0) {
                    std::swap(amps[i], amps[i | tb]);
                }
            }
        }
    }
}

double real_expectation(std::span<const double> amps,
                        const std::vector<CompiledTerm> &terms) {
    double total = 0.0;
    for (const auto &t : terms) {
        // An odd number of Y letters gives a purely imaginary phase.
        if (t.base.imag() != 0.0) {
            continue;
        }
        double acc = 0.0;
        for (std::size_t j = 0; j < amps.size(); ++j) {
            const double v = amps[j ^ t.flip] * amps[j];
            acc += (std::popcount(j & t.sign) & 1U) ? -v : v;
        }
        total += t.weight * t.base.real() * acc;
    }
    return total;
}

/// Evaluates the cost for one operator and setting, counting evaluations
/// so sampled runs draw fresh, reproducible shot streams.
class Evaluator {
  public:
    Evaluator(const pauli::WeightedPauliSum &op, const HyperparamSetting &pi,
              const CostObserver &observer)
        : op_(op), pi_(pi), observer_(observer), terms_(compile(op)) {}

    double operator()(std::span<const double> thetas) {
        double c = 0.0;
        if (pi_.shots == 0) {
            if (thetas.size() != parameter_count(op_.num_qubits(), pi_)) {
                fail(ErrorCode::InvalidArgument, "parameter count mismatch");
            }
            real_ansatz(op_.num_qubits(), pi_, thetas, scratch_);
            c = real_expectation(scratch_, terms_);
        } else {
            const auto reg = ansatz_state(op_.num_qubits(), pi_, thetas);
            const auto stream = splitmix64(pi_.seed ^ splitmix64(count_));
            std::uint64_t k = 0;
            for (const auto &[s, w] : op_.terms()) {
                c += w * qsim::sample_expectation(reg, s, pi_.shots,
                                                  splitmix64(stream + k),
                                                  pi_.readout_flip);
                ++k;
            }
        }
        ++count_;
        if (observer_) {
            observer_(thetas, c);
        }
        return c;
    }

    [[nodiscard]] std::size_t count() const noexcept { return count_; }

  private:
    const pauli::WeightedPauliSum &op_;
    const HyperparamSetting &pi_;
    const CostObserver &observer_;
    std::vector<CompiledTerm> terms_;
    std::vector<double> scratch_;
    std::size_t count_ = 0;
};

struct RunResult {
    double best = 0.0;
    std::vector<double> thetas;
    std::vector<TracePoint> trace;
    std::size_t iterations = 0;
    bool converged = false;
};

std::vector<double> central_gradient(Evaluator &eval, std::vector<double> theta,
                                     double h) {
    std::vector<double> g(theta.size());
    for (std::size_t i = 0; i < theta.size(); ++i) {
        const double t0 = theta[i];
        theta[i] = t0 + h;
        const double plus = eval(theta);
        theta[i] = t0 - h;
        const double minus = eval(theta);
        theta[i] = t0;
        g[i] = (plus - minus) / (2.0 * h);
    }
    return g;
}

RunResult run_gradient_descent(Evaluator &eval, std::vector<double> theta,
                               const HyperparamSetting &pi) {
    RunResult r;
    double current = eval(theta);
    r.best = current;
    r.thetas = theta;
    double lr = pi.learning_rate;
    std::size_t quiet = 0;
    const bool exact = pi.shots == 0;
    // Shot mode uses the parameter-shift rule.
    const double h = exact ? kFiniteDifferenceStep : kPi / 2.0;
    const double scale = exact ? 1.0 : 2.0 * std::sin(h) / (2.0 * h);

    for (std::size_t it = 1; it <= pi.max_iters; ++it) {
        auto g = central_gradient(eval, theta, h);
        for (auto &x : g) {
            x /= scale;
        }
        std::vector<double> trial(theta.size());
        for (std::size_t i = 0; i < theta.size(); ++i) {
            trial[i] = wrap_angle(theta[i] - lr * g[i]);
        }
        const double c = eval(trial);
        double delta = 0.0;
        if (!exact) {
            delta = current - c;
            theta = std::move(trial);
            current = c;
        } else if (c < current) {
            delta = current - c;
            theta = std::move(trial);
            current = c;
            lr *= 1.2;
        } else {
            lr *= 0.5;
        }
        if (current < r.best) {
            r.best = current;
            r.thetas = theta;
        }
        r.trace.push_back(TracePoint{it, r.best});
        r.iterations = it;
        quiet = std::abs(delta) < kConvergenceTol ? quiet + 1 : 0;
        if (quiet >= kConvergenceWindow) {
            r.converged = true;
            break;
        }
    }
    return r;
}

RunResult run_spsa(Evaluator &eval, std::vector<double> theta,
                   const HyperparamSetting &pi, std::mt19937_64 &rng) {
    RunResult r;
    double current = eval(theta);
    r.best = current;
    r.thetas = theta;
    std::bernoulli_distribution coin(0.5);
    std::size_t quiet = 0;
    const double stability = 0.1 * static_cast<double>(pi.max_iters);
    for (std::size_t it = 1; it <= pi.max_iters; ++it) {
        const double k = static_cast<double>(it);
        const double ak = pi.learning_rate / std::pow(k + stability, 0.602);
        const double ck = 0.2 / std::pow(k, 0.101);
        std::vector<double> dir(theta.size());
        for (auto &d : dir) {
            d = coin(rng) ? 1.0 : -1.0;
        }
        std::vector<double> plus(theta), minus(theta);
        for (std::size_t i = 0; i < theta.size(); ++i) {
            plus[i] += ck * dir[i];
            minus[i] -= ck * dir[i];
        }
        const double slope = (eval(plus) - eval(minus)) / (2.0 * ck);
        for (std::size_t i = 0; i < theta.size(); ++i) {
            theta[i] = wrap_angle(theta[i] - ak * slope * dir[i]);
        }
        const double c = eval(theta);
        const double delta = current - c;
        current = c;
        if (current < r.best) {
            r.best = current;
            r.thetas = theta;
        }
        r.trace.push_back(TracePoint{it, r.best});
        r.iterations = it;
        quiet = std::abs(delta) < kConvergenceTol ? quiet + 1 : 0;
        if (quiet >= kConvergenceWindow) {
            r.converged = true;
            break;
        }
    }
    return r;
}

} // namespace

std::string_view to_string(Entangler e) noexcept {
    return e == Entangler::Ring ? "ring" : "linear-chain";
}

std::string_view to_string(Optimizer o) noexcept {
    return o == Optimizer::Spsa ? "spsa-like-random-direction" : "gradient-descent";
}

Entangler parse_entangler(std::string_view name) {
    if (name == "linear-chain" || name == "linear") {
        return Entangler::LinearChain;
    }
    if (name == "ring") {
        return Entangler::Ring;
    }
    fail(ErrorCode::InvalidArgument, "unknown entangler '" + std::string(name) + "'");
}

Optimizer parse_optimizer(std::string_view name) {
    if (name == "gradient-descent") {
        return Optimizer::GradientDescent;
    }
    if (name == "spsa-like-random-direction" || name == "spsa") {
        return Optimizer::Spsa;
    }
    fail(ErrorCode::InvalidArgument, "unknown optimizer '" + std::string(name) + "'");
}

void HyperparamSetting::validate() const {
    if (ansatz_layers == 0) {
        fail(ErrorCode::InvalidArgument, "ansatz_layers must be positive");
    }
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
        fail(ErrorCode::InvalidArgument, "learning_rate must be positive");
    }
    if (max_iters == 0) {
        fail(ErrorCode::InvalidArgument, "max_iters must be positive");
    }
    if (restarts == 0) {
        fail(ErrorCode::InvalidArgument, "restarts must be positive");
    }
    if (!(readout_flip >= 0.0 && readout_flip <= 1.0)) {
        fail(ErrorCode::InvalidArgument, "readout_flip must lie in [0, 1]");
    }
}

std::string HyperparamSetting::label() const {
    char buf[160];
    std::snprintf(buf, sizeof buf, "layers=%u,%s,%s,lr=%g,iters=%u,shots=%llu",
                  ansatz_layers, std::string(to_string(entangler)).c_str(),
                  std::string(to_string(optimizer)).c_str(), learning_rate,
                  max_iters, static_cast<unsigned long long>(shots));
    return buf;
}

std::size_t parameter_count(unsigned n_qubits, const HyperparamSetting &pi) {
    return static_cast<std::size_t>(n_qubits) * pi.ansatz_layers;
}

std::size_t entangler_cnots(unsigned n_qubits, Entangler e) {
    if (n_qubits < 2) {
        return 0;
    }
    if (e == Entangler::LinearChain || n_qubits == 2) {
        return n_qubits - 1;
    }
    return n_qubits;
}

qsim::Circuit build_ansatz(unsigned n_qubits, const HyperparamSetting &pi,
                           std::span<const double> thetas) {
    if (n_qubits == 0) {
        fail(ErrorCode::InvalidArgument, "ansatz needs at least one qubit");
    }
    if (thetas.size() != parameter_count(n_qubits, pi)) {
        fail(ErrorCode::InvalidArgument,
             "ansatz expects " + std::to_string(parameter_count(n_qubits, pi)) +
                 " parameters, got " + std::to_string(thetas.size()));
    }
    qsim::Circuit c(n_qubits);
    std::size_t p = 0;
    const auto cnots = entangler_cnots(n_qubits, pi.entangler);
    for (unsigned layer = 0; layer < pi.ansatz_layers; ++layer) {
        for (unsigned q = 0; q < n_qubits; ++q) {
            c.add(qsim::GateKind::RY, {q}, thetas[p++]);
        }
        for (std::size_t k = 0; k < cnots; ++k) {
            const auto q = static_cast<unsigned>(k);
            c.add(qsim::GateKind::CNOT, {q, (q + 1) % n_qubits});
        }
    }
    return c;
}

qsim::QuantumRegister ansatz_state(unsigned n_qubits, const HyperparamSetting &pi,
                                   std::span<const double> thetas) {
    return qsim::run_circuit(build_ansatz(n_qubits, pi, thetas));
}

double cost(std::span<const double> thetas, const pauli::WeightedPauliSum &op,
            const HyperparamSetting &pi, std::uint64_t sample_seed) {
    HyperparamSetting local = pi;
    local.seed = sample_seed;
    const CostObserver none;
    Evaluator eval(op, local, none);
    return eval(thetas);
}

VqeResult minimize(const pauli::WeightedPauliSum &op, const HyperparamSetting &pi,
                   const CostObserver &observer) {
    pi.validate();
    const unsigned n = op.num_qubits();
    const auto p = parameter_count(n, pi);
    Evaluator eval(op, pi, observer);
    std::mt19937_64 rng(pi.seed);
    std::uniform_real_distribution<double> angle(-kPi, kPi);

    VqeResult out;
    out.lambda_vqe = std::numeric_limits<double>::infinity();
    for (unsigned restart = 0; restart < pi.restarts; ++restart) {
        std::vector<double> theta(p);
        for (auto &t : theta) {
            t = -angle(rng); // [-pi, pi) mirrored onto (-pi, pi]
        }
        auto run = pi.optimizer == Optimizer::Spsa
                       ? run_spsa(eval, std::move(theta), pi, rng)
                       : run_gradient_descent(eval, std::move(theta), pi);
        if (run.best < out.lambda_vqe) {
            out.lambda_vqe = run.best;
            out.best_thetas = std::move(run.thetas);
            out.cost_trace = std::move(run.trace);
            out.iterations_used = run.iterations;
            out.converged = run.converged;
        }
    }
    out.evaluations = eval.count();
    return out;
}

VqeResult lebm_vqe(const Eigen::MatrixXd &b, const HyperparamSetting &pi,
                   const CostObserver &observer) {
    if (b.rows() != b.cols() || b.rows() == 0) {
        fail(ErrorCode::InvalidArgument, "matrix must be square and nonempty");
    }
    if ((b - b.transpose()).cwiseAbs().maxCoeff() > 1e-9) {
        fail(ErrorCode::InvalidArgument, "matrix is not Hermitian");
    }
    const Eigen::MatrixXd padded = pauli::pad_to_power_of_two(b);
    const auto op = pauli::decompose(Eigen::MatrixXd(-padded));
    auto r = minimize(op, pi, observer);
    r.lambda_vqe = -r.lambda_vqe;
    return r;
}

double mse(std::span<const double> classic, std::span<const double> quantum) {
    if (classic.empty() || classic.size() != quantum.size()) {
        fail(ErrorCode::InvalidArgument, "mse needs two nonempty lists of equal length");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < classic.size(); ++i) {
        const double d = classic[i] - quantum[i];
        acc += d * d;
    }
    return acc / static_cast<double>(classic.size());
}

BenchmarkReport mse_error(std::span<const Eigen::MatrixXd> matrices,
                          const HyperparamSetting &pi,
                          std::span<const double> classical_lebms,
                          std::string matrix_set_id) {
    if (matrices.empty() || matrices.size() != classical_lebms.size()) {
        fail(ErrorCode::InvalidArgument,
             "need one classical LEBM per matrix and at least one matrix");
    }
    BenchmarkReport report{std::move(matrix_set_id), {}, 0.0};
    std::vector<double> quantum;
    for (std::size_t i = 0; i < matrices.size(); ++i) {
        HyperparamSetting local = pi;
        local.seed = pi.seed + i;
        const double q = lebm_vqe(matrices[i], local).lambda_vqe;
        quantum.push_back(q);
        report.entries.push_back(BenchmarkEntry{classical_lebms[i], q});
    }
    report.mse = mse(classical_lebms, quantum);
    return report;
}

GridSearchResult grid_search(std::span<const Eigen::MatrixXd> matrices,
                             std::span<const HyperparamSetting> candidates,
                             std::span<const double> classical_lebms,
                             bool concurrent) {
    if (candidates.empty()) {
        fail(ErrorCode::InvalidArgument, "grid search needs at least one candidate");
    }
    std::vector<double> classic(classical_lebms.begin(), classical_lebms.end());
    if (classic.empty()) {
        for (const auto &m : matrices) {
            classic.push_back(md::classical_lebm(m));
        }
    }
    GridSearchResult out;
    if (concurrent) {
        std::vector<std::future<BenchmarkReport>> jobs;
        for (std::size_t c = 0; c < candidates.size(); ++c) {
            jobs.push_back(std::async(std::launch::async, [&, c] {
                return mse_error(matrices, candidates[c], classic,
                                 "candidate-" + std::to_string(c));
            }));
        }
        for (auto &j : jobs) {
            out.reports.push_back(j.get());
        }
    } else {
        for (std::size_t c = 0; c < candidates.size(); ++c) {
            out.reports.push_back(mse_error(matrices, candidates[c], classic,
                                            "candidate-" + std::to_string(c)));
        }
    }

    auto total_params = [&](const HyperparamSetting &pi) {
        std::size_t total = 0;
        for (const auto &m : matrices) {
            const auto dim = static_cast<std::size_t>(std::max<Eigen::Index>(m.rows(), 2));
            const auto n = static_cast<unsigned>(std::bit_width(std::bit_ceil(dim)) - 1);
            total += parameter_count(n, pi);
        }
        return total;
    };
    std::size_t best = 0;
    for (std::size_t c = 1; c < candidates.size(); ++c) {
        const double e = out.reports[c].mse;
        const double eb = out.reports[best].mse;
        const bool tie = std::abs(e - eb) <= 1e-12 ||
                         std::abs(e - eb) <= 1e-9 * std::max(std::abs(e), std::abs(eb));
        if (tie) {
            if (total_params(candidates[c]) < total_params(candidates[best])) {
                best = c;
            }
        } else if (e < eb) {
            best = c;
        }
    }
    out.best_index = best;
    out.best = candidates[best];
    return out;
}

std::string report_csv(const BenchmarkReport &report) {
    std::string out = "matrix_id,lambda_classic,lambda_vqe,abs_err\n";
    char buf[128];
    for (std::size_t i = 0; i < report.entries.size(); ++i) {
        const auto &e = report.entries[i];
        std::snprintf(buf, sizeof buf, "%zu,%.12g,%.12g,%.6g\n", i, e.lambda_classic,
                      e.lambda_vqe, std::abs(e.lambda_classic - e.lambda_vqe));
        out += buf;
    }
    return out;
}

std::string trace_csv(const VqeResult &result) {
    std::string out = "iter,cost\n";
    char buf[64];
    for (const auto &p : result.cost_trace) {
        std::snprintf(buf, sizeof buf, "%zu,%.12g\n", p.iter, p.cost);
        out += buf;
    }
    return out;
}

} // namespace hywf::vqe
