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
// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "../support/oracles.hpp"
#include "hywf/encode.hpp"
#include "hywf/engine.hpp"
#include "hywf/md.hpp"
#include "hywf/pauli.hpp"
#include "hywf/qsim.hpp"
#include "hywf/swaptest.hpp"
#include "hywf/vqe.hpp"
#include "hywf/workflow.hpp"

using namespace hywf;

namespace {

// Tolerances and budgets.
constexpr double kExact = 1e-10;
constexpr double kSwapExactTol = 1e-6;
constexpr double kSwapShotRelTol = 0.03;
constexpr int kSwapShotMaxOutliers = 1;
constexpr std::uint64_t kSwapShots = 100000;
constexpr double kVqeRelTol = 1e-2;
constexpr int kVqeMinPassPerSize = 9;
constexpr double kRayleighRitzSlack = 1e-8;
constexpr double kTranslationTol = 1e-12;
constexpr double kBellLow = 0.48;
constexpr double kBellHigh = 0.52;

const std::string kData = HYWF_TEST_DATA;
const std::string kSegments = "I=1,2,3,4,5,6,7,8;J=9,10,11,12,13,14,15,16";

struct Outcome {
    bool pass = true;
    std::string detail;
};

void require(Outcome &o, bool cond, const std::string &what) {
    if (!cond && o.pass) {
        o.pass = false;
        o.detail = what;
    } else if (!cond) {
        o.detail += "; " + what;
    }
}

std::string fmt(const char *f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

oracle::CVec amps(const qsim::QuantumRegister &r) {
    oracle::CVec v(static_cast<Eigen::Index>(r.dim()));
    for (std::size_t i = 0; i < r.dim(); ++i) {
        v(static_cast<Eigen::Index>(i)) = r.amplitude(i);
    }
    return v;
}

qsim::QuantumRegister basis_state(std::size_t index, unsigned n) {
    std::vector<qsim::Complex> a(std::size_t{1} << n);
    a[index] = 1.0;
    return qsim::QuantumRegister::from_amplitudes(a);
}

// 1 ---------------------------------------------------------------------------
Outcome gate_algebra() {
    Outcome o;
    const qsim::Complex i(0, 1);
    struct Row {
        const char *gate;
        unsigned n;
        std::size_t in;
        std::size_t out;
        qsim::Complex phase;
    };
    const std::vector<Row> rows = {
        {"X", 1, 0, 1, 1},        {"X", 1, 1, 0, 1},        {"Z", 1, 0, 0, 1},
        {"Z", 1, 1, 1, -1},       {"Y", 1, 0, 1, i},        {"Y", 1, 1, 0, -i},
        {"I", 1, 0, 0, 1},        {"I", 1, 1, 1, 1},        {"CNOT", 2, 0, 0, 1},
        {"CNOT", 2, 1, 1, 1},     {"CNOT", 2, 2, 3, 1},     {"CNOT", 2, 3, 2, 1},
        {"CZ", 2, 0, 0, 1},       {"CZ", 2, 1, 1, 1},       {"CZ", 2, 2, 2, 1},
        {"CZ", 2, 3, 3, -1},      {"SWAP", 2, 0, 0, 1},     {"SWAP", 2, 1, 2, 1},
        {"SWAP", 2, 2, 1, 1},     {"SWAP", 2, 3, 3, 1},
    };
    auto check_row = [&](const char *gate, unsigned n, std::size_t in, std::size_t out,
                         qsim::Complex phase) {
        std::vector<unsigned> targets(n);
        for (unsigned k = 0; k < n; ++k) {
            targets[k] = k;
        }
        const auto r = qsim::apply_gate(basis_state(in, n), qsim::standard_gate(gate), targets);
        const oracle::CVec want = phase * oracle::basis(out, n);
        require(o, (amps(r) - want).cwiseAbs().maxCoeff() == 0.0,
                std::string(gate) + " row " + std::to_string(in));
    };
    for (const auto &r : rows) {
        check_row(r.gate, r.n, r.in, r.out, r.phase);
    }
    for (std::size_t in = 0; in < 8; ++in) {
        check_row("TOFFOLI", 3, in, in >= 6 ? in ^ 1U : in, 1);
        check_row("FREDKIN", 3, in, in == 5 ? 6 : (in == 6 ? 5 : in), 1);
    }
    double worst = 0.0;
    for (const char *g : {"I", "X", "Y", "Z", "H", "T", "TDG", "V", "VDG", "CNOT", "CZ", "SWAP",
                          "TOFFOLI", "FREDKIN", "CV", "CVDG"}) {
        worst = std::max(worst, qsim::standard_gate(g).unitarity_defect());
    }
    for (double a : {0.1, 1.3, -2.2}) {
        worst = std::max(worst, qsim::standard_gate("RY", a).unitarity_defect());
    }
    require(o, worst < kExact, "unitarity defect " + fmt("%.2e", worst));
    if (o.pass) {
        o.detail = "36 truth-table rows exact, max unitarity defect " + fmt("%.1e", worst);
    }
    return o;
}

// 2 ---------------------------------------------------------------------------
Outcome decompositions() {
    Outcome o;
    double worst = 0.0;
    for (auto kind : {qsim::GateKind::TOFFOLI, qsim::GateKind::FREDKIN}) {
        const auto c = qsim::decompose_gate(kind);
        oracle::CMat u = oracle::CMat::Identity(8, 8);
        for (const auto &op : c.ops()) {
            const bool allowed =
                kind == qsim::GateKind::TOFFOLI
                    ? (op.kind == qsim::GateKind::H || op.kind == qsim::GateKind::T ||
                       op.kind == qsim::GateKind::Tdag || op.kind == qsim::GateKind::CNOT)
                    : (op.kind == qsim::GateKind::CNOT || op.kind == qsim::GateKind::CV ||
                       op.kind == qsim::GateKind::CVdag);
            require(o, allowed, "unexpected gate " + std::string(qsim::gate_name(op.kind)));
            u = oracle::embed(op.gate.entries(), op.targets, 3) * u;
        }
        worst = std::max(worst, oracle::max_dev_up_to_phase(u, qsim::standard_gate(kind).entries()));
    }
    require(o, worst < kExact, "deviation " + fmt("%.2e", worst));
    if (o.pass) {
        o.detail = "max deviation up to phase " + fmt("%.1e", worst);
    }
    return o;
}

// 3 ---------------------------------------------------------------------------
Outcome entangled_states() {
    Outcome o;
    const double r2 = 1.0 / std::sqrt(2.0);
    const double r3 = 1.0 / std::sqrt(3.0);
    oracle::CVec bell = oracle::CVec::Zero(4);
    bell(0) = bell(3) = r2;
    oracle::CVec ghz = oracle::CVec::Zero(8);
    ghz(0) = ghz(7) = r2;
    oracle::CVec w = oracle::CVec::Zero(8);
    w(1) = w(2) = w(4) = r3;
    const std::pair<qsim::NamedState, oracle::CVec> cases[] = {
        {qsim::NamedState::BellPhiPlus, bell}, {qsim::NamedState::GHZ, ghz},
        {qsim::NamedState::W, w}};
    for (const auto &[s, want] : cases) {
        const double dev = (amps(qsim::run_circuit(qsim::named_state_circuit(s))) - want)
                               .cwiseAbs()
                               .maxCoeff();
        require(o, dev < kExact, "state deviation " + fmt("%.2e", dev));
    }
    const std::uint64_t shots = 10000;
    const auto h = qsim::measure_all(qsim::prepare_named_state(qsim::NamedState::BellPhiPlus),
                                     shots, 2024, 0.0);
    const double f00 = static_cast<double>(h.count("00")) / shots;
    const double f11 = static_cast<double>(h.count("11")) / shots;
    require(o, f00 >= kBellLow && f00 <= kBellHigh, "f00 " + fmt("%.4f", f00));
    require(o, f11 >= kBellLow && f11 <= kBellHigh, "f11 " + fmt("%.4f", f11));
    require(o, h.count("01") == 0 && h.count("10") == 0, "nonzero 01/10 counts");
    if (o.pass) {
        o.detail = "Bell/GHZ/W exact; f00=" + fmt("%.4f", f00) + " f11=" + fmt("%.4f", f11);
    }
    return o;
}

// 4 ---------------------------------------------------------------------------
Outcome swap_test_distances() {
    Outcome o;
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, 10.0);
    double worst_exact = 0.0;
    int eligible = 0;
    int outliers = 0;
    double worst_rel = 0.0;
    for (int p = 0; p < 50; ++p) {
        const md::Vec3 a{u(rng), u(rng), u(rng)};
        const md::Vec3 b{u(rng), u(rng), u(rng)};
        const double d = oracle::distance(a.x, a.y, a.z, b.x, b.y, b.z);
        worst_exact = std::max(worst_exact,
                               std::abs(swaptest::estimate_distance(a, b, 0, 0).value - d));
        const auto s = swaptest::estimate_distance(a, b, kSwapShots, 7000 + p);
        if (d >= 1.0) {
            ++eligible;
            const double rel = std::abs(s.value - d) / d;
            worst_rel = std::max(worst_rel, rel);
            outliers += rel > kSwapShotRelTol ? 1 : 0;
        }
    }
    require(o, worst_exact <= kSwapExactTol, "exact-mode error " + fmt("%.2e", worst_exact));
    require(o, outliers <= kSwapShotMaxOutliers,
            "shot mode: " + std::to_string(outliers) + "/" + std::to_string(eligible) +
                " pairs beyond 3% (allowed 1), worst " + fmt("%.1f%%", 100 * worst_rel));
    if (o.pass) {
        o.detail = "exact max err " + fmt("%.1e", worst_exact) + ", shot outliers " +
                   std::to_string(outliers) + "/" + std::to_string(eligible);
    } else {
        o.detail = "exact max err " + fmt("%.1e", worst_exact) + "; " + o.detail;
    }
    return o;
}

// 5 ---------------------------------------------------------------------------
Outcome pauli_round_trip() {
    Outcome o;
    std::mt19937_64 rng(5);
    double worst = 0.0;
    double worst_imag = 0.0;
    const Eigen::Index dims[] = {2, 4, 8, 16};
    for (int t = 0; t < 20; ++t) {
        const auto m = oracle::random_hermitian(dims[t % 4], rng);
        const auto p = pauli::decompose(m);
        worst = std::max(worst, (pauli::reconstruct(p) - m).cwiseAbs().maxCoeff());
        // Weights are stored as reals; check the discarded imaginary parts
        // with an independent trace computation.
        for (const auto &[s, w] : p.terms()) {
            const auto tr = (oracle::pauli_string(s.letters()) * m).trace() /
                            static_cast<double>(m.rows());
            worst_imag = std::max(worst_imag, std::abs(tr.imag()));
            worst = std::max(worst, std::abs(tr.real() - w));
        }
    }
    require(o, worst < kExact, "round-trip deviation " + fmt("%.2e", worst));
    require(o, worst_imag < kExact, "imaginary weight " + fmt("%.2e", worst_imag));
    if (o.pass) {
        o.detail = "20 matrices up to 16x16, max deviation " + fmt("%.1e", worst);
    }
    return o;
}

// 6 ---------------------------------------------------------------------------
Outcome vqe_lebm() {
    Outcome o;
    std::vector<vqe::HyperparamSetting> grid(2);
    grid[0].ansatz_layers = 2;
    grid[1].ansatz_layers = 4;
    std::string summary;
    for (std::size_t k : {1U, 2U, 4U, 8U}) {
        std::vector<Eigen::MatrixXd> ms;
        std::vector<double> classic;
        for (std::uint64_t s = 0; s < 10; ++s) {
            ms.push_back(md::random_bipartite(k, 600 + 10 * k + s));
            classic.push_back(oracle::power_iteration(ms.back()));
        }
        const auto g = vqe::grid_search(ms, grid, classic);
        int passed = 0;
        double worst_rr = -1e300;
        double worst_rel = 0.0;
        for (std::size_t i = 0; i < ms.size(); ++i) {
            auto pi = g.best;
            pi.seed = g.best.seed + i;
            const double top = classic[i];
            const auto r = vqe::lebm_vqe(ms[i], pi, [&](std::span<const double>, double c) {
                worst_rr = std::max(worst_rr, -c - top);
            });
            const double rel = std::abs(r.lambda_vqe - top) / top;
            worst_rel = std::max(worst_rel, rel);
            passed += rel <= kVqeRelTol ? 1 : 0;
        }
        const auto dim = std::to_string(2 * k);
        require(o, passed >= kVqeMinPassPerSize,
                dim + "x" + dim + ": " + std::to_string(passed) + "/10 within 1e-2");
        require(o, worst_rr <= kRayleighRitzSlack,
                dim + "x" + dim + ": Rayleigh-Ritz violated by " + fmt("%.2e", worst_rr));
        summary += (summary.empty() ? "" : ", ") + dim + "x" + dim + " " +
                   std::to_string(passed) + "/10 (layers=" +
                   std::to_string(g.best.ansatz_layers) + ", worst " + fmt("%.1e", worst_rel) + ")";
    }
    if (o.pass) {
        o.detail = summary;
    }
    return o;
}

// 7 ---------------------------------------------------------------------------
Outcome mse_benchmark() {
    Outcome o;
    const std::vector<double> same = {3.0, 4.0};
    require(o, vqe::mse(same, same) == 0.0, "equal values");
    require(o, vqe::mse(std::vector<double>{5.0}, std::vector<double>{4.0}) == 1.0, "(5-4)^2/1");
    require(o, vqe::mse(std::vector<double>{1.0, 2.0}, std::vector<double>{2.0, 5.0}) == 5.0,
            "(1+9)/2");
    std::vector<Eigen::MatrixXd> ms;
    for (std::uint64_t s = 0; s < 5; ++s) {
        ms.push_back(md::random_bipartite(4, 900 + s));
    }
    std::vector<vqe::HyperparamSetting> cands(2);
    cands[0].ansatz_layers = 1;
    cands[1].ansatz_layers = 4;
    const auto g = vqe::grid_search(ms, cands);
    const std::size_t lower = g.reports[1].mse < g.reports[0].mse ? 1 : 0;
    require(o, g.best_index == lower, "grid picked the higher-Err setting");
    require(o, g.best_index == 1, "layers=4 expected to win");
    if (o.pass) {
        o.detail = "Err(layers=1)=" + fmt("%.3g", g.reports[0].mse) +
                   " Err(layers=4)=" + fmt("%.3g", g.reports[1].mse);
    }
    return o;
}

// 8 ---------------------------------------------------------------------------
workflow::Workflow random_dag(std::mt19937_64 &rng) {
    std::uniform_int_distribution<int> size(1, 30);
    std::uniform_real_distribution<double> u(0, 1);
    workflow::Workflow w;
    const char *labels[] = {"lebm", "distances", "fft", "plain"};
    const int n = size(rng);
    for (int i = 0; i < n; ++i) {
        workflow::ClassicTask t;
        t.id = "t" + std::to_string(i);
        t.label = labels[rng() % 4];
        t.intensity = u(rng);
        t.action = "noop";
        w.tasks.push_back(t);
        for (int j = 0; j < i; ++j) {
            if (u(rng) < 0.15) {
                w.edges.emplace_back("t" + std::to_string(j), t.id);
            }
        }
    }
    for (const char *q : {"qa", "qb", "qc"}) {
        workflow::QuantumTask qt;
        qt.id = q;
        qt.source = q;
        qt.ref = "circuit";
        w.quantum_tasks.push_back(qt);
    }
    w.mapping = {{"lebm", {"qa", "qb"}}, {"distances", {"qb"}}, {"fft", {"qc"}}};
    return w;
}

Outcome workflow_model() {
    Outcome o;
    std::mt19937_64 rng(8);
    int decisions = 0;
    for (int t = 0; t < 100; ++t) {
        const auto w = random_dag(rng);
        const auto h = workflow::to_hybrid(w);
        const auto tag = "DAG " + std::to_string(t);
        require(o, h.decisions.size() == workflow::quantum_candidates(w).size(), tag + " |D|!=|T'|");
        require(o, workflow::validate(h).ok(), tag + " invalid hybrid");
        require(o, workflow::is_acyclic(h), tag + " cycle");
        const auto before = workflow::reachable_from_sources(w);
        const auto after = workflow::reachable_from_sources(h);
        for (const auto &id : before) {
            require(o, after.count(id) != 0, tag + " lost reachability of " + id);
        }
        const auto back = workflow::classic_projection(h);
        std::set<workflow::Edge> e1(w.edges.begin(), w.edges.end());
        std::set<workflow::Edge> e2(back.edges.begin(), back.edges.end());
        const auto ids1 = w.node_ids();
        const auto ids2 = back.node_ids();
        require(o, e1 == e2 && std::set(ids1.begin(), ids1.end()) ==
                                   std::set(ids2.begin(), ids2.end()),
                tag + " projection not isomorphic");
        decisions += static_cast<int>(h.decisions.size());
    }
    if (o.pass) {
        o.detail = "100 DAGs, " + std::to_string(decisions) + " decision nodes";
    }
    return o;
}

// 9 ---------------------------------------------------------------------------
std::vector<double> cv_of(const engine::RunResult &r) {
    std::vector<double> out;
    if (const auto *rec = r.record("cv")) {
        for (const auto &p : rec->payload.at("cv")) {
            out.push_back(p.at("lebm").get<double>());
        }
    }
    return out;
}

Outcome engine_semantics() {
    Outcome o;
    engine::EngineConfig cfg;
    cfg.seed = 9;
    cfg.run_context = {{"trajectory", kData + "/toy_trajectory.txt"}, {"segments", kSegments}};
    const auto classic_wf = workflow::load_workflow(kData + "/md_classic_workflow.json");
    const auto hybrid_wf = workflow::load_workflow(kData + "/md_hybrid_workflow.json");
    const auto full = engine::load_catalog(kData + "/catalog_5q.json");
    const auto bare = engine::load_catalog(kData + "/catalog_classic.json");
    auto run = [&](const engine::HardwareCatalog &c, const workflow::Workflow &w) {
        engine::Engine e(c, engine::TaskRepository::with_builtins(), cfg);
        return e.run(w);
    };
    const auto q1 = run(full, hybrid_wf);
    const auto q2 = run(full, hybrid_wf);
    require(o, q1.ok && q2.ok, "run failed: " + q1.error);
    require(o, q1.log_text() == q2.log_text(), "logs differ between identical runs");
    int quantum = 0;
    for (const auto &rec : q1.records) {
        quantum += rec.decision && rec.decision->quantum ? 1 : 0;
    }
    require(o, quantum == 2, "expected 2 quantum decisions, got " + std::to_string(quantum));

    const auto pure = run(bare, classic_wf);
    const auto fallback = run(bare, hybrid_wf);
    const auto cv_pure = cv_of(pure);
    const auto cv_fallback = cv_of(fallback);
    const auto cv_quantum = cv_of(q1);
    require(o, cv_pure.size() == 10, "classic CV has " + std::to_string(cv_pure.size()) + " rows");
    require(o, cv_fallback == cv_pure, "empty-quantum-catalog CV differs from classic CV");
    double worst = 0.0;
    require(o, cv_quantum.size() == cv_pure.size(), "quantum CV length");
    for (std::size_t i = 0; i < std::min(cv_quantum.size(), cv_pure.size()); ++i) {
        worst = std::max(worst, std::abs(cv_quantum[i] - cv_pure[i]) / cv_pure[i]);
    }
    require(o, worst <= kVqeRelTol, "quantum CV deviates " + fmt("%.2e", worst));
    if (o.pass) {
        o.detail = "identical logs, fallback CV exact, quantum CV max rel dev " + fmt("%.1e", worst);
    }
    return o;
}

// 10 --------------------------------------------------------------------------
Outcome bipartite_properties() {
    Outcome o;
    std::mt19937_64 rng(10);
    std::uniform_real_distribution<double> u(-20, 20);
    std::uniform_int_distribution<int> ks(1, 8);
    double worst_shift = 0.0;
    for (int t = 0; t < 100; ++t) {
        const int k = ks(rng);
        md::Frame f;
        f.index = t;
        for (int a = 1; a <= 2 * k; ++a) {
            f.atoms.push_back(md::Atom{a, {u(rng), u(rng), u(rng)}});
        }
        md::Segment si{"I", {}};
        md::Segment sj{"J", {}};
        for (int a = 1; a <= k; ++a) {
            si.atom_ids.push_back(a);
            sj.atom_ids.push_back(k + a);
        }
        const auto b = md::build_bipartite(f, si, sj).values;
        const auto tag = "frame " + std::to_string(t);
        require(o, b == b.transpose(), tag + " not symmetric/Hermitian");
        require(o, b.diagonal().cwiseAbs().maxCoeff() == 0.0, tag + " nonzero diagonal");
        require(o, b.trace() == 0.0, tag + " nonzero trace");
        require(o, b.topRightCorner(k, k).minCoeff() > 0.0, tag + " nonpositive cross distance");
        require(o, b.topLeftCorner(k, k).cwiseAbs().maxCoeff() == 0.0 &&
                       b.bottomRightCorner(k, k).cwiseAbs().maxCoeff() == 0.0,
                tag + " nonzero diagonal block");
        const auto d = md::build_distance_matrix(f, si).values;
        bool off_positive = true;
        for (int i = 0; i < k; ++i) {
            for (int j = 0; j < k; ++j) {
                off_positive = off_positive && (i == j ? d(i, j) == 0.0 : d(i, j) > 0.0);
            }
        }
        require(o, d == d.transpose() && off_positive, tag + " distance matrix properties");
        md::Frame shifted = f;
        const md::Vec3 s{u(rng), u(rng), u(rng)};
        for (auto &a : shifted.atoms) {
            a.pos = a.pos + s;
        }
        worst_shift = std::max(
            worst_shift, (md::build_bipartite(shifted, si, sj).values - b).cwiseAbs().maxCoeff());
    }
    require(o, worst_shift <= kTranslationTol, "translation deviation " + fmt("%.2e", worst_shift));
    if (o.pass) {
        o.detail = "100 frames, translation deviation " + fmt("%.1e", worst_shift);
    }
    return o;
}

} // namespace

int main() {
    struct Criterion {
        int id;
        const char *name;
        double budget_s;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "gate algebra", 1.0, gate_algebra},
        {2, "Toffoli/Fredkin decompositions", 1.0, decompositions},
        {3, "entangled states", 5.0, entangled_states},
        {4, "SWAP-test distances", 30.0, swap_test_distances},
        {5, "Pauli round trip", 5.0, pauli_round_trip},
        {6, "VQE LEBM", 300.0, vqe_lebm},
        {7, "MSE benchmark", 60.0, mse_benchmark},
        {8, "workflow model", 5.0, workflow_model},
        {9, "engine semantics", 120.0, engine_semantics},
        {10, "B_IJ properties", 5.0, bipartite_properties},
    };
    int failed = 0;
    for (const auto &c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception &e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (secs > c.budget_s) {
            o.pass = false;
            o.detail += " (runtime budget " + fmt("%.0f", c.budget_s) + " s exceeded)";
        }
        failed += o.pass ? 0 : 1;
        std::printf("criterion %2d %s  %-31s %7.2fs  %s\n", c.id, o.pass ? "PASS" : "FAIL", c.name,
                    secs, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
                criteria.size());
    return failed;
}
