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
#include <atomic>
#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "../support/oracles.hpp"
#include "hywf/engine.hpp"
#include "hywf/error.hpp"
#include "hywf/md.hpp"
#include "hywf/qsim.hpp"
#include "hywf/workflow.hpp"

using namespace hywf;
using namespace hywf::engine;
using workflow::ClassicTask;
using workflow::ExecType;
using workflow::QuantumTask;
using workflow::Workflow;

namespace {

const std::string kData = HYWF_TEST_DATA;
const std::string kSegments = "I=1,2,3,4,5,6,7,8;J=9,10,11,12,13,14,15,16";

HardwareDescriptor classic_device() {
    HardwareDescriptor d;
    d.device_id = "cpu";
    d.kind = DeviceKind::Classic;
    return d;
}

HardwareDescriptor quantum_device(std::string id, unsigned qubits,
                                  std::vector<std::string> gates = {"H", "X", "Y", "Z", "T",
                                                                    "TDG", "RY", "CNOT", "V",
                                                                    "VDG", "CZ", "SWAP",
                                                                    "TOFFOLI", "FREDKIN"}) {
    HardwareDescriptor d;
    d.device_id = std::move(id);
    d.kind = DeviceKind::SimulatedQuantum;
    d.num_qubits = qubits;
    d.gate_set = std::move(gates);
    return d;
}

ClassicTask task(std::string id, std::string action = "noop", std::string label = "",
                 double intensity = 0.0) {
    ClassicTask t;
    t.id = std::move(id);
    t.label = label.empty() ? t.id : std::move(label);
    t.action = std::move(action);
    t.intensity = intensity;
    return t;
}

/// src -> cand -> sink, where cand maps to one quantum task.
Workflow single_candidate(QuantumTask q, std::string cand_action = "noop",
                          std::string src_action = "noop") {
    Workflow w;
    w.tasks = {task("src", std::move(src_action)), task("cand", std::move(cand_action), "goal", 0.9),
               task("sink")};
    q.source = q.id;
    w.quantum_tasks = {std::move(q)};
    w.edges = {{"src", "cand"}, {"cand", "sink"}};
    w.mapping = {{"goal", {w.quantum_tasks[0].id}}};
    return workflow::to_hybrid(w);
}

QuantumTask circuit_task(std::string id, ExecType type, std::string circuit,
                         std::uint64_t shots = 0, unsigned qubits = 1) {
    QuantumTask q;
    q.id = std::move(id);
    q.type = type;
    q.ref = "circuit";
    q.shots = shots;
    q.qubits = qubits;
    q.params = {{"circuit", std::move(circuit)}};
    return q;
}

Engine make_engine(std::vector<HardwareDescriptor> devices, EngineConfig cfg = {}) {
    devices.push_back(classic_device());
    return Engine(HardwareCatalog(std::move(devices)), TaskRepository::with_builtins(),
                  std::move(cfg));
}

} // namespace

TEST(Catalog, LoadFixture) {
    const auto c = load_catalog(kData + "/catalog_5q.json");
    const auto q = c.quantum_devices();
    ASSERT_EQ(q.size(), 1U);
    EXPECT_EQ(q[0].num_qubits, 5U);
    EXPECT_EQ(c.default_classic().device_id, "classic-cpu");
    EXPECT_EQ(parse_catalog(c.to_json().dump()).to_json(), c.to_json());
}

TEST(Catalog, Errors) {
    auto code = [](const std::string &text) {
        try {
            (void)parse_catalog(text);
        } catch (const Error &e) {
            return e.code();
        }
        return ErrorCode::Execution;
    };
    EXPECT_EQ(code("[]"), ErrorCode::Parse);
    EXPECT_EQ(code(R"([{"device_id":"a","kind":"classic"},{"device_id":"a","kind":"classic"}])"),
              ErrorCode::Parse);
    EXPECT_EQ(code(R"([{"device_id":"q","kind":"simulated-quantum","num_qubits":5}])"),
              ErrorCode::Parse);
    EXPECT_EQ(code(R"([{"device_id":"a","kind":"classic","readout_error":2}])"), ErrorCode::Parse);
    EXPECT_EQ(code("not json"), ErrorCode::Parse);
    EXPECT_THROW((void)load_catalog("/nonexistent.json"), Error);
}

TEST(Repository, Lookup) {
    auto repo = TaskRepository::with_builtins();
    const auto swap = repo.lookup_quantum_target("swap-distance");
    ASSERT_EQ(swap.size(), 1U);
    EXPECT_EQ(swap[0].task_id, "swap_distance");
    EXPECT_TRUE(repo.lookup_quantum_target("unknown").empty());
    repo.add(RepositoryEntry{"hhl_lebm", "lebm", "", "", "vqe_lebm", std::nullopt, 4, {}});
    EXPECT_EQ(repo.lookup_quantum_target("lebm").size(), 2U);
    EXPECT_THROW(repo.add(RepositoryEntry{"hhl_lebm", "x", "", "", "x", std::nullopt, 1, {}}),
                 Error);
}

TEST(Score, Examples) {
    const auto repo = TaskRepository::with_builtins();
    RepositoryEntry six{"six", "g", "", "", "circuit", std::nullopt, 6, {}};
    EXPECT_FALSE(performance_score(six, quantum_device("q", 5)));

    RepositoryEntry one{"one", "g", "", "", "circuit", std::nullopt, 1, {}};
    EXPECT_DOUBLE_EQ(*performance_score(one, quantum_device("q", 5)), 1.0);

    auto busy = quantum_device("busy", 5);
    busy.queue_length = 4;
    EXPECT_DOUBLE_EQ(*performance_score(one, quantum_device("q", 5)) /
                         *performance_score(one, busy),
                     5.0);

    auto noisy = quantum_device("n", 5);
    noisy.readout_error = 0.1;
    noisy.throughput_score = 2.0;
    EXPECT_DOUBLE_EQ(*performance_score(*repo.find("vqe_lebm"), noisy), 2.0 * std::pow(0.9, 4));
    EXPECT_FALSE(performance_score(one, classic_device()));
}

TEST(Score, DecomposableGatesCount) {
    const auto repo = TaskRepository::with_builtins();
    const auto &swap = *repo.find("swap_distance");
    EXPECT_TRUE(performance_score(swap, quantum_device("q", 5, {"H", "CNOT", "V", "VDG"})));
    EXPECT_FALSE(performance_score(swap, quantum_device("q", 5, {"H", "CNOT"})));
}

TEST(Transpile, FitsAndDecomposes) {
    qsim::Circuit c(3);
    c.add(qsim::GateKind::H, {0}).add(qsim::GateKind::FREDKIN, {0, 1, 2});
    const auto same = transpile_fit(c, quantum_device("q", 5));
    ASSERT_TRUE(same);
    EXPECT_EQ(same->to_text(), c.to_text());

    const auto dec = transpile_fit(c, quantum_device("q", 5, {"H", "CNOT", "V", "VDG"}));
    ASSERT_TRUE(dec);
    EXPECT_EQ(dec->count(qsim::GateKind::FREDKIN), 0U);
    EXPECT_LT(oracle::max_dev_up_to_phase(qsim::circuit_unitary(*dec), qsim::circuit_unitary(c)),
              1e-10);

    qsim::Circuit t(4);
    t.add(qsim::GateKind::TOFFOLI, {3, 0, 2}).add(qsim::GateKind::X, {1});
    const auto td = transpile_fit(t, quantum_device("q", 5, {"H", "T", "TDG", "CNOT", "X"}));
    ASSERT_TRUE(td);
    EXPECT_LT(oracle::max_dev_up_to_phase(qsim::circuit_unitary(*td), qsim::circuit_unitary(t)),
              1e-10);

    EXPECT_FALSE(transpile_fit(qsim::Circuit(6), quantum_device("q", 5)));
    EXPECT_FALSE(transpile_fit(c, quantum_device("q", 5, {"H"})));
}

TEST(Decide, NoQuantumDevice) {
    auto engine = make_engine({});
    const auto w = single_candidate(circuit_task("q", ExecType::CircuitExecution, "X 0"));
    const auto r = engine.run(w);
    ASSERT_TRUE(r.ok) << r.error;
    const auto *d = r.record("decide_cand");
    ASSERT_TRUE(d && d->decision);
    EXPECT_FALSE(d->decision->quantum);
    EXPECT_EQ(d->decision->reason, "no-quantum-device");
    EXPECT_EQ(r.record("q"), nullptr);
    EXPECT_NE(r.record("cand"), nullptr);
}

TEST(Decide, SoleFeasibleDevice) {
    auto engine = make_engine({quantum_device("q5", 5)});
    QuantumTask q = circuit_task("q", ExecType::CircuitExecution, "X 0");
    q.ref = "vqe_lebm";
    Workflow w;
    const auto h = single_candidate(q);
    DecisionContext ctx{h, h.decisions[0], engine.catalog(), engine.repository(), 0.0};
    const auto out = default_condition(ctx);
    EXPECT_TRUE(out.quantum);
    EXPECT_EQ(out.device_id, "q5");
    EXPECT_EQ(out.reason, "best-score");
}

TEST(Decide, CapacityAndFloor) {
    auto engine = make_engine({quantum_device("q3", 3)});
    auto q = circuit_task("q", ExecType::CircuitExecution, "X 0", 0, 4);
    const auto h = single_candidate(q);
    DecisionContext ctx{h, h.decisions[0], engine.catalog(), engine.repository(), 0.0};
    const auto cap = default_condition(ctx);
    EXPECT_FALSE(cap.quantum);
    EXPECT_EQ(cap.reason, "capacity");

    auto noisy = quantum_device("q5", 5);
    noisy.readout_error = 0.5;
    auto e2 = make_engine({noisy});
    DecisionContext ctx2{h, h.decisions[0], e2.catalog(), e2.repository(), 0.5};
    EXPECT_EQ(default_condition(ctx2).reason, "below-floor");

    auto bad_ref = circuit_task("q", ExecType::CircuitExecution, "X 0");
    bad_ref.ref = "nothing";
    const auto h3 = single_candidate(bad_ref);
    DecisionContext ctx3{h3, h3.decisions[0], engine.catalog(), engine.repository(), 0.0};
    EXPECT_EQ(default_condition(ctx3).reason, "no-quantum-target");
}

TEST(Decide, TieBreakSmallerDevice) {
    auto engine = make_engine({quantum_device("qb", 5), quantum_device("qa", 5)});
    const auto h = single_candidate(circuit_task("q", ExecType::CircuitExecution, "X 0"));
    DecisionContext ctx{h, h.decisions[0], engine.catalog(), engine.repository(), 0.0};
    EXPECT_EQ(default_condition(ctx).device_id, "qa");
}

TEST(Execute, CircuitExecution) {
    auto engine = make_engine({quantum_device("q5", 5)});
    const auto r = engine.run(single_candidate(circuit_task("q", ExecType::CircuitExecution, "X 0")));
    ASSERT_TRUE(r.ok) << r.error;
    const auto *rec = r.record("q");
    ASSERT_NE(rec, nullptr);
    EXPECT_EQ(rec->payload.at("bitstring"), "1");
    EXPECT_EQ(rec->device, "q5");
    EXPECT_EQ(r.record("cand"), nullptr);
}

TEST(Execute, TaskExecutionBell) {
    auto engine = make_engine({quantum_device("q5", 5)});
    const auto r = engine.run(single_candidate(
        circuit_task("q", ExecType::TaskExecution, "H 0\nCNOT 0,1\n", 10001, 2)));
    ASSERT_TRUE(r.ok) << r.error;
    const auto *rec = r.record("q");
    ASSERT_TRUE(rec && rec->histogram);
    const auto mode = rec->payload.at("mode").get<std::string>();
    EXPECT_TRUE(mode == "00" || mode == "11");
    EXPECT_EQ(rec->histogram->count("01") + rec->histogram->count("10"), 0U);
    EXPECT_EQ(rec->histogram->shots, 10001U);
    EXPECT_GE(rec->histogram->count(mode), rec->histogram->count(mode == "00" ? "11" : "00"));
}

TEST(Execute, HybridExecutionLebm) {
    auto engine = make_engine({quantum_device("q5", 5)});
    engine.register_action("emit", [](const ActionContext &) {
        return json{{"frames", json::array({{{"index", 0}, {"time", 0.0}, {"e", {{5.0}}}}})}};
    });
    QuantumTask q;
    q.id = "q";
    q.type = ExecType::HybridExecution;
    q.ref = "vqe_lebm";
    q.qubits = 1;
    const auto r = engine.run(single_candidate(q, "lebm", "emit"));
    ASSERT_TRUE(r.ok) << r.error;
    EXPECT_NEAR(r.record("q")->payload.at("frames")[0].at("lebm").get<double>(), 5.0, 1e-6);
}

TEST(Schedule, LinearChain) {
    Workflow w;
    w.tasks = {task("c"), task("a"), task("b")};
    w.edges = {{"a", "b"}, {"b", "c"}};
    auto engine = make_engine({});
    const auto r = engine.run(w);
    ASSERT_EQ(r.records.size(), 3U);
    EXPECT_EQ(r.records[0].node, "a");
    EXPECT_EQ(r.records[1].node, "b");
    EXPECT_EQ(r.records[2].node, "c");
    EXPECT_LT(r.records[0].end, r.records[2].start + 1);
}

TEST(Schedule, DiamondJoinWaits) {
    Workflow w;
    w.tasks = {task("top"), task("left"), task("right"), task("join")};
    w.edges = {{"top", "left"}, {"top", "right"}, {"left", "join"}, {"right", "join"}};
    for (bool concurrent : {false, true}) {
        EngineConfig cfg;
        cfg.concurrent = concurrent;
        auto engine = make_engine({}, cfg);
        std::vector<std::string> order;
        std::mutex mu;
        engine.on_node_complete([&](const ExecutionRecord &r) {
            std::lock_guard lock(mu);
            order.push_back(r.node);
        });
        const auto r = engine.run(w);
        ASSERT_TRUE(r.ok);
        EXPECT_EQ(order.back(), "join");
        const auto *j = r.record("join");
        EXPECT_GE(j->start, r.record("left")->end);
        EXPECT_GE(j->start, r.record("right")->end);
    }
}

TEST(Schedule, DeterministicLogs) {
    const auto w = workflow::load_workflow(kData + "/md_hybrid_workflow.json");
    EngineConfig cfg;
    cfg.seed = 11;
    cfg.run_context = {{"trajectory", kData + "/toy_trajectory.txt"}, {"segments", kSegments}};
    auto a = Engine(load_catalog(kData + "/catalog_5q.json"), TaskRepository::with_builtins(), cfg);
    auto b = Engine(load_catalog(kData + "/catalog_5q.json"), TaskRepository::with_builtins(), cfg);
    const auto ra = a.run(w);
    const auto rb = b.run(w);
    ASSERT_TRUE(ra.ok) << ra.error;
    EXPECT_EQ(ra.log_text(), rb.log_text());
    int quantum = 0;
    for (const auto &rec : ra.records) {
        quantum += rec.decision && rec.decision->quantum ? 1 : 0;
    }
    EXPECT_EQ(quantum, 2);
}

TEST(Schedule, LateBinding) {
    Workflow w;
    w.tasks = {task("a", "noop", "goal", 0.9), task("b", "noop", "goal", 0.9)};
    w.quantum_tasks = {circuit_task("q", ExecType::CircuitExecution, "X 0")};
    w.quantum_tasks[0].source = "q";
    w.edges = {{"a", "b"}};
    w.mapping = {{"goal", {"q"}}};
    const auto h = workflow::to_hybrid(w);
    auto engine = make_engine({quantum_device("q5", 5)});
    engine.on_node_complete([&](const ExecutionRecord &r) {
        if (r.kind == "quantum") {
            engine.remove_device("q5");
        }
    });
    const auto r = engine.run(h);
    ASSERT_TRUE(r.ok) << r.error;
    EXPECT_TRUE(r.record("decide_a")->decision->quantum);
    EXPECT_FALSE(r.record("decide_b")->decision->quantum);
    EXPECT_EQ(r.record("decide_b")->decision->reason, "no-quantum-device");
}

TEST(Monitor, QueueVisibleDuringRun) {
    auto engine = make_engine({quantum_device("q5", 5)});
    for (const auto &d : engine.monitor().devices) {
        EXPECT_EQ(d.queue_length, 0U);
    }
    std::uint64_t seen = 0;
    std::vector<std::string> in_flight;
    engine.on_before_quantum_execute([&](const std::string &, const std::string &device) {
        const auto snap = engine.monitor();
        for (const auto &d : snap.devices) {
            if (d.device_id == device) {
                seen = d.queue_length;
            }
        }
        in_flight = snap.in_flight;
    });
    const auto r = engine.run(single_candidate(circuit_task("q", ExecType::CircuitExecution, "X 0")));
    ASSERT_TRUE(r.ok);
    EXPECT_GE(seen, 1U);
    EXPECT_EQ(in_flight, std::vector<std::string>{"q"});
    const auto after = engine.monitor();
    EXPECT_EQ(after.completed, r.records.size());
    EXPECT_TRUE(after.in_flight.empty());
    for (const auto &d : after.devices) {
        EXPECT_EQ(d.queue_length, 0U);
    }
}

TEST(Engine, NodeFailureStopsRun) {
    auto engine = make_engine({});
    engine.register_action("boom", [](const ActionContext &) -> json {
        fail(ErrorCode::Execution, "boom");
    });
    Workflow w;
    w.tasks = {task("a", "boom"), task("b")};
    w.edges = {{"a", "b"}};
    const auto r = engine.run(w);
    EXPECT_FALSE(r.ok);
    EXPECT_NE(r.error.find("boom"), std::string::npos);
    EXPECT_EQ(r.record("b"), nullptr);
    Workflow cyc = w;
    cyc.edges.emplace_back("b", "a");
    EXPECT_THROW((void)engine.run(cyc), Error);
}

TEST(Engine, LogFileAppended) {
    const auto path = std::filesystem::temp_directory_path() / "hywf_engine_log_test.jsonl";
    std::filesystem::remove(path);
    EngineConfig cfg;
    cfg.log_path = path;
    auto engine = make_engine({}, cfg);
    Workflow w;
    w.tasks = {task("a"), task("b")};
    w.edges = {{"a", "b"}};
    const auto r = engine.run(w);
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    EXPECT_EQ(ss.str(), r.log_text());
    std::size_t lines = 0;
    for (char c : ss.str()) {
        lines += c == '\n' ? 1 : 0;
    }
    EXPECT_EQ(lines, 2U);
    std::filesystem::remove(path);
}

TEST(Engine, NodeSeedStable) {
    EXPECT_EQ(node_seed(5, "abc"), 5 + fnv1a("abc"));
    EXPECT_EQ(fnv1a(""), 0xcbf29ce484222325ULL);
    EXPECT_EQ(fnv1a("a"), 0xaf63dc4c8601ec8cULL);
}

TEST(MdPipeline, ClassicMatchesCvSeries) {
    MdPipelineOptions opt;
    opt.quantum = false;
    const auto rows = md_pipeline(kData + "/toy_trajectory.txt", kSegments, opt);
    const auto frames = md::parse_trajectory(kData + "/toy_trajectory.txt");
    const auto segs = md::parse_segments(kSegments);
    const auto cv = md::cv_series(frames, segs[0], segs[1]);
    ASSERT_EQ(rows.size(), 10U);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        EXPECT_EQ(*rows[i].lebm_classic, cv.points[i].lebm);
        EXPECT_FALSE(rows[i].lebm_vqe);
    }
}

TEST(Settings, JsonRoundTrip) {
    vqe::HyperparamSetting s;
    s.ansatz_layers = 2;
    s.entangler = vqe::Entangler::Ring;
    s.shots = 100;
    const auto back = settings_from_json(settings_to_json(s));
    EXPECT_EQ(settings_to_json(back), settings_to_json(s));
    EXPECT_THROW((void)settings_from_json(json{{"bogus", 1}}), Error);
    EXPECT_THROW((void)settings_from_json(json{{"ansatz_layers", 0}}), Error);
}
