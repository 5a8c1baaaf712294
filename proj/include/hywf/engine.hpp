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
 * Hybrid workflow runtime: hardware catalog, quantum task repository,
 * performance scoring, decision evaluation, transpile-fit, scheduling and
 * monitoring.
 */
#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "hywf/qsim.hpp"
#include "hywf/vqe.hpp"
#include "hywf/workflow.hpp"

namespace hywf::engine {

using nlohmann::json;

enum class DeviceKind { SimulatedQuantum, Classic };

[[nodiscard]] std::string_view to_string(DeviceKind k) noexcept;
[[nodiscard]] DeviceKind parse_device_kind(std::string_view name);

struct HardwareDescriptor {
    std::string device_id;
    DeviceKind kind = DeviceKind::Classic;
    unsigned num_qubits = 0;
    double readout_error = 0.0;
    std::vector<std::string> gate_set;
    std::uint64_t queue_length = 0;
    double throughput_score = 1.0;

    [[nodiscard]] bool is_quantum() const noexcept {
        return kind == DeviceKind::SimulatedQuantum;
    }
    /// Case-insensitive, aliases resolved.
    [[nodiscard]] bool supports(qsim::GateKind g) const;
};

/// Devices indexed by id, kept in id order.
class HardwareCatalog {
  public:
    HardwareCatalog() = default;
    /// Parse error on duplicate ids, invalid fields, or no classic device.
    explicit HardwareCatalog(std::vector<HardwareDescriptor> devices);

    [[nodiscard]] const std::vector<HardwareDescriptor> &devices() const noexcept {
        return devices_;
    }
    [[nodiscard]] const HardwareDescriptor *find(std::string_view id) const;
    [[nodiscard]] std::vector<HardwareDescriptor> quantum_devices() const;
    [[nodiscard]] const HardwareDescriptor &default_classic() const;

    /// Inserts or replaces by device_id.
    void upsert(HardwareDescriptor d);
    /// Classic devices cannot be removed below one.
    void remove(std::string_view id);

    [[nodiscard]] json to_json() const;
    [[nodiscard]] static HardwareCatalog from_json(const json &doc);

  private:
    std::vector<HardwareDescriptor> devices_;
};

[[nodiscard]] HardwareCatalog parse_catalog(std::string_view text);
[[nodiscard]] HardwareCatalog load_catalog(const std::filesystem::path &path);

struct RepositoryEntry {
    std::string task_id;
    std::string goal_label;
    std::string input_schema;
    std::string output_schema;
    std::string routine; ///< engine routine name
    std::optional<qsim::Circuit> circuit;
    unsigned min_qubits = 1;
    std::vector<std::string> required_gates;
};

class TaskRepository {
  public:
    /// Repository holding the built-in entries.
    [[nodiscard]] static TaskRepository with_builtins();

    /// InvalidArgument on a duplicate task_id.
    void add(RepositoryEntry e);
    [[nodiscard]] const RepositoryEntry *find(std::string_view task_id) const;
    /// Every entry whose goal matches; empty means fall back to classic.
    [[nodiscard]] std::vector<RepositoryEntry>
    lookup_quantum_target(std::string_view goal_label) const;
    [[nodiscard]] const std::vector<RepositoryEntry> &entries() const noexcept {
        return entries_;
    }

  private:
    std::vector<RepositoryEntry> entries_;
};

/// Infeasible (nullopt) for classic devices, too few qubits, or a required
/// gate that is neither native nor decomposable. Otherwise
/// throughput * (1 - readout)^min_qubits / (1 + queue).
[[nodiscard]] std::optional<double> performance_score(const RepositoryEntry &entry,
                                                      const HardwareDescriptor &device,
                                                      unsigned min_qubits = 0);

/// Keeps the circuit when it fits, rewriting TOFFOLI / FREDKIN that the
/// device lacks. nullopt when it does not fit or a gate stays unsupported.
[[nodiscard]] std::optional<qsim::Circuit>
transpile_fit(const qsim::Circuit &circuit, const HardwareDescriptor &device);

struct ScoreEntry {
    std::string task_id; ///< quantum node id
    std::string entry_id;
    std::string device_id;
    std::optional<double> score;
};

struct DecisionOutcome {
    bool quantum = false;
    std::string device_id; ///< set when quantum
    std::string task_id;   ///< chosen quantum node, set when quantum
    std::vector<ScoreEntry> score_table;
    std::string reason; ///< no-quantum-device, no-quantum-target, capacity,
                        ///< below-floor, best-score

    [[nodiscard]] json to_json() const;
};

struct DecisionContext {
    const workflow::Workflow &workflow;
    const workflow::DecisionNode &node;
    const HardwareCatalog &catalog; ///< live snapshot
    const TaskRepository &repository;
    double score_floor;
};

using Condition = std::function<DecisionOutcome(const DecisionContext &)>;

/// Best feasible quantum pair at or above the floor, else Classic. Ties go
/// to the smaller device id, then the smaller task id.
[[nodiscard]] DecisionOutcome default_condition(const DecisionContext &ctx);

struct ExecutionRecord {
    std::string node;
    std::string kind; ///< classic, quantum, decision
    std::uint64_t start = 0; ///< logical ticks
    std::uint64_t end = 0;
    std::string device;
    json payload;
    std::optional<qsim::ShotHistogram> histogram;
    std::optional<DecisionOutcome> decision;
    std::vector<std::string> errors;

    [[nodiscard]] json to_json() const;
};

/// Inputs of an executing node: payloads of executed predecessors, with
/// decision nodes replaced by what they received.
struct NodeInputs {
    std::map<std::string, json> by_node;

    /// The only input; Execution error when there is not exactly one.
    [[nodiscard]] const json &single() const;
};

struct ActionContext {
    const workflow::ClassicTask &task;
    const NodeInputs &inputs;
    const json &run_context;
    std::uint64_t seed;
};
using Action = std::function<json(const ActionContext &)>;

struct RoutineContext {
    const workflow::QuantumTask &task;
    const RepositoryEntry &entry;
    const HardwareDescriptor &device;
    const NodeInputs &inputs;
    const json &run_context;
    std::uint64_t seed;
    /// Filled by circuit routines.
    std::optional<qsim::ShotHistogram> *histogram;
};
using Routine = std::function<json(const RoutineContext &)>;

struct EngineConfig {
    std::uint64_t seed = 0;
    double score_floor = 0.0;
    bool concurrent = false; ///< run the nodes of one wave in parallel
    std::optional<std::filesystem::path> log_path;
    /// Read by actions for values their params leave out (trajectory,
    /// segments, out_dir, ...).
    json run_context = json::object();
};

struct RunResult {
    bool ok = true;
    std::string error;
    std::vector<std::string> plan; ///< topological order
    std::vector<ExecutionRecord> records;

    [[nodiscard]] const ExecutionRecord *record(std::string_view node) const;
    [[nodiscard]] std::string log_text() const; ///< JSON lines
};

struct MonitorSnapshot {
    std::vector<HardwareDescriptor> devices; ///< queue_length includes in-flight work
    std::vector<std::string> in_flight;
    std::size_t completed = 0;
};

/// Seed of a node: base + FNV-1a(node id).
[[nodiscard]] std::uint64_t node_seed(std::uint64_t base, std::string_view node_id);
[[nodiscard]] std::uint64_t fnv1a(std::string_view bytes);

class Engine {
  public:
    Engine(HardwareCatalog catalog, TaskRepository repository, EngineConfig config = {});
    ~Engine();
    Engine(const Engine &) = delete;
    Engine &operator=(const Engine &) = delete;

    void register_action(std::string name, Action action);
    void register_routine(std::string name, Routine routine);
    void register_condition(std::string name, Condition condition);

    /// Called after a quantum node's device slot is enqueued, before it runs.
    void on_before_quantum_execute(std::function<void(const std::string &node,
                                                      const std::string &device)> hook);
    void on_node_complete(std::function<void(const ExecutionRecord &)> hook);

    /// Live catalog edits; decisions already made are unaffected.
    void upsert_device(HardwareDescriptor d);
    void remove_device(std::string_view id);

    [[nodiscard]] HardwareCatalog catalog() const;
    [[nodiscard]] const TaskRepository &repository() const noexcept { return repository_; }
    [[nodiscard]] MonitorSnapshot monitor() const;

    /// Validation errors abort before anything runs. Node failures stop
    /// the run and are reported through RunResult.
    [[nodiscard]] RunResult run(const workflow::Workflow &w);

  private:
    struct State;
    TaskRepository repository_;
    EngineConfig config_;
    std::unique_ptr<State> state_;
};

/// Reads the HyperparamSetting fields present in `j` on top of `base`.
/// InvalidArgument on unknown keys or bad values.
[[nodiscard]] vqe::HyperparamSetting settings_from_json(const json &j,
                                                       vqe::HyperparamSetting base = {});
[[nodiscard]] json settings_to_json(const vqe::HyperparamSetting &s);

struct MdPipelineOptions {
    bool classic = true;
    bool quantum = true;
    std::uint64_t shots = 0; ///< swap test shots, 0 = exact
    std::uint64_t seed = 0;
    double readout_flip = 0.0;
};

struct MdPipelineRow {
    long frame;
    double time;
    std::optional<double> lebm_classic;
    std::optional<double> lebm_vqe;
    std::optional<double> swap_max_abs_err; ///< Angstrom, vs classical metric
    std::optional<double> swap_max_rel_err;
};

/// Streams the trajectory: per frame B_IJ, its classical LEBM, SWAP-test
/// distances and the VQE LEBM of the quantum B_IJ.
[[nodiscard]] std::vector<MdPipelineRow>
md_pipeline(const std::filesystem::path &trajectory, const std::string &segments,
            const MdPipelineOptions &options, const vqe::HyperparamSetting &settings = {});

} // namespace hywf::engine
