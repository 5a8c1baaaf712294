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
 * Workflow model: classic task DAGs, quantum tasks, the label mapping f,
 * decision nodes and the classic-to-hybrid transformation.
 */
#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

namespace hywf::workflow {

inline constexpr double kDefaultIntensityThreshold = 0.7;
inline constexpr int kFormatVersion = 1;

enum class ExecType { CircuitExecution, TaskExecution, HybridExecution };

[[nodiscard]] std::string_view to_string(ExecType t) noexcept;
[[nodiscard]] ExecType parse_exec_type(std::string_view name);

struct ClassicTask {
    std::string id;
    std::string label;
    double intensity = 0.0; ///< fraction of run time in floating point
    std::string action;     ///< executable routine name
    nlohmann::json params = nlohmann::json::object();
};

struct QuantumTask {
    std::string id;
    ExecType type = ExecType::HybridExecution;
    std::string ref; ///< repository entry
    std::uint64_t shots = 0;
    unsigned qubits = 1;
    nlohmann::json params = nlohmann::json::object();
    /// Definition this node was instantiated from; equals id unless the
    /// definition is shared between several candidates.
    std::string source;
};

/// Classic label -> quantum task ids.
using MappingF = std::map<std::string, std::vector<std::string>>;

struct DecisionNode {
    std::string id;
    std::string candidate;
    std::vector<std::string> alternatives;
    std::string condition = "default";
};

using Edge = std::pair<std::string, std::string>;

enum class NodeKind { Classic, Quantum, Decision };

/// W = (T, E) plus the quantum definitions and f it was authored with;
/// hybrid once decisions have been inserted (W = (T, Q, E, D, f)).
struct Workflow {
    std::vector<ClassicTask> tasks;
    std::vector<QuantumTask> quantum_tasks;
    std::vector<DecisionNode> decisions;
    std::vector<Edge> edges;
    MappingF mapping;
    bool hybrid = false;
    double intensity_threshold = kDefaultIntensityThreshold;

    [[nodiscard]] const ClassicTask *find_task(std::string_view id) const;
    [[nodiscard]] const QuantumTask *find_quantum(std::string_view id) const;
    [[nodiscard]] const DecisionNode *find_decision(std::string_view id) const;
    /// Graph nodes: every classic task, and for hybrids Q and D as well.
    [[nodiscard]] std::vector<std::string> node_ids() const;
    [[nodiscard]] NodeKind kind_of(std::string_view id) const;
    [[nodiscard]] std::vector<std::string> predecessors(std::string_view id) const;
    [[nodiscard]] std::vector<std::string> successors(std::string_view id) const;
};

struct ValidationIssue {
    std::string code; ///< cycle, dangling-edge, duplicate-id, decision-count, ...
    std::string message;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;

    [[nodiscard]] bool ok() const noexcept { return issues.empty(); }
    [[nodiscard]] bool has(std::string_view code) const;
    [[nodiscard]] std::string summary() const;
};

[[nodiscard]] ValidationReport validate(const Workflow &w);

/// Kahn's algorithm, smallest ready id first. Validation error on a cycle.
[[nodiscard]] std::vector<std::string> topological_order(const Workflow &w);
[[nodiscard]] bool is_acyclic(const Workflow &w);
/// Nodes reachable from the graph's sources.
[[nodiscard]] std::set<std::string> reachable_from_sources(const Workflow &w);

/// Tasks whose label has a nonempty f entry and whose intensity meets the
/// threshold (w.intensity_threshold when omitted).
[[nodiscard]] std::set<std::string> quantum_candidates(const Workflow &w);
[[nodiscard]] std::set<std::string> quantum_candidates(const Workflow &w,
                                                       double threshold);

/// Inserts `decide_<id>` before every candidate, wires it to the candidate
/// and to each alternative, and fans every alternative into the
/// candidate's successors. Validation error on an invalid input.
[[nodiscard]] Workflow to_hybrid(const Workflow &w);
/// Drops Q and D and restores the direct classic edges.
[[nodiscard]] Workflow classic_projection(const Workflow &h);

[[nodiscard]] nlohmann::json to_json(const Workflow &w);
/// Parse error on malformed documents or an unsupported format version.
[[nodiscard]] Workflow from_json(const nlohmann::json &doc);
[[nodiscard]] Workflow parse_workflow(std::string_view text);
[[nodiscard]] Workflow load_workflow(const std::filesystem::path &path);
void save_workflow(const Workflow &w, const std::filesystem::path &path);

} // namespace hywf::workflow
