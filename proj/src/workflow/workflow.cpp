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
#include <fstream>
#include <map>
#include <queue>
#include <sstream>

#include "hywf/error.hpp"
#include "hywf/workflow.hpp"

namespace hywf::workflow {

using nlohmann::json;

std::string_view to_string(ExecType t) noexcept {
    switch (t) {
    case ExecType::CircuitExecution:
        return "CircuitExecution";
    case ExecType::TaskExecution:
        return "TaskExecution";
    case ExecType::HybridExecution:
        return "HybridExecution";
    }
    return "HybridExecution";
}

ExecType parse_exec_type(std::string_view name) {
    if (name == "CircuitExecution") {
        return ExecType::CircuitExecution;
    }
    if (name == "TaskExecution") {
        return ExecType::TaskExecution;
    }
    if (name == "HybridExecution") {
        return ExecType::HybridExecution;
    }
    fail(ErrorCode::Parse, "unknown quantum task type '" + std::string(name) + "'");
}

const ClassicTask *Workflow::find_task(std::string_view id) const {
    for (const auto &t : tasks) {
        if (t.id == id) {
            return &t;
        }
    }
    return nullptr;
}

const QuantumTask *Workflow::find_quantum(std::string_view id) const {
    for (const auto &q : quantum_tasks) {
        if (q.id == id) {
            return &q;
        }
    }
    return nullptr;
}

const DecisionNode *Workflow::find_decision(std::string_view id) const {
    for (const auto &d : decisions) {
        if (d.id == id) {
            return &d;
        }
    }
    return nullptr;
}

std::vector<std::string> Workflow::node_ids() const {
    std::vector<std::string> out;
    for (const auto &t : tasks) {
        out.push_back(t.id);
    }
    if (hybrid) {
        for (const auto &q : quantum_tasks) {
            out.push_back(q.id);
        }
        for (const auto &d : decisions) {
            out.push_back(d.id);
        }
    }
    return out;
}

NodeKind Workflow::kind_of(std::string_view id) const {
    if (find_task(id) != nullptr) {
        return NodeKind::Classic;
    }
    if (hybrid && find_quantum(id) != nullptr) {
        return NodeKind::Quantum;
    }
    if (hybrid && find_decision(id) != nullptr) {
        return NodeKind::Decision;
    }
    fail(ErrorCode::InvalidArgument, "unknown node '" + std::string(id) + "'");
}

std::vector<std::string> Workflow::predecessors(std::string_view id) const {
    std::vector<std::string> out;
    for (const auto &[a, b] : edges) {
        if (b == id) {
            out.push_back(a);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<std::string> Workflow::successors(std::string_view id) const {
    std::vector<std::string> out;
    for (const auto &[a, b] : edges) {
        if (a == id) {
            out.push_back(b);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool ValidationReport::has(std::string_view code) const {
    return std::any_of(issues.begin(), issues.end(),
                       [&](const ValidationIssue &i) { return i.code == code; });
}

std::string ValidationReport::summary() const {
    if (issues.empty()) {
        return "valid";
    }
    std::string out;
    for (const auto &i : issues) {
        if (!out.empty()) {
            out += "; ";
        }
        out += i.code + ": " + i.message;
    }
    return out;
}

namespace {

/// Kahn's algorithm over the nodes that exist; dangling edges are ignored.
std::pair<std::vector<std::string>, bool> kahn(const Workflow &w) {
    const auto nodes = w.node_ids();
    std::map<std::string, std::size_t> indeg;
    for (const auto &n : nodes) {
        indeg.emplace(n, 0);
    }
    std::map<std::string, std::vector<std::string>> adj;
    for (const auto &[a, b] : w.edges) {
        if (indeg.count(a) != 0 && indeg.count(b) != 0) {
            adj[a].push_back(b);
            ++indeg[b];
        }
    }
    std::priority_queue<std::string, std::vector<std::string>, std::greater<>> ready;
    for (const auto &[n, d] : indeg) {
        if (d == 0) {
            ready.push(n);
        }
    }
    std::vector<std::string> order;
    while (!ready.empty()) {
        auto n = ready.top();
        ready.pop();
        order.push_back(n);
        for (const auto &m : adj[n]) {
            if (--indeg[m] == 0) {
                ready.push(m);
            }
        }
    }
    const bool acyclic = order.size() == indeg.size();
    return {std::move(order), acyclic};
}

std::set<std::string> sorted_set(const std::vector<std::string> &v) {
    return {v.begin(), v.end()};
}

} // namespace

std::vector<std::string> topological_order(const Workflow &w) {
    auto [order, acyclic] = kahn(w);
    if (!acyclic) {
        fail(ErrorCode::Validation, "workflow graph contains a cycle");
    }
    return order;
}

bool is_acyclic(const Workflow &w) { return kahn(w).second; }

std::set<std::string> reachable_from_sources(const Workflow &w) {
    std::set<std::string> seen;
    std::vector<std::string> stack;
    for (const auto &n : w.node_ids()) {
        if (w.predecessors(n).empty()) {
            stack.push_back(n);
        }
    }
    while (!stack.empty()) {
        auto n = stack.back();
        stack.pop_back();
        if (!seen.insert(n).second) {
            continue;
        }
        for (auto &s : w.successors(n)) {
            stack.push_back(std::move(s));
        }
    }
    return seen;
}

std::set<std::string> quantum_candidates(const Workflow &w) {
    return quantum_candidates(w, w.intensity_threshold);
}

std::set<std::string> quantum_candidates(const Workflow &w, double threshold) {
    std::set<std::string> out;
    for (const auto &t : w.tasks) {
        const auto it = w.mapping.find(t.label);
        if (it != w.mapping.end() && !it->second.empty() &&
            t.intensity >= threshold) {
            out.insert(t.id);
        }
    }
    return out;
}

ValidationReport validate(const Workflow &w) {
    ValidationReport r;
    auto add = [&](std::string code, std::string msg) {
        r.issues.push_back(ValidationIssue{std::move(code), std::move(msg)});
    };

    std::set<std::string> ids;
    for (const auto &n : w.node_ids()) {
        if (n.empty()) {
            add("invalid-field", "node with empty id");
        } else if (!ids.insert(n).second) {
            add("duplicate-id", "id '" + n + "' used more than once");
        }
    }
    if (!w.hybrid) {
        std::set<std::string> qids;
        for (const auto &q : w.quantum_tasks) {
            if (!qids.insert(q.id).second || ids.count(q.id) != 0) {
                add("duplicate-id", "quantum task id '" + q.id + "' used more than once");
            }
        }
    }
    for (const auto &t : w.tasks) {
        if (!(t.intensity >= 0.0 && t.intensity <= 1.0)) {
            add("invalid-field", "task '" + t.id + "' intensity outside [0,1]");
        }
    }
    for (const auto &q : w.quantum_tasks) {
        if (q.qubits < 1) {
            add("invalid-field", "quantum task '" + q.id + "' needs >= 1 qubit");
        }
        if (q.type == ExecType::TaskExecution && q.shots < 1) {
            add("invalid-field", "TaskExecution '" + q.id + "' needs shots >= 1");
        }
    }
    for (const auto &[label, qs] : w.mapping) {
        for (const auto &q : qs) {
            const bool known = std::any_of(
                w.quantum_tasks.begin(), w.quantum_tasks.end(),
                [&](const QuantumTask &t) { return t.id == q || t.source == q; });
            if (!known) {
                add("mapping", "f('" + label + "') names unknown quantum task '" + q + "'");
            }
        }
    }
    for (const auto &[a, b] : w.edges) {
        if (ids.count(a) == 0 || ids.count(b) == 0) {
            add("dangling-edge", "edge " + a + " -> " + b + " has a missing endpoint");
        }
        if (a == b) {
            add("cycle", "self-loop on '" + a + "'");
        }
    }
    if (!r.has("cycle") && !is_acyclic(w)) {
        add("cycle", "graph contains a cycle");
    }

    if (w.hybrid) {
        const auto cands = quantum_candidates(w);
        if (w.decisions.size() != cands.size()) {
            add("decision-count", "|D| = " + std::to_string(w.decisions.size()) +
                                      " but |T'| = " + std::to_string(cands.size()));
        }
        std::set<std::string> referenced;
        for (const auto &d : w.decisions) {
            const auto *t = w.find_task(d.candidate);
            if (t == nullptr || cands.count(d.candidate) == 0) {
                add("decision-wiring", "decision '" + d.id + "' guards '" + d.candidate +
                                           "', which is not a quantum candidate");
                continue;
            }
            if (d.alternatives.empty()) {
                add("decision-wiring", "decision '" + d.id + "' has no alternatives");
            }
            const auto succ = sorted_set(w.successors(d.id));
            if (succ.count(d.candidate) == 0) {
                add("decision-wiring", "missing edge " + d.id + " -> " + d.candidate);
            }
            if (w.predecessors(d.candidate) != std::vector<std::string>{d.id}) {
                add("decision-wiring", "'" + d.candidate + "' must be fed only by '" +
                                           d.id + "'");
            }
            const auto cand_succ = w.successors(d.candidate);
            std::set<std::string> sources;
            for (const auto &q : d.alternatives) {
                referenced.insert(q);
                const auto *qt = w.find_quantum(q);
                if (qt == nullptr) {
                    add("decision-wiring", "alternative '" + q + "' of '" + d.id +
                                               "' is not a quantum task");
                    continue;
                }
                sources.insert(qt->source.empty() ? qt->id : qt->source);
                if (succ.count(q) == 0) {
                    add("decision-wiring", "missing edge " + d.id + " -> " + q);
                }
                if (w.predecessors(q) != std::vector<std::string>{d.id}) {
                    add("decision-wiring", "'" + q + "' must be fed only by '" + d.id + "'");
                }
                if (w.successors(q) != cand_succ) {
                    add("decision-wiring", "'" + q + "' and '" + d.candidate +
                                               "' feed different successors");
                }
            }
            const auto it = w.mapping.find(t->label);
            if (it != w.mapping.end() && sources != sorted_set(it->second)) {
                add("decision-wiring", "alternatives of '" + d.id + "' differ from f('" +
                                           t->label + "')");
            }
            if (succ.size() != d.alternatives.size() + 1) {
                add("decision-wiring", "decision '" + d.id + "' has extra successors");
            }
        }
        for (const auto &q : w.quantum_tasks) {
            if (referenced.count(q.id) == 0) {
                add("unreferenced-quantum", "quantum task '" + q.id +
                                                "' is not an alternative of any decision");
            }
        }
    }
    return r;
}

Workflow to_hybrid(const Workflow &w) {
    if (w.hybrid) {
        fail(ErrorCode::Validation, "workflow is already hybrid");
    }
    const auto report = validate(w);
    if (!report.ok()) {
        fail(ErrorCode::Validation, report.summary());
    }
    const auto cands = quantum_candidates(w);

    std::set<std::string> taken;
    for (const auto &t : w.tasks) {
        taken.insert(t.id);
    }
    for (const auto &q : w.quantum_tasks) {
        taken.insert(q.id);
    }
    std::map<std::string, std::string> decision_of;
    for (const auto &c : cands) {
        std::string id = "decide_" + c;
        for (int n = 2; taken.count(id) != 0; ++n) {
            id = "decide_" + c + "_" + std::to_string(n);
        }
        taken.insert(id);
        decision_of[c] = id;
    }
    auto target = [&](const std::string &n) {
        const auto it = decision_of.find(n);
        return it == decision_of.end() ? n : it->second;
    };

    std::map<std::string, int> uses;
    for (const auto &c : cands) {
        for (const auto &q : w.mapping.at(w.find_task(c)->label)) {
            ++uses[q];
        }
    }

    Workflow h;
    h.tasks = w.tasks;
    for (const auto &c : cands) {
        const auto &label = w.find_task(c)->label;
        h.mapping[label] = w.mapping.at(label);
    }
    h.hybrid = true;
    h.intensity_threshold = w.intensity_threshold;
    for (const auto &[a, b] : w.edges) {
        h.edges.emplace_back(a, target(b));
    }
    for (const auto &c : cands) {
        const auto &d_id = decision_of[c];
        DecisionNode d{d_id, c, {}, "default"};
        h.edges.emplace_back(d_id, c);
        const auto succ = w.successors(c);
        auto alts = w.mapping.at(w.find_task(c)->label);
        std::sort(alts.begin(), alts.end());
        alts.erase(std::unique(alts.begin(), alts.end()), alts.end());
        for (const auto &q : alts) {
            const auto *def = w.find_quantum(q);
            QuantumTask inst = *def;
            inst.source = def->id;
            inst.id = uses[q] > 1 ? q + "@" + c : q;
            h.edges.emplace_back(d_id, inst.id);
            for (const auto &s : succ) {
                h.edges.emplace_back(inst.id, target(s));
            }
            d.alternatives.push_back(inst.id);
            h.quantum_tasks.push_back(std::move(inst));
        }
        h.decisions.push_back(std::move(d));
    }
    std::sort(h.edges.begin(), h.edges.end());
    h.edges.erase(std::unique(h.edges.begin(), h.edges.end()), h.edges.end());
    return h;
}

Workflow classic_projection(const Workflow &h) {
    if (!h.hybrid) {
        return h;
    }
    const auto report = validate(h);
    if (!report.ok()) {
        fail(ErrorCode::Validation, report.summary());
    }
    std::map<std::string, std::string> candidate_of;
    for (const auto &d : h.decisions) {
        candidate_of[d.id] = d.candidate;
    }
    Workflow w;
    w.tasks = h.tasks;
    w.mapping = h.mapping;
    w.intensity_threshold = h.intensity_threshold;
    for (const auto &[a, b] : h.edges) {
        if (h.find_task(a) == nullptr) {
            continue; // edges leaving Q or D nodes
        }
        const auto it = candidate_of.find(b);
        w.edges.emplace_back(a, it == candidate_of.end() ? b : it->second);
    }
    std::sort(w.edges.begin(), w.edges.end());
    w.edges.erase(std::unique(w.edges.begin(), w.edges.end()), w.edges.end());
    std::set<std::string> restored;
    for (const auto &q : h.quantum_tasks) {
        const auto &src = q.source.empty() ? q.id : q.source;
        if (restored.insert(src).second) {
            QuantumTask def = q;
            def.id = src;
            def.source = src;
            w.quantum_tasks.push_back(std::move(def));
        }
    }
    return w;
}

namespace {

template <typename T>
T field(const json &obj, const char *key, const std::string &where) {
    if (!obj.is_object() || !obj.contains(key)) {
        fail(ErrorCode::Parse, where + ": missing field '" + key + "'");
    }
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception &e) {
        fail(ErrorCode::Parse, where + ": field '" + key + "': " + e.what());
    }
}

template <typename T>
T field_or(const json &obj, const char *key, T fallback, const std::string &where) {
    if (!obj.contains(key)) {
        return fallback;
    }
    return field<T>(obj, key, where);
}

} // namespace

json to_json(const Workflow &w) {
    json doc;
    doc["format"] = kFormatVersion;
    doc["intensity_threshold"] = w.intensity_threshold;
    doc["tasks"] = json::array();
    for (const auto &t : w.tasks) {
        doc["tasks"].push_back({{"id", t.id},
                                {"label", t.label},
                                {"intensity", t.intensity},
                                {"action", t.action},
                                {"params", t.params}});
    }
    doc["quantum_tasks"] = json::array();
    for (const auto &q : w.quantum_tasks) {
        json jq = {{"id", q.id},         {"type", std::string(to_string(q.type))},
                   {"ref", q.ref},       {"shots", q.shots},
                   {"qubits", q.qubits}, {"params", q.params}};
        if (!q.source.empty() && q.source != q.id) {
            jq["source"] = q.source;
        }
        doc["quantum_tasks"].push_back(std::move(jq));
    }
    doc["edges"] = json::array();
    for (const auto &[a, b] : w.edges) {
        doc["edges"].push_back(json::array({a, b}));
    }
    doc["mapping"] = json::object();
    for (const auto &[label, qs] : w.mapping) {
        doc["mapping"][label] = qs;
    }
    if (w.hybrid) {
        doc["decisions"] = json::array();
        for (const auto &d : w.decisions) {
            doc["decisions"].push_back({{"id", d.id},
                                        {"candidate", d.candidate},
                                        {"alternatives", d.alternatives},
                                        {"condition", d.condition}});
        }
    }
    return doc;
}

Workflow from_json(const json &doc) {
    if (!doc.is_object()) {
        fail(ErrorCode::Parse, "workflow document must be a JSON object");
    }
    const auto version = field<int>(doc, "format", "workflow");
    if (version != kFormatVersion) {
        fail(ErrorCode::Parse, "unsupported workflow format " + std::to_string(version));
    }
    Workflow w;
    w.intensity_threshold = field_or<double>(doc, "intensity_threshold",
                                             kDefaultIntensityThreshold, "workflow");
    for (const auto &jt : field<json>(doc, "tasks", "workflow")) {
        const std::string where = "task";
        ClassicTask t;
        t.id = field<std::string>(jt, "id", where);
        t.label = field_or<std::string>(jt, "label", t.id, where + " '" + t.id + "'");
        t.intensity = field_or<double>(jt, "intensity", 0.0, where + " '" + t.id + "'");
        t.action = field_or<std::string>(jt, "action", "", where + " '" + t.id + "'");
        t.params = field_or<json>(jt, "params", json::object(), where + " '" + t.id + "'");
        w.tasks.push_back(std::move(t));
    }
    if (doc.contains("quantum_tasks")) {
        for (const auto &jq : field<json>(doc, "quantum_tasks", "workflow")) {
            QuantumTask q;
            q.id = field<std::string>(jq, "id", "quantum task");
            const std::string where = "quantum task '" + q.id + "'";
            q.type = parse_exec_type(field<std::string>(jq, "type", where));
            q.ref = field<std::string>(jq, "ref", where);
            q.shots = field_or<std::uint64_t>(jq, "shots", 0, where);
            q.qubits = field_or<unsigned>(jq, "qubits", 1, where);
            q.params = field_or<json>(jq, "params", json::object(), where);
            q.source = field_or<std::string>(jq, "source", q.id, where);
            w.quantum_tasks.push_back(std::move(q));
        }
    }
    if (doc.contains("edges")) {
        for (const auto &je : field<json>(doc, "edges", "workflow")) {
            if (!je.is_array() || je.size() != 2 || !je[0].is_string() ||
                !je[1].is_string()) {
                fail(ErrorCode::Parse, "edge must be [from, to]: " + je.dump());
            }
            w.edges.emplace_back(je[0].get<std::string>(), je[1].get<std::string>());
        }
    }
    if (doc.contains("mapping")) {
        w.mapping = field<MappingF>(doc, "mapping", "workflow");
    }
    if (doc.contains("decisions")) {
        w.hybrid = true;
        for (const auto &jd : field<json>(doc, "decisions", "workflow")) {
            DecisionNode d;
            d.id = field<std::string>(jd, "id", "decision");
            const std::string where = "decision '" + d.id + "'";
            d.candidate = field<std::string>(jd, "candidate", where);
            d.alternatives = field<std::vector<std::string>>(jd, "alternatives", where);
            d.condition = field_or<std::string>(jd, "condition", "default", where);
            w.decisions.push_back(std::move(d));
        }
    }
    return w;
}

Workflow parse_workflow(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error &e) {
        fail(ErrorCode::Parse, std::string("workflow JSON: ") + e.what());
    }
    return from_json(doc);
}

Workflow load_workflow(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        fail(ErrorCode::Io, "cannot open workflow '" + path.string() + "'");
    }
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return parse_workflow(ss.str());
    } catch (const Error &e) {
        fail(e.code(), path.string() + ": " + e.what());
    }
}

void save_workflow(const Workflow &w, const std::filesystem::path &path) {
    std::ofstream out(path);
    if (!out) {
        fail(ErrorCode::Io, "cannot write workflow '" + path.string() + "'");
    }
    out << to_json(w).dump(2) << '\n';
}

} // namespace hywf::workflow
