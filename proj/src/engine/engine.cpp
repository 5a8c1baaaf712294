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
#include <future>
#include <set>

#include "engine_builtins.hpp"
#include "hywf/engine.hpp"
#include "hywf/error.hpp"

namespace hywf::engine {

std::uint64_t fnv1a(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t node_seed(std::uint64_t base, std::string_view node_id) {
    return base + fnv1a(node_id);
}

const json &NodeInputs::single() const {
    if (by_node.size() != 1) {
        fail(ErrorCode::Execution,
             "expected exactly one input, got " + std::to_string(by_node.size()));
    }
    return by_node.begin()->second;
}

json ExecutionRecord::to_json() const {
    json out = {{"node", node},   {"kind", kind},       {"start", start},
                {"end", end},     {"device", device},   {"payload", payload},
                {"errors", errors}};
    if (histogram) {
        out["histogram"] = {{"shots", histogram->shots}, {"counts", histogram->counts}};
    }
    if (decision) {
        out["decision"] = decision->to_json();
    }
    return out;
}

const ExecutionRecord *RunResult::record(std::string_view node) const {
    for (const auto &r : records) {
        if (r.node == node) {
            return &r;
        }
    }
    return nullptr;
}

std::string RunResult::log_text() const {
    std::string out;
    for (const auto &r : records) {
        out += r.to_json().dump();
        out += '\n';
    }
    return out;
}

struct Engine::State {
    mutable std::mutex mu;
    HardwareCatalog catalog;
    std::map<std::string, std::uint64_t> enqueued;
    std::map<std::string, std::unique_ptr<std::mutex>> device_locks;
    std::vector<std::string> in_flight;
    std::size_t completed = 0;

    std::map<std::string, Action> actions;
    std::map<std::string, Routine> routines;
    std::map<std::string, Condition> conditions;
    std::function<void(const std::string &, const std::string &)> before_quantum;
    std::function<void(const ExecutionRecord &)> on_complete;

    /// Catalog with live queue lengths; caller holds mu.
    HardwareCatalog live_catalog() const {
        HardwareCatalog snap = catalog;
        for (const auto &[id, n] : enqueued) {
            if (const auto *d = snap.find(id); d != nullptr && n > 0) {
                HardwareDescriptor copy = *d;
                copy.queue_length += n;
                snap.upsert(std::move(copy));
            }
        }
        return snap;
    }

    std::mutex &device_lock(const std::string &id) {
        std::lock_guard lock(mu);
        auto &slot = device_locks[id];
        if (!slot) {
            slot = std::make_unique<std::mutex>();
        }
        return *slot;
    }
};

Engine::Engine(HardwareCatalog catalog, TaskRepository repository, EngineConfig config)
    : repository_(std::move(repository)), config_(std::move(config)),
      state_(std::make_unique<State>()) {
    state_->catalog = std::move(catalog);
    state_->conditions["default"] = default_condition;
    register_builtin_actions(*this);
    register_builtin_routines(*this);
}

Engine::~Engine() = default;

void Engine::register_action(std::string name, Action action) {
    std::lock_guard lock(state_->mu);
    state_->actions[std::move(name)] = std::move(action);
}

void Engine::register_routine(std::string name, Routine routine) {
    std::lock_guard lock(state_->mu);
    state_->routines[std::move(name)] = std::move(routine);
}

void Engine::register_condition(std::string name, Condition condition) {
    std::lock_guard lock(state_->mu);
    state_->conditions[std::move(name)] = std::move(condition);
}

void Engine::on_before_quantum_execute(
    std::function<void(const std::string &, const std::string &)> hook) {
    std::lock_guard lock(state_->mu);
    state_->before_quantum = std::move(hook);
}

void Engine::on_node_complete(std::function<void(const ExecutionRecord &)> hook) {
    std::lock_guard lock(state_->mu);
    state_->on_complete = std::move(hook);
}

void Engine::upsert_device(HardwareDescriptor d) {
    std::lock_guard lock(state_->mu);
    state_->catalog.upsert(std::move(d));
}

void Engine::remove_device(std::string_view id) {
    std::lock_guard lock(state_->mu);
    state_->catalog.remove(id);
}

HardwareCatalog Engine::catalog() const {
    std::lock_guard lock(state_->mu);
    return state_->catalog;
}

MonitorSnapshot Engine::monitor() const {
    std::lock_guard lock(state_->mu);
    return MonitorSnapshot{state_->live_catalog().devices(), state_->in_flight,
                           state_->completed};
}

namespace {

struct Binding {
    HardwareDescriptor device;
};

} // namespace

RunResult Engine::run(const workflow::Workflow &w) {
    const auto report = workflow::validate(w);
    if (!report.ok()) {
        fail(ErrorCode::Validation, report.summary());
    }
    RunResult result;
    result.plan = workflow::topological_order(w);

    std::set<std::string> processed;
    std::set<std::string> skipped;
    std::map<std::string, NodeInputs> exported;
    std::map<std::string, Binding> bindings;
    std::mutex bind_mu;
    std::uint64_t tick = 0;

    auto gather_inputs = [&](const std::string &node) {
        NodeInputs in;
        for (const auto &p : w.predecessors(node)) {
            if (skipped.count(p) != 0) {
                continue;
            }
            for (const auto &[k, v] : exported.at(p).by_node) {
                in.by_node[k] = v;
            }
        }
        return in;
    };

    auto execute = [&](const std::string &node, const NodeInputs &inputs,
                       std::uint64_t start) -> std::pair<ExecutionRecord, NodeInputs> {
        ExecutionRecord rec;
        rec.node = node;
        rec.start = start;
        rec.end = start + 1;
        const auto seed = node_seed(config_.seed, node);
        NodeInputs out;
        try {
            switch (w.kind_of(node)) {
            case workflow::NodeKind::Classic: {
                const auto &task = *w.find_task(node);
                rec.kind = "classic";
                Action action;
                {
                    std::lock_guard lock(state_->mu);
                    rec.device = state_->catalog.default_classic().device_id;
                    const auto name = task.action.empty() ? std::string("noop") : task.action;
                    const auto it = state_->actions.find(name);
                    if (it == state_->actions.end()) {
                        fail(ErrorCode::Execution, "unknown action '" + name + "'");
                    }
                    action = it->second;
                }
                rec.payload = action(ActionContext{task, inputs, config_.run_context, seed});
                out.by_node[node] = rec.payload;
                break;
            }
            case workflow::NodeKind::Decision: {
                const auto &d = *w.find_decision(node);
                rec.kind = "decision";
                std::lock_guard lock(state_->mu);
                const auto it = state_->conditions.find(d.condition);
                if (it == state_->conditions.end()) {
                    fail(ErrorCode::Execution, "unknown condition '" + d.condition + "'");
                }
                const auto live = state_->live_catalog();
                auto outcome =
                    it->second(DecisionContext{w, d, live, repository_, config_.score_floor});
                if (outcome.quantum) {
                    const auto pair_listed = std::any_of(
                        outcome.score_table.begin(), outcome.score_table.end(),
                        [&](const ScoreEntry &s) {
                            return s.score && s.device_id == outcome.device_id &&
                                   s.task_id == outcome.task_id;
                        });
                    const auto *dev = state_->catalog.find(outcome.device_id);
                    if (!pair_listed || dev == nullptr ||
                        std::find(d.alternatives.begin(), d.alternatives.end(),
                                  outcome.task_id) == d.alternatives.end()) {
                        fail(ErrorCode::Execution, "condition chose an unscored quantum pair");
                    }
                    ++state_->enqueued[outcome.device_id];
                    std::lock_guard bl(bind_mu);
                    bindings[outcome.task_id] = Binding{*dev};
                    rec.device = outcome.device_id;
                }
                rec.payload = outcome.to_json();
                rec.decision = std::move(outcome);
                out = inputs;
                break;
            }
            case workflow::NodeKind::Quantum: {
                const auto &q = *w.find_quantum(node);
                rec.kind = "quantum";
                Binding binding;
                {
                    std::lock_guard bl(bind_mu);
                    const auto it = bindings.find(node);
                    if (it == bindings.end()) {
                        fail(ErrorCode::Execution, "quantum node '" + node + "' was not bound");
                    }
                    binding = it->second;
                }
                rec.device = binding.device.device_id;
                const auto *entry = repository_.find(q.ref);
                if (entry == nullptr) {
                    fail(ErrorCode::Execution, "no repository entry '" + q.ref + "'");
                }
                Routine routine;
                {
                    std::lock_guard lock(state_->mu);
                    const auto it = state_->routines.find(entry->routine);
                    if (it == state_->routines.end()) {
                        fail(ErrorCode::Execution, "unknown routine '" + entry->routine + "'");
                    }
                    routine = it->second;
                }
                auto release = [&] {
                    std::lock_guard lock(state_->mu);
                    --state_->enqueued[rec.device];
                    auto &f = state_->in_flight;
                    f.erase(std::remove(f.begin(), f.end(), node), f.end());
                };
                std::lock_guard device_slot(state_->device_lock(rec.device));
                std::function<void(const std::string &, const std::string &)> hook;
                {
                    std::lock_guard lock(state_->mu);
                    state_->in_flight.push_back(node);
                    hook = state_->before_quantum;
                }
                try {
                    if (hook) {
                        hook(node, rec.device);
                    }
                    rec.payload = routine(RoutineContext{q, *entry, binding.device, inputs,
                                                         config_.run_context, seed,
                                                         &rec.histogram});
                } catch (...) {
                    release();
                    throw;
                }
                release();
                out.by_node[node] = rec.payload;
                break;
            }
            }
        } catch (const std::exception &e) {
            rec.errors.emplace_back(e.what());
        }
        return {std::move(rec), std::move(out)};
    };

    const auto nodes = w.node_ids();
    while (processed.size() < nodes.size() && result.ok) {
        std::vector<std::string> ready;
        for (const auto &n : nodes) {
            if (processed.count(n) != 0) {
                continue;
            }
            const auto preds = w.predecessors(n);
            if (std::all_of(preds.begin(), preds.end(),
                            [&](const std::string &p) { return processed.count(p) != 0; })) {
                ready.push_back(n);
            }
        }
        std::sort(ready.begin(), ready.end());
        std::vector<std::string> runnable;
        for (const auto &n : ready) {
            processed.insert(n);
            if (skipped.count(n) == 0) {
                runnable.push_back(n);
            }
        }
        if (runnable.empty()) {
            continue;
        }
        std::vector<NodeInputs> inputs;
        for (const auto &n : runnable) {
            inputs.push_back(gather_inputs(n));
        }
        std::vector<std::pair<ExecutionRecord, NodeInputs>> done;
        if (config_.concurrent && runnable.size() > 1) {
            std::vector<std::future<std::pair<ExecutionRecord, NodeInputs>>> jobs;
            for (std::size_t i = 0; i < runnable.size(); ++i) {
                jobs.push_back(std::async(std::launch::async, execute, runnable[i],
                                          std::cref(inputs[i]), tick));
            }
            for (auto &j : jobs) {
                done.push_back(j.get());
            }
        } else {
            for (std::size_t i = 0; i < runnable.size(); ++i) {
                done.push_back(execute(runnable[i], inputs[i], tick));
            }
        }
        ++tick;
        for (auto &[rec, out] : done) {
            if (rec.decision) {
                const auto &d = *w.find_decision(rec.node);
                for (const auto &alt : d.alternatives) {
                    if (!rec.decision->quantum || alt != rec.decision->task_id) {
                        skipped.insert(alt);
                    }
                }
                if (rec.decision->quantum) {
                    skipped.insert(d.candidate);
                }
            }
            if (!rec.errors.empty() && result.ok) {
                result.ok = false;
                result.error = rec.node + ": " + rec.errors.front();
            }
            exported[rec.node] = std::move(out);
            std::function<void(const ExecutionRecord &)> hook;
            {
                std::lock_guard lock(state_->mu);
                ++state_->completed;
                hook = state_->on_complete;
            }
            if (hook) {
                hook(rec);
            }
            result.records.push_back(std::move(rec));
        }
    }

    // Quantum slots reserved for nodes that never ran.
    {
        std::lock_guard lock(state_->mu);
        for (const auto &[node, b] : bindings) {
            if (result.record(node) == nullptr) {
                --state_->enqueued[b.device.device_id];
            }
        }
    }

    if (config_.log_path) {
        std::ofstream log(*config_.log_path, std::ios::app);
        if (!log) {
            fail(ErrorCode::Io, "cannot write log '" + config_.log_path->string() + "'");
        }
        log << result.log_text();
    }
    return result;
}

} // namespace hywf::engine
