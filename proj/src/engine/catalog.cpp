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
#include <cmath>
#include <fstream>
#include <set>
#include <tuple>
#include <sstream>

#include "hywf/engine.hpp"
#include "hywf/error.hpp"

namespace hywf::engine {

std::string_view to_string(DeviceKind k) noexcept {
    return k == DeviceKind::SimulatedQuantum ? "simulated-quantum" : "classic";
}

DeviceKind parse_device_kind(std::string_view name) {
    if (name == "simulated-quantum") {
        return DeviceKind::SimulatedQuantum;
    }
    if (name == "classic") {
        return DeviceKind::Classic;
    }
    fail(ErrorCode::Parse, "unknown device kind '" + std::string(name) + "'");
}

bool HardwareDescriptor::supports(qsim::GateKind g) const {
    for (const auto &name : gate_set) {
        const auto k = qsim::parse_gate_kind(name);
        if (!k) {
            continue;
        }
        if (*k == g) {
            return true;
        }
        // Listing V / Vdag covers their controlled forms.
        if ((g == qsim::GateKind::CV && *k == qsim::GateKind::V) ||
            (g == qsim::GateKind::CVdag && *k == qsim::GateKind::Vdag)) {
            return true;
        }
    }
    return false;
}

namespace {

void check_descriptor(const HardwareDescriptor &d) {
    const std::string where = "device '" + d.device_id + "'";
    if (d.device_id.empty()) {
        fail(ErrorCode::Parse, "device with empty device_id");
    }
    if (d.is_quantum() && d.num_qubits < 1) {
        fail(ErrorCode::Parse, where + ": quantum devices need num_qubits >= 1");
    }
    if (!(d.readout_error >= 0.0 && d.readout_error <= 1.0)) {
        fail(ErrorCode::Parse, where + ": readout_error outside [0,1]");
    }
    if (!(d.throughput_score > 0.0) || !std::isfinite(d.throughput_score)) {
        fail(ErrorCode::Parse, where + ": throughput_score must be positive");
    }
}

} // namespace

HardwareCatalog::HardwareCatalog(std::vector<HardwareDescriptor> devices)
    : devices_(std::move(devices)) {
    if (devices_.empty()) {
        fail(ErrorCode::Parse, "hardware catalog is empty");
    }
    std::set<std::string> ids;
    for (const auto &d : devices_) {
        check_descriptor(d);
        if (!ids.insert(d.device_id).second) {
            fail(ErrorCode::Parse, "duplicate device_id '" + d.device_id + "'");
        }
    }
    if (std::none_of(devices_.begin(), devices_.end(),
                     [](const HardwareDescriptor &d) { return !d.is_quantum(); })) {
        fail(ErrorCode::Parse, "hardware catalog needs at least one classic device");
    }
    std::sort(devices_.begin(), devices_.end(),
              [](const auto &a, const auto &b) { return a.device_id < b.device_id; });
}

const HardwareDescriptor *HardwareCatalog::find(std::string_view id) const {
    for (const auto &d : devices_) {
        if (d.device_id == id) {
            return &d;
        }
    }
    return nullptr;
}

std::vector<HardwareDescriptor> HardwareCatalog::quantum_devices() const {
    std::vector<HardwareDescriptor> out;
    std::copy_if(devices_.begin(), devices_.end(), std::back_inserter(out),
                 [](const HardwareDescriptor &d) { return d.is_quantum(); });
    return out;
}

const HardwareDescriptor &HardwareCatalog::default_classic() const {
    for (const auto &d : devices_) {
        if (!d.is_quantum()) {
            return d;
        }
    }
    fail(ErrorCode::InvalidArgument, "catalog has no classic device");
}

void HardwareCatalog::upsert(HardwareDescriptor d) {
    check_descriptor(d);
    for (auto &e : devices_) {
        if (e.device_id == d.device_id) {
            if (!d.is_quantum() || e.is_quantum()) {
                e = std::move(d);
                return;
            }
            remove(e.device_id);
            break;
        }
    }
    const auto pos = std::lower_bound(
        devices_.begin(), devices_.end(), d.device_id,
        [](const HardwareDescriptor &a, const std::string &id) { return a.device_id < id; });
    devices_.insert(pos, std::move(d));
}

void HardwareCatalog::remove(std::string_view id) {
    const auto it = std::find_if(devices_.begin(), devices_.end(),
                                 [&](const auto &d) { return d.device_id == id; });
    if (it == devices_.end()) {
        fail(ErrorCode::InvalidArgument, "no device '" + std::string(id) + "'");
    }
    if (!it->is_quantum()) {
        const auto classic = std::count_if(devices_.begin(), devices_.end(),
                                           [](const auto &d) { return !d.is_quantum(); });
        if (classic == 1) {
            fail(ErrorCode::InvalidArgument, "cannot remove the last classic device");
        }
    }
    devices_.erase(it);
}

json HardwareCatalog::to_json() const {
    json out = json::array();
    for (const auto &d : devices_) {
        out.push_back({{"device_id", d.device_id},
                       {"kind", std::string(engine::to_string(d.kind))},
                       {"num_qubits", d.num_qubits},
                       {"readout_error", d.readout_error},
                       {"gate_set", d.gate_set},
                       {"queue_length", d.queue_length},
                       {"throughput_score", d.throughput_score}});
    }
    return out;
}

HardwareCatalog HardwareCatalog::from_json(const json &doc) {
    if (!doc.is_array()) {
        fail(ErrorCode::Parse, "catalog must be a JSON array of devices");
    }
    std::vector<HardwareDescriptor> devices;
    for (const auto &j : doc) {
        if (!j.is_object()) {
            fail(ErrorCode::Parse, "catalog entries must be objects");
        }
        HardwareDescriptor d;
        try {
            d.device_id = j.at("device_id").get<std::string>();
            d.kind = parse_device_kind(j.at("kind").get<std::string>());
            d.num_qubits = j.value("num_qubits", 0U);
            d.readout_error = j.value("readout_error", 0.0);
            d.gate_set = j.value("gate_set", std::vector<std::string>{});
            d.queue_length = j.value("queue_length", std::uint64_t{0});
            d.throughput_score = j.value("throughput_score", 1.0);
        } catch (const json::exception &e) {
            fail(ErrorCode::Parse, std::string("catalog entry: ") + e.what());
        }
        devices.push_back(std::move(d));
    }
    return HardwareCatalog(std::move(devices));
}

HardwareCatalog parse_catalog(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error &e) {
        fail(ErrorCode::Parse, std::string("catalog JSON: ") + e.what());
    }
    return HardwareCatalog::from_json(doc);
}

HardwareCatalog load_catalog(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        fail(ErrorCode::Io, "cannot open catalog '" + path.string() + "'");
    }
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return parse_catalog(ss.str());
    } catch (const Error &e) {
        fail(e.code(), path.string() + ": " + e.what());
    }
}

TaskRepository TaskRepository::with_builtins() {
    TaskRepository repo;
    repo.add(RepositoryEntry{"swap_distance",
                             "swap-distance",
                             "frames with segment coordinates",
                             "per-frame E_IJ distance blocks",
                             "swap_distance",
                             std::nullopt,
                             5,
                             {"H", "FREDKIN"}});
    repo.add(RepositoryEntry{"vqe_lebm",
                             "lebm",
                             "per-frame E_IJ distance blocks",
                             "per-frame largest eigenvalue",
                             "vqe_lebm",
                             std::nullopt,
                             4,
                             {"RY", "CNOT"}});
    repo.add(RepositoryEntry{"bell",
                             "state-preparation",
                             "none",
                             "bitstring",
                             "circuit",
                             qsim::named_state_circuit(qsim::NamedState::BellPhiPlus),
                             2,
                             {"H", "CNOT"}});
    repo.add(RepositoryEntry{"ghz",
                             "state-preparation",
                             "none",
                             "bitstring",
                             "circuit",
                             qsim::named_state_circuit(qsim::NamedState::GHZ),
                             3,
                             {"H", "CNOT"}});
    repo.add(RepositoryEntry{"circuit",
                             "circuit",
                             "circuit text in task params",
                             "bitstring",
                             "circuit",
                             std::nullopt,
                             1,
                             {}});
    return repo;
}

void TaskRepository::add(RepositoryEntry e) {
    if (find(e.task_id) != nullptr) {
        fail(ErrorCode::InvalidArgument, "duplicate repository entry '" + e.task_id + "'");
    }
    entries_.push_back(std::move(e));
}

const RepositoryEntry *TaskRepository::find(std::string_view task_id) const {
    for (const auto &e : entries_) {
        if (e.task_id == task_id) {
            return &e;
        }
    }
    return nullptr;
}

std::vector<RepositoryEntry>
TaskRepository::lookup_quantum_target(std::string_view goal_label) const {
    std::vector<RepositoryEntry> out;
    for (const auto &e : entries_) {
        if (e.goal_label == goal_label) {
            out.push_back(e);
        }
    }
    return out;
}

namespace {

bool gate_available(qsim::GateKind g, const HardwareDescriptor &device) {
    if (device.supports(g)) {
        return true;
    }
    if (g != qsim::GateKind::TOFFOLI && g != qsim::GateKind::FREDKIN) {
        return false;
    }
    const auto parts = qsim::decompose_gate(g);
    return std::all_of(parts.ops().begin(), parts.ops().end(),
                       [&](const qsim::Operation &op) { return device.supports(op.kind); });
}

} // namespace

std::optional<double> performance_score(const RepositoryEntry &entry,
                                        const HardwareDescriptor &device,
                                        unsigned min_qubits) {
    if (!device.is_quantum()) {
        return std::nullopt;
    }
    const unsigned need = std::max(entry.min_qubits, min_qubits);
    if (need > device.num_qubits) {
        return std::nullopt;
    }
    for (const auto &name : entry.required_gates) {
        const auto g = qsim::parse_gate_kind(name);
        if (!g || !gate_available(*g, device)) {
            return std::nullopt;
        }
    }
    return device.throughput_score * std::pow(1.0 - device.readout_error, need) /
           (1.0 + static_cast<double>(device.queue_length));
}

std::optional<qsim::Circuit> transpile_fit(const qsim::Circuit &circuit,
                                           const HardwareDescriptor &device) {
    if (!device.is_quantum() || circuit.num_qubits() > device.num_qubits) {
        return std::nullopt;
    }
    qsim::Circuit out(circuit.num_qubits());
    for (const auto &op : circuit.ops()) {
        if (op.kind == qsim::GateKind::Custom || device.supports(op.kind)) {
            if (op.kind == qsim::GateKind::Custom) {
                out.add(op.gate, op.targets);
            } else {
                out.add(op.kind, op.targets, op.angle);
            }
            continue;
        }
        if (op.kind != qsim::GateKind::TOFFOLI && op.kind != qsim::GateKind::FREDKIN) {
            return std::nullopt;
        }
        const auto parts = qsim::decompose_gate(op.kind);
        for (const auto &p : parts.ops()) {
            if (!device.supports(p.kind)) {
                return std::nullopt;
            }
        }
        out.append(parts, op.targets);
    }
    if (!circuit.measured().empty()) {
        out.measure(circuit.measured());
    }
    return out;
}

json DecisionOutcome::to_json() const {
    json table = json::array();
    for (const auto &s : score_table) {
        table.push_back({{"task", s.task_id},
                         {"entry", s.entry_id},
                         {"device", s.device_id},
                         {"score", s.score ? json(*s.score) : json(nullptr)}});
    }
    json out = {{"chosen", quantum ? "quantum" : "classic"},
                {"reason", reason},
                {"scores", std::move(table)}};
    if (quantum) {
        out["device"] = device_id;
        out["task"] = task_id;
    }
    return out;
}

DecisionOutcome default_condition(const DecisionContext &ctx) {
    DecisionOutcome out;
    const auto qdevs = ctx.catalog.quantum_devices();
    bool any_target = false;
    for (const auto &alt : ctx.node.alternatives) {
        const auto *q = ctx.workflow.find_quantum(alt);
        const auto *entry = q != nullptr ? ctx.repository.find(q->ref) : nullptr;
        if (entry == nullptr) {
            continue;
        }
        any_target = true;
        for (const auto &d : qdevs) {
            out.score_table.push_back(ScoreEntry{
                alt, entry->task_id, d.device_id, performance_score(*entry, d, q->qubits)});
        }
    }
    if (qdevs.empty()) {
        out.reason = "no-quantum-device";
        return out;
    }
    if (!any_target) {
        out.reason = "no-quantum-target";
        return out;
    }
    const ScoreEntry *best = nullptr;
    for (const auto &s : out.score_table) {
        if (!s.score) {
            continue;
        }
        if (best == nullptr || *s.score > *best->score ||
            (*s.score == *best->score &&
             std::tie(s.device_id, s.task_id) < std::tie(best->device_id, best->task_id))) {
            best = &s;
        }
    }
    if (best == nullptr) {
        out.reason = "capacity";
        return out;
    }
    if (*best->score < ctx.score_floor) {
        out.reason = "below-floor";
        return out;
    }
    out.quantum = true;
    out.device_id = best->device_id;
    out.task_id = best->task_id;
    out.reason = "best-score";
    return out;
}

} // namespace hywf::engine
