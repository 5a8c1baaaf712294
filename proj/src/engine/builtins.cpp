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
#include <cmath>
#include <cstdio>
#include <fstream>

#include "engine_builtins.hpp"
#include "hywf/error.hpp"
#include "hywf/md.hpp"
#include "hywf/swaptest.hpp"
#include "hywf/vqe.hpp"

namespace hywf::engine {

namespace {

/// Task params first, then the run context.
std::optional<json> lookup(const json &params, const json &run_context, const char *key) {
    if (params.is_object() && params.contains(key)) {
        return params.at(key);
    }
    if (run_context.is_object() && run_context.contains(key)) {
        return run_context.at(key);
    }
    return std::nullopt;
}

std::filesystem::path resolve(const std::filesystem::path &p, const json &run_context) {
    if (p.is_absolute() || !run_context.contains("base_dir")) {
        return p;
    }
    return std::filesystem::path(run_context.at("base_dir").get<std::string>()) / p;
}

json coords(const md::Frame &frame, const md::Segment &seg) {
    json out = json::array();
    for (int id : seg.atom_ids) {
        const auto &p = frame.position(id);
        out.push_back(json::array({p.x, p.y, p.z}));
    }
    return out;
}

std::vector<md::Vec3> to_points(const json &arr) {
    std::vector<md::Vec3> out;
    for (const auto &p : arr) {
        out.push_back(md::Vec3{p.at(0).get<double>(), p.at(1).get<double>(),
                               p.at(2).get<double>()});
    }
    return out;
}

Eigen::MatrixXd to_matrix(const json &rows) {
    const auto k = static_cast<Eigen::Index>(rows.size());
    Eigen::MatrixXd m(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
        const auto &row = rows.at(static_cast<std::size_t>(i));
        if (row.size() != rows.size()) {
            fail(ErrorCode::Execution, "distance block must be square");
        }
        for (Eigen::Index j = 0; j < k; ++j) {
            m(i, j) = row.at(static_cast<std::size_t>(j)).get<double>();
        }
    }
    return m;
}

json from_matrix(const Eigen::MatrixXd &m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            row.push_back(m(i, j));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

json load_trajectory(const ActionContext &ctx) {
    const auto path = lookup(ctx.task.params, ctx.run_context, "trajectory");
    const auto segs = lookup(ctx.task.params, ctx.run_context, "segments");
    if (!path || !segs) {
        fail(ErrorCode::Execution, "load_trajectory needs 'trajectory' and 'segments'");
    }
    const auto segments = md::parse_segments(segs->get<std::string>());
    if (segments.size() != 2) {
        fail(ErrorCode::Execution, "expected exactly two segments");
    }
    md::TrajectoryReader reader(resolve(path->get<std::string>(), ctx.run_context));
    json frames = json::array();
    while (auto f = reader.next()) {
        frames.push_back({{"index", f->index},
                          {"time", f->time},
                          {"a", coords(*f, segments[0])},
                          {"b", coords(*f, segments[1])}});
    }
    return {{"seg_i", segments[0].label}, {"seg_j", segments[1].label}, {"frames", frames}};
}

json bipartite_distances(const ActionContext &ctx) {
    const auto &in = ctx.inputs.single();
    json frames = json::array();
    for (const auto &f : in.at("frames")) {
        const auto a = to_points(f.at("a"));
        const auto b = to_points(f.at("b"));
        if (a.size() != b.size()) {
            fail(ErrorCode::Execution, "segments differ in length");
        }
        Eigen::MatrixXd e(static_cast<Eigen::Index>(a.size()),
                          static_cast<Eigen::Index>(b.size()));
        for (std::size_t i = 0; i < a.size(); ++i) {
            for (std::size_t j = 0; j < b.size(); ++j) {
                e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                    md::euclidean_distance(a[i], b[j]);
            }
        }
        frames.push_back({{"index", f.at("index")}, {"time", f.at("time")}, {"e", from_matrix(e)}});
    }
    return {{"frames", frames}};
}

json classical_lebms(const ActionContext &ctx) {
    const auto &in = ctx.inputs.single();
    json frames = json::array();
    for (const auto &f : in.at("frames")) {
        const auto b = md::bipartite_from_block(to_matrix(f.at("e")));
        frames.push_back({{"index", f.at("index")},
                          {"time", f.at("time")},
                          {"lebm", md::classical_lebm(b.values)}});
    }
    return {{"frames", frames}};
}

json write_cv(const ActionContext &ctx) {
    const auto &in = ctx.inputs.single();
    md::CvSeries series;
    json cv = json::array();
    for (const auto &f : in.at("frames")) {
        series.points.push_back(md::CvPoint{f.at("index").get<long>(),
                                            f.at("time").get<double>(),
                                            f.at("lebm").get<double>()});
        cv.push_back(f);
    }
    json out = {{"cv", cv}};
    if (const auto dir = lookup(ctx.task.params, ctx.run_context, "out_dir")) {
        const auto name = ctx.task.params.value("file", std::string("cv.csv"));
        const auto path = std::filesystem::path(dir->get<std::string>()) / name;
        std::ofstream f(path);
        if (!f) {
            fail(ErrorCode::Io, "cannot write '" + path.string() + "'");
        }
        f << md::cv_series_csv(series);
        out["file"] = name;
    }
    return out;
}

json run_circuit_routine(const RoutineContext &ctx) {
    qsim::Circuit circuit(1);
    if (ctx.entry.circuit) {
        circuit = *ctx.entry.circuit;
    } else if (ctx.task.params.contains("circuit")) {
        circuit = qsim::Circuit::from_text(ctx.task.params.at("circuit").get<std::string>());
    } else {
        fail(ErrorCode::Execution, "quantum task '" + ctx.task.id + "' has no circuit");
    }
    const auto fitted = transpile_fit(circuit, ctx.device);
    if (!fitted) {
        fail(ErrorCode::Capacity, "circuit does not fit device '" + ctx.device.device_id + "'");
    }
    const auto state = qsim::run_circuit(*fitted);
    std::vector<unsigned> qubits = fitted->measured();
    if (qubits.empty()) {
        for (unsigned q = 0; q < fitted->num_qubits(); ++q) {
            qubits.push_back(q);
        }
    }
    const bool single = ctx.task.type == workflow::ExecType::CircuitExecution;
    const std::uint64_t shots = single ? 1 : std::max<std::uint64_t>(ctx.task.shots, 1);
    auto hist = qsim::measure(state, qubits, shots, ctx.seed, ctx.device.readout_error);
    json out = single ? json{{"bitstring", hist.mode()}}
                      : json{{"mode", hist.mode()}, {"shots", shots}};
    *ctx.histogram = std::move(hist);
    return out;
}

json swap_distance_routine(const RoutineContext &ctx) {
    const auto &in = ctx.inputs.single();
    const double flip = ctx.task.shots > 0 ? ctx.device.readout_error : 0.0;
    json frames = json::array();
    std::uint64_t offset = 0;
    for (const auto &f : in.at("frames")) {
        const auto a = to_points(f.at("a"));
        const auto b = to_points(f.at("b"));
        if (a.size() != b.size()) {
            fail(ErrorCode::Execution, "segments differ in length");
        }
        const auto est =
            swaptest::distance_matrix_quantum(a, b, ctx.task.shots, ctx.seed + offset, flip);
        offset += a.size() * b.size();
        Eigen::MatrixXd e(static_cast<Eigen::Index>(a.size()),
                          static_cast<Eigen::Index>(b.size()));
        double max_err = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            for (std::size_t j = 0; j < b.size(); ++j) {
                e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = est[i][j].value;
                max_err = std::max(max_err, std::abs(est[i][j].value - est[i][j].exact));
            }
        }
        frames.push_back({{"index", f.at("index")},
                          {"time", f.at("time")},
                          {"e", from_matrix(e)},
                          {"max_abs_err", max_err}});
    }
    return {{"frames", frames}};
}

json vqe_lebm_routine(const RoutineContext &ctx) {
    const auto &in = ctx.inputs.single();
    vqe::HyperparamSetting base;
    if (const auto s = lookup(ctx.task.params, ctx.run_context, "vqe")) {
        base = settings_from_json(*s, base);
    }
    base.shots = ctx.task.shots;
    base.readout_flip = ctx.task.shots > 0 ? ctx.device.readout_error : 0.0;
    json frames = json::array();
    std::uint64_t k = 0;
    for (const auto &f : in.at("frames")) {
        const auto b = md::bipartite_from_block(to_matrix(f.at("e")));
        const auto dim = static_cast<unsigned>(b.values.rows());
        if (dim > (1U << ctx.device.num_qubits)) {
            fail(ErrorCode::Capacity, "matrix needs more qubits than device '" +
                                          ctx.device.device_id + "' has");
        }
        vqe::HyperparamSetting pi = base;
        pi.seed = ctx.seed + k++;
        const auto r = vqe::lebm_vqe(b.values, pi);
        frames.push_back({{"index", f.at("index")},
                          {"time", f.at("time")},
                          {"lebm", r.lambda_vqe},
                          {"iterations", r.iterations_used},
                          {"converged", r.converged}});
    }
    return {{"frames", frames}};
}

} // namespace

void register_builtin_actions(Engine &engine) {
    engine.register_action("noop", [](const ActionContext &) { return json::object(); });
    engine.register_action("load_trajectory", load_trajectory);
    engine.register_action("bipartite_distances", bipartite_distances);
    engine.register_action("lebm", classical_lebms);
    engine.register_action("write_cv", write_cv);
}

void register_builtin_routines(Engine &engine) {
    engine.register_routine("circuit", run_circuit_routine);
    engine.register_routine("swap_distance", swap_distance_routine);
    engine.register_routine("vqe_lebm", vqe_lebm_routine);
}

vqe::HyperparamSetting settings_from_json(const json &j, vqe::HyperparamSetting base) {
    if (!j.is_object()) {
        fail(ErrorCode::InvalidArgument, "settings must be a JSON object");
    }
    try {
        for (const auto &[key, v] : j.items()) {
            if (key == "ansatz_layers") {
                base.ansatz_layers = v.get<unsigned>();
            } else if (key == "entangler") {
                base.entangler = vqe::parse_entangler(v.get<std::string>());
            } else if (key == "optimizer") {
                base.optimizer = vqe::parse_optimizer(v.get<std::string>());
            } else if (key == "learning_rate") {
                base.learning_rate = v.get<double>();
            } else if (key == "max_iters") {
                base.max_iters = v.get<unsigned>();
            } else if (key == "shots") {
                base.shots = v.get<std::uint64_t>();
            } else if (key == "seed") {
                base.seed = v.get<std::uint64_t>();
            } else if (key == "restarts") {
                base.restarts = v.get<unsigned>();
            } else if (key == "readout_flip") {
                base.readout_flip = v.get<double>();
            } else {
                fail(ErrorCode::InvalidArgument, "unknown setting '" + key + "'");
            }
        }
    } catch (const json::exception &e) {
        fail(ErrorCode::InvalidArgument, std::string("settings: ") + e.what());
    }
    base.validate();
    return base;
}

json settings_to_json(const vqe::HyperparamSetting &s) {
    return {{"ansatz_layers", s.ansatz_layers},
            {"entangler", std::string(vqe::to_string(s.entangler))},
            {"optimizer", std::string(vqe::to_string(s.optimizer))},
            {"learning_rate", s.learning_rate},
            {"max_iters", s.max_iters},
            {"shots", s.shots},
            {"seed", s.seed},
            {"restarts", s.restarts},
            {"readout_flip", s.readout_flip}};
}

std::vector<MdPipelineRow> md_pipeline(const std::filesystem::path &trajectory,
                                       const std::string &segments,
                                       const MdPipelineOptions &options,
                                       const vqe::HyperparamSetting &settings) {
    const auto segs = md::parse_segments(segments);
    if (segs.size() != 2) {
        fail(ErrorCode::InvalidArgument, "expected exactly two segments");
    }
    md::TrajectoryReader reader(trajectory);
    std::vector<MdPipelineRow> rows;
    std::uint64_t frame_no = 0;
    while (auto f = reader.next()) {
        MdPipelineRow row{f->index, f->time, {}, {}, {}, {}};
        if (options.classic) {
            row.lebm_classic = md::classical_lebm(md::build_bipartite(*f, segs[0], segs[1]).values);
        }
        if (options.quantum) {
            std::vector<md::Vec3> a, b;
            for (int id : segs[0].atom_ids) {
                a.push_back(f->position(id));
            }
            for (int id : segs[1].atom_ids) {
                b.push_back(f->position(id));
            }
            if (a.size() != b.size()) {
                fail(ErrorCode::InvalidArgument, "segments differ in length");
            }
            const auto pairs = a.size() * b.size();
            const auto est = swaptest::distance_matrix_quantum(
                a, b, options.shots, options.seed + frame_no * pairs, options.readout_flip);
            Eigen::MatrixXd e(static_cast<Eigen::Index>(a.size()),
                              static_cast<Eigen::Index>(b.size()));
            double max_abs = 0.0;
            double max_rel = 0.0;
            for (std::size_t i = 0; i < a.size(); ++i) {
                for (std::size_t j = 0; j < b.size(); ++j) {
                    const auto &d = est[i][j];
                    e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = d.value;
                    const double err = std::abs(d.value - d.exact);
                    max_abs = std::max(max_abs, err);
                    if (d.exact > 0.0) {
                        max_rel = std::max(max_rel, err / d.exact);
                    }
                }
            }
            row.swap_max_abs_err = max_abs;
            row.swap_max_rel_err = max_rel;
            vqe::HyperparamSetting pi = settings;
            pi.seed = settings.seed + options.seed + frame_no;
            row.lebm_vqe = vqe::lebm_vqe(md::bipartite_from_block(e).values, pi).lambda_vqe;
        }
        rows.push_back(row);
        ++frame_no;
    }
    return rows;
}

} // namespace hywf::engine
