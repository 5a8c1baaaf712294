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
#include <cstring>
#include <new>
#include <string>

#include <json.hpp>

#include "hywf/encode.hpp"
#include "hywf/engine.hpp"
#include "hywf/error.hpp"
#include "hywf/hywf.h"
#include "hywf/md.hpp"
#include "hywf/pauli.hpp"
#include "hywf/qsim.hpp"
#include "hywf/swaptest.hpp"
#include "hywf/vqe.hpp"
#include "hywf/workflow.hpp"

using nlohmann::json;

struct hywf_register {
    hywf::qsim::QuantumRegister reg;
};
struct hywf_catalog {
    hywf::engine::HardwareCatalog catalog;
};
struct hywf_workflow {
    hywf::workflow::Workflow wf;
};
struct hywf_engine {
    hywf::engine::Engine engine;
};

namespace {

thread_local std::string g_last_error;

hywf_status to_status(hywf::ErrorCode c) {
    using hywf::ErrorCode;
    switch (c) {
    case ErrorCode::InvalidArgument:
        return HYWF_ERR_INVALID_ARGUMENT;
    case ErrorCode::Capacity:
        return HYWF_ERR_CAPACITY;
    case ErrorCode::UnsupportedGate:
        return HYWF_ERR_UNSUPPORTED_GATE;
    case ErrorCode::MissingParameter:
        return HYWF_ERR_MISSING_PARAMETER;
    case ErrorCode::Encoding:
        return HYWF_ERR_ENCODING;
    case ErrorCode::Io:
        return HYWF_ERR_IO;
    case ErrorCode::Parse:
        return HYWF_ERR_PARSE;
    case ErrorCode::Validation:
        return HYWF_ERR_VALIDATION;
    case ErrorCode::Execution:
        return HYWF_ERR_EXECUTION;
    }
    return HYWF_ERR_INTERNAL;
}

template <typename F> hywf_status guarded(F &&f) {
    try {
        f();
        g_last_error.clear();
        return HYWF_OK;
    } catch (const hywf::Error &e) {
        g_last_error = e.what();
        return to_status(e.code());
    } catch (const json::exception &e) {
        g_last_error = e.what();
        return HYWF_ERR_PARSE;
    } catch (const std::bad_alloc &) {
        g_last_error = "out of memory";
        return HYWF_ERR_INTERNAL;
    } catch (const std::exception &e) {
        g_last_error = e.what();
        return HYWF_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return HYWF_ERR_INTERNAL;
    }
}

void need(const void *p, const char *what) {
    if (p == nullptr) {
        hywf::fail(hywf::ErrorCode::InvalidArgument, std::string(what) + " is NULL");
    }
}

char *dup_string(const std::string &s) {
    auto *out = static_cast<char *>(std::malloc(s.size() + 1));
    if (out == nullptr) {
        throw std::bad_alloc();
    }
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

Eigen::MatrixXd read_matrix(const double *m, size_t dim) {
    need(m, "matrix");
    if (dim == 0) {
        hywf::fail(hywf::ErrorCode::InvalidArgument, "matrix dimension is zero");
    }
    const auto d = static_cast<Eigen::Index>(dim);
    Eigen::MatrixXd out(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
            out(i, j) = m[i * d + j];
        }
    }
    return out;
}

hywf::vqe::HyperparamSetting from_c(const hywf_vqe_settings &s) {
    hywf::vqe::HyperparamSetting pi;
    pi.ansatz_layers = s.ansatz_layers;
    pi.entangler = s.entangler == HYWF_RING ? hywf::vqe::Entangler::Ring
                                            : hywf::vqe::Entangler::LinearChain;
    pi.optimizer = s.optimizer == HYWF_SPSA ? hywf::vqe::Optimizer::Spsa
                                            : hywf::vqe::Optimizer::GradientDescent;
    pi.learning_rate = s.learning_rate;
    pi.max_iters = s.max_iters;
    pi.shots = s.shots;
    pi.seed = s.seed;
    pi.restarts = s.restarts;
    pi.readout_flip = s.readout_flip;
    return pi;
}

json histogram_json(const hywf::qsim::ShotHistogram &h) {
    return {{"shots", h.shots}, {"counts", h.counts}, {"mode", h.mode()}};
}

} // namespace

extern "C" {

const char *hywf_version(void) { return "1.0.0"; }

const char *hywf_last_error(void) { return g_last_error.c_str(); }

const char *hywf_status_name(hywf_status status) {
    switch (status) {
    case HYWF_OK:
        return "ok";
    case HYWF_ERR_INVALID_ARGUMENT:
        return "invalid-argument";
    case HYWF_ERR_CAPACITY:
        return "capacity";
    case HYWF_ERR_UNSUPPORTED_GATE:
        return "unsupported-gate";
    case HYWF_ERR_MISSING_PARAMETER:
        return "missing-parameter";
    case HYWF_ERR_ENCODING:
        return "encoding";
    case HYWF_ERR_IO:
        return "io";
    case HYWF_ERR_PARSE:
        return "parse";
    case HYWF_ERR_VALIDATION:
        return "validation";
    case HYWF_ERR_EXECUTION:
        return "execution";
    case HYWF_ERR_INTERNAL:
        return "internal";
    }
    return "unknown";
}

void hywf_string_free(char *s) { std::free(s); }

hywf_status hywf_register_create(unsigned num_qubits, hywf_register **out) {
    return guarded([&] {
        need(out, "out");
        *out = new hywf_register{hywf::qsim::QuantumRegister(num_qubits)};
    });
}

hywf_status hywf_register_from_amplitudes(const double *re, const double *im, size_t len,
                                          hywf_register **out) {
    return guarded([&] {
        need(re, "re");
        need(out, "out");
        std::vector<hywf::qsim::Complex> amps(len);
        for (size_t i = 0; i < len; ++i) {
            amps[i] = {re[i], im != nullptr ? im[i] : 0.0};
        }
        *out = new hywf_register{hywf::qsim::QuantumRegister::from_amplitudes(std::move(amps))};
    });
}

hywf_status hywf_register_named_state(const char *name, hywf_register **out) {
    return guarded([&] {
        need(name, "name");
        need(out, "out");
        *out = new hywf_register{hywf::qsim::prepare_named_state(std::string_view(name))};
    });
}

void hywf_register_free(hywf_register *reg) { delete reg; }

hywf_status hywf_register_num_qubits(const hywf_register *reg, unsigned *out) {
    return guarded([&] {
        need(reg, "register");
        need(out, "out");
        *out = reg->reg.num_qubits();
    });
}

hywf_status hywf_register_amplitudes(const hywf_register *reg, double *re, double *im,
                                     size_t len) {
    return guarded([&] {
        need(reg, "register");
        need(re, "re");
        if (len != reg->reg.dim()) {
            hywf::fail(hywf::ErrorCode::InvalidArgument,
                       "buffer holds " + std::to_string(len) + " amplitudes, register has " +
                           std::to_string(reg->reg.dim()));
        }
        const auto amps = reg->reg.amplitudes();
        for (size_t i = 0; i < len; ++i) {
            re[i] = amps[i].real();
            if (im != nullptr) {
                im[i] = amps[i].imag();
            }
        }
    });
}

hywf_status hywf_register_apply(hywf_register *reg, const char *gate,
                                const unsigned *targets, size_t num_targets, double angle,
                                int has_angle) {
    return guarded([&] {
        need(reg, "register");
        need(gate, "gate");
        need(targets, "targets");
        const auto g = has_angle != 0 ? hywf::qsim::standard_gate(gate, angle)
                                      : hywf::qsim::standard_gate(gate);
        reg->reg.apply(g, std::span<const unsigned>(targets, num_targets));
    });
}

hywf_status hywf_register_apply_circuit(hywf_register *reg, const char *circuit) {
    return guarded([&] {
        need(reg, "register");
        need(circuit, "circuit");
        const auto c = hywf::qsim::Circuit::from_text(circuit);
        if (c.num_qubits() != reg->reg.num_qubits()) {
            hywf::fail(hywf::ErrorCode::InvalidArgument, "circuit and register sizes differ");
        }
        reg->reg.apply(c);
    });
}

hywf_status hywf_register_measure(const hywf_register *reg, uint64_t shots, uint64_t seed,
                                  double readout_flip, char **histogram) {
    return guarded([&] {
        need(reg, "register");
        need(histogram, "out");
        const auto h = hywf::qsim::measure_all(reg->reg, shots, seed, readout_flip);
        *histogram = dup_string(histogram_json(h).dump());
    });
}

hywf_status hywf_register_expectation(const hywf_register *reg, const char *pauli_sum,
                                      double *out) {
    return guarded([&] {
        need(reg, "register");
        need(pauli_sum, "operator");
        need(out, "out");
        *out = hywf::qsim::expectation(reg->reg,
                                       hywf::pauli::WeightedPauliSum::from_text(pauli_sum));
    });
}

hywf_status hywf_register_schmidt_rank(const hywf_register *reg, unsigned cut,
                                       unsigned *out) {
    return guarded([&] {
        need(reg, "register");
        need(out, "out");
        *out = hywf::qsim::schmidt_rank(reg->reg, cut);
    });
}

hywf_status hywf_required_qubits(size_t p, unsigned *out) {
    return guarded([&] {
        need(out, "out");
        *out = hywf::encode::required_qubits(p);
    });
}

hywf_status hywf_amplitude_encode(const double *x, size_t len, hywf_register **out) {
    return guarded([&] {
        need(x, "x");
        need(out, "out");
        auto enc = hywf::encode::amplitude_encode(std::span<const double>(x, len));
        *out = new hywf_register{std::move(enc.reg)};
    });
}

hywf_status hywf_swap_test(const hywf_register *phi, const hywf_register *psi,
                           uint64_t shots, uint64_t seed, hywf_swap_result *out) {
    return guarded([&] {
        need(phi, "phi");
        need(psi, "psi");
        need(out, "out");
        const auto r = hywf::swaptest::swap_test(phi->reg, psi->reg, shots, seed);
        *out = hywf_swap_result{r.prob_zero, r.fidelity};
    });
}

hywf_status hywf_estimate_distance(const double u[3], const double v[3], uint64_t shots,
                                   uint64_t seed, hywf_distance *out) {
    return guarded([&] {
        need(u, "u");
        need(v, "v");
        need(out, "out");
        const auto d = hywf::swaptest::estimate_distance({u[0], u[1], u[2]},
                                                         {v[0], v[1], v[2]}, shots, seed);
        *out = hywf_distance{d.value, d.exact, d.prob_zero};
    });
}

hywf_status hywf_pauli_decompose(const double *m, size_t dim, char **text) {
    return guarded([&] {
        need(text, "out");
        *text = dup_string(hywf::pauli::decompose(read_matrix(m, dim)).to_text());
    });
}

hywf_status hywf_classical_lebm(const double *m, size_t dim, double *out) {
    return guarded([&] {
        need(out, "out");
        *out = hywf::md::classical_lebm(read_matrix(m, dim));
    });
}

hywf_status hywf_random_bipartite(size_t k, uint64_t seed, double *out) {
    return guarded([&] {
        need(out, "out");
        const auto b = hywf::md::random_bipartite(k, seed);
        for (Eigen::Index i = 0; i < b.rows(); ++i) {
            for (Eigen::Index j = 0; j < b.cols(); ++j) {
                out[i * b.cols() + j] = b(i, j);
            }
        }
    });
}

void hywf_vqe_settings_default(hywf_vqe_settings *out) {
    if (out == nullptr) {
        return;
    }
    const hywf::vqe::HyperparamSetting d;
    *out = hywf_vqe_settings{d.ansatz_layers,
                             d.entangler == hywf::vqe::Entangler::Ring ? HYWF_RING
                                                                       : HYWF_LINEAR_CHAIN,
                             d.optimizer == hywf::vqe::Optimizer::Spsa ? HYWF_SPSA
                                                                       : HYWF_GRADIENT_DESCENT,
                             d.learning_rate,
                             d.max_iters,
                             d.shots,
                             d.seed,
                             d.restarts,
                             d.readout_flip};
}

hywf_status hywf_vqe_lebm(const double *m, size_t dim, const hywf_vqe_settings *settings,
                          hywf_vqe_result *out) {
    return guarded([&] {
        need(settings, "settings");
        need(out, "out");
        const auto r = hywf::vqe::lebm_vqe(read_matrix(m, dim), from_c(*settings));
        *out = hywf_vqe_result{r.lambda_vqe, r.iterations_used, r.converged ? 1 : 0,
                               r.evaluations};
    });
}

hywf_status hywf_vqe_lebm_trace(const double *m, size_t dim,
                                const hywf_vqe_settings *settings, hywf_vqe_result *out,
                                char **trace_csv) {
    return guarded([&] {
        need(settings, "settings");
        need(out, "out");
        need(trace_csv, "trace");
        const auto r = hywf::vqe::lebm_vqe(read_matrix(m, dim), from_c(*settings));
        *out = hywf_vqe_result{r.lambda_vqe, r.iterations_used, r.converged ? 1 : 0,
                               r.evaluations};
        *trace_csv = dup_string(hywf::vqe::trace_csv(r));
    });
}

hywf_status hywf_grid_search(const char *matrices_json, const char *settings_json,
                             char **result_json) {
    return guarded([&] {
        need(matrices_json, "matrices");
        need(settings_json, "settings");
        need(result_json, "out");
        const auto jm = json::parse(matrices_json);
        const auto js = json::parse(settings_json);
        if (!jm.is_array() || jm.empty()) {
            hywf::fail(hywf::ErrorCode::InvalidArgument, "need a nonempty array of matrices");
        }
        if (!js.is_array() || js.empty()) {
            hywf::fail(hywf::ErrorCode::InvalidArgument, "need a nonempty array of settings");
        }
        std::vector<Eigen::MatrixXd> matrices;
        for (const auto &rows : jm) {
            const auto d = static_cast<Eigen::Index>(rows.size());
            Eigen::MatrixXd m(d, d);
            for (Eigen::Index i = 0; i < d; ++i) {
                const auto &row = rows.at(static_cast<size_t>(i));
                if (static_cast<Eigen::Index>(row.size()) != d) {
                    hywf::fail(hywf::ErrorCode::InvalidArgument, "matrices must be square");
                }
                for (Eigen::Index j = 0; j < d; ++j) {
                    m(i, j) = row.at(static_cast<size_t>(j)).get<double>();
                }
            }
            matrices.push_back(std::move(m));
        }
        std::vector<hywf::vqe::HyperparamSetting> candidates;
        for (const auto &s : js) {
            candidates.push_back(hywf::engine::settings_from_json(s));
        }
        const auto r = hywf::vqe::grid_search(matrices, candidates);
        json reports = json::array();
        for (size_t c = 0; c < r.reports.size(); ++c) {
            json entries = json::array();
            for (const auto &e : r.reports[c].entries) {
                entries.push_back({{"lambda_classic", e.lambda_classic},
                                   {"lambda_vqe", e.lambda_vqe}});
            }
            reports.push_back({{"settings", hywf::engine::settings_to_json(candidates[c])},
                               {"label", candidates[c].label()},
                               {"mse", r.reports[c].mse},
                               {"entries", entries}});
        }
        const json out = {{"best_index", r.best_index},
                          {"best", hywf::engine::settings_to_json(r.best)},
                          {"reports", reports}};
        *result_json = dup_string(out.dump());
    });
}

hywf_status hywf_cv_series(const char *trajectory_path, const char *segments, char **csv) {
    return guarded([&] {
        need(trajectory_path, "trajectory");
        need(segments, "segments");
        need(csv, "out");
        const auto segs = hywf::md::parse_segments(segments);
        if (segs.size() != 2) {
            hywf::fail(hywf::ErrorCode::InvalidArgument, "expected exactly two segments");
        }
        hywf::md::TrajectoryReader reader{std::filesystem::path(trajectory_path)};
        *csv = dup_string(hywf::md::cv_series_csv(hywf::md::cv_series(reader, segs[0], segs[1])));
    });
}

hywf_status hywf_md_pipeline(const char *trajectory_path, const char *segments, int classic,
                             int quantum, uint64_t shots, uint64_t seed,
                             const hywf_vqe_settings *settings, char **rows_json) {
    return guarded([&] {
        need(trajectory_path, "trajectory");
        need(segments, "segments");
        need(rows_json, "out");
        hywf::engine::MdPipelineOptions opt;
        opt.classic = classic != 0;
        opt.quantum = quantum != 0;
        opt.shots = shots;
        opt.seed = seed;
        const auto pi = settings != nullptr ? from_c(*settings) : hywf::vqe::HyperparamSetting{};
        const auto rows = hywf::engine::md_pipeline(trajectory_path, segments, opt, pi);
        json out = json::array();
        auto opt_json = [](const std::optional<double> &v) { return v ? json(*v) : json(nullptr); };
        for (const auto &r : rows) {
            out.push_back({{"frame", r.frame},
                           {"time", r.time},
                           {"lebm_classic", opt_json(r.lebm_classic)},
                           {"lebm_vqe", opt_json(r.lebm_vqe)},
                           {"swap_max_abs_err", opt_json(r.swap_max_abs_err)},
                           {"swap_max_rel_err", opt_json(r.swap_max_rel_err)}});
        }
        *rows_json = dup_string(out.dump());
    });
}

hywf_status hywf_catalog_load(const char *path, hywf_catalog **out) {
    return guarded([&] {
        need(path, "path");
        need(out, "out");
        *out = new hywf_catalog{hywf::engine::load_catalog(path)};
    });
}

hywf_status hywf_catalog_parse(const char *text, hywf_catalog **out) {
    return guarded([&] {
        need(text, "json");
        need(out, "out");
        *out = new hywf_catalog{hywf::engine::parse_catalog(text)};
    });
}

hywf_status hywf_catalog_to_json(const hywf_catalog *catalog, char **text) {
    return guarded([&] {
        need(catalog, "catalog");
        need(text, "out");
        *text = dup_string(catalog->catalog.to_json().dump(2));
    });
}

void hywf_catalog_free(hywf_catalog *catalog) { delete catalog; }

hywf_status hywf_workflow_load(const char *path, hywf_workflow **out) {
    return guarded([&] {
        need(path, "path");
        need(out, "out");
        *out = new hywf_workflow{hywf::workflow::load_workflow(path)};
    });
}

hywf_status hywf_workflow_parse(const char *text, hywf_workflow **out) {
    return guarded([&] {
        need(text, "json");
        need(out, "out");
        *out = new hywf_workflow{hywf::workflow::parse_workflow(text)};
    });
}

void hywf_workflow_free(hywf_workflow *wf) { delete wf; }

hywf_status hywf_workflow_is_hybrid(const hywf_workflow *wf, int *out) {
    return guarded([&] {
        need(wf, "workflow");
        need(out, "out");
        *out = wf->wf.hybrid ? 1 : 0;
    });
}

hywf_status hywf_workflow_set_intensity_threshold(hywf_workflow *wf, double threshold) {
    return guarded([&] {
        need(wf, "workflow");
        if (!(threshold >= 0.0 && threshold <= 1.0)) {
            hywf::fail(hywf::ErrorCode::InvalidArgument, "threshold must lie in [0, 1]");
        }
        wf->wf.intensity_threshold = threshold;
    });
}

hywf_status hywf_workflow_validate(const hywf_workflow *wf, int *ok, char **report_json) {
    return guarded([&] {
        need(wf, "workflow");
        const auto report = hywf::workflow::validate(wf->wf);
        if (ok != nullptr) {
            *ok = report.ok() ? 1 : 0;
        }
        if (report_json != nullptr) {
            json issues = json::array();
            for (const auto &i : report.issues) {
                issues.push_back({{"code", i.code}, {"message", i.message}});
            }
            *report_json = dup_string(json{{"ok", report.ok()}, {"issues", issues}}.dump());
        }
    });
}

hywf_status hywf_workflow_to_hybrid(const hywf_workflow *wf, hywf_workflow **out) {
    return guarded([&] {
        need(wf, "workflow");
        need(out, "out");
        *out = new hywf_workflow{hywf::workflow::to_hybrid(wf->wf)};
    });
}

hywf_status hywf_workflow_classic_projection(const hywf_workflow *wf, hywf_workflow **out) {
    return guarded([&] {
        need(wf, "workflow");
        need(out, "out");
        *out = new hywf_workflow{hywf::workflow::classic_projection(wf->wf)};
    });
}

hywf_status hywf_workflow_to_json(const hywf_workflow *wf, char **text) {
    return guarded([&] {
        need(wf, "workflow");
        need(text, "out");
        *text = dup_string(hywf::workflow::to_json(wf->wf).dump(2));
    });
}

void hywf_engine_config_default(hywf_engine_config *out) {
    if (out != nullptr) {
        *out = hywf_engine_config{0, 0.0, 0, nullptr, nullptr};
    }
}

hywf_status hywf_engine_create(const hywf_catalog *catalog, const hywf_engine_config *config,
                               hywf_engine **out) {
    return guarded([&] {
        need(catalog, "catalog");
        need(out, "out");
        hywf::engine::EngineConfig cfg;
        if (config != nullptr) {
            cfg.seed = config->seed;
            cfg.score_floor = config->score_floor;
            cfg.concurrent = config->concurrent != 0;
            if (config->log_path != nullptr) {
                cfg.log_path = config->log_path;
            }
            if (config->run_context_json != nullptr) {
                cfg.run_context = json::parse(config->run_context_json);
                if (!cfg.run_context.is_object()) {
                    hywf::fail(hywf::ErrorCode::InvalidArgument,
                               "run context must be a JSON object");
                }
            }
        }
        *out = new hywf_engine{hywf::engine::Engine(
            catalog->catalog, hywf::engine::TaskRepository::with_builtins(), std::move(cfg))};
    });
}

void hywf_engine_free(hywf_engine *engine) { delete engine; }

hywf_status hywf_engine_run(hywf_engine *engine, const hywf_workflow *wf, char **result_json) {
    return guarded([&] {
        need(engine, "engine");
        need(wf, "workflow");
        need(result_json, "out");
        const auto r = engine->engine.run(wf->wf);
        json records = json::array();
        for (const auto &rec : r.records) {
            records.push_back(rec.to_json());
        }
        const json out = {{"ok", r.ok}, {"error", r.error}, {"plan", r.plan}, {"records", records}};
        *result_json = dup_string(out.dump());
    });
}

hywf_status hywf_engine_monitor(const hywf_engine *engine, char **snapshot_json) {
    return guarded([&] {
        need(engine, "engine");
        need(snapshot_json, "out");
        const auto snap = engine->engine.monitor();
        const json out = {{"devices", hywf::engine::HardwareCatalog(snap.devices).to_json()},
                          {"in_flight", snap.in_flight},
                          {"completed", snap.completed}};
        *snapshot_json = dup_string(out.dump());
    });
}

} // extern "C"
