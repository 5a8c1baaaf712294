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
 * C interface to the hywf library. Every call returns an hywf_status; on
 * failure hywf_last_error() describes the problem for the calling thread.
 * Strings returned through char** are owned by the caller and released with
 * hywf_string_free().
 */
#ifndef HYWF_HYWF_H
#define HYWF_HYWF_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define HYWF_API __declspec(dllexport)
#else
#define HYWF_API __attribute__((visibility("default")))
#endif

typedef enum hywf_status {
    HYWF_OK = 0,
    HYWF_ERR_INVALID_ARGUMENT = 1,
    HYWF_ERR_CAPACITY = 2,
    HYWF_ERR_UNSUPPORTED_GATE = 3,
    HYWF_ERR_MISSING_PARAMETER = 4,
    HYWF_ERR_ENCODING = 5,
    HYWF_ERR_IO = 6,
    HYWF_ERR_PARSE = 7,
    HYWF_ERR_VALIDATION = 8,
    HYWF_ERR_EXECUTION = 9,
    HYWF_ERR_INTERNAL = 10
} hywf_status;

typedef struct hywf_register hywf_register;
typedef struct hywf_catalog hywf_catalog;
typedef struct hywf_workflow hywf_workflow;
typedef struct hywf_engine hywf_engine;

HYWF_API const char *hywf_version(void);
/* Message of the last failed call on this thread, "" if none. */
HYWF_API const char *hywf_last_error(void);
HYWF_API const char *hywf_status_name(hywf_status status);
HYWF_API void hywf_string_free(char *s);

/* ---- registers ---------------------------------------------------------- */

HYWF_API hywf_status hywf_register_create(unsigned num_qubits, hywf_register **out);
/* Unit-norm amplitudes of power-of-two length; `im` may be NULL. */
HYWF_API hywf_status hywf_register_from_amplitudes(const double *re, const double *im,
                                                   size_t len, hywf_register **out);
/* bell, phi+, phi-, psi+, psi-, ghz, w */
HYWF_API hywf_status hywf_register_named_state(const char *name, hywf_register **out);
HYWF_API void hywf_register_free(hywf_register *reg);

HYWF_API hywf_status hywf_register_num_qubits(const hywf_register *reg, unsigned *out);
/* Copies 2^n amplitudes; `len` must equal 2^n. */
HYWF_API hywf_status hywf_register_amplitudes(const hywf_register *reg, double *re,
                                              double *im, size_t len);
/* Applies a named gate. `angle` is read only when `has_angle` is nonzero. */
HYWF_API hywf_status hywf_register_apply(hywf_register *reg, const char *gate,
                                         const unsigned *targets, size_t num_targets,
                                         double angle, int has_angle);
/* Circuit text: `QUBITS n`, then `GATE t0,t1 [angle]` lines. */
HYWF_API hywf_status hywf_register_apply_circuit(hywf_register *reg, const char *circuit);
/* {"shots": s, "counts": {"00": c, ...}, "mode": "00"} */
HYWF_API hywf_status hywf_register_measure(const hywf_register *reg, uint64_t shots,
                                           uint64_t seed, double readout_flip,
                                           char **histogram_json);
/* Operator as `<pauli string> <weight>` lines. */
HYWF_API hywf_status hywf_register_expectation(const hywf_register *reg,
                                               const char *pauli_sum, double *out);
HYWF_API hywf_status hywf_register_schmidt_rank(const hywf_register *reg, unsigned cut,
                                                unsigned *out);

/* ---- encoding and SWAP test -------------------------------------------- */

HYWF_API hywf_status hywf_required_qubits(size_t p, unsigned *out);
HYWF_API hywf_status hywf_amplitude_encode(const double *x, size_t len,
                                           hywf_register **out);

typedef struct hywf_swap_result {
    double prob_zero;
    double fidelity;
} hywf_swap_result;

/* shots == 0 reads Pr(0) from the statevector. */
HYWF_API hywf_status hywf_swap_test(const hywf_register *phi, const hywf_register *psi,
                                    uint64_t shots, uint64_t seed, hywf_swap_result *out);

typedef struct hywf_distance {
    double value;
    double exact;
    double prob_zero;
} hywf_distance;

HYWF_API hywf_status hywf_estimate_distance(const double u[3], const double v[3],
                                            uint64_t shots, uint64_t seed,
                                            hywf_distance *out);

/* ---- matrices, Pauli sums, VQE ----------------------------------------- */

/* Row-major real symmetric `dim` x `dim` matrix to `<string> <weight>` lines. */
HYWF_API hywf_status hywf_pauli_decompose(const double *m, size_t dim, char **text);
HYWF_API hywf_status hywf_classical_lebm(const double *m, size_t dim, double *out);
/* Writes the (2k)^2 row-major B_IJ of two random k-atom segments. */
HYWF_API hywf_status hywf_random_bipartite(size_t k, uint64_t seed, double *out);

typedef enum hywf_entangler { HYWF_LINEAR_CHAIN = 0, HYWF_RING = 1 } hywf_entangler;
typedef enum hywf_optimizer { HYWF_GRADIENT_DESCENT = 0, HYWF_SPSA = 1 } hywf_optimizer;

typedef struct hywf_vqe_settings {
    unsigned ansatz_layers;
    hywf_entangler entangler;
    hywf_optimizer optimizer;
    double learning_rate;
    unsigned max_iters;
    uint64_t shots;
    uint64_t seed;
    unsigned restarts;
    double readout_flip;
} hywf_vqe_settings;

typedef struct hywf_vqe_result {
    double lambda_vqe;
    size_t iterations_used;
    int converged;
    size_t evaluations;
} hywf_vqe_result;

HYWF_API void hywf_vqe_settings_default(hywf_vqe_settings *out);
HYWF_API hywf_status hywf_vqe_lebm(const double *m, size_t dim,
                                   const hywf_vqe_settings *settings,
                                   hywf_vqe_result *out);
/* Same as hywf_vqe_lebm and also returns the winning restart's cost
 * trace as CSV `iter,cost`. */
HYWF_API hywf_status hywf_vqe_lebm_trace(const double *m, size_t dim,
                                         const hywf_vqe_settings *settings,
                                         hywf_vqe_result *out, char **trace_csv);
/* `matrices_json`: array of square matrices (arrays of rows).
 * `settings_json`: array of setting objects.
 * Result: {"best_index", "best", "reports": [{"settings", "mse", "entries"}]} */
HYWF_API hywf_status hywf_grid_search(const char *matrices_json, const char *settings_json,
                                      char **result_json);

/* ---- molecular dynamics ------------------------------------------------- */

/* CSV `frame,time,lebm` of the classical CV series. */
HYWF_API hywf_status hywf_cv_series(const char *trajectory_path, const char *segments,
                                    char **csv);
/* JSON array of per-frame rows with lebm_classic, lebm_vqe, swap errors.
 * `settings` may be NULL for defaults. */
HYWF_API hywf_status hywf_md_pipeline(const char *trajectory_path, const char *segments,
                                      int classic, int quantum, uint64_t shots,
                                      uint64_t seed, const hywf_vqe_settings *settings,
                                      char **rows_json);

/* ---- catalog, workflow, engine ----------------------------------------- */

HYWF_API hywf_status hywf_catalog_load(const char *path, hywf_catalog **out);
HYWF_API hywf_status hywf_catalog_parse(const char *json, hywf_catalog **out);
HYWF_API hywf_status hywf_catalog_to_json(const hywf_catalog *catalog, char **json);
HYWF_API void hywf_catalog_free(hywf_catalog *catalog);

HYWF_API hywf_status hywf_workflow_load(const char *path, hywf_workflow **out);
HYWF_API hywf_status hywf_workflow_parse(const char *json, hywf_workflow **out);
HYWF_API void hywf_workflow_free(hywf_workflow *wf);
HYWF_API hywf_status hywf_workflow_is_hybrid(const hywf_workflow *wf, int *out);
HYWF_API hywf_status hywf_workflow_set_intensity_threshold(hywf_workflow *wf,
                                                           double threshold);
/* {"ok": bool, "issues": [{"code", "message"}]}; `ok` mirrors the flag. */
HYWF_API hywf_status hywf_workflow_validate(const hywf_workflow *wf, int *ok,
                                            char **report_json);
HYWF_API hywf_status hywf_workflow_to_hybrid(const hywf_workflow *wf, hywf_workflow **out);
HYWF_API hywf_status hywf_workflow_classic_projection(const hywf_workflow *wf,
                                                      hywf_workflow **out);
HYWF_API hywf_status hywf_workflow_to_json(const hywf_workflow *wf, char **json);

typedef struct hywf_engine_config {
    uint64_t seed;
    double score_floor;
    int concurrent;
    const char *log_path;         /* may be NULL */
    const char *run_context_json; /* may be NULL */
} hywf_engine_config;

HYWF_API void hywf_engine_config_default(hywf_engine_config *out);
HYWF_API hywf_status hywf_engine_create(const hywf_catalog *catalog,
                                        const hywf_engine_config *config,
                                        hywf_engine **out);
HYWF_API void hywf_engine_free(hywf_engine *engine);
/* {"ok", "error", "plan", "records"}; node failures return HYWF_OK with
 * ok=false, validation failures return HYWF_ERR_VALIDATION. */
HYWF_API hywf_status hywf_engine_run(hywf_engine *engine, const hywf_workflow *wf,
                                     char **result_json);
HYWF_API hywf_status hywf_engine_monitor(const hywf_engine *engine, char **snapshot_json);

#ifdef __cplusplus
}
#endif

#endif /* HYWF_HYWF_H */
