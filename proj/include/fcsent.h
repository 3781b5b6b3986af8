/*
 * Copyright 2026 The fcsent Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface to the fcsent library: construction and analysis of pure
 * translation-invariant finitely correlated spin-chain states (matrix
 * product states) defined by an isometry V : C^d (x) C^b -> C^b.
 *
 * All objects are opaque handles created and destroyed through this API.
 * Functions return FCSENT_OK on success; on failure they return an error
 * code and leave a message retrievable with fcsent_last_error() (the
 * message is thread-local). Entropic quantities are reported in nats.
 */

#ifndef FCSENT_H
#define FCSENT_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define FCSENT_API __declspec(dllexport)
#else
#define FCSENT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct fcsent_model fcsent_model;
typedef struct fcsent_report fcsent_report;

typedef enum fcsent_status {
  FCSENT_OK = 0,
  FCSENT_ERR_INVALID_ARGUMENT = 1,
  FCSENT_ERR_PARSE = 2,
  FCSENT_ERR_IO = 3,
  FCSENT_ERR_NOT_PURE = 4,
  FCSENT_ERR_DIMENSION_CAP = 5,
  FCSENT_ERR_NO_CONVERGENCE = 6,
  FCSENT_ERR_INTERNAL = 7,
  /* structurally valid model file whose v fails v v^dagger = 1 */
  FCSENT_ERR_NOT_ISOMETRY = 8
} fcsent_status;

FCSENT_API const char* fcsent_status_name(fcsent_status status);

/* Message for the most recent failure on the calling thread. */
FCSENT_API const char* fcsent_last_error(void);

/*
 * Model lifecycle. fcsent_model_resolve accepts "aklt",
 * "product:d=<d>,basis=<k>", "random:d=<d>,b=<b>,seed=<s>", or a path to a
 * model JSON file {"d": int, "b": int, "v": [[[re, im], ...], ...]} with v
 * given as b rows by d*b columns.
 */
FCSENT_API fcsent_status fcsent_model_resolve(const char* ref, fcsent_model** out);
FCSENT_API fcsent_status fcsent_model_load(const char* path, fcsent_model** out);
FCSENT_API fcsent_status fcsent_model_from_json(const char* text, fcsent_model** out);
FCSENT_API fcsent_status fcsent_model_save(const fcsent_model* model, const char* path);
FCSENT_API fcsent_status fcsent_model_to_json(const fcsent_model* model, char** out);
FCSENT_API void fcsent_model_free(fcsent_model* model);

FCSENT_API int fcsent_model_spin_dim(const fcsent_model* model);
FCSENT_API int fcsent_model_memory_dim(const fcsent_model* model);
FCSENT_API const char* fcsent_model_name(const fcsent_model* model);

typedef struct fcsent_validation {
  int isometry_ok;
  int unital_ok;
  int pure_ok;
  double isometry_deviation;       /* max |V V^dagger - 1| */
  double unital_deviation;         /* max |E_hat(1) - 1| */
  double second_eigenvalue_modulus;
  int peripheral_count;            /* eigenvalues of modulus >= 1 - 1e-8 */
} fcsent_validation;

FCSENT_API fcsent_status fcsent_model_validate(const fcsent_model* model, double tol,
                                               fcsent_validation* out);

/*
 * Transfer-operator spectrum (b^2 eigenvalues, descending modulus). Writes
 * at most `capacity` entries into re/im and stores the total in *count.
 */
FCSENT_API fcsent_status fcsent_transfer_eigenvalues(const fcsent_model* model,
                                                     double* re, double* im,
                                                     size_t capacity, size_t* count);

typedef struct fcsent_envelope_params {
  double lambda; /* decay rate, strictly above |lambda_2| */
  double c;      /* estimated prefactor of ||E_hat^n - E_hat^inf|| <= c lambda^n */
  double c1;     /* c b^2 / lambda */
  int n0;        /* first n with 2 c1 lambda^n <= 1/e */
} fcsent_envelope_params;

FCSENT_API fcsent_status fcsent_envelope_estimate(const fcsent_model* model,
                                                  double margin, int n_max,
                                                  fcsent_envelope_params* out);

typedef struct fcsent_eof_options {
  int ensemble_size; /* 0: automatic (rank^2, clamped) */
  int restarts;
  uint64_t seed;
  int max_iters;
  double tol;
  int threads;
} fcsent_eof_options;

FCSENT_API void fcsent_eof_options_init(fcsent_eof_options* opts);

typedef struct fcsent_eof_result {
  double value;  /* nats */
  double restart_spread;
  int restarts_used;
} fcsent_eof_result;

/* Entanglement of formation of the spin-memory state rho_AB. */
FCSENT_API fcsent_status fcsent_eof_memory(const fcsent_model* model,
                                           const fcsent_eof_options* opts,
                                           fcsent_eof_result* out);

/* EoF of rho_[1,n] across the 1 | [2..n] cut. */
FCSENT_API fcsent_status fcsent_eof_interval(const fcsent_model* model, int n,
                                             const fcsent_eof_options* opts,
                                             fcsent_eof_result* out);

/* Wootters concurrence of rho_AB and its closed-form EoF; requires d = b = 2. */
FCSENT_API fcsent_status fcsent_memory_concurrence(const fcsent_model* model,
                                                   double* concurrence,
                                                   double* eof_nats);

typedef struct fcsent_ppt_result {
  double min_pt_eigenvalue;
  double negativity;
  int is_ppt;
} fcsent_ppt_result;

FCSENT_API fcsent_status fcsent_memory_ppt(const fcsent_model* model,
                                           fcsent_ppt_result* out);

/* Negativity of rho_[1,n] across the 1 | [2..n] cut. */
FCSENT_API fcsent_status fcsent_interval_ppt(const fcsent_model* model, int n,
                                             fcsent_ppt_result* out);

/*
 * Exact separability decision for rho_AB: its rank equals b, which rules out
 * PPT entanglement, so PPT <=> separable. *is_entangled is 1 or 0.
 */
FCSENT_API fcsent_status fcsent_memory_separability(const fcsent_model* model,
                                                    int* is_entangled);

typedef struct fcsent_run_options {
  fcsent_eof_options eof;
  double tol_opt; /* optimizer-noise allowance on the lower bound */
  double margin;  /* lambda margin above |lambda_2| */
  int c_n_max;    /* powers used to estimate c */
  int threads;
} fcsent_run_options;

FCSENT_API void fcsent_run_options_init(fcsent_run_options* opts);

/*
 * Convergence study of the spin-vs-block EoF toward the spin-vs-memory
 * value: rows n in [n_min, n_max], checking
 * -tol_opt <= EoF(rho_AB) - EoF(rho_[1,n]) <= epsilon(n).
 */
FCSENT_API fcsent_status fcsent_verify_theorem1(const fcsent_model* model, int n_min,
                                                int n_max,
                                                const fcsent_run_options* opts,
                                                fcsent_report** out);

/*
 * Decay study of spin-vs-distant-interval entanglement: rows p in
 * [p_min, p_max] with n = p + n_offset, checking the trace distance to
 * rho_1 (x) rho_[p,n] against c' lambda^(p-2) and the EoF against the
 * continuity envelope at that distance.
 */
FCSENT_API fcsent_status fcsent_verify_theorem2(const fcsent_model* model, int p_min,
                                                int p_max, int n_offset,
                                                const fcsent_run_options* opts,
                                                fcsent_report** out);

FCSENT_API int fcsent_report_row_count(const fcsent_report* report);
FCSENT_API int fcsent_report_all_pass(const fcsent_report* report);

/* Serialized report; use_bits converts entropy-valued columns to bits.
 * The returned string must be released with fcsent_string_free. */
FCSENT_API fcsent_status fcsent_report_csv(const fcsent_report* report, int use_bits,
                                           char** out);
FCSENT_API fcsent_status fcsent_report_json(const fcsent_report* report, int use_bits,
                                            char** out);
FCSENT_API void fcsent_report_free(fcsent_report* report);

FCSENT_API void fcsent_string_free(char* text);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* FCSENT_H */
