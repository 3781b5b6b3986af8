// Copyright 2026 The fcsent Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fcsent.h"

#include <cstring>
#include <string>

#include "bounds.hpp"
#include "entanglement.hpp"
#include "fcs.hpp"
#include "models.hpp"

struct fcsent_model {
  fcsent::models::ModelSpec spec;
};

struct fcsent_report {
  fcsent::bounds::ConvergenceReport report;
};

namespace {

thread_local std::string g_last_error;

fcsent_status fail(fcsent_status code, const char* what) {
  g_last_error = what ? what : "";
  return code;
}

template <typename Fn>
fcsent_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const fcsent::fcs::NotPureError& e) {
    return fail(FCSENT_ERR_NOT_PURE, e.what());
  } catch (const fcsent::fcs::DimensionCapError& e) {
    return fail(FCSENT_ERR_DIMENSION_CAP, e.what());
  } catch (const fcsent::fcs::NoConvergenceError& e) {
    return fail(FCSENT_ERR_NO_CONVERGENCE, e.what());
  } catch (const fcsent::models::IsometryError& e) {
    return fail(FCSENT_ERR_NOT_ISOMETRY, e.what());
  } catch (const fcsent::models::ModelFormatError& e) {
    return fail(FCSENT_ERR_PARSE, e.what());
  } catch (const fcsent::models::IoError& e) {
    return fail(FCSENT_ERR_IO, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(FCSENT_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::out_of_range& e) {
    return fail(FCSENT_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::exception& e) {
    return fail(FCSENT_ERR_INTERNAL, e.what());
  }
}

char* copy_string(const std::string& text) {
  char* out = new char[text.size() + 1];
  std::memcpy(out, text.c_str(), text.size() + 1);
  return out;
}

fcsent::ent::EofOptions to_eof_options(const fcsent_eof_options* opts) {
  fcsent::ent::EofOptions out;
  if (!opts) return out;
  out.ensemble_size = opts->ensemble_size;
  out.restarts = opts->restarts;
  out.seed = opts->seed;
  out.max_iters = opts->max_iters;
  out.tol = opts->tol;
  out.threads = opts->threads;
  return out;
}

fcsent::bounds::RunOptions to_run_options(const fcsent_run_options* opts) {
  fcsent::bounds::RunOptions out;
  if (!opts) return out;
  out.eof = to_eof_options(&opts->eof);
  out.tol_opt = opts->tol_opt;
  out.margin = opts->margin;
  out.c_n_max = opts->c_n_max;
  out.threads = opts->threads;
  return out;
}

struct MemoryPipeline {
  fcsent::fcs::TransferOperator top;
  fcsent::fcs::FixedPoint fp;
  fcsent::linalg::DensityMatrix rho_ab;
};

MemoryPipeline memory_pipeline(const fcsent_model* model) {
  auto top = fcsent::fcs::transfer_operator(model->spec.model);
  auto fp = fcsent::fcs::fixed_point(top);
  auto rho_ab = fcsent::fcs::memory_state(model->spec.model, fp);
  return {std::move(top), std::move(fp), std::move(rho_ab)};
}

}  // namespace

extern "C" {

const char* fcsent_status_name(fcsent_status status) {
  switch (status) {
    case FCSENT_OK: return "ok";
    case FCSENT_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case FCSENT_ERR_PARSE: return "parse_error";
    case FCSENT_ERR_IO: return "io_error";
    case FCSENT_ERR_NOT_PURE: return "not_pure";
    case FCSENT_ERR_DIMENSION_CAP: return "dimension_cap";
    case FCSENT_ERR_NO_CONVERGENCE: return "no_convergence";
    case FCSENT_ERR_INTERNAL: return "internal_error";
    case FCSENT_ERR_NOT_ISOMETRY: return "not_isometry";
  }
  return "unknown";
}

const char* fcsent_last_error(void) { return g_last_error.c_str(); }

fcsent_status fcsent_model_resolve(const char* ref, fcsent_model** out) {
  if (!ref || !out) return fail(FCSENT_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = new fcsent_model{fcsent::models::resolve(ref)};
    return FCSENT_OK;
  });
}

fcsent_status fcsent_model_load(const char* path, fcsent_model** out) {
  if (!path || !out) return fail(FCSENT_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = new fcsent_model{fcsent::models::load_model(path)};
    return FCSENT_OK;
  });
}

fcsent_status fcsent_model_from_json(const char* text, fcsent_model** out) {
  if (!text || !out) return fail(FCSENT_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    fcsent::models::ModelSpec spec{"inline", fcsent::models::from_json_string(text),
                                   fcsent::models::ModelSpec::Provenance::File, 0};
    *out = new fcsent_model{std::move(spec)};
    return FCSENT_OK;
  });
}

fcsent_status fcsent_model_save(const fcsent_model* model, const char* path) {
  if (!model || !path) return fail(FCSENT_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    fcsent::models::save_model(model->spec, path);
    return FCSENT_OK;
  });
}

fcsent_status fcsent_model_to_json(const fcsent_model* model, char** out) {
  if (!model || !out) return fail(FCSENT_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = copy_string(fcsent::models::to_json_string(model->spec.model));
    return FCSENT_OK;
  });
}

void fcsent_model_free(fcsent_model* model) { delete model; }

int fcsent_model_spin_dim(const fcsent_model* model) {
  return model ? static_cast<int>(model->spec.model.d) : 0;
}

int fcsent_model_memory_dim(const fcsent_model* model) {
  return model ? static_cast<int>(model->spec.model.b) : 0;
}

const char* fcsent_model_name(const fcsent_model* model) {
  return model ? model->spec.name.c_str() : "";
}

fcsent_status fcsent_model_validate(const fcsent_model* model, double tol,
                                    fcsent_validation* out) {
  if (!model || !out) return fail(FCSENT_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const auto rep = fcsent::fcs::validate(model->spec.model, tol);
    out->isometry_ok = rep.isometry_ok ? 1 : 0;
    out->unital_ok = rep.unital_ok ? 1 : 0;
    out->pure_ok = rep.pure_ok ? 1 : 0;
    out->isometry_deviation = rep.isometry_deviation;
    out->unital_deviation = rep.unital_deviation;
    out->second_eigenvalue_modulus = rep.second_modulus;
    out->peripheral_count = rep.peripheral_count;
    return FCSENT_OK;
  });
}

fcsent_status fcsent_transfer_eigenvalues(const fcsent_model* model, double* re,
                                          double* im, size_t capacity,
                                          size_t* count) {
  if (!model || !count) return fail(FCSENT_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const auto top = fcsent::fcs::transfer_operator(model->spec.model);
    const auto& eigs = top.spectrum.eigenvalues;
    *count = eigs.size();
    const size_t n = std::min(capacity, eigs.size());
    for (size_t i = 0; i < n; ++i) {
      if (re) re[i] = eigs[i].real();
      if (im) im[i] = eigs[i].imag();
    }
    return FCSENT_OK;
  });
}

fcsent_status fcsent_envelope_estimate(const fcsent_model* model, double margin,
                                       int n_max, fcsent_envelope_params* out) {
  if (!model || !out) return fail(FCSENT_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const auto top = fcsent::fcs::transfer_operator(model->spec.model);
    const auto fp = fcsent::fcs::fixed_point(top);
    const auto params = fcsent::bounds::envelope_params(
        model->spec.model, top, fp, margin > 0 ? margin : 0.05,
        n_max > 0 ? n_max : 30);
    out->lambda = params.lambda;
    out->c = params.c;
    out->c1 = params.c1;
    out->n0 = params.n0;
    return FCSENT_OK;
  });
}

void fcsent_eof_options_init(fcsent_eof_options* opts) {
  if (!opts) return;
  const fcsent::ent::EofOptions defaults;
  opts->ensemble_size = defaults.ensemble_size;
  opts->restarts = defaults.restarts;
  opts->seed = defaults.seed;
  opts->max_iters = defaults.max_iters;
  opts->tol = defaults.tol;
  opts->threads = defaults.threads;
}

fcsent_status fcsent_eof_memory(const fcsent_model* model,
                                const fcsent_eof_options* opts,
                                fcsent_eof_result* out) {
  if (!model || !out) return fail(FCSENT_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const auto pipe = memory_pipeline(model);
    const auto res = fcsent::ent::eof_optimize(pipe.rho_ab, to_eof_options(opts));
    out->value = res.value;
    out->restart_spread = res.best_restart_spread;
    out->restarts_used = res.restarts_used;
    return FCSENT_OK;
  });
}

fcsent_status fcsent_eof_interval(const fcsent_model* model, int n,
                                  const fcsent_eof_options* opts,
                                  fcsent_eof_result* out) {
  if (!model || !out) return fail(FCSENT_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const auto& m = model->spec.model;
    const auto top = fcsent::fcs::transfer_operator(m);
    const auto fp = fcsent::fcs::fixed_point(top);
    auto sigma = fcsent::fcs::rho_interval(m, fp, n);
    fcsent::linalg::Index tail = 1;
    for (int k = 1; k < n; ++k) tail *= m.d;
    const auto res = fcsent::ent::eof_optimize(sigma.regrouped({m.d, tail}),
                                               to_eof_options(opts));
    out->value = res.value;
    out->restart_spread = res.best_restart_spread;
    out->restarts_used = res.restarts_used;
    return FCSENT_OK;
  });
}

fcsent_status fcsent_memory_concurrence(const fcsent_model* model,
                                        double* concurrence, double* eof_nats) {
  if (!model || !concurrence || !eof_nats)
    return fail(FCSENT_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    if (model->spec.model.d != 2 || model->spec.model.b != 2)
      throw std::invalid_argument(
          "fcsent_memory_concurrence: requires d = 2 and b = 2");
    const auto pipe = memory_pipeline(model);
    *concurrence = fcsent::ent::concurrence(pipe.rho_ab);
    *eof_nats = fcsent::ent::eof_for_concurrence_value(*concurrence);
    return FCSENT_OK;
  });
}

fcsent_status fcsent_memory_ppt(const fcsent_model* model, fcsent_ppt_result* out) {
  if (!model || !out) return fail(FCSENT_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const auto pipe = memory_pipeline(model);
    const auto res = fcsent::ent::ppt_check(pipe.rho_ab);
    out->min_pt_eigenvalue = res.min_pt_eigenvalue;
    out->negativity = res.negativity;
    out->is_ppt = res.is_ppt ? 1 : 0;
    return FCSENT_OK;
  });
}

fcsent_status fcsent_interval_ppt(const fcsent_model* model, int n,
                                  fcsent_ppt_result* out) {
  if (!model || !out) return fail(FCSENT_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const auto& m = model->spec.model;
    const auto top = fcsent::fcs::transfer_operator(m);
    const auto fp = fcsent::fcs::fixed_point(top);
    auto sigma = fcsent::fcs::rho_interval(m, fp, n);
    fcsent::linalg::Index tail = 1;
    for (int k = 1; k < n; ++k) tail *= m.d;
    const auto res = fcsent::ent::ppt_check(sigma.regrouped({m.d, tail}));
    out->min_pt_eigenvalue = res.min_pt_eigenvalue;
    out->negativity = res.negativity;
    out->is_ppt = res.is_ppt ? 1 : 0;
    return FCSENT_OK;
  });
}

fcsent_status fcsent_memory_separability(const fcsent_model* model,
                                         int* is_entangled) {
  if (!model || !is_entangled)
    return fail(FCSENT_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const auto verdict = fcsent::ent::memory_separability(model->spec.model);
    *is_entangled = verdict == fcsent::ent::Separability::Entangled ? 1 : 0;
    return FCSENT_OK;
  });
}

void fcsent_run_options_init(fcsent_run_options* opts) {
  if (!opts) return;
  const fcsent::bounds::RunOptions defaults;
  fcsent_eof_options_init(&opts->eof);
  opts->tol_opt = defaults.tol_opt;
  opts->margin = defaults.margin;
  opts->c_n_max = defaults.c_n_max;
  opts->threads = defaults.threads;
}

fcsent_status fcsent_verify_theorem1(const fcsent_model* model, int n_min, int n_max,
                                     const fcsent_run_options* opts,
                                     fcsent_report** out) {
  if (!model || !out) return fail(FCSENT_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    auto report = fcsent::bounds::verify_theorem1(model->spec.model, n_min, n_max,
                                                  to_run_options(opts));
    report.model_name = model->spec.name;
    *out = new fcsent_report{std::move(report)};
    return FCSENT_OK;
  });
}

fcsent_status fcsent_verify_theorem2(const fcsent_model* model, int p_min, int p_max,
                                     int n_offset, const fcsent_run_options* opts,
                                     fcsent_report** out) {
  if (!model || !out) return fail(FCSENT_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    auto report = fcsent::bounds::verify_theorem2(model->spec.model, p_min, p_max,
                                                  n_offset, to_run_options(opts));
    report.model_name = model->spec.name;
    *out = new fcsent_report{std::move(report)};
    return FCSENT_OK;
  });
}

int fcsent_report_row_count(const fcsent_report* report) {
  return report ? static_cast<int>(report->report.rows.size()) : 0;
}

int fcsent_report_all_pass(const fcsent_report* report) {
  return report && report->report.all_pass() ? 1 : 0;
}

fcsent_status fcsent_report_csv(const fcsent_report* report, int use_bits,
                                char** out) {
  if (!report || !out) return fail(FCSENT_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = copy_string(report->report.to_csv(use_bits != 0));
    return FCSENT_OK;
  });
}

fcsent_status fcsent_report_json(const fcsent_report* report, int use_bits,
                                 char** out) {
  if (!report || !out) return fail(FCSENT_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = copy_string(report->report.to_json(use_bits != 0));
    return FCSENT_OK;
  });
}

void fcsent_report_free(fcsent_report* report) { delete report; }

void fcsent_string_free(char* text) { delete[] text; }

}  // extern "C"
