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

// Command-line front end for the fcsent shared library. Exit codes:
// 0 all checks passed, 1 a checked property failed, 2 usage or input error.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "fcsent.h"

namespace {

constexpr double kLn2 = 0.69314718055994530942;

struct ModelDeleter {
  void operator()(fcsent_model* m) const { fcsent_model_free(m); }
};
struct ReportDeleter {
  void operator()(fcsent_report* r) const { fcsent_report_free(r); }
};
using ModelPtr = std::unique_ptr<fcsent_model, ModelDeleter>;
using ReportPtr = std::unique_ptr<fcsent_report, ReportDeleter>;

int thread_cap() {
  const char* env = std::getenv("FCS_ENTANGLE_THREADS");
  if (!env) return 1;
  const int n = std::atoi(env);
  return n > 0 ? n : 1;
}

ModelPtr resolve_or_exit(const std::string& ref) {
  fcsent_model* raw = nullptr;
  const fcsent_status st = fcsent_model_resolve(ref.c_str(), &raw);
  if (st != FCSENT_OK) {
    std::cerr << "error: cannot resolve model '" << ref
              << "': " << fcsent_last_error() << "\n";
    std::exit(2);
  }
  return ModelPtr(raw);
}

bool parse_range(const std::string& text, int& lo, int& hi) {
  const auto pos = text.find("..");
  try {
    if (pos == std::string::npos) {
      lo = hi = std::stoi(text);
    } else {
      lo = std::stoi(text.substr(0, pos));
      hi = std::stoi(text.substr(pos + 2));
    }
  } catch (const std::exception&) {
    return false;
  }
  return lo >= 1 && hi >= lo;
}

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  if (!out) {
    std::cerr << "error: cannot open output file " << out_path << "\n";
    std::exit(2);
  }
  out << text;
}

int run_report(const std::string& model_ref, bool theorem1, const std::string& range,
               int n_offset, const fcsent_run_options& opts, const std::string& format,
               const std::string& out_path, bool bits) {
  ModelPtr model = resolve_or_exit(model_ref);
  int lo = 0, hi = 0;
  if (!parse_range(range, lo, hi) || (theorem1 && lo < 1) || (!theorem1 && lo < 2)) {
    std::cerr << "error: bad range '" << range << "'\n";
    return 2;
  }
  fcsent_report* raw = nullptr;
  const fcsent_status st =
      theorem1 ? fcsent_verify_theorem1(model.get(), lo, hi, &opts, &raw)
               : fcsent_verify_theorem2(model.get(), lo, hi, n_offset, &opts, &raw);
  if (st != FCSENT_OK) {
    std::cerr << "error: " << fcsent_last_error() << "\n";
    return st == FCSENT_ERR_INVALID_ARGUMENT || st == FCSENT_ERR_DIMENSION_CAP ? 2 : 1;
  }
  ReportPtr report(raw);
  char* text = nullptr;
  if (format == "json")
    fcsent_report_json(report.get(), bits ? 1 : 0, &text);
  else
    fcsent_report_csv(report.get(), bits ? 1 : 0, &text);
  write_output(text, out_path);
  fcsent_string_free(text);
  return fcsent_report_all_pass(report.get()) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"entanglement analysis of finitely correlated spin-chain states"};
  app.require_subcommand(1);

  std::string model_ref, range = "2..6", format = "csv", out_path;
  bool bits = false;
  double tol = 1e-10, margin = 0.05;
  int n_single = 0, n_offset = 1;

  fcsent_run_options run_opts;
  fcsent_run_options_init(&run_opts);
  run_opts.threads = thread_cap();
  run_opts.eof.threads = thread_cap();

  auto add_eof_flags = [&](CLI::App* cmd) {
    cmd->add_option("--restarts", run_opts.eof.restarts, "optimizer restarts");
    cmd->add_option("--ensemble-size", run_opts.eof.ensemble_size,
                    "ensemble members (0: automatic)");
    cmd->add_option("--seed", run_opts.eof.seed, "optimizer seed");
  };

  CLI::App* validate = app.add_subcommand("validate", "check a model's defining properties");
  validate->add_option("model", model_ref, "model reference")->required();
  validate->add_option("--tol", tol, "tolerance for the checks");

  CLI::App* spectrum = app.add_subcommand("spectrum", "transfer eigenvalues and envelope constants");
  spectrum->add_option("model", model_ref)->required();
  spectrum->add_option("--margin", margin, "lambda margin above |lambda_2|");
  spectrum->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
  spectrum->add_option("--out", out_path, "output file (default stdout)");

  CLI::App* eof = app.add_subcommand("eof", "entanglement of formation of rho_AB (and rho_[1,n])");
  eof->add_option("model", model_ref)->required();
  eof->add_option("--n", n_single, "also compute EoF of rho_[1,n]");
  eof->add_flag("--bits", bits, "report entropies in bits");
  add_eof_flags(eof);

  CLI::App* converge = app.add_subcommand("converge", "spin-vs-block EoF convergence study");
  converge->add_option("model", model_ref)->required();
  converge->add_option("--n", range, "block range, e.g. 2..6");
  converge->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
  converge->add_option("--out", out_path);
  converge->add_flag("--bits", bits);
  converge->add_option("--tol-opt", run_opts.tol_opt, "optimizer-noise allowance");
  converge->add_option("--margin", run_opts.margin);
  add_eof_flags(converge);

  CLI::App* distant = app.add_subcommand("distant", "spin-vs-distant-interval decay study");
  distant->add_option("model", model_ref)->required();
  distant->add_option("--p", range, "gap range, e.g. 3..6");
  distant->add_option("--n-offset", n_offset, "interval end n = p + offset");
  distant->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
  distant->add_option("--out", out_path);
  distant->add_flag("--bits", bits);
  distant->add_option("--tol-opt", run_opts.tol_opt);
  distant->add_option("--margin", run_opts.margin);
  add_eof_flags(distant);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 2;
  }

  if (validate->parsed()) {
    fcsent_model* raw = nullptr;
    const fcsent_status st = fcsent_model_resolve(model_ref.c_str(), &raw);
    if (st == FCSENT_ERR_NOT_ISOMETRY) {
      // Structurally fine but not a model: report it as a failed check.
      std::cout << "isometry_ok: false (" << fcsent_last_error() << ")\n";
      return 1;
    }
    if (st != FCSENT_OK) {
      std::cerr << "error: cannot resolve model '" << model_ref
                << "': " << fcsent_last_error() << "\n";
      return 2;
    }
    ModelPtr model(raw);
    fcsent_validation rep{};
    if (fcsent_model_validate(model.get(), tol, &rep) != FCSENT_OK) {
      std::cerr << "error: " << fcsent_last_error() << "\n";
      return 2;
    }
    std::cout << "model: " << fcsent_model_name(model.get())
              << " (d=" << fcsent_model_spin_dim(model.get())
              << ", b=" << fcsent_model_memory_dim(model.get()) << ")\n";
    std::cout << "isometry_ok: " << (rep.isometry_ok ? "true" : "false")
              << " (max |VV+ - 1| = " << format_double(rep.isometry_deviation) << ")\n";
    std::cout << "unital_ok:   " << (rep.unital_ok ? "true" : "false")
              << " (max |E(1) - 1| = " << format_double(rep.unital_deviation) << ")\n";
    std::cout << "pure_ok:     " << (rep.pure_ok ? "true" : "false")
              << " (peripheral count " << rep.peripheral_count << ", |lambda_2| = "
              << format_double(rep.second_eigenvalue_modulus) << ")\n";
    return (rep.isometry_ok && rep.unital_ok && rep.pure_ok) ? 0 : 1;
  }

  if (spectrum->parsed()) {
    ModelPtr model = resolve_or_exit(model_ref);
    size_t count = 0;
    fcsent_transfer_eigenvalues(model.get(), nullptr, nullptr, 0, &count);
    std::vector<double> re(count), im(count);
    if (fcsent_transfer_eigenvalues(model.get(), re.data(), im.data(), count,
                                    &count) != FCSENT_OK) {
      std::cerr << "error: " << fcsent_last_error() << "\n";
      return 2;
    }
    fcsent_envelope_params env{};
    if (fcsent_envelope_estimate(model.get(), margin, 30, &env) != FCSENT_OK) {
      std::cerr << "error: " << fcsent_last_error() << "\n";
      return 1;
    }
    std::ostringstream text;
    if (format == "json") {
      nlohmann::ordered_json j;
      j["model"] = fcsent_model_name(model.get());
      nlohmann::ordered_json eigs = nlohmann::ordered_json::array();
      for (size_t i = 0; i < count; ++i)
        eigs.push_back({re[i], im[i], std::hypot(re[i], im[i])});
      j["eigenvalues"] = std::move(eigs);
      j["lambda"] = env.lambda;
      j["c"] = env.c;
      j["c1"] = env.c1;
      j["n0"] = env.n0;
      text << j.dump(2) << '\n';
    } else {
      text << "re,im,modulus\n";
      for (size_t i = 0; i < count; ++i)
        text << format_double(re[i]) << ',' << format_double(im[i]) << ','
             << format_double(std::hypot(re[i], im[i])) << '\n';
      text << "lambda," << format_double(env.lambda) << '\n';
      text << "c," << format_double(env.c) << '\n';
      text << "c1," << format_double(env.c1) << '\n';
      text << "n0," << env.n0 << '\n';
    }
    write_output(text.str(), out_path);
    return 0;
  }

  if (eof->parsed()) {
    ModelPtr model = resolve_or_exit(model_ref);
    const double unit = bits ? kLn2 : 1.0;
    const char* unit_name = bits ? "bits" : "nats";
    fcsent_eof_result mem{};
    if (fcsent_eof_memory(model.get(), &run_opts.eof, &mem) != FCSENT_OK) {
      std::cerr << "error: " << fcsent_last_error() << "\n";
      return 1;
    }
    std::cout << "eof_memory: " << format_double(mem.value / unit) << ' ' << unit_name
              << " (restart spread " << format_double(mem.restart_spread / unit)
              << ")\n";
    fcsent_ppt_result ppt{};
    if (fcsent_memory_ppt(model.get(), &ppt) == FCSENT_OK) {
      std::cout << "memory_ppt: " << (ppt.is_ppt ? "Separable" : "Entangled")
                << " (min PT eigenvalue " << format_double(ppt.min_pt_eigenvalue)
                << ", negativity " << format_double(ppt.negativity) << ")\n";
    }
    int failed = 0;
    if (fcsent_model_spin_dim(model.get()) == 2 &&
        fcsent_model_memory_dim(model.get()) == 2) {
      double conc = 0, eof_formula = 0;
      if (fcsent_memory_concurrence(model.get(), &conc, &eof_formula) == FCSENT_OK) {
        const double diff = std::abs(mem.value - eof_formula);
        std::cout << "concurrence: " << format_double(conc)
                  << ", eof_formula: " << format_double(eof_formula / unit) << ' '
                  << unit_name << ", |optimizer - formula| = " << format_double(diff)
                  << (diff <= 1e-3 ? " (ok)" : " (MISMATCH)") << "\n";
        if (diff > 1e-3) failed = 1;
      }
    }
    if (n_single > 0) {
      fcsent_eof_result blk{};
      if (fcsent_eof_interval(model.get(), n_single, &run_opts.eof, &blk) != FCSENT_OK) {
        std::cerr << "error: " << fcsent_last_error() << "\n";
        return 1;
      }
      std::cout << "eof_interval(n=" << n_single
                << "): " << format_double(blk.value / unit) << ' ' << unit_name
                << " (restart spread " << format_double(blk.restart_spread / unit)
                << ")\n";
    }
    return failed;
  }

  if (converge->parsed())
    return run_report(model_ref, true, range, 0, run_opts, format, out_path, bits);
  if (distant->parsed())
    return run_report(model_ref, false, range, n_offset, run_opts, format, out_path, bits);
  return 2;
}
