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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <string>

#include "fcsent.h"

namespace {

struct Model {
  fcsent_model* ptr = nullptr;
  ~Model() { fcsent_model_free(ptr); }
};

}  // namespace

TEST_CASE("resolve and validate a builtin model") {
  Model aklt;
  REQUIRE(fcsent_model_resolve("aklt", &aklt.ptr) == FCSENT_OK);
  CHECK(fcsent_model_spin_dim(aklt.ptr) == 3);
  CHECK(fcsent_model_memory_dim(aklt.ptr) == 2);
  CHECK(std::string(fcsent_model_name(aklt.ptr)) == "aklt");

  fcsent_validation rep{};
  REQUIRE(fcsent_model_validate(aklt.ptr, 1e-10, &rep) == FCSENT_OK);
  CHECK(rep.isometry_ok);
  CHECK(rep.unital_ok);
  CHECK(rep.pure_ok);
  CHECK(rep.second_eigenvalue_modulus == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("transfer eigenvalues come back sorted") {
  Model aklt;
  REQUIRE(fcsent_model_resolve("aklt", &aklt.ptr) == FCSENT_OK);
  size_t count = 0;
  REQUIRE(fcsent_transfer_eigenvalues(aklt.ptr, nullptr, nullptr, 0, &count) ==
          FCSENT_OK);
  REQUIRE(count == 4);
  double re[4], im[4];
  REQUIRE(fcsent_transfer_eigenvalues(aklt.ptr, re, im, 4, &count) == FCSENT_OK);
  CHECK(re[0] == doctest::Approx(1.0));
  for (int i = 1; i < 4; ++i) CHECK(re[i] == doctest::Approx(-1.0 / 3.0));
}

TEST_CASE("envelope estimation") {
  Model aklt;
  REQUIRE(fcsent_model_resolve("aklt", &aklt.ptr) == FCSENT_OK);
  fcsent_envelope_params env{};
  REQUIRE(fcsent_envelope_estimate(aklt.ptr, 0.05, 30, &env) == FCSENT_OK);
  CHECK(env.lambda == doctest::Approx(0.35));
  CHECK(env.c > 0.0);
  CHECK(env.c1 == doctest::Approx(env.c * 4.0 / env.lambda));
  CHECK(env.n0 >= 1);
}

TEST_CASE("eof and concurrence cross-check over the C surface") {
  Model model;
  REQUIRE(fcsent_model_resolve("random:d=2,b=2,seed=3", &model.ptr) == FCSENT_OK);
  fcsent_eof_options opts;
  fcsent_eof_options_init(&opts);
  opts.restarts = 8;
  fcsent_eof_result res{};
  REQUIRE(fcsent_eof_memory(model.ptr, &opts, &res) == FCSENT_OK);
  double conc = 0, formula = 0;
  REQUIRE(fcsent_memory_concurrence(model.ptr, &conc, &formula) == FCSENT_OK);
  CHECK(std::abs(res.value - formula) <= 1e-3);

  fcsent_ppt_result ppt{};
  REQUIRE(fcsent_memory_ppt(model.ptr, &ppt) == FCSENT_OK);
  int entangled = -1;
  REQUIRE(fcsent_memory_separability(model.ptr, &entangled) == FCSENT_OK);
  CHECK(entangled == (ppt.is_ppt ? 0 : 1));
}

TEST_CASE("interval quantities over the C surface") {
  Model aklt;
  REQUIRE(fcsent_model_resolve("aklt", &aklt.ptr) == FCSENT_OK);
  fcsent_eof_options opts;
  fcsent_eof_options_init(&opts);
  opts.restarts = 4;
  fcsent_eof_result res{};
  REQUIRE(fcsent_eof_interval(aklt.ptr, 2, &opts, &res) == FCSENT_OK);
  CHECK(res.value > 0.0);
  fcsent_ppt_result ppt{};
  REQUIRE(fcsent_interval_ppt(aklt.ptr, 2, &ppt) == FCSENT_OK);
  CHECK(!ppt.is_ppt);
}

TEST_CASE("theorem reports serialize") {
  Model product;
  REQUIRE(fcsent_model_resolve("product:d=2,basis=0", &product.ptr) == FCSENT_OK);
  fcsent_run_options opts;
  fcsent_run_options_init(&opts);
  opts.eof.restarts = 2;
  fcsent_report* report = nullptr;
  REQUIRE(fcsent_verify_theorem1(product.ptr, 2, 4, &opts, &report) == FCSENT_OK);
  CHECK(fcsent_report_row_count(report) == 3);
  CHECK(fcsent_report_all_pass(report) == 1);
  char* csv = nullptr;
  REQUIRE(fcsent_report_csv(report, 0, &csv) == FCSENT_OK);
  CHECK(std::strncmp(csv, "n,eof_memory", 12) == 0);
  fcsent_string_free(csv);
  char* json = nullptr;
  REQUIRE(fcsent_report_json(report, 0, &json) == FCSENT_OK);
  CHECK(std::strstr(json, "\"model_hash\"") != nullptr);
  fcsent_string_free(json);
  fcsent_report_free(report);
}

TEST_CASE("JSON round trip through the C surface") {
  Model aklt;
  REQUIRE(fcsent_model_resolve("aklt", &aklt.ptr) == FCSENT_OK);
  char* text = nullptr;
  REQUIRE(fcsent_model_to_json(aklt.ptr, &text) == FCSENT_OK);
  Model reloaded;
  REQUIRE(fcsent_model_from_json(text, &reloaded.ptr) == FCSENT_OK);
  char* text2 = nullptr;
  REQUIRE(fcsent_model_to_json(reloaded.ptr, &text2) == FCSENT_OK);
  CHECK(std::string(text) == text2);
  fcsent_string_free(text);
  fcsent_string_free(text2);

  const char* path = "/tmp/fcsent_capi_model.json";
  REQUIRE(fcsent_model_save(aklt.ptr, path) == FCSENT_OK);
  Model loaded;
  REQUIRE(fcsent_model_load(path, &loaded.ptr) == FCSENT_OK);
  CHECK(fcsent_model_spin_dim(loaded.ptr) == 3);
  std::remove(path);
}

TEST_CASE("error paths set codes and messages") {
  Model bad;
  CHECK(fcsent_model_load("/nonexistent/missing.json", &bad.ptr) == FCSENT_ERR_IO);
  CHECK(std::strlen(fcsent_last_error()) > 0);

  CHECK(fcsent_model_from_json("{\"d\": 2}", &bad.ptr) == FCSENT_ERR_PARSE);
  CHECK(fcsent_model_from_json("not json at all", &bad.ptr) == FCSENT_ERR_PARSE);
  CHECK(fcsent_model_from_json("{\"d\": 1, \"b\": 1, \"v\": [[[2.0, 0.0]]]}",
                               &bad.ptr) == FCSENT_ERR_NOT_ISOMETRY);

  Model aklt;
  REQUIRE(fcsent_model_resolve("aklt", &aklt.ptr) == FCSENT_OK);
  double c = 0, e = 0;
  CHECK(fcsent_memory_concurrence(aklt.ptr, &c, &e) == FCSENT_ERR_INVALID_ARGUMENT);

  fcsent_ppt_result ppt{};
  CHECK(fcsent_interval_ppt(aklt.ptr, 30, &ppt) == FCSENT_ERR_DIMENSION_CAP);

  CHECK(fcsent_model_resolve(nullptr, nullptr) == FCSENT_ERR_INVALID_ARGUMENT);
  CHECK(std::string(fcsent_status_name(FCSENT_ERR_NOT_PURE)) == "not_pure");
}
