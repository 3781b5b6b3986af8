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

#pragma once

#include <cstdint>
#include <string>

#include "fcs.hpp"

namespace fcsent::models {

struct ModelSpec {
  enum class Provenance { Builtin, File, RandomSeed };

  std::string name;
  fcs::FcsModel model;
  Provenance provenance = Provenance::Builtin;
  std::uint64_t seed = 0;
};

/// Spin-1 valence-bond chain, d = 3, b = 2. Transfer spectrum
/// {1, -1/3, -1/3, -1/3}, stationary state 1/2.
ModelSpec aklt();

/// b = 1 chain whose interval states are projectors onto phi^(x n); every
/// entanglement quantity vanishes. phi must be normalized.
ModelSpec product_model(const linalg::Vector& phi);

/// Seeded random pure model: b orthonormal rows of a Gaussian matrix,
/// regenerated with incremented seed until the purity check passes
/// (at most 32 attempts). Deterministic for a given seed.
ModelSpec random_model(int d, int b, std::uint64_t seed);

struct ModelFormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Structurally valid model whose v fails v v^dagger = 1.
struct IsometryError : ModelFormatError {
  using ModelFormatError::ModelFormatError;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

ModelSpec load_model(const std::string& path);
void save_model(const ModelSpec& spec, const std::string& path);

std::string to_json_string(const fcs::FcsModel& model);
fcs::FcsModel from_json_string(const std::string& text);

/// FNV-1a over the canonical JSON serialization, as 16 hex digits.
std::string model_hash(const fcs::FcsModel& model);

/// Resolve "aklt", "product:d=<d>,basis=<k>", "random:d=<d>,b=<b>,seed=<s>",
/// or a file path.
ModelSpec resolve(const std::string& ref);

}  // namespace fcsent::models
