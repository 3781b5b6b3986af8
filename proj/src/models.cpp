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

#include "models.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rng.hpp"

namespace fcsent::models {

using linalg::Complex;
using linalg::Index;
using linalg::Matrix;
using linalg::Vector;

ModelSpec aklt() {
  const double w2 = std::sqrt(2.0 / 3.0);
  const double w1 = std::sqrt(1.0 / 3.0);
  Matrix plus = Matrix::Zero(2, 2);
  plus(0, 1) = w2;
  Matrix zero = Matrix::Zero(2, 2);
  zero(0, 0) = -w1;
  zero(1, 1) = w1;
  Matrix minus = Matrix::Zero(2, 2);
  minus(1, 0) = -w2;

  Matrix v(2, 6);
  v.block(0, 0, 2, 2) = plus;
  v.block(0, 2, 2, 2) = zero;
  v.block(0, 4, 2, 2) = minus;
  return {"aklt", fcs::FcsModel(3, 2, std::move(v)), ModelSpec::Provenance::Builtin, 0};
}

ModelSpec product_model(const Vector& phi) {
  if (std::abs(phi.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("product_model: phi must be a unit vector");
  Matrix v = phi.adjoint();  // 1 x d
  std::ostringstream name;
  name << "product:d=" << phi.size();
  return {name.str(), fcs::FcsModel(phi.size(), 1, std::move(v)),
          ModelSpec::Provenance::Builtin, 0};
}

ModelSpec random_model(int d, int b, std::uint64_t seed) {
  if (d < 1 || b < 1) throw std::invalid_argument("random_model: d, b must be >= 1");
  constexpr int kMaxRetries = 32;
  fcs::ValidationReport last;
  for (int attempt = 0; attempt < kMaxRetries; ++attempt) {
    rng::Rng gen(seed + static_cast<std::uint64_t>(attempt));
    Matrix g = gen.gaussian_matrix(b, static_cast<Index>(d) * b);
    // Modified Gram-Schmidt on the rows.
    for (Index i = 0; i < b; ++i) {
      for (Index j = 0; j < i; ++j)
        g.row(i) -= g.row(j).dot(g.row(i)) * g.row(j);
      const double norm = g.row(i).norm();
      if (norm < 1e-8) break;  // degenerate draw, retry
      g.row(i) /= norm;
    }
    fcs::FcsModel model(d, b, g);
    last = fcs::validate(model);
    bool usable = last.all();
    if (usable && b > 1) {
      // A full-rank stationary state is required downstream.
      try {
        const auto fp = fcs::fixed_point(fcs::transfer_operator(model));
        usable = fp.min_eigenvalue > 1e-8;
      } catch (const std::runtime_error&) {
        usable = false;
      }
    }
    if (usable) {
      std::ostringstream name;
      name << "random:d=" << d << ",b=" << b << ",seed=" << seed;
      return {name.str(), std::move(model), ModelSpec::Provenance::RandomSeed, seed};
    }
  }
  std::ostringstream msg;
  msg << "random_model: no pure model after " << kMaxRetries
      << " attempts (last second modulus " << last.second_modulus
      << ", peripheral count " << last.peripheral_count << ")";
  throw std::runtime_error(msg.str());
}

std::string to_json_string(const fcs::FcsModel& model) {
  nlohmann::ordered_json j;
  j["d"] = static_cast<int>(model.d);
  j["b"] = static_cast<int>(model.b);
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (Index i = 0; i < model.v.rows(); ++i) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (Index k = 0; k < model.v.cols(); ++k)
      row.push_back({model.v(i, k).real(), model.v(i, k).imag()});
    rows.push_back(std::move(row));
  }
  j["v"] = std::move(rows);
  return j.dump();
}

fcs::FcsModel from_json_string(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ModelFormatError(std::string("model JSON parse error: ") + e.what());
  }
  if (!j.is_object() || !j.contains("d") || !j.contains("b") || !j.contains("v"))
    throw ModelFormatError("model JSON must contain keys d, b, v");
  if (!j["d"].is_number_integer() || !j["b"].is_number_integer())
    throw ModelFormatError("model JSON: d and b must be integers");
  const Index d = j["d"].get<Index>();
  const Index b = j["b"].get<Index>();
  if (d < 1 || b < 1) throw ModelFormatError("model JSON: d and b must be >= 1");
  if (!j["v"].is_array() || static_cast<Index>(j["v"].size()) != b)
    throw ModelFormatError("model JSON: v must have b rows");

  Matrix v(b, d * b);
  for (Index i = 0; i < b; ++i) {
    const auto& row = j["v"][static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != d * b)
      throw ModelFormatError("model JSON: each row of v must have d*b entries");
    for (Index k = 0; k < d * b; ++k) {
      const auto& entry = row[static_cast<std::size_t>(k)];
      if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() ||
          !entry[1].is_number())
        throw ModelFormatError("model JSON: entries must be [re, im] pairs");
      v(i, k) = Complex(entry[0].get<double>(), entry[1].get<double>());
    }
  }
  fcs::FcsModel model(d, b, std::move(v));
  const auto rep = fcs::validate(model);
  if (!rep.isometry_ok) {
    std::ostringstream msg;
    msg << "model JSON: v fails v v^dagger = 1 by " << rep.isometry_deviation;
    throw IsometryError(msg.str());
  }
  return model;
}

ModelSpec load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("load_model: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return {path, from_json_string(buf.str()), ModelSpec::Provenance::File, 0};
}

void save_model(const ModelSpec& spec, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("save_model: cannot open " + path);
  out << to_json_string(spec.model) << '\n';
  if (!out) throw IoError("save_model: write failed for " + path);
}

std::string model_hash(const fcs::FcsModel& model) {
  const std::string text = to_json_string(model);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream out;
  out << std::hex;
  for (int shift = 60; shift >= 0; shift -= 4) out << ((h >> shift) & 0xF);
  return out.str();
}

namespace {

// Parses "key=value" lists like "d=2,b=2,seed=7".
std::uint64_t parse_field(const std::string& body, const std::string& key) {
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) continue;
    if (item.substr(0, eq) == key) {
      try {
        return std::stoull(item.substr(eq + 1));
      } catch (const std::exception&) {
        throw std::invalid_argument("resolve: bad value for '" + key + "' in " + body);
      }
    }
  }
  throw std::invalid_argument("resolve: missing field '" + key + "' in " + body);
}

}  // namespace

ModelSpec resolve(const std::string& ref) {
  if (ref == "aklt") return aklt();
  if (ref.rfind("product:", 0) == 0) {
    const std::string body = ref.substr(8);
    const auto d = static_cast<Index>(parse_field(body, "d"));
    const auto basis = static_cast<Index>(parse_field(body, "basis"));
    if (basis >= d)
      throw std::invalid_argument("resolve: basis index out of range in " + ref);
    Vector phi = Vector::Zero(d);
    phi(basis) = 1.0;
    ModelSpec spec = product_model(phi);
    spec.name = ref;
    return spec;
  }
  if (ref.rfind("random:", 0) == 0) {
    const std::string body = ref.substr(7);
    const auto d = static_cast<int>(parse_field(body, "d"));
    const auto b = static_cast<int>(parse_field(body, "b"));
    const auto seed = parse_field(body, "seed");
    return random_model(d, b, seed);
  }
  return load_model(ref);
}

}  // namespace fcsent::models
