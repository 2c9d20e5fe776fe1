// Copyright 2026 The hopmc Authors
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

#include "hopmc/model_config.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

namespace hopmc {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <class Params>
using Field = std::pair<std::string_view, double Params::*>;

const std::vector<Field<HopperCommon>>& common_fields() {
  static const std::vector<Field<HopperCommon>> f = {
      {"mass", &HopperCommon::mass},
      {"gravity", &HopperCommon::gravity},
      {"rest_length", &HopperCommon::rest_length},
  };
  return f;
}

const std::vector<Field<MusFibParams>>& musfib_fields() {
  static const std::vector<Field<MusFibParams>> f = {
      {"f_max", &MusFibParams::f_max},   {"l_opt", &MusFibParams::l_opt},
      {"width", &MusFibParams::width},   {"shape", &MusFibParams::shape},
      {"v_max", &MusFibParams::v_max},   {"k_curv", &MusFibParams::k_curv},
      {"n_ecc", &MusFibParams::n_ecc},   {"tau", &MusFibParams::tau},
      {"delay", &MusFibParams::delay},   {"gain", &MusFibParams::gain},
      {"u0", &MusFibParams::u0},         {"u_min", &MusFibParams::u_min},
      {"u_max", &MusFibParams::u_max},
  };
  return f;
}

const std::vector<Field<MusLinParams>>& muslin_fields() {
  static const std::vector<Field<MusLinParams>> f = {
      {"f_max", &MusLinParams::f_max}, {"mu", &MusLinParams::mu},
      {"tau", &MusLinParams::tau},     {"delay", &MusLinParams::delay},
      {"gain", &MusLinParams::gain},   {"u0", &MusLinParams::u0},
      {"u_min", &MusLinParams::u_min}, {"u_max", &MusLinParams::u_max},
  };
  return f;
}

const std::vector<Field<DCMotParams>>& dcmot_fields() {
  static const std::vector<Field<DCMotParams>> f = {
      {"k_t", &DCMotParams::k_t},
      {"gear", &DCMotParams::gear},
      {"resistance", &DCMotParams::resistance},
      {"inductance", &DCMotParams::inductance},
      {"u_min", &DCMotParams::u_min},
      {"u_max", &DCMotParams::u_max},
      {"k_p", &DCMotParams::k_p},
      {"k_d", &DCMotParams::k_d},
      {"t_nominal", &DCMotParams::t_nominal},
      {"f_max_ref", &DCMotParams::f_max_ref},
      {"body_mass", &DCMotParams::body_mass},
  };
  return f;
}

template <class Params>
bool has_field(const std::vector<Field<Params>>& fields, std::string_view name) {
  for (const auto& [n, _] : fields)
    if (n == name) return true;
  return false;
}

// Applies every `<prefix>.<field>` entry of `config` to `target`.
template <class Params>
void apply_prefix(Params& target, std::string_view prefix,
                  const std::vector<Field<Params>>& fields, const KeyValueConfig& config) {
  for (const auto& [key, value] : config.entries()) {
    if (key.size() <= prefix.size() + 1 || key.compare(0, prefix.size(), prefix) != 0 ||
        key[prefix.size()] != '.')
      continue;
    const std::string_view name = std::string_view(key).substr(prefix.size() + 1);
    bool found = false;
    for (const auto& [n, member] : fields) {
      if (n == name) {
        target.*member = parse_double(value, key);
        found = true;
        break;
      }
    }
    if (!found) throw std::invalid_argument("unknown parameter '" + key + "'");
  }
}

}  // namespace

double parse_double(std::string_view text, std::string_view what) {
  const auto t = trim(text);
  double value = 0.0;
  const auto* end = t.data() + t.size();
  const auto [ptr, ec] = std::from_chars(t.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw std::invalid_argument("'" + std::string(what) + "': not a finite number: '" +
                                std::string(t) + "'");
  }
  return value;
}

KeyValueConfig KeyValueConfig::parse(std::string_view text) {
  KeyValueConfig config;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": expected 'key = value'");
    }
    const auto key = trim(line.substr(0, eq));
    if (key.empty()) {
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": empty key");
    }
    config.set(std::string(key), std::string(trim(line.substr(eq + 1))));
  }
  return config;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

void KeyValueConfig::set(std::string key, std::string value) {
  entries_[std::move(key)] = std::move(value);
}

bool KeyValueConfig::contains(std::string_view key) const {
  return entries_.find(key) != entries_.end();
}

std::optional<std::string> KeyValueConfig::get(std::string_view key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::optional<double> KeyValueConfig::get_double(std::string_view key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return parse_double(it->second, key);
}

void apply_model_overrides(ModelSpec& spec, const KeyValueConfig& config) {
  apply_prefix(spec.common, "common", common_fields(), config);
  switch (spec.kind) {
    case ModelKind::kMusFib:
      apply_prefix(std::get<MusFibParams>(spec.params), "musfib", musfib_fields(), config);
      break;
    case ModelKind::kMusLin:
      apply_prefix(std::get<MusLinParams>(spec.params), "muslin", muslin_fields(), config);
      break;
    case ModelKind::kDCMot: {
      auto& p = std::get<DCMotParams>(spec.params);
      apply_prefix(p, "dcmot", dcmot_fields(), config);
      if (!config.contains("dcmot.body_mass")) p.body_mass = p.scaled_mass(spec.common.mass);
      break;
    }
  }
  spec.validate();
}

bool is_model_key(std::string_view key) {
  const auto dot = key.find('.');
  if (dot == std::string_view::npos) return false;
  const auto prefix = key.substr(0, dot);
  const auto name = key.substr(dot + 1);
  if (prefix == "common") return has_field(common_fields(), name);
  if (prefix == "musfib") return has_field(musfib_fields(), name);
  if (prefix == "muslin") return has_field(muslin_fields(), name);
  if (prefix == "dcmot") return has_field(dcmot_fields(), name);
  return false;
}

}  // namespace hopmc
