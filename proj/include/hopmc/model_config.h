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

// Plain-text `key = value` configuration. Blank lines and lines starting with
// '#' are ignored. Model parameters use the keys
//
//   common.{mass,gravity,rest_length}
//   musfib.{f_max,l_opt,width,shape,v_max,k_curv,n_ecc,tau,delay,gain,u0,u_min,u_max}
//   muslin.{f_max,mu,tau,delay,gain,u0,u_min,u_max}
//   dcmot.{k_t,gear,resistance,inductance,u_min,u_max,k_p,k_d,t_nominal,f_max_ref,body_mass}
//
// Anything else is left for the pipeline (binning, solver and run options).

#ifndef HOPMC_MODEL_CONFIG_H_
#define HOPMC_MODEL_CONFIG_H_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "hopmc/models.h"

namespace hopmc {

class KeyValueConfig {
 public:
  KeyValueConfig() = default;

  static KeyValueConfig parse(std::string_view text);
  static KeyValueConfig load(const std::filesystem::path& path);

  void set(std::string key, std::string value);
  bool contains(std::string_view key) const;
  std::optional<std::string> get(std::string_view key) const;
  // Throws std::invalid_argument when the value is not a finite number.
  std::optional<double> get_double(std::string_view key) const;

  const std::map<std::string, std::string, std::less<>>& entries() const { return entries_; }

 private:
  std::map<std::string, std::string, std::less<>> entries_;
};

double parse_double(std::string_view text, std::string_view what);

// Applies `common.*` and `<model>.*` keys to `spec`. Unknown parameter names
// under those prefixes are errors; keys for other models are ignored. When
// dcmot.body_mass is not given it is re-derived from common.mass. The result
// is validated.
void apply_model_overrides(ModelSpec& spec, const KeyValueConfig& config);

// True for keys consumed by apply_model_overrides for any model.
bool is_model_key(std::string_view key);

}  // namespace hopmc

#endif  // HOPMC_MODEL_CONFIG_H_
