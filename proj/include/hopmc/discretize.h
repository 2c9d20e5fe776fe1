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

// Uniform binning of trace channels over domains shared by all models, and
// construction of the aligned symbol sequences (w', w, s, a).
//
// Channel names: "y", "yd", "ydd" (world), "action" (normalized actuator
// command) and the sensor names of the traces ("force" for the muscle
// models; the motor model senses "y" and "yd", which share the world
// domains).

#ifndef HOPMC_DISCRETIZE_H_
#define HOPMC_DISCRETIZE_H_

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "hopmc/infotheory.h"
#include "hopmc/models.h"
#include "hopmc/trace.h"

namespace hopmc {

struct ChannelDomain {
  double min = 0.0;
  double max = 1.0;
  std::size_t bins = 300;
};

class BinningSpec {
 public:
  static constexpr std::size_t kDefaultBins = 300;

  const ChannelDomain& channel(const std::string& name) const;
  bool has_channel(const std::string& name) const { return channels_.count(name) != 0; }
  const std::map<std::string, ChannelDomain>& channels() const { return channels_; }

  void set_channel(const std::string& name, ChannelDomain domain);
  // Sets the bin count of every channel.
  void set_bins(std::size_t bins);
  void set_bins(const std::string& name, std::size_t bins);

  // One line per channel: `name min max bins`, 17 significant digits.
  std::string serialize() const;
  static BinningSpec parse(const std::string& text);
  void save(const std::filesystem::path& path) const;
  static BinningSpec load(const std::filesystem::path& path);

 private:
  std::map<std::string, ChannelDomain> channels_;
};

// Per-channel min/max over all traces (actions normalized first). Throws
// std::invalid_argument for an empty trace list or a zero-range channel.
BinningSpec compute_domains(std::span<const Trace> traces,
                            std::size_t bins = BinningSpec::kDefaultBins);

// floor((x - min) / (max - min) * B), with x = max mapped to B - 1. Throws
// std::invalid_argument when a value lies outside [min, max].
std::vector<Symbol> discretize_channel(std::span<const double> x, double min, double max,
                                       std::size_t bins);
Symbol discretize_value(double x, double min, double max, std::size_t bins);

// Mixed-radix index s_1 + B_1 s_2 + B_1 B_2 s_3 + ...
Symbol combine_symbols(std::span<const Symbol> symbols, std::span<const std::size_t> bases);
std::vector<Symbol> decompose_symbol(Symbol composite, std::span<const std::size_t> bases);

// Motor voltages map affinely from [action_min, action_max] onto [0, 1];
// muscle stimulations are already in the unit interval and pass through.
std::vector<double> normalize_action(std::span<const double> action, ModelKind kind,
                                     double action_min = -48.0, double action_max = 48.0);
std::vector<double> normalized_action(const Trace& trace);

struct DiscreteTrace {
  std::vector<Symbol> w_next;
  std::vector<Symbol> w;
  std::vector<Symbol> s;
  std::vector<Symbol> a;
  std::vector<std::size_t> world_bases;   // (B_y, B_yd, B_ydd)
  std::vector<std::size_t> sensor_bases;
  std::size_t action_base = 0;

  std::size_t size() const { return w.size(); }
};

// Symbols for every sample, then the shifted sequences
// w' = w(2..T), w = w(1..T-1), s = s(1..T-1), a = a(1..T-1).
DiscreteTrace build_discrete_trace(const Trace& trace, const BinningSpec& spec);

// From already discretized per-sample symbols (length T >= 2).
DiscreteTrace align_symbols(std::span<const Symbol> world, std::span<const Symbol> sensor,
                            std::span<const Symbol> action);

}  // namespace hopmc

#endif  // HOPMC_DISCRETIZE_H_
