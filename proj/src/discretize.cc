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

#include "hopmc/discretize.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "hopmc/model_config.h"

namespace hopmc {

namespace {

struct Range {
  double min = std::numeric_limits<double>::infinity();
  double max = -std::numeric_limits<double>::infinity();

  void add(std::span<const double> x) {
    for (double v : x) {
      min = std::min(min, v);
      max = std::max(max, v);
    }
  }
};

std::vector<Symbol> channel_symbols(const BinningSpec& spec, const std::string& name,
                                    std::span<const double> x) {
  const auto& d = spec.channel(name);
  try {
    return discretize_channel(x, d.min, d.max, d.bins);
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument("channel '" + name + "': " + e.what());
  }
}

}  // namespace

const ChannelDomain& BinningSpec::channel(const std::string& name) const {
  const auto it = channels_.find(name);
  if (it == channels_.end()) throw std::invalid_argument("binning has no channel '" + name + "'");
  return it->second;
}

void BinningSpec::set_channel(const std::string& name, ChannelDomain domain) {
  if (!(domain.min < domain.max))
    throw std::invalid_argument("channel '" + name + "' has an empty domain");
  if (domain.bins < 1) throw std::invalid_argument("channel '" + name + "' needs >= 1 bin");
  channels_[name] = domain;
}

void BinningSpec::set_bins(std::size_t bins) {
  if (bins < 1) throw std::invalid_argument("bin count must be >= 1");
  for (auto& [_, d] : channels_) d.bins = bins;
}

void BinningSpec::set_bins(const std::string& name, std::size_t bins) {
  if (bins < 1) throw std::invalid_argument("bin count must be >= 1");
  const auto it = channels_.find(name);
  if (it == channels_.end()) throw std::invalid_argument("binning has no channel '" + name + "'");
  it->second.bins = bins;
}

std::string BinningSpec::serialize() const {
  std::string out;
  char buf[128];
  for (const auto& [name, d] : channels_) {
    std::snprintf(buf, sizeof buf, " %.17g %.17g %zu\n", d.min, d.max, d.bins);
    out += name;
    out += buf;
  }
  return out;
}

BinningSpec BinningSpec::parse(const std::string& text) {
  BinningSpec spec;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    std::istringstream ls(line);
    std::string name, lo, hi;
    std::size_t bins = 0;
    if (!(ls >> name >> lo >> hi >> bins))
      throw std::invalid_argument("bad binning line: '" + line + "'");
    spec.set_channel(name, {parse_double(lo, name), parse_double(hi, name), bins});
  }
  return spec;
}

void BinningSpec::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << serialize();
}

BinningSpec BinningSpec::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

BinningSpec compute_domains(std::span<const Trace> traces, std::size_t bins) {
  if (traces.empty()) throw std::invalid_argument("compute_domains: no traces");
  std::map<std::string, Range> ranges;
  for (const auto& trace : traces) {
    trace.validate();
    ranges["y"].add(trace.y);
    ranges["yd"].add(trace.yd);
    ranges["ydd"].add(trace.ydd);
    ranges["action"].add(normalized_action(trace));
    for (std::size_t c = 0; c < trace.sensors.size(); ++c)
      ranges[trace.sensor_names[c]].add(trace.sensors[c]);
  }
  BinningSpec spec;
  for (const auto& [name, r] : ranges) {
    if (!(r.min < r.max))
      throw std::invalid_argument("channel '" + name + "' has zero range over all traces");
    spec.set_channel(name, {r.min, r.max, bins});
  }
  return spec;
}

Symbol discretize_value(double x, double min, double max, std::size_t bins) {
  if (!(min < max)) throw std::invalid_argument("empty domain");
  if (!(x >= min && x <= max)) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "value %.17g outside domain [%.17g, %.17g]", x, min, max);
    throw std::invalid_argument(buf);
  }
  const double scaled = (x - min) / (max - min) * static_cast<double>(bins);
  const auto s = static_cast<Symbol>(std::floor(scaled));
  return std::min<Symbol>(s, bins - 1);
}

std::vector<Symbol> discretize_channel(std::span<const double> x, double min, double max,
                                       std::size_t bins) {
  if (bins < 1) throw std::invalid_argument("bin count must be >= 1");
  std::vector<Symbol> out;
  out.reserve(x.size());
  for (double v : x) out.push_back(discretize_value(v, min, max, bins));
  return out;
}

Symbol combine_symbols(std::span<const Symbol> symbols, std::span<const std::size_t> bases) {
  if (symbols.size() != bases.size())
    throw std::invalid_argument("combine_symbols: symbol and base counts differ");
  Symbol composite = 0;
  Symbol radix = 1;
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    if (symbols[i] >= bases[i]) throw std::invalid_argument("combine_symbols: symbol out of range");
    composite += radix * symbols[i];
    radix *= bases[i];
  }
  return composite;
}

std::vector<Symbol> decompose_symbol(Symbol composite, std::span<const std::size_t> bases) {
  std::vector<Symbol> out;
  out.reserve(bases.size());
  for (std::size_t b : bases) {
    out.push_back(composite % b);
    composite /= b;
  }
  if (composite != 0) throw std::invalid_argument("decompose_symbol: composite out of range");
  return out;
}

std::vector<double> normalize_action(std::span<const double> action, ModelKind kind,
                                     double action_min, double action_max) {
  if (kind != ModelKind::kDCMot) return {action.begin(), action.end()};
  if (!(action_min < action_max)) throw std::invalid_argument("empty action bounds");
  std::vector<double> out;
  out.reserve(action.size());
  for (double a : action) out.push_back((a - action_min) / (action_max - action_min));
  return out;
}

std::vector<double> normalized_action(const Trace& trace) {
  return normalize_action(trace.action, trace.kind, trace.action_min, trace.action_max);
}

DiscreteTrace align_symbols(std::span<const Symbol> world, std::span<const Symbol> sensor,
                            std::span<const Symbol> action) {
  if (world.size() != sensor.size() || world.size() != action.size())
    throw std::invalid_argument("align_symbols: sequence lengths differ");
  if (world.size() < 2) throw std::invalid_argument("align_symbols: need at least 2 samples");
  DiscreteTrace d;
  d.w_next.assign(world.begin() + 1, world.end());
  d.w.assign(world.begin(), world.end() - 1);
  d.s.assign(sensor.begin(), sensor.end() - 1);
  d.a.assign(action.begin(), action.end() - 1);
  return d;
}

DiscreteTrace build_discrete_trace(const Trace& trace, const BinningSpec& spec) {
  trace.validate();
  const auto y = channel_symbols(spec, "y", trace.y);
  const auto yd = channel_symbols(spec, "yd", trace.yd);
  const auto ydd = channel_symbols(spec, "ydd", trace.ydd);
  const auto a = channel_symbols(spec, "action", normalized_action(trace));
  std::vector<std::vector<Symbol>> sensors;
  std::vector<std::size_t> sensor_bases;
  for (std::size_t c = 0; c < trace.sensors.size(); ++c) {
    sensors.push_back(channel_symbols(spec, trace.sensor_names[c], trace.sensors[c]));
    sensor_bases.push_back(spec.channel(trace.sensor_names[c]).bins);
  }
  const std::vector<std::size_t> world_bases = {spec.channel("y").bins, spec.channel("yd").bins,
                                                spec.channel("ydd").bins};

  const std::size_t n = trace.size();
  std::vector<Symbol> world(n), sensor(n);
  std::vector<Symbol> parts(3), sparts(sensors.size());
  for (std::size_t i = 0; i < n; ++i) {
    parts = {y[i], yd[i], ydd[i]};
    world[i] = combine_symbols(parts, world_bases);
    for (std::size_t c = 0; c < sensors.size(); ++c) sparts[c] = sensors[c][i];
    sensor[i] = combine_symbols(sparts, sensor_bases);
  }
  DiscreteTrace d = align_symbols(world, sensor, a);
  d.world_bases = world_bases;
  d.sensor_bases = sensor_bases;
  d.action_base = spec.channel("action").bins;
  return d;
}

}  // namespace hopmc
