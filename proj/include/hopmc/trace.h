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

#ifndef HOPMC_TRACE_H_
#define HOPMC_TRACE_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "hopmc/model_config.h"
#include "hopmc/models.h"

namespace hopmc {

// Uniformly sampled record of one hopping run.
//
// World state w = (y, yd, ydd). The sensor channels are model specific:
// the muscle models sense their leg force as it reaches the reflex, one
// transport delay late ("force"); the motor model senses
// position and velocity ("y", "yd"). `action` is the raw controller output
// (stimulation u, or armature voltage in volts).
struct Trace {
  ModelKind kind = ModelKind::kMusFib;
  std::vector<double> t;
  std::vector<double> y;
  std::vector<double> yd;
  std::vector<double> ydd;
  std::vector<std::string> sensor_names;
  std::vector<std::vector<double>> sensors;  // [channel][sample]
  std::vector<double> action;
  std::vector<std::uint8_t> contact;
  // Raw action bounds, used to map motor voltages onto [0, 1].
  double action_min = 0.0;
  double action_max = 1.0;

  std::size_t size() const { return t.size(); }
  void reserve(std::size_t n);
  // Throws std::invalid_argument when channel lengths disagree or values
  // are not finite.
  void validate() const;
};

// Sensor channel names produced by a model.
std::vector<std::string> sensor_channels(ModelKind kind);

// CSV with header `t,y,yd,ydd,s1[,s2],a,contact`, 17 significant digits.
void write_trace_csv(const Trace& trace, const std::filesystem::path& path);
std::string trace_csv(const Trace& trace);

// Reads a trace CSV together with its metadata sidecar (`<path>.meta`),
// which supplies model kind, sensor names and action bounds.
Trace read_trace(const std::filesystem::path& path);

// `key = value` sidecar next to a trace file.
std::filesystem::path metadata_path(const std::filesystem::path& trace_path);
void write_metadata(const KeyValueConfig& meta, const std::filesystem::path& path);

// Contiguous run of contact samples [begin, end).
struct StanceSegment {
  std::size_t begin = 0;
  std::size_t end = 0;
};

// Stance phases that have flight samples on both sides.
std::vector<StanceSegment> complete_stance_phases(const Trace& trace);

// Flight phases that have stance samples on both sides.
std::vector<StanceSegment> complete_flight_phases(const Trace& trace);

// Last complete stance phase as a reference trajectory. The node grid keeps
// the trace's sample spacing and includes the flight sample on either side;
// times are shifted so that 0 is the touch down, located by root finding on
// the cubic Hermite interpolant of y between the bracketing samples.
// Throws std::invalid_argument when the trace has no complete stance phase.
StanceReference extract_stance_reference(const Trace& trace, double rest_length = 1.0);

void write_reference_csv(const StanceReference& ref, const std::filesystem::path& path);
StanceReference read_reference_csv(const std::filesystem::path& path);

// 64-bit FNV-1a of a byte string, as 16 hex digits.
std::string content_hash(const std::string& bytes);
std::string file_hash(const std::filesystem::path& path);

}  // namespace hopmc

#endif  // HOPMC_TRACE_H_
