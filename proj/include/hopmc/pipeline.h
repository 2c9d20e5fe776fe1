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

// End-to-end driver: simulation with trace files on disk, the MusFib to
// DCMot reference dependency, joint binning and measure tables.
//
// Files in the output directory:
//
//   <model>.csv, <model>.csv.meta        trace and its sidecar
//   musfib_reference.csv(.meta)          cached stance reference
//   binning.txt                          domains used by the last measure
//   mc_state_<model>.csv                 state-dependent series
//   bin_sweep.csv                        measures against bin count
//
// Configuration keys besides the model parameters (see model_config.h):
//
//   solver.{abs_tol,rel_tol,max_step,initial_step,event_tol,sample_rate}
//   reference.duration       length of the MusFib run feeding DCMot [s]
//   binning.bins             global bin count
//   binning.<channel>.bins   per-channel override

#ifndef HOPMC_PIPELINE_H_
#define HOPMC_PIPELINE_H_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hopmc/discretize.h"
#include "hopmc/hopper.h"
#include "hopmc/measures.h"
#include "hopmc/model_config.h"
#include "hopmc/trace.h"

namespace hopmc {

// Bad arguments, files or configuration (exit code 1).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNumerical = 2;

// Start of the periodic regime; earlier samples are left out of the height
// and flight-alignment checks but kept for the measures.
inline constexpr double kTransient = 2.0;

struct PipelineConfig {
  std::vector<ModelKind> models = {ModelKind::kMusFib, ModelKind::kMusLin, ModelKind::kDCMot};
  double duration = 8.0;  // [s]
  std::size_t bins = BinningSpec::kDefaultBins;
  std::filesystem::path out_dir = "out";
  bool state_series = false;
  std::size_t smooth_block = 5;
  KeyValueConfig overrides;
  // Explicit DCMot reference (CSV with t,y,yd,ydd); bypasses the cache.
  std::optional<std::filesystem::path> reference;

  // Checks values and rejects unknown configuration keys.
  void validate() const;
};

// Reads a config file into `cfg.overrides`; `binning.bins` also sets
// `cfg.bins`.
void load_config_file(PipelineConfig& cfg, const std::filesystem::path& path);

ModelSpec configured_spec(ModelKind kind, const PipelineConfig& cfg);
IntegratorConfig configured_integrator(const PipelineConfig& cfg, double duration);

std::filesystem::path trace_file(const PipelineConfig& cfg, ModelKind kind);
std::filesystem::path reference_file(const PipelineConfig& cfg);

struct SimulateOutcome {
  std::filesystem::path trace_path;
  SimulationResult result;
  double max_height = 0.0;  // after the transient when the run is long enough
};

// Simulates one model and writes its trace and sidecar. DCMot obtains its
// reference through stance_reference(). Throws NumericalError when the
// integration fails.
SimulateOutcome simulate_model(ModelKind kind, const PipelineConfig& cfg,
                               std::ostream* log = nullptr);

// DCMot reference. Order of preference: `cfg.reference`; the cache when its
// run key matches; a MusFib trace on disk with matching settings; a fresh
// in-memory MusFib run of reference.duration seconds (default 8).
StanceReference stance_reference(const PipelineConfig& cfg, std::ostream* log = nullptr);

// Loads traces, rejecting duplicate models, sensor channels that do not
// belong to the model and differing sample spacing.
std::vector<Trace> load_traces(std::span<const std::filesystem::path> paths);
void check_trace_set(std::span<const Trace> traces);

// Joint domains over all traces with the configured bin counts.
BinningSpec configured_binning(std::span<const Trace> traces, const PipelineConfig& cfg);

struct ModelMeasures {
  ModelKind kind = ModelKind::kMusFib;
  MeasureResult result;
  StateDependentSeries mc_w_series;
  StateDependentSeries mc_mi_series;
};

struct MeasureReport {
  BinningSpec binning;
  std::vector<ModelMeasures> rows;  // same order as the traces
};

MeasureReport measure_traces(std::span<const Trace> traces, const BinningSpec& binning);

// Fixed-width table with the bin count in the header.
std::string format_measure_table(const MeasureReport& report, std::size_t bins);

// `t,mc_w,mc_mi,mc_w_smooth,mc_mi_smooth,y,contact`, one row per aligned
// time step.
std::string state_series_csv(const Trace& trace, const ModelMeasures& m,
                             std::size_t smooth_block);

struct SweepRow {
  ModelKind kind = ModelKind::kMusFib;
  std::size_t bins = 0;
  MeasureResult result;
};

// Same domains for every bin count. Throws UsageError for fewer than two
// bin counts.
std::vector<SweepRow> sweep_bins(std::span<const Trace> traces,
                                 std::span<const std::size_t> bin_counts);
std::string sweep_csv(std::span<const SweepRow> rows);

// MC_W(t) averaged over the complete flight phases after `t_from`, indexed
// by samples since lift off, truncated to the shortest flight.
std::vector<double> mean_flight_profile(const Trace& trace, std::span<const double> series,
                                        double t_from = kTransient);

// RMS difference of two flight profiles over their common length.
double profile_rms(std::span<const double> a, std::span<const double> b);

struct FlightAgreement {
  ModelKind a = ModelKind::kMusFib;
  ModelKind b = ModelKind::kMusFib;
  double rms = 0.0;     // [bits]
  std::size_t length = 0;
};

std::vector<FlightAgreement> flight_agreement(std::span<const Trace> traces,
                                              std::span<const ModelMeasures> measures);

// Verb implementations; they print to `out` and write files below
// cfg.out_dir.
void cmd_simulate(const PipelineConfig& cfg, std::ostream& out);
void cmd_measure(const PipelineConfig& cfg, std::span<const std::filesystem::path> traces,
                 std::ostream& out);
void cmd_sweep_bins(const PipelineConfig& cfg, std::span<const std::filesystem::path> traces,
                    std::span<const std::size_t> bin_counts, std::ostream& out);
// Simulates every configured model (reusing the reference cache), then
// measures, sweeps and summarizes the flight-phase agreement.
void cmd_report(const PipelineConfig& cfg, std::ostream& out);

}  // namespace hopmc

#endif  // HOPMC_PIPELINE_H_
