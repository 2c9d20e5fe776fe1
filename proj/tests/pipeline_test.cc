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

#include "hopmc/pipeline.h"

#include <gtest/gtest.h>
#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace hopmc {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t line_count(const std::string& s) {
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

fs::path fresh_dir(const std::string& name) {
  const fs::path p =
      fs::temp_directory_path() / ("hopmc_pipeline_" + std::to_string(::getpid()) + "_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

PipelineConfig short_config(const fs::path& dir, std::vector<ModelKind> models,
                            double duration = 3.0) {
  PipelineConfig cfg;
  cfg.models = std::move(models);
  cfg.duration = duration;
  cfg.out_dir = dir;
  cfg.overrides.set("reference.duration", "3");
  return cfg;
}

// Three-second runs of the muscle models, shared by the measuring tests.
class PipelineRuns : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new fs::path(fresh_dir("shared"));
    const PipelineConfig cfg = short_config(*dir_, {ModelKind::kMusFib, ModelKind::kMusLin});
    std::ostringstream log;
    cmd_simulate(cfg, log);
  }
  static void TearDownTestSuite() {
    fs::remove_all(*dir_);
    delete dir_;
  }
  static std::vector<fs::path> paths() { return {*dir_ / "musfib.csv", *dir_ / "muslin.csv"}; }

  static fs::path* dir_;
};

fs::path* PipelineRuns::dir_ = nullptr;

TEST_F(PipelineRuns, SimulateWritesTraceAndMetadata) {
  const std::string csv = slurp(*dir_ / "musfib.csv");
  EXPECT_EQ(line_count(csv), 3002u);  // header + 3001 samples
  const auto meta = KeyValueConfig::load(*dir_ / "musfib.csv.meta");
  EXPECT_EQ(meta.get("model").value(), "musfib");
  EXPECT_EQ(meta.get("sensors").value(), "force");
  EXPECT_EQ(meta.get("samples").value(), "3001");
  EXPECT_TRUE(meta.get("run_key").has_value());
  const Trace t = read_trace(*dir_ / "muslin.csv");
  EXPECT_EQ(t.kind, ModelKind::kMusLin);
  EXPECT_EQ(t.size(), 3001u);
}

TEST_F(PipelineRuns, MeasureWritesTableAndSeries) {
  PipelineConfig cfg;
  cfg.out_dir = fresh_dir("measure");
  cfg.state_series = true;
  std::ostringstream out;
  const auto p = paths();
  cmd_measure(cfg, p, out);
  EXPECT_NE(out.str().find("Morphological computation [bits], 300 bins"), std::string::npos);
  EXPECT_NE(out.str().find("MusFib"), std::string::npos);
  EXPECT_NE(out.str().find("MusLin"), std::string::npos);
  EXPECT_TRUE(fs::exists(cfg.out_dir / "binning.txt"));
  const std::string series = slurp(cfg.out_dir / "mc_state_musfib.csv");
  EXPECT_EQ(series.substr(0, series.find('\n')), "t,mc_w,mc_mi,mc_w_smooth,mc_mi_smooth,y,contact");
  EXPECT_EQ(line_count(series), 3001u);  // header + 3000 aligned samples
  fs::remove_all(cfg.out_dir);
}

TEST_F(PipelineRuns, SingleTraceCanBeMeasured) {
  const auto traces = load_traces(std::vector<fs::path>{*dir_ / "muslin.csv"});
  PipelineConfig cfg;
  const auto report = measure_traces(traces, configured_binning(traces, cfg));
  ASSERT_EQ(report.rows.size(), 1u);
  EXPECT_GT(report.rows[0].result.mc_w, 0.0);
  EXPECT_NEAR(report.rows[0].mc_w_series.mean(), report.rows[0].result.mc_w, 1e-9);
}

TEST_F(PipelineRuns, PerChannelBinOverride) {
  const auto traces = load_traces(paths());
  PipelineConfig cfg;
  cfg.bins = 100;
  cfg.overrides.set("binning.force.bins", "40");
  const BinningSpec spec = configured_binning(traces, cfg);
  EXPECT_EQ(spec.channel("y").bins, 100u);
  EXPECT_EQ(spec.channel("force").bins, 40u);
}

TEST_F(PipelineRuns, SweepHasOneRowPerModelAndBinCount) {
  const auto traces = load_traces(paths());
  const std::vector<std::size_t> bins{50, 100, 150, 200, 300};
  const auto rows = sweep_bins(traces, bins);
  ASSERT_EQ(rows.size(), 10u);
  EXPECT_EQ(rows[0].kind, ModelKind::kMusFib);
  EXPECT_EQ(rows[4].bins, 300u);
  EXPECT_EQ(rows[5].kind, ModelKind::kMusLin);
  EXPECT_EQ(line_count(sweep_csv(rows)), 11u);
  const std::vector<std::size_t> one{300};
  EXPECT_THROW(sweep_bins(traces, one), UsageError);
}

TEST_F(PipelineRuns, RejectsInconsistentTraceSets) {
  auto traces = load_traces(paths());
  std::vector<Trace> dup{traces[0], traces[0]};
  EXPECT_THROW(check_trace_set(dup), UsageError);
  EXPECT_THROW(check_trace_set(std::vector<Trace>{}), UsageError);

  std::vector<Trace> wrong_sensor{traces[0]};
  wrong_sensor[0].sensor_names = {"y"};
  EXPECT_THROW(check_trace_set(wrong_sensor), UsageError);

  std::vector<Trace> spacing{traces[0], traces[1]};
  for (double& t : spacing[1].t) t *= 2.0;
  EXPECT_THROW(check_trace_set(spacing), UsageError);

  const std::vector<fs::path> missing{*dir_ / "nope.csv"};
  EXPECT_THROW(load_traces(missing), UsageError);
}

TEST_F(PipelineRuns, FlightAgreementComparesEveryPair) {
  const auto traces = load_traces(paths());
  const auto report = measure_traces(traces, compute_domains(traces));
  const auto agreement = flight_agreement(traces, report.rows);
  ASSERT_EQ(agreement.size(), 1u);
  EXPECT_EQ(agreement[0].a, ModelKind::kMusFib);
  EXPECT_EQ(agreement[0].b, ModelKind::kMusLin);
  EXPECT_GT(agreement[0].length, 100u);
  EXPECT_GE(agreement[0].rms, 0.0);
}

TEST(PipelineTest, DcmotBuildsReferenceWithoutTouchingMusfibTrace) {
  const fs::path dir = fresh_dir("dcmot");
  const PipelineConfig cfg = short_config(dir, {ModelKind::kDCMot}, 2.0);
  std::ostringstream log;
  cmd_simulate(cfg, log);
  EXPECT_NE(log.str().find("simulating musfib"), std::string::npos);
  EXPECT_FALSE(fs::exists(dir / "musfib.csv"));
  EXPECT_TRUE(fs::exists(dir / "musfib_reference.csv"));
  const std::string first = slurp(dir / "dcmot.csv");
  EXPECT_EQ(line_count(first), 2002u);

  // Second run takes the cache and reproduces the trace byte for byte.
  std::ostringstream again;
  cmd_simulate(cfg, again);
  EXPECT_EQ(again.str().find("simulating musfib"), std::string::npos);
  EXPECT_EQ(slurp(dir / "dcmot.csv"), first);

  // Changing a MusFib parameter invalidates the cache.
  PipelineConfig changed = cfg;
  changed.overrides.set("musfib.u0", "0.03");
  std::ostringstream rebuilt;
  cmd_simulate(changed, rebuilt);
  EXPECT_NE(rebuilt.str().find("simulating musfib"), std::string::npos);
  fs::remove_all(dir);
}

TEST(PipelineTest, ReferenceTakenFromMatchingMusfibTrace) {
  const fs::path dir = fresh_dir("reuse");
  const PipelineConfig cfg = short_config(dir, {ModelKind::kMusFib, ModelKind::kDCMot});
  std::ostringstream log;
  cmd_simulate(cfg, log);
  // Reference duration equals the run duration, so the fresh trace is reused.
  EXPECT_EQ(log.str().find("simulating musfib"), std::string::npos);
  const auto meta = KeyValueConfig::load(dir / "musfib_reference.csv.meta");
  EXPECT_EQ(meta.get("source").value(), "musfib.csv");
  fs::remove_all(dir);
}

TEST(PipelineTest, MissingExplicitReferenceIsUsageError) {
  PipelineConfig cfg = short_config(fresh_dir("explicit"), {ModelKind::kDCMot});
  cfg.reference = cfg.out_dir / "absent.csv";
  EXPECT_THROW(stance_reference(cfg), UsageError);
  fs::remove_all(cfg.out_dir);
}

TEST(PipelineTest, ValidateRejectsBadSettings) {
  PipelineConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.overrides.set("solver.bogus", "1");
  EXPECT_THROW(cfg.validate(), UsageError);

  PipelineConfig even;
  even.smooth_block = 4;
  EXPECT_THROW(even.validate(), UsageError);

  PipelineConfig twice;
  twice.models = {ModelKind::kMusFib, ModelKind::kMusFib};
  EXPECT_THROW(twice.validate(), UsageError);

  PipelineConfig none;
  none.duration = 0.0;
  EXPECT_THROW(none.validate(), UsageError);
}

TEST(PipelineTest, SolverKeysReachIntegrator) {
  PipelineConfig cfg;
  cfg.overrides.set("solver.rel_tol", "1e-6");
  cfg.overrides.set("solver.sample_rate", "500");
  const IntegratorConfig ic = configured_integrator(cfg, 4.0);
  EXPECT_EQ(ic.rel_tol, 1e-6);
  EXPECT_EQ(ic.sample_rate, 500.0);
  EXPECT_EQ(ic.t_end, 4.0);
}

TEST(PipelineTest, ConfigFileIsMerged) {
  const fs::path dir = fresh_dir("config");
  {
    std::ofstream f(dir / "run.cfg");
    f << "# settings\nmuslin.u0 = 0.2\nbinning.bins = 150\n";
  }
  PipelineConfig cfg;
  load_config_file(cfg, dir / "run.cfg");
  EXPECT_EQ(cfg.overrides.get("muslin.u0").value(), "0.2");
  EXPECT_DOUBLE_EQ(configured_spec(ModelKind::kMusLin, cfg).muslin_params().u0, 0.2);
  EXPECT_THROW(load_config_file(cfg, dir / "missing.cfg"), UsageError);
  fs::remove_all(dir);
}

TEST(FlightProfileTest, AveragesAlignedFlights) {
  Trace t;
  // contact: S F F F S S F F S  (two complete flights of length 3 and 2)
  const std::vector<std::uint8_t> c{1, 0, 0, 0, 1, 1, 0, 0, 1};
  for (std::size_t i = 0; i < c.size(); ++i) {
    t.t.push_back(static_cast<double>(i));
    t.contact.push_back(c[i]);
  }
  const std::vector<double> series{9, 1, 2, 3, 9, 9, 5, 6, 9};
  const auto profile = mean_flight_profile(t, series, 0.0);
  ASSERT_EQ(profile.size(), 2u);
  EXPECT_DOUBLE_EQ(profile[0], 3.0);
  EXPECT_DOUBLE_EQ(profile[1], 4.0);
  EXPECT_TRUE(mean_flight_profile(t, series, 100.0).empty());

  const std::vector<double> a{1, 2}, b{1, 4, 100};
  EXPECT_DOUBLE_EQ(profile_rms(a, b), std::sqrt(2.0));
  EXPECT_THROW(profile_rms(std::vector<double>{}, b), std::invalid_argument);
}

}  // namespace
}  // namespace hopmc
