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

// hopmc: simulate the hopping models and compute morphological computation.
//
//   hopmc simulate   --model musfib,muslin,dcmot [--duration 8] [--out out]
//   hopmc measure    out/musfib.csv out/muslin.csv ... [--bins 300] [--state-series]
//   hopmc sweep-bins out/*.csv --bins 50,100,200,300,400
//   hopmc report     [--out out]
//
// Exit status: 0 success, 1 usage error, 2 numerical failure.

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hopmc/integrator.h"
#include "hopmc/pipeline.h"

namespace {

using hopmc::PipelineConfig;

std::vector<hopmc::ModelKind> parse_models(const std::vector<std::string>& names) {
  std::vector<hopmc::ModelKind> kinds;
  for (const auto& n : names) {
    if (n == "all") return PipelineConfig{}.models;
    try {
      kinds.push_back(hopmc::parse_model_kind(n));
    } catch (const std::invalid_argument& e) {
      throw hopmc::UsageError(e.what());
    }
  }
  return kinds;
}

struct Options {
  std::vector<std::string> models = {"all"};
  std::vector<std::string> positional_models;
  double duration = 8.0;
  std::vector<std::size_t> bins;
  std::string out = "out";
  bool state_series = false;
  std::size_t smooth_block = 5;
  std::string config;
  std::string reference;
  std::vector<std::string> traces;
};

PipelineConfig to_config(const Options& o) {
  PipelineConfig cfg;
  if (!o.config.empty()) hopmc::load_config_file(cfg, o.config);
  cfg.models = parse_models(o.positional_models.empty() ? o.models : o.positional_models);
  cfg.duration = o.duration;
  if (o.bins.size() == 1) cfg.bins = o.bins.front();
  cfg.out_dir = o.out;
  cfg.state_series = o.state_series;
  cfg.smooth_block = o.smooth_block;
  if (!o.reference.empty()) cfg.reference = o.reference;
  return cfg;
}

std::vector<std::filesystem::path> paths(const Options& o) {
  return {o.traces.begin(), o.traces.end()};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Morphological computation of simulated hopping models"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--out", o.out, "Output directory")->capture_default_str();
    cmd->add_option("--config", o.config, "key = value file with parameter overrides");
  };

  auto* sim = app.add_subcommand("simulate", "Simulate models and write trace CSVs");
  add_common(sim);
  auto* model_opt =
      sim->add_option("--model", o.models, "musfib, muslin, dcmot or all (comma separated)")
          ->delimiter(',');
  sim->add_option("models", o.positional_models, "Same as --model")
      ->delimiter(',')
      ->excludes(model_opt);
  sim->add_option("--duration", o.duration, "Simulated time [s]")->capture_default_str();
  sim->add_option("--reference", o.reference, "Stance reference CSV for dcmot");

  auto* meas = app.add_subcommand("measure", "Compute MC_W and MC_MI for trace files");
  add_common(meas);
  meas->add_option("traces", o.traces, "Trace CSV files")->required();
  meas->add_option("--bins", o.bins, "Bins per channel (default 300)")->expected(1);
  meas->add_flag("--state-series", o.state_series, "Write mc_state_<model>.csv");
  meas->add_option("--smooth-block", o.smooth_block, "Moving-average window (odd)")
      ->capture_default_str();

  auto* sweep = app.add_subcommand("sweep-bins", "Measures against the number of bins");
  add_common(sweep);
  sweep->add_option("traces", o.traces, "Trace CSV files")->required();
  sweep->add_option("--bins", o.bins, "Bin counts (comma separated, at least two)")
      ->delimiter(',')
      ->required();

  auto* report = app.add_subcommand("report", "Simulate all models, measure and summarize");
  add_common(report);
  report->add_option("--model", o.models, "Models to include")->delimiter(',');
  report->add_option("--duration", o.duration, "Simulated time [s]")->capture_default_str();
  report->add_option("--bins", o.bins, "Bins per channel (default 300)")->expected(1);
  report->add_option("--smooth-block", o.smooth_block, "Moving-average window (odd)")
      ->capture_default_str();
  report->add_option("--reference", o.reference, "Stance reference CSV for dcmot");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return hopmc::kExitUsage;
  }

  try {
    const PipelineConfig cfg = to_config(o);
    if (sim->parsed()) {
      hopmc::cmd_simulate(cfg, std::cout);
    } else if (meas->parsed()) {
      hopmc::cmd_measure(cfg, paths(o), std::cout);
    } else if (sweep->parsed()) {
      hopmc::cmd_sweep_bins(cfg, paths(o), o.bins, std::cout);
    } else {
      hopmc::cmd_report(cfg, std::cout);
    }
  } catch (const hopmc::NumericalError& e) {
    std::cerr << "hopmc: numerical failure: " << e.what() << "\n";
    return hopmc::kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "hopmc: " << e.what() << "\n";
    return hopmc::kExitUsage;
  }
  return hopmc::kExitOk;
}
