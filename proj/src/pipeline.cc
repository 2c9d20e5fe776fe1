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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <set>

namespace hopmc {

namespace {

namespace fs = std::filesystem;

constexpr std::string_view kSolverKeys[] = {"solver.abs_tol",      "solver.rel_tol",
                                            "solver.max_step",     "solver.initial_step",
                                            "solver.event_tol",    "solver.sample_rate"};
constexpr std::string_view kBinnedChannels[] = {"y", "yd", "ydd", "action", "force"};
constexpr std::size_t kReportBins[] = {50, 100, 150, 200, 300, 400};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fixed(double v, int digits) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string display_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::kMusFib: return "MusFib";
    case ModelKind::kMusLin: return "MusLin";
    case ModelKind::kDCMot: return "DCMot";
  }
  return "?";
}

bool starts_with(std::string_view s, std::string_view prefix) {
  return s.substr(0, prefix.size()) == prefix;
}

std::size_t parse_count(const KeyValueConfig& cfg, std::string_view key) {
  const double v = *cfg.get_double(key);
  if (v < 1 || v != std::floor(v) || v > 1e6)
    throw UsageError(std::string(key) + " must be a positive integer");
  return static_cast<std::size_t>(v);
}

bool is_pipeline_key(std::string_view key) {
  if (is_model_key(key) || key == "reference.duration" || key == "binning.bins") return true;
  if (std::find(std::begin(kSolverKeys), std::end(kSolverKeys), key) != std::end(kSolverKeys))
    return true;
  for (std::string_view ch : kBinnedChannels)
    if (key == "binning." + std::string(ch) + ".bins") return true;
  return false;
}

// Identifies a run: the model, its duration and every setting that feeds it.
std::string run_key(const PipelineConfig& cfg, ModelKind kind, double duration) {
  std::string text = "model=" + std::string(model_name(kind)) + "\nduration=" + fmt(duration) + "\n";
  const std::string own = std::string(model_name(kind)) + ".";
  for (const auto& [k, v] : cfg.overrides.entries())
    if (starts_with(k, "common.") || starts_with(k, own) || starts_with(k, "solver."))
      text += k + "=" + v + "\n";
  return content_hash(text);
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

double reference_duration(const PipelineConfig& cfg) {
  const double d = cfg.overrides.get_double("reference.duration").value_or(8.0);
  if (!(d > 0)) throw UsageError("reference.duration must be positive");
  return d;
}

std::string join(const std::vector<std::string>& parts, char sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

}  // namespace

void PipelineConfig::validate() const {
  if (models.empty()) throw UsageError("no models selected");
  std::set<ModelKind> seen(models.begin(), models.end());
  if (seen.size() != models.size()) throw UsageError("model listed twice");
  if (!(duration > 0) || !std::isfinite(duration)) throw UsageError("duration must be positive");
  if (bins < 1) throw UsageError("bin count must be >= 1");
  if (smooth_block == 0 || smooth_block % 2 == 0)
    throw UsageError("smoothing block must be odd and positive");
  for (const auto& [k, v] : overrides.entries()) {
    if (!is_pipeline_key(k)) throw UsageError("unknown configuration key '" + k + "'");
    overrides.get_double(k);
  }
  if (overrides.contains("binning.bins")) parse_count(overrides, "binning.bins");
  for (std::string_view ch : kBinnedChannels) {
    const std::string key = "binning." + std::string(ch) + ".bins";
    if (overrides.contains(key)) parse_count(overrides, key);
  }
}

void load_config_file(PipelineConfig& cfg, const fs::path& path) {
  if (!fs::exists(path)) throw UsageError("config file not found: " + path.string());
  const KeyValueConfig file = KeyValueConfig::load(path);
  for (const auto& [k, v] : file.entries()) cfg.overrides.set(k, v);
  if (cfg.overrides.contains("binning.bins")) cfg.bins = parse_count(cfg.overrides, "binning.bins");
}

ModelSpec configured_spec(ModelKind kind, const PipelineConfig& cfg) {
  ModelSpec spec = ModelSpec::defaults(kind);
  apply_model_overrides(spec, cfg.overrides);
  return spec;
}

IntegratorConfig configured_integrator(const PipelineConfig& cfg, double duration) {
  IntegratorConfig ic;
  ic.t_end = duration;
  const auto& o = cfg.overrides;
  ic.abs_tol = o.get_double("solver.abs_tol").value_or(ic.abs_tol);
  ic.rel_tol = o.get_double("solver.rel_tol").value_or(ic.rel_tol);
  ic.max_step = o.get_double("solver.max_step").value_or(ic.max_step);
  ic.initial_step = o.get_double("solver.initial_step").value_or(ic.initial_step);
  ic.event_tol = o.get_double("solver.event_tol").value_or(ic.event_tol);
  ic.sample_rate = o.get_double("solver.sample_rate").value_or(ic.sample_rate);
  ic.validate();
  return ic;
}

fs::path trace_file(const PipelineConfig& cfg, ModelKind kind) {
  return cfg.out_dir / (std::string(model_name(kind)) + ".csv");
}

fs::path reference_file(const PipelineConfig& cfg) {
  return cfg.out_dir / "musfib_reference.csv";
}

SimulateOutcome simulate_model(ModelKind kind, const PipelineConfig& cfg, std::ostream* log) {
  ModelSpec spec = configured_spec(kind, cfg);
  const IntegratorConfig ic = configured_integrator(cfg, cfg.duration);
  std::string reference_hash;
  if (kind == ModelKind::kDCMot) {
    auto& p = spec.dcmot_params();
    p.reference = stance_reference(cfg, log);
    p.reference.validate();
    reference_hash = file_hash(cfg.reference ? *cfg.reference : reference_file(cfg));
  }

  SimulateOutcome out;
  out.result = simulate(spec, ic);
  out.trace_path = trace_file(cfg, kind);
  const Trace& trace = out.result.trace;
  const double from = cfg.duration > kTransient ? kTransient : 0.0;
  out.max_height = max_height(trace, from);

  fs::create_directories(cfg.out_dir);
  write_trace_csv(trace, out.trace_path);
  KeyValueConfig meta;
  meta.set("model", std::string(model_name(kind)));
  meta.set("sensors", join(trace.sensor_names, ','));
  meta.set("action_min", fmt(trace.action_min));
  meta.set("action_max", fmt(trace.action_max));
  meta.set("duration", fmt(cfg.duration));
  meta.set("samples", std::to_string(trace.size()));
  meta.set("sample_rate", fmt(ic.sample_rate));
  meta.set("abs_tol", fmt(ic.abs_tol));
  meta.set("rel_tol", fmt(ic.rel_tol));
  meta.set("max_step", fmt(out.result.config.max_step));
  meta.set("event_tol", fmt(ic.event_tol));
  meta.set("max_height", fmt(out.max_height));
  meta.set("max_height_from", fmt(from));
  meta.set("accepted_steps", std::to_string(out.result.stats.accepted));
  meta.set("rejected_steps", std::to_string(out.result.stats.rejected));
  meta.set("contact_events", std::to_string(out.result.events.size()));
  meta.set("body_mass", fmt(spec.body_mass()));
  meta.set("run_key", run_key(cfg, kind, cfg.duration));
  if (!reference_hash.empty()) meta.set("reference_hash", reference_hash);
  for (const auto& [k, v] : cfg.overrides.entries())
    if (is_model_key(k) || starts_with(k, "solver.")) meta.set("param." + k, v);
  write_metadata(meta, metadata_path(out.trace_path));
  return out;
}

StanceReference stance_reference(const PipelineConfig& cfg, std::ostream* log) {
  if (cfg.reference) {
    if (!fs::exists(*cfg.reference))
      throw UsageError("reference file not found: " + cfg.reference->string());
    return read_reference_csv(*cfg.reference);
  }
  const double duration = reference_duration(cfg);
  const std::string key = run_key(cfg, ModelKind::kMusFib, duration);
  const fs::path source = trace_file(cfg, ModelKind::kMusFib);
  const fs::path cache = reference_file(cfg);

  // The simulation is deterministic, so the run key alone identifies the cache.
  if (fs::exists(cache) && fs::exists(metadata_path(cache))) {
    const auto meta = KeyValueConfig::load(metadata_path(cache));
    if (meta.get("run_key") == key) return read_reference_csv(cache);
  }

  Trace trace;
  bool have = false;
  if (fs::exists(source) && fs::exists(metadata_path(source))) {
    const auto meta = KeyValueConfig::load(metadata_path(source));
    if (meta.get("run_key") == key) {
      trace = read_trace(source);
      have = true;
    }
  }
  if (!have) {
    // Kept in memory: musfib.csv may belong to a run of another duration.
    if (log) *log << "simulating musfib for the dcmot reference\n";
    trace = simulate(configured_spec(ModelKind::kMusFib, cfg), configured_integrator(cfg, duration))
                .trace;
  }

  const double l0 = configured_spec(ModelKind::kMusFib, cfg).common.rest_length;
  StanceReference ref = extract_stance_reference(trace, l0);
  write_reference_csv(ref, cache);
  KeyValueConfig meta;
  meta.set("source", have ? source.filename().string() : std::string("memory"));
  meta.set("run_key", key);
  meta.set("nodes", std::to_string(ref.y.size()));
  meta.set("t_first", fmt(ref.t_first));
  meta.set("dt", fmt(ref.dt));
  write_metadata(meta, metadata_path(cache));
  // Always hand out the on-disk form so fresh and cached runs agree bit for bit.
  return read_reference_csv(cache);
}

void check_trace_set(std::span<const Trace> traces) {
  if (traces.empty()) throw UsageError("no traces given");
  std::set<ModelKind> seen;
  const double dt0 = traces.front().size() >= 2 ? traces.front().t[1] - traces.front().t[0] : 0.0;
  for (const auto& trace : traces) {
    trace.validate();
    if (trace.size() < 2) throw UsageError("trace needs at least 2 samples");
    if (!seen.insert(trace.kind).second)
      throw UsageError("two traces of model " + std::string(model_name(trace.kind)));
    if (trace.sensor_names != sensor_channels(trace.kind))
      throw UsageError("sensor channels '" + join(trace.sensor_names, ',') +
                       "' do not belong to model " + std::string(model_name(trace.kind)));
    const double dt = trace.t[1] - trace.t[0];
    if (std::abs(dt - dt0) > 1e-9 * dt0)
      throw UsageError("traces differ in sample spacing");
  }
}

std::vector<Trace> load_traces(std::span<const fs::path> paths) {
  if (paths.empty()) throw UsageError("no trace files given");
  std::vector<Trace> traces;
  for (const auto& p : paths) {
    if (!fs::exists(p)) throw UsageError("trace file not found: " + p.string());
    traces.push_back(read_trace(p));
  }
  check_trace_set(traces);
  return traces;
}

BinningSpec configured_binning(std::span<const Trace> traces, const PipelineConfig& cfg) {
  BinningSpec spec = compute_domains(traces, cfg.bins);
  for (std::string_view ch : kBinnedChannels) {
    const std::string key = "binning." + std::string(ch) + ".bins";
    if (cfg.overrides.contains(key) && spec.has_channel(std::string(ch)))
      spec.set_bins(std::string(ch), parse_count(cfg.overrides, key));
  }
  return spec;
}

MeasureReport measure_traces(std::span<const Trace> traces, const BinningSpec& binning) {
  MeasureReport report;
  report.binning = binning;
  for (const auto& trace : traces) {
    const DiscreteTrace d = build_discrete_trace(trace, binning);
    ModelMeasures m;
    m.kind = trace.kind;
    m.result = compute_measures(d);
    m.mc_w_series = mc_w_state(d);
    m.mc_mi_series = mc_mi_state(d);
    report.rows.push_back(std::move(m));
  }
  return report;
}

std::string format_measure_table(const MeasureReport& report, std::size_t bins) {
  std::string out = "Morphological computation [bits], " + std::to_string(bins) + " bins\n";
  char line[160];
  std::snprintf(line, sizeof line, "%-8s %9s %9s %9s %11s %9s\n", "model", "MC_W", "MC_MI",
                "H(A|W')", "I(W';A|W)", "residual");
  out += line;
  for (const auto& r : report.rows) {
    std::snprintf(line, sizeof line, "%-8s %9.3f %9.3f %9.3f %11.4f %9.4f\n",
                  display_name(r.kind).c_str(), r.result.mc_w, r.result.mc_mi,
                  r.result.h_a_given_wnext, r.result.i_wnext_a_given_w, r.result.residual);
    out += line;
  }
  return out;
}

std::string state_series_csv(const Trace& trace, const ModelMeasures& m, std::size_t smooth_block) {
  const auto& w = m.mc_w_series.values;
  const auto& mi = m.mc_mi_series.values;
  if (w.size() != mi.size() || w.size() + 1 != trace.size())
    throw std::invalid_argument("state series does not match the trace");
  const auto ws = m.mc_w_series.smoothed(smooth_block);
  const auto mis = m.mc_mi_series.smoothed(smooth_block);
  std::string out = "t,mc_w,mc_mi,mc_w_smooth,mc_mi_smooth,y,contact\n";
  char line[256];
  for (std::size_t i = 0; i < w.size(); ++i) {
    std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d\n", trace.t[i], w[i],
                  mi[i], ws[i], mis[i], trace.y[i], static_cast<int>(trace.contact[i]));
    out += line;
  }
  return out;
}

std::vector<SweepRow> sweep_bins(std::span<const Trace> traces,
                                 std::span<const std::size_t> bin_counts) {
  if (bin_counts.size() < 2) throw UsageError("a bin sweep needs at least two bin counts");
  for (std::size_t b : bin_counts)
    if (b < 1) throw UsageError("bin count must be >= 1");
  check_trace_set(traces);
  const BinningSpec base = compute_domains(traces);
  std::vector<SweepRow> rows;
  for (const auto& trace : traces) {
    for (std::size_t b : bin_counts) {
      BinningSpec spec = base;
      spec.set_bins(b);
      rows.push_back({trace.kind, b, compute_measures(build_discrete_trace(trace, spec))});
    }
  }
  return rows;
}

std::string sweep_csv(std::span<const SweepRow> rows) {
  std::string out = "model,bins,mc_w,mc_mi,h_a_given_wnext,i_wnext_a_given_w,residual\n";
  for (const auto& r : rows) {
    out += std::string(model_name(r.kind)) + "," + std::to_string(r.bins) + "," +
           fmt(r.result.mc_w) + "," + fmt(r.result.mc_mi) + "," + fmt(r.result.h_a_given_wnext) +
           "," + fmt(r.result.i_wnext_a_given_w) + "," + fmt(r.result.residual) + "\n";
  }
  return out;
}

std::vector<double> mean_flight_profile(const Trace& trace, std::span<const double> series,
                                        double t_from) {
  std::vector<StanceSegment> flights;
  for (const auto& f : complete_flight_phases(trace))
    if (trace.t[f.begin] >= t_from && f.end <= series.size()) flights.push_back(f);
  if (flights.empty()) return {};
  std::size_t len = flights.front().end - flights.front().begin;
  for (const auto& f : flights) len = std::min(len, f.end - f.begin);
  std::vector<double> profile(len, 0.0);
  for (const auto& f : flights)
    for (std::size_t k = 0; k < len; ++k) profile[k] += series[f.begin + k];
  for (double& v : profile) v /= static_cast<double>(flights.size());
  return profile;
}

double profile_rms(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = std::min(a.size(), b.size());
  if (n == 0) throw std::invalid_argument("empty flight profile");
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) sum += (a[k] - b[k]) * (a[k] - b[k]);
  return std::sqrt(sum / static_cast<double>(n));
}

std::vector<FlightAgreement> flight_agreement(std::span<const Trace> traces,
                                              std::span<const ModelMeasures> measures) {
  if (traces.size() != measures.size())
    throw std::invalid_argument("flight_agreement: traces and measures differ in count");
  std::vector<std::vector<double>> profiles;
  for (std::size_t i = 0; i < traces.size(); ++i)
    profiles.push_back(mean_flight_profile(traces[i], measures[i].mc_w_series.values));
  std::vector<FlightAgreement> out;
  for (std::size_t i = 0; i < traces.size(); ++i) {
    for (std::size_t j = i + 1; j < traces.size(); ++j) {
      if (profiles[i].empty() || profiles[j].empty())
        throw std::invalid_argument("no complete flight phase after the transient");
      out.push_back({traces[i].kind, traces[j].kind, profile_rms(profiles[i], profiles[j]),
                     std::min(profiles[i].size(), profiles[j].size())});
    }
  }
  return out;
}

void cmd_simulate(const PipelineConfig& cfg, std::ostream& out) {
  cfg.validate();
  for (ModelKind kind : cfg.models) {
    const SimulateOutcome r = simulate_model(kind, cfg, &out);
    out << model_name(kind) << ": " << r.result.trace.size() << " samples, max height "
        << fixed(r.max_height, 6) << " m, " << r.result.stats.accepted << " steps -> "
        << r.trace_path.string() << "\n";
  }
}

namespace {

void write_measure_outputs(const PipelineConfig& cfg, std::span<const Trace> traces,
                           const MeasureReport& report, bool series, std::ostream& out) {
  report.binning.save(cfg.out_dir / "binning.txt");
  if (!series) return;
  for (std::size_t i = 0; i < traces.size(); ++i) {
    const fs::path p =
        cfg.out_dir / ("mc_state_" + std::string(model_name(report.rows[i].kind)) + ".csv");
    write_text(p, state_series_csv(traces[i], report.rows[i], cfg.smooth_block));
    out << "wrote " << p.string() << "\n";
  }
}

}  // namespace

void cmd_measure(const PipelineConfig& cfg, std::span<const fs::path> paths, std::ostream& out) {
  cfg.validate();
  const auto traces = load_traces(paths);
  const BinningSpec binning = configured_binning(traces, cfg);
  const MeasureReport report = measure_traces(traces, binning);
  out << format_measure_table(report, cfg.bins);
  fs::create_directories(cfg.out_dir);
  write_measure_outputs(cfg, traces, report, cfg.state_series, out);
}

void cmd_sweep_bins(const PipelineConfig& cfg, std::span<const fs::path> paths,
                    std::span<const std::size_t> bin_counts, std::ostream& out) {
  cfg.validate();
  if (bin_counts.size() < 2) throw UsageError("a bin sweep needs at least two bin counts");
  const auto traces = load_traces(paths);
  const auto rows = sweep_bins(traces, bin_counts);
  const std::string csv = sweep_csv(rows);
  write_text(cfg.out_dir / "bin_sweep.csv", csv);
  out << csv;
}

void cmd_report(const PipelineConfig& cfg, std::ostream& out) {
  cfg.validate();
  std::vector<ModelKind> kinds = cfg.models;
  // MusFib first so that DCMot finds its reference on disk.
  std::stable_partition(kinds.begin(), kinds.end(),
                        [](ModelKind k) { return k == ModelKind::kMusFib; });
  std::vector<Trace> traces;
  out << "Hopping height (max y after " << fixed(kTransient, 0) << " s)\n";
  for (ModelKind kind : kinds) {
    SimulateOutcome r = simulate_model(kind, cfg, &out);
    out << "  " << display_name(kind) << ": " << fixed(r.max_height, 4) << " m\n";
    traces.push_back(std::move(r.result.trace));
  }
  out << "\n";

  const BinningSpec binning = configured_binning(traces, cfg);
  const MeasureReport report = measure_traces(traces, binning);
  out << format_measure_table(report, cfg.bins) << "\n";
  write_measure_outputs(cfg, traces, report, true, out);

  const auto rows = sweep_bins(traces, kReportBins);
  write_text(cfg.out_dir / "bin_sweep.csv", sweep_csv(rows));
  out << "\nMC_W against bin count\n";
  char line[160];
  std::snprintf(line, sizeof line, "%-8s", "bins");
  out << line;
  for (std::size_t b : kReportBins) {
    std::snprintf(line, sizeof line, " %7zu", b);
    out << line;
  }
  out << "\n";
  for (std::size_t i = 0; i < rows.size(); i += std::size(kReportBins)) {
    std::snprintf(line, sizeof line, "%-8s", display_name(rows[i].kind).c_str());
    out << line;
    for (std::size_t j = 0; j < std::size(kReportBins); ++j) {
      std::snprintf(line, sizeof line, " %7.3f", rows[i + j].result.mc_w);
      out << line;
    }
    out << "\n";
  }

  if (traces.size() >= 2) {
    out << "\nFlight-phase MC_W agreement (RMS over samples since lift off)\n";
    for (const auto& a : flight_agreement(traces, report.rows)) {
      out << "  " << display_name(a.a) << " vs " << display_name(a.b) << ": "
          << fixed(a.rms, 3) << " bits over " << a.length << " samples\n";
    }
  }
}

}  // namespace hopmc
