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

#include "hopmc/trace.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace hopmc {

namespace {

void append_double(std::string& out, double v) {
  char buf[32];
  const int len = std::snprintf(buf, sizeof buf, "%.17g", v);
  out.append(buf, static_cast<std::size_t>(len));
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double to_double(std::string_view s, std::size_t line_no) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::invalid_argument("line " + std::to_string(line_no) + ": bad number '" +
                                std::string(s) + "'");
  }
  return v;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& bytes, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << bytes;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

double hermite(double p0, double m0, double p1, double m1, double s, double h) {
  const double s2 = s * s;
  const double s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * p0 + (s3 - 2 * s2 + s) * h * m0 +
         (-2 * s3 + 3 * s2) * p1 + (s3 - s2) * h * m1;
}

std::vector<StanceSegment> complete_runs(const Trace& trace, std::uint8_t value) {
  std::vector<StanceSegment> runs;
  const auto n = trace.size();
  std::size_t i = 0;
  while (i < n) {
    if (trace.contact[i] != value) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < n && trace.contact[j] == value) ++j;
    if (i > 0 && j < n) runs.push_back({i, j});
    i = j;
  }
  return runs;
}

}  // namespace

void Trace::reserve(std::size_t n) {
  t.reserve(n);
  y.reserve(n);
  yd.reserve(n);
  ydd.reserve(n);
  for (auto& s : sensors) s.reserve(n);
  action.reserve(n);
  contact.reserve(n);
}

void Trace::validate() const {
  const auto n = t.size();
  auto same = [n](const auto& v) { return v.size() == n; };
  if (!same(y) || !same(yd) || !same(ydd) || !same(action) || !same(contact))
    throw std::invalid_argument("trace channels have different lengths");
  if (sensors.size() != sensor_names.size() || sensors.empty())
    throw std::invalid_argument("trace sensor channels are inconsistent");
  for (const auto& s : sensors)
    if (!same(s)) throw std::invalid_argument("trace channels have different lengths");
  auto finite = [](const std::vector<double>& v) {
    for (double x : v)
      if (!std::isfinite(x)) return false;
    return true;
  };
  if (!finite(t) || !finite(y) || !finite(yd) || !finite(ydd) || !finite(action))
    throw std::invalid_argument("trace contains non-finite values");
  for (const auto& s : sensors)
    if (!finite(s)) throw std::invalid_argument("trace contains non-finite values");
  if (!(action_min < action_max)) throw std::invalid_argument("trace action bounds are empty");
}

std::vector<std::string> sensor_channels(ModelKind kind) {
  if (kind == ModelKind::kDCMot) return {"y", "yd"};
  return {"force"};
}

std::string trace_csv(const Trace& trace) {
  trace.validate();
  std::string out = "t,y,yd,ydd";
  for (std::size_t c = 0; c < trace.sensors.size(); ++c) out += ",s" + std::to_string(c + 1);
  out += ",a,contact\n";
  out.reserve(trace.size() * (20 * (6 + trace.sensors.size())));
  for (std::size_t i = 0; i < trace.size(); ++i) {
    append_double(out, trace.t[i]);
    out += ',';
    append_double(out, trace.y[i]);
    out += ',';
    append_double(out, trace.yd[i]);
    out += ',';
    append_double(out, trace.ydd[i]);
    for (const auto& s : trace.sensors) {
      out += ',';
      append_double(out, s[i]);
    }
    out += ',';
    append_double(out, trace.action[i]);
    out += trace.contact[i] ? ",1\n" : ",0\n";
  }
  return out;
}

void write_trace_csv(const Trace& trace, const std::filesystem::path& path) {
  write_file(trace_csv(trace), path);
}

std::filesystem::path metadata_path(const std::filesystem::path& trace_path) {
  auto p = trace_path;
  p += ".meta";
  return p;
}

void write_metadata(const KeyValueConfig& meta, const std::filesystem::path& path) {
  std::string out;
  for (const auto& [k, v] : meta.entries()) out += k + " = " + v + "\n";
  write_file(out, path);
}

Trace read_trace(const std::filesystem::path& path) {
  const auto meta_file = metadata_path(path);
  if (!std::filesystem::exists(meta_file))
    throw std::invalid_argument("missing metadata sidecar " + meta_file.string());
  const auto meta = KeyValueConfig::load(meta_file);

  Trace trace;
  const auto model = meta.get("model");
  if (!model) throw std::invalid_argument(meta_file.string() + ": missing 'model'");
  trace.kind = parse_model_kind(*model);
  const auto sensors = meta.get("sensors");
  if (!sensors) throw std::invalid_argument(meta_file.string() + ": missing 'sensors'");
  for (auto name : split(*sensors, ',')) trace.sensor_names.emplace_back(name);
  trace.action_min = meta.get_double("action_min").value_or(0.0);
  trace.action_max = meta.get_double("action_max").value_or(1.0);
  trace.sensors.resize(trace.sensor_names.size());

  const std::string text = read_file(path);
  std::string_view rest(text);
  std::size_t line_no = 0;
  bool header = true;
  const std::size_t expected_cols = 6 + trace.sensors.size();
  while (!rest.empty()) {
    const auto nl = rest.find('\n');
    std::string_view line = rest.substr(0, nl);
    rest = nl == std::string_view::npos ? std::string_view{} : rest.substr(nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    const auto cols = split(line, ',');
    if (cols.size() != expected_cols) {
      throw std::invalid_argument(path.string() + " line " + std::to_string(line_no) +
                                  ": expected " + std::to_string(expected_cols) +
                                  " columns, found " + std::to_string(cols.size()));
    }
    if (header) {
      if (cols[0] != "t" || cols[1] != "y" || cols[2] != "yd" || cols[3] != "ydd" ||
          cols[cols.size() - 2] != "a" || cols.back() != "contact")
        throw std::invalid_argument(path.string() + ": unexpected header");
      header = false;
      continue;
    }
    trace.t.push_back(to_double(cols[0], line_no));
    trace.y.push_back(to_double(cols[1], line_no));
    trace.yd.push_back(to_double(cols[2], line_no));
    trace.ydd.push_back(to_double(cols[3], line_no));
    for (std::size_t c = 0; c < trace.sensors.size(); ++c)
      trace.sensors[c].push_back(to_double(cols[4 + c], line_no));
    trace.action.push_back(to_double(cols[cols.size() - 2], line_no));
    trace.contact.push_back(cols.back() == "1" ? 1 : 0);
  }
  trace.validate();
  return trace;
}

std::vector<StanceSegment> complete_stance_phases(const Trace& trace) {
  return complete_runs(trace, 1);
}

std::vector<StanceSegment> complete_flight_phases(const Trace& trace) {
  return complete_runs(trace, 0);
}

StanceReference extract_stance_reference(const Trace& trace, double rest_length) {
  const auto phases = complete_stance_phases(trace);
  if (phases.empty()) throw std::invalid_argument("trace has no complete stance phase");
  const auto [begin, end] = phases.back();
  const double dt = trace.t[begin] - trace.t[begin - 1];

  // Touch down lies between samples begin-1 (flight) and begin (stance).
  const std::size_t a = begin - 1;
  auto height = [&](double s) {
    return hermite(trace.y[a], trace.yd[a], trace.y[begin], trace.yd[begin], s, dt) -
           rest_length;
  };
  double lo = 0.0, hi = 1.0;
  if (height(lo) > 0 && height(hi) <= 0) {
    for (int it = 0; it < 100; ++it) {
      const double mid = 0.5 * (lo + hi);
      (height(mid) > 0 ? lo : hi) = mid;
    }
  }

  StanceReference ref;
  ref.dt = dt;
  ref.t_first = -hi * dt;
  for (std::size_t i = a; i <= end; ++i) {
    ref.y.push_back(trace.y[i]);
    ref.yd.push_back(trace.yd[i]);
    ref.ydd.push_back(trace.ydd[i]);
  }
  return ref;
}

void write_reference_csv(const StanceReference& ref, const std::filesystem::path& path) {
  ref.validate();
  std::string out = "t,y,yd,ydd\n";
  for (std::size_t i = 0; i < ref.y.size(); ++i) {
    append_double(out, ref.t_first + ref.dt * static_cast<double>(i));
    for (double v : {ref.y[i], ref.yd[i], ref.ydd[i]}) {
      out += ',';
      append_double(out, v);
    }
    out += '\n';
  }
  write_file(out, path);
}

StanceReference read_reference_csv(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  std::vector<double> times;
  StanceReference ref;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line_no == 1) {
      if (line != "t,y,yd,ydd") throw std::invalid_argument(path.string() + ": bad header");
      continue;
    }
    const auto cols = split(line, ',');
    if (cols.size() != 4)
      throw std::invalid_argument(path.string() + ": expected 4 columns");
    times.push_back(to_double(cols[0], line_no));
    ref.y.push_back(to_double(cols[1], line_no));
    ref.yd.push_back(to_double(cols[2], line_no));
    ref.ydd.push_back(to_double(cols[3], line_no));
  }
  if (times.size() < 2) throw std::invalid_argument(path.string() + ": reference too short");
  ref.t_first = times.front();
  ref.dt = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
  ref.validate();
  return ref;
}

std::string content_hash(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream ss;
  ss << std::hex << std::setw(16) << std::setfill('0') << h;
  return ss.str();
}

std::string file_hash(const std::filesystem::path& path) { return content_hash(read_file(path)); }

}  // namespace hopmc
