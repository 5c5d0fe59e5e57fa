/*
 * Copyright 2026 The SVB Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "svb/session_io.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "svb/error.h"

namespace svb {
namespace {

std::string Trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double ToDouble(const std::string& key, const std::string& value) {
  double v = 0;
  auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || p != value.data() + value.size() || !std::isfinite(v)) {
    throw Error(ErrorCode::kBadConfig, key + ": not a number: " + value);
  }
  return v;
}

int ToInt(const std::string& key, const std::string& value) {
  int v = 0;
  auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || p != value.data() + value.size()) {
    throw Error(ErrorCode::kBadConfig, key + ": not an integer: " + value);
  }
  return v;
}

// Milliseconds with enough digits to round-trip the values that matter.
std::string Num(double v) {
  if (std::isnan(v)) return "";
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

std::vector<std::string> SplitCsv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(Trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

std::pair<std::uint16_t, std::uint16_t> ParseFps(const std::string& text) {
  const std::string t = Trim(text);
  const auto slash = t.find('/');
  unsigned num = 0, den = 1;
  auto parse = [&](std::string_view s, unsigned& out) {
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && p == s.data() + s.size();
  };
  const bool ok = slash == std::string::npos
                      ? parse(t, num)
                      : parse(std::string_view(t).substr(0, slash), num) &&
                            parse(std::string_view(t).substr(slash + 1), den);
  if (!ok || num == 0 || den == 0 || num > 65535 || den > 65535) {
    throw Error(ErrorCode::kBadArgs, "fps must be N or N/D with 1 <= N, D <= 65535: " + text);
  }
  return {static_cast<std::uint16_t>(num), static_cast<std::uint16_t>(den)};
}

SimulationConfig ParseSimulationConfig(std::istream& in) {
  SimulationConfig config;
  Scheme scheme;
  bool have_scheme = false;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::kBadConfig, "line " + std::to_string(line_no) + ": expected key=value");
    }
    const std::string key = Trim(line.substr(0, eq));
    const std::string value = Trim(line.substr(eq + 1));
    if (key == "scheme") {
      if (value == "svc") scheme.kind = SchemeKind::kSvc;
      else if (value == "multitrack") scheme.kind = SchemeKind::kMultitrack;
      else throw Error(ErrorCode::kBadConfig, "scheme must be svc or multitrack: " + value);
      have_scheme = true;
    } else if (key == "long_gop") {
      scheme.long_gop = ToInt(key, value);
    } else if (key == "short_gop") {
      scheme.short_gop = ToInt(key, value);
    } else if (key == "low_gop") {
      scheme.low_gop = ToInt(key, value);
    } else if (key == "uplink_ms") {
      config.network.uplink_ms = ToDouble(key, value);
    } else if (key == "downlink_ms") {
      config.network.downlink_ms = ToDouble(key, value);
    } else if (key == "bandwidth_Bps") {
      if (value == "unlimited" || value == "inf") config.network.bandwidth_bytes_per_s.reset();
      else config.network.bandwidth_bytes_per_s = ToDouble(key, value);
    } else if (key == "fps") {
      try {
        config.fps = ParseFps(value);
      } catch (const Error& e) {
        throw Error(ErrorCode::kBadConfig, e.what());
      }
    } else {
      throw Error(ErrorCode::kBadConfig, "line " + std::to_string(line_no) + ": unknown key " + key);
    }
  }
  try {
    config.network.Check();
    scheme.Check();
  } catch (const Error& e) {
    throw Error(ErrorCode::kBadConfig, e.what());
  }
  if (have_scheme) config.scheme = scheme;
  return config;
}

SimulationConfig LoadSimulationConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open config " + path);
  return ParseSimulationConfig(in);
}

std::string ReportJson(const SessionReport& report, const BitrateTable& bitrate,
                       const LatencyStats& latency) {
  using nlohmann::json;
  auto nullable = [](double v) { return std::isnan(v) ? json(nullptr) : json(v); };
  json j;
  j["scheme"] = report.scheme;
  j["frame_period_ms"] = report.frame_period_ms;
  j["duration_ms"] = report.duration_ms;
  j["frames"] = report.frames.size();
  json switches = json::array();
  for (const SwitchRecord& s : report.switches) {
    json r;
    r["t_ms"] = s.t_ms;
    r["required_tiles"] = s.required_tiles.Indices();
    r["needed_new_tiles"] = s.needed_new_tiles;
    r["mtp_ms"] = nullable(s.mtp_ms);
    if (s.reached) {
      r["mthq_ms"] = s.mthq_ms;
      r["phase_ms"] = s.phase_ms;
      r["gop_wait_ms"] = s.gop_wait_ms;
      r["pipeline_ms"] = s.pipeline_ms;
      r["hq_frame"] = s.hq_frame;
    } else {
      r["mthq_ms"] = "NOT_REACHED";
    }
    switches.push_back(std::move(r));
  }
  j["switches"] = std::move(switches);
  json seconds = json::array();
  for (const BitrateRow& row : bitrate.rows) {
    json r = row.bytes;
    r["second"] = row.second;
    r["total"] = row.total;
    seconds.push_back(std::move(r));
  }
  j["bytes_per_second"] = std::move(seconds);
  j["bytes_total"] = bitrate.totals;
  j["bytes_total"]["all"] = bitrate.total;
  if (bitrate.full_enhanced_total > 0) {
    j["full_enhanced_bytes"] = bitrate.full_enhanced_total;
    j["enhanced_fraction"] =
        double(bitrate.totals.at(std::string(kEnhancedKey))) / bitrate.full_enhanced_total;
  }
  j["latency"] = {
      {"switches", latency.switches},
      {"reached", latency.reached},
      {"mean_mthq_ms", nullable(latency.mean_mthq_ms)},
      {"median_mthq_ms", nullable(latency.median_mthq_ms)},
      {"p95_mthq_ms", nullable(latency.p95_mthq_ms)},
      {"mean_mtp_ms", nullable(latency.mean_mtp_ms)},
      {"median_mtp_ms", nullable(latency.median_mtp_ms)},
      {"p95_mtp_ms", nullable(latency.p95_mtp_ms)},
      {"compliant", latency.compliant},
  };
  return j.dump(2) + "\n";
}

void WriteReportCsv(std::ostream& out, const SessionReport& report, const BitrateTable& bitrate,
                    bool header) {
  if (header) out << kCsvHeader << '\n';
  for (const SwitchRecord& s : report.switches) {
    out << "switch," << report.scheme << ',' << Num(s.t_ms) << ',' << Num(s.mtp_ms) << ','
        << (s.reached ? Num(s.mthq_ms) : "NOT_REACHED") << ",,,,,,,\n";
  }
  static const char* kKeys[] = {"base", "enhanced", "low", "long", "short"};
  for (const BitrateRow& row : bitrate.rows) {
    out << "second," << report.scheme << ",,,," << row.second;
    for (const char* k : kKeys) {
      out << ',';
      if (auto it = row.bytes.find(k); it != row.bytes.end()) out << it->second;
    }
    out << ',' << row.total << '\n';
  }
}

std::vector<CsvRow> ReadReportCsv(std::istream& in) {
  std::vector<CsvRow> rows;
  std::string line;
  const std::size_t columns = SplitCsv(kCsvHeader).size();
  bool first = true;
  while (std::getline(in, line)) {
    line = Trim(line);
    if (line.empty()) continue;
    if (first) {
      first = false;
      if (line != kCsvHeader) throw Error(ErrorCode::kInvalidInput, "unexpected CSV header: " + line);
      continue;
    }
    if (line == kCsvHeader) continue;  // concatenated files
    CsvRow row;
    row.fields = SplitCsv(line);
    if (row.fields.size() != columns || (row.fields[0] != "switch" && row.fields[0] != "second")) {
      throw Error(ErrorCode::kInvalidInput, "malformed CSV row: " + line);
    }
    row.record = row.fields[0];
    row.scheme = row.fields[1];
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<CsvSchemeSummary> SummarizeCsv(const std::vector<CsvRow>& rows) {
  struct Acc {
    std::size_t switches = 0;
    std::vector<double> mthq, mtp;
    std::size_t bytes = 0;
    double seconds = 0;
  };
  std::vector<std::string> order;
  std::map<std::string, Acc> acc;
  auto number = [](const std::string& s) {
    try {
      return ToDouble("csv", s);
    } catch (const Error&) {
      throw Error(ErrorCode::kInvalidInput, "bad number in CSV: " + s);
    }
  };
  for (const CsvRow& row : rows) {
    auto [it, inserted] = acc.try_emplace(row.scheme);
    if (inserted) order.push_back(row.scheme);
    Acc& a = it->second;
    if (row.record == "switch") {
      ++a.switches;
      if (!row.fields[3].empty()) a.mtp.push_back(number(row.fields[3]));
      if (row.fields[4] != "NOT_REACHED") a.mthq.push_back(number(row.fields[4]));
    } else {
      a.bytes += static_cast<std::size_t>(number(row.fields.back()));
      a.seconds += 1;
    }
  }
  std::vector<CsvSchemeSummary> out;
  for (const std::string& name : order) {
    Acc& a = acc[name];
    out.push_back({SummarizeLatency(name, a.switches, a.mthq, a.mtp), a.bytes, a.seconds});
  }
  return out;
}

}  // namespace svb
