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

#pragma once

// Text formats around the simulator: the key=value session config, the JSON
// report and the flat CSV.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "svb/simulator.h"

namespace svb {

// Keys: scheme (svc|multitrack), long_gop, short_gop, low_gop, uplink_ms,
// downlink_ms, bandwidth_Bps (number or "unlimited"), fps ("30" or
// "30000/1001"). Blank lines and '#' comments are ignored.
struct SimulationConfig {
  std::optional<Scheme> scheme;
  NetworkModel network;
  std::optional<std::pair<std::uint16_t, std::uint16_t>> fps;
};

// Throws Error(kBadConfig).
SimulationConfig ParseSimulationConfig(std::istream& in);
SimulationConfig LoadSimulationConfig(const std::string& path);  // also Error(kIo)

// "30" -> {30, 1}, "30000/1001" -> {30000, 1001}. Throws Error(kBadArgs).
std::pair<std::uint16_t, std::uint16_t> ParseFps(const std::string& text);

std::string ReportJson(const SessionReport& report, const BitrateTable& bitrate,
                       const LatencyStats& latency);

// Columns of the flat CSV. `record` is "switch" or "second".
inline constexpr const char* kCsvHeader =
    "record,scheme,t_ms,mtp_ms,mthq_ms,second,base,enhanced,low,long,short,total";

void WriteReportCsv(std::ostream& out, const SessionReport& report, const BitrateTable& bitrate,
                    bool header = true);

struct CsvRow {
  std::string record;
  std::string scheme;
  std::vector<std::string> fields;  // all columns, as text
};

// Throws Error(kInvalidInput) on a wrong header or column count.
std::vector<CsvRow> ReadReportCsv(std::istream& in);

struct CsvSchemeSummary {
  LatencyStats latency;
  std::size_t total_bytes = 0;
  double seconds = 0;
};

// Per scheme, in order of first appearance.
std::vector<CsvSchemeSummary> SummarizeCsv(const std::vector<CsvRow>& rows);

}  // namespace svb
