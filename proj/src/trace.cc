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

#include "svb/trace.h"

#include <cmath>
#include <fstream>
#include <ostream>

#include <json.hpp>

#include "svb/error.h"

namespace svb {
namespace {

double Field(const nlohmann::json& j, const char* name, int line) {
  auto it = j.find(name);
  if (it == j.end() || !it->is_number()) {
    throw Error(ErrorCode::kInvalidInput,
                "trace line " + std::to_string(line) + ": missing numeric \"" + name + "\"");
  }
  return it->get<double>();
}

}  // namespace

void CheckTrace(const Trace& trace) {
  for (std::size_t i = 0; i < trace.size(); ++i) {
    if (!std::isfinite(trace[i].t_ms)) {
      throw Error(ErrorCode::kInvalidInput, "trace entry " + std::to_string(i) + ": t_ms not finite");
    }
    if (i > 0 && !(trace[i].t_ms > trace[i - 1].t_ms)) {
      throw Error(ErrorCode::kInvalidInput,
                  "trace entry " + std::to_string(i) + ": times must be strictly increasing");
    }
  }
}

Trace ParseTrace(std::istream& in) {
  Trace trace;
  std::string text;
  int line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j = nlohmann::json::parse(text, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded() || !j.is_object()) {
      throw Error(ErrorCode::kInvalidInput, "trace line " + std::to_string(line) + ": not a JSON object");
    }
    TracePose pose;
    pose.t_ms = Field(j, "t_ms", line);
    try {
      pose.viewport = Viewport::FromDegrees(Field(j, "yaw_deg", line), Field(j, "pitch_deg", line),
                                            Field(j, "h_fov_deg", line), Field(j, "v_fov_deg", line));
    } catch (const Error& e) {
      throw Error(ErrorCode::kInvalidInput, "trace line " + std::to_string(line) + ": " + e.what());
    }
    trace.push_back(pose);
  }
  CheckTrace(trace);
  return trace;
}

Trace LoadTrace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open trace " + path);
  return ParseTrace(in);
}

void WriteTrace(std::ostream& out, const Trace& trace) {
  for (const TracePose& p : trace) {
    nlohmann::json j;
    j["t_ms"] = p.t_ms;
    j["yaw_deg"] = p.viewport.yaw / kDegree;
    j["pitch_deg"] = p.viewport.pitch / kDegree;
    j["h_fov_deg"] = p.viewport.h_fov / kDegree;
    j["v_fov_deg"] = p.viewport.v_fov / kDegree;
    out << j.dump() << '\n';
  }
}

}  // namespace svb
