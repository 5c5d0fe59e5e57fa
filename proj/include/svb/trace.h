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

// Viewport traces: one JSON object per line,
//   {"t_ms": 0, "yaw_deg": 0, "pitch_deg": 0, "h_fov_deg": 90, "v_fov_deg": 90}
// The first entry is the initial pose; every later entry is a switch.

#include <iosfwd>
#include <string>
#include <vector>

#include "svb/geometry.h"

namespace svb {

struct TracePose {
  double t_ms = 0;
  Viewport viewport;  // radians

  bool operator==(const TracePose&) const = default;
};

using Trace = std::vector<TracePose>;

// Throws Error(kInvalidInput) on malformed lines, out-of-range viewports or
// times that are not strictly increasing.
Trace ParseTrace(std::istream& in);
Trace LoadTrace(const std::string& path);  // also Error(kIo)

void WriteTrace(std::ostream& out, const Trace& trace);

// Throws Error(kInvalidInput) when times are not finite and strictly
// increasing.
void CheckTrace(const Trace& trace);

}  // namespace svb
