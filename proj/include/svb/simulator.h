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

// Frame-tick session simulation of a viewport-dependent client/server pair.
//
// Timeline: frame n is composed at tick n * P, where P is the frame period.
// A pose sent at time s reaches the server at s + uplink; the server uses the
// latest pose it has at each tick. Payloads leave over a FIFO downlink
// (serialization bytes / bandwidth, then the propagation delay) and the
// client displays a frame at the first frame boundary strictly after it
// arrives.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "svb/codec.h"
#include "svb/container.h"
#include "svb/geometry.h"
#include "svb/tile_set.h"
#include "svb/trace.h"

namespace svb {

struct NetworkModel {
  double uplink_ms = 0;
  double downlink_ms = 0;
  std::optional<double> bandwidth_bytes_per_s;  // nullopt = unlimited

  // Throws Error(kBadArgs).
  void Check() const;
};

enum class SchemeKind { kSvc, kMultitrack };

struct Scheme {
  SchemeKind kind = SchemeKind::kSvc;
  int long_gop = 30;
  int short_gop = 0;  // 0 = no short track
  int low_gop = 0;    // 0 = same as long_gop

  static Scheme Svc() { return Scheme{}; }
  static Scheme Multitrack(int long_gop, int short_gop, int low_gop = 0) {
    return Scheme{SchemeKind::kMultitrack, long_gop, short_gop, low_gop};
  }

  int LowGop() const { return low_gop > 0 ? low_gop : long_gop; }
  // "svc", "multitrack:30:5", or "multitrack:30:5:10" with a low-track GOP
  // override; the same syntax the command line accepts.
  std::string Name() const;
  // Throws Error(kBadArgs).
  void Check() const;
};

// Mean wait from a uniformly random instant to the next KEY frame:
// 1000 * gop / (2 * fps). Throws Error(kBadArgs).
double ExpectedGopWaitMs(int gop, double fps);

// Encoded material shared by sessions. Tracks are keyed by resolution and GOP.
struct StreamSet {
  SequenceConfig config;  // the two-layer stream configuration
  std::optional<Bitstream> svc;
  std::map<std::pair<TrackResolution, int>, Bitstream> tracks;

  std::size_t ClipFrames() const;
};

// Encodes everything the schemes need from one source.
StreamSet EncodeStreams(const VideoSource& source, const std::vector<Scheme>& schemes);

struct SessionOptions {
  ProjectionKind projection = ProjectionKind::kErp;
  double step = kDefaultStep;
  // Simulated span; 0 runs until every switch has had time to settle.
  double duration_ms = 0;
};

inline constexpr std::string_view kBaseKey = "base";
inline constexpr std::string_view kEnhancedKey = "enhanced";
inline constexpr std::string_view kLowKey = "low";
inline constexpr std::string_view kLongKey = "long";
inline constexpr std::string_view kShortKey = "short";

struct FrameRecord {
  std::uint32_t frame = 0;  // session frame number; the clip loops underneath
  double compose_ms = 0;
  double arrival_ms = 0;
  double display_ms = 0;
  TileSet hq_tiles;     // shown at high quality
  TileSet coded_tiles;  // high-resolution tiles transported
  std::map<std::string, std::size_t> bytes;
  // Bytes of the complete high-resolution layer for this frame, for
  // computing transported fractions. SVC only.
  std::size_t full_enhanced_bytes = 0;
};

// MTHQ decomposes as uplink + phase + gop_wait + pipeline:
//   phase     from pose arrival at the server to the next tick,
//   gop_wait  from that tick to the tick of the first high-quality frame,
//   pipeline  from that tick to display (serialization, downlink, display
//             alignment).
struct SwitchRecord {
  double t_ms = 0;
  Viewport viewport;
  TileSet required_tiles;
  // The last frame composed before the pose reached the server did not
  // already cover the new viewport.
  bool needed_new_tiles = true;
  bool reached = false;  // false = NOT_REACHED
  double mtp_ms = 0;
  double mthq_ms = 0;
  double phase_ms = 0;
  double gop_wait_ms = 0;
  double pipeline_ms = 0;
  std::uint32_t hq_frame = 0;
};

struct SessionReport {
  std::string scheme;
  double frame_period_ms = 0;
  double duration_ms = 0;
  std::vector<std::string> byte_keys;
  std::vector<SwitchRecord> switches;  // trace entries 1..n-1
  std::vector<FrameRecord> frames;
};

// Throws Error(kTraceEmpty), Error(kNoStream) when the scheme needs a stream
// missing from `streams`, Error(kBadArgs) for bad parameters or a clip whose
// length is not a multiple of every GOP in use.
SessionReport RunSession(const Scheme& scheme, const Trace& trace, const NetworkModel& network,
                         const StreamSet& streams, const SessionOptions& options = {});

// Generates and encodes a seeded source sized for the scheme, then runs it.
SessionReport RunSession(const Scheme& scheme, const Trace& trace, const NetworkModel& network,
                         const SequenceConfig& config, std::uint64_t source_seed,
                         const SessionOptions& options = {});

struct BitrateRow {
  int second = 0;
  std::map<std::string, std::size_t> bytes;
  std::size_t total = 0;
};

struct BitrateTable {
  std::string scheme;
  std::vector<std::string> keys;
  std::vector<BitrateRow> rows;  // every second of the session, bucketed by compose time
  std::map<std::string, std::size_t> totals;
  std::size_t total = 0;
  std::size_t full_enhanced_total = 0;
};

BitrateTable BitrateReport(const SessionReport& report);

struct LatencyStats {
  std::string scheme;
  std::size_t switches = 0;
  std::size_t reached = 0;
  double mean_mthq_ms = 0;
  double median_mthq_ms = 0;
  double p95_mthq_ms = 0;
  double mean_mtp_ms = 0;
  double median_mtp_ms = 0;
  double p95_mtp_ms = 0;
  // p95 MTHQ within the threshold, with every switch reached.
  bool compliant = false;
};

inline constexpr double kInteractiveThresholdMs = 50;

// One entry per scheme, in order of first appearance. Throws Error(kEmpty).
std::vector<LatencyStats> LatencySummary(const std::vector<SessionReport>& reports,
                                         double threshold_ms = kInteractiveThresholdMs);

// Summary from raw samples; `reached_mthq` holds reached switches only.
LatencyStats SummarizeLatency(const std::string& scheme, std::size_t switches,
                              std::vector<double> reached_mthq, std::vector<double> mtp,
                              double threshold_ms = kInteractiveThresholdMs);

// Linear-interpolated percentile, q in [0, 1]. Throws Error(kEmpty).
double Percentile(std::vector<double> values, double q);

}  // namespace svb
