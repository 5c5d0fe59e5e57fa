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

#include "svb/simulator.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>

#include "svb/error.h"
#include "svb/rewriter.h"

namespace svb {
namespace {

constexpr double kTimeEpsilon = 1e-6;

class Clock {
 public:
  explicit Clock(const SequenceConfig& c) : num_(c.fps_num), den_(c.fps_den) {}

  double Tick(std::int64_t n) const { return static_cast<double>(n) * 1000.0 * den_ / num_; }
  double Period() const { return 1000.0 * den_ / num_; }
  // First tick at or after t.
  std::int64_t TickAtOrAfter(double t) const {
    return static_cast<std::int64_t>(std::ceil(t / Period() - 1e-9));
  }
  // First frame boundary strictly after t.
  double BoundaryAfter(double t) const {
    return Tick(static_cast<std::int64_t>(std::floor(t / Period() + 1e-9)) + 1);
  }

 private:
  double num_;
  double den_;
};

using ViewportKey = std::array<double, 4>;

ViewportKey KeyOf(const Viewport& v) { return {v.yaw, v.pitch, v.h_fov, v.v_fov}; }

class TileSelector {
 public:
  TileSelector(const SequenceConfig& config, const SessionOptions& options)
      : config_(config),
        projection_{options.projection, config.width, config.height},
        step_(options.step) {}

  const TileSet& Select(const Viewport& v) {
    auto [it, inserted] = cache_.try_emplace(KeyOf(v));
    if (inserted) it->second = SelectTiles(v, projection_, config_, step_);
    return it->second;
  }

 private:
  SequenceConfig config_;
  Projection projection_;
  double step_;
  std::map<ViewportKey, TileSet> cache_;
};

// Per-frame byte tables of a single-layer track.
struct TrackBytes {
  std::vector<std::size_t> overhead;               // temporal delimiter + header
  std::vector<std::vector<std::size_t>> tile;      // [frame][tile]
  std::vector<std::size_t> whole;

  explicit TrackBytes(const Bitstream& track) {
    for (const FrameByteSizes& f : MeasureFrameBytes(track)) {
      const std::size_t tiles = std::accumulate(f.tile_bytes.begin(), f.tile_bytes.end(), std::size_t{0});
      overhead.push_back(f.base_bytes - tiles);
      tile.push_back(f.tile_bytes);
      whole.push_back(f.base_bytes);
    }
  }

  std::size_t Subset(std::size_t frame, const TileSet& tiles) const {
    if (tiles.Empty()) return 0;
    std::size_t sum = overhead[frame];
    for (std::uint32_t t : tiles) sum += tile[frame][t];
    return sum;
  }
};

// Rewritten SVC frame sizes, memoized per (clip frame, selection).
class SvcBytes {
 public:
  explicit SvcBytes(const Bitstream& svc) : svc_(svc) {
    for (const FrameUnits& f : IndexFrames(svc)) {
      spans_.push_back(std::span<const Unit>(svc.units).subspan(f.first_unit, f.end_unit - f.first_unit));
    }
    for (const FrameByteSizes& f : MeasureFrameBytes(svc)) full_enhanced_.push_back(f.enhanced_bytes);
  }

  std::pair<std::size_t, std::size_t> Rewritten(std::size_t frame, const TileSet& selected) {
    auto [it, inserted] = cache_.try_emplace({frame, selected.Indices()});
    if (inserted) {
      const std::vector<Unit> units = RewriteViewportFrame(svc_.config, spans_[frame], selected);
      std::size_t base = 0, enhanced = 0;
      bool in_enhanced = false;
      for (const Unit& u : units) {
        if (const auto* h = std::get_if<FrameHeader>(&u)) in_enhanced = h->layer_id == LayerId::kEnhanced;
        (in_enhanced ? enhanced : base) += SerializedSize(u);
      }
      it->second = {base, enhanced};
    }
    return it->second;
  }

  std::size_t FullEnhanced(std::size_t frame) const { return full_enhanced_[frame]; }
  std::size_t Frames() const { return spans_.size(); }

 private:
  const Bitstream& svc_;
  std::vector<std::span<const Unit>> spans_;
  std::vector<std::size_t> full_enhanced_;
  std::map<std::pair<std::size_t, std::vector<std::uint32_t>>, std::pair<std::size_t, std::size_t>> cache_;
};

const Bitstream& TrackOrThrow(const StreamSet& streams, TrackResolution res, int gop) {
  auto it = streams.tracks.find({res, gop});
  if (it == streams.tracks.end()) {
    throw Error(ErrorCode::kNoStream, std::string(res == TrackResolution::kBase ? "low" : "full") +
                                          "-resolution track with GOP " + std::to_string(gop) +
                                          " was not encoded");
  }
  return it->second;
}

std::size_t CountFrames(const Bitstream& b) {
  return std::count_if(b.units.begin(), b.units.end(), [](const Unit& u) {
    return TypeOf(u) == UnitType::kTemporalDelimiter;
  });
}

void ResolveSwitches(const Trace& trace, const Clock& clock, const NetworkModel& network,
                     TileSelector& selector, SessionReport& report) {
  const auto& frames = report.frames;
  for (std::size_t i = 1; i < trace.size(); ++i) {
    SwitchRecord sw;
    sw.t_ms = trace[i].t_ms;
    sw.viewport = trace[i].viewport;
    sw.required_tiles = selector.Select(sw.viewport);
    const double s = sw.t_ms;
    const double deadline = i + 1 < trace.size() ? trace[i + 1].t_ms : std::numeric_limits<double>::infinity();

    // Tiles the server was sending before it learned of the switch.
    auto composed = std::lower_bound(frames.begin(), frames.end(), s + network.uplink_ms - kTimeEpsilon,
                                     [](const FrameRecord& f, double t) { return f.compose_ms < t; });
    if (composed != frames.begin()) {
      sw.needed_new_tiles = !sw.required_tiles.IsSubsetOf(std::prev(composed)->hq_tiles);
    }

    auto shown = std::upper_bound(frames.begin(), frames.end(), s + kTimeEpsilon,
                                  [](double t, const FrameRecord& f) { return t < f.display_ms; });
    if (shown != frames.end()) sw.mtp_ms = shown->display_ms - s;
    for (auto it = shown; it != frames.end() && it->display_ms <= deadline + kTimeEpsilon; ++it) {
      if (!sw.required_tiles.IsSubsetOf(it->hq_tiles)) continue;
      sw.reached = true;
      sw.hq_frame = it->frame;
      sw.mthq_ms = it->display_ms - s;
      const double arrival = s + network.uplink_ms;
      const double first_tick = clock.Tick(clock.TickAtOrAfter(arrival - kTimeEpsilon));
      sw.phase_ms = first_tick - arrival;
      sw.gop_wait_ms = it->compose_ms - first_tick;
      sw.pipeline_ms = it->display_ms - it->compose_ms;
      break;
    }
    if (shown == frames.end()) sw.mtp_ms = std::numeric_limits<double>::quiet_NaN();
    report.switches.push_back(std::move(sw));
  }
}

}  // namespace

void NetworkModel::Check() const {
  if (!std::isfinite(uplink_ms) || uplink_ms < 0 || !std::isfinite(downlink_ms) || downlink_ms < 0) {
    throw Error(ErrorCode::kBadArgs, "network delays must be finite and nonnegative");
  }
  if (bandwidth_bytes_per_s && !(*bandwidth_bytes_per_s > 0)) {
    throw Error(ErrorCode::kBadArgs, "bandwidth must be positive");
  }
}

std::string Scheme::Name() const {
  if (kind == SchemeKind::kSvc) return "svc";
  std::string name = "multitrack:" + std::to_string(long_gop) + ":" + std::to_string(short_gop);
  if (low_gop > 0 && low_gop != long_gop) name += ":" + std::to_string(low_gop);
  return name;
}

void Scheme::Check() const {
  if (kind == SchemeKind::kSvc) return;
  if (long_gop < 1 || short_gop < 0 || low_gop < 0 || long_gop > 65535 || short_gop > 65535 ||
      low_gop > 65535) {
    throw Error(ErrorCode::kBadArgs, "multitrack GOPs must be >= 1 (short_gop 0 disables the short track)");
  }
}

double ExpectedGopWaitMs(int gop, double fps) {
  if (gop < 1 || !(fps > 0) || !std::isfinite(fps)) {
    throw Error(ErrorCode::kBadArgs, "gop must be >= 1 and fps > 0");
  }
  return 1000.0 * gop / (2.0 * fps);
}

std::size_t StreamSet::ClipFrames() const {
  if (svc) return CountFrames(*svc);
  if (!tracks.empty()) return CountFrames(tracks.begin()->second);
  return 0;
}

StreamSet EncodeStreams(const VideoSource& source, const std::vector<Scheme>& schemes) {
  StreamSet set;
  set.config = source.config;
  for (const Scheme& s : schemes) {
    s.Check();
    if (s.kind == SchemeKind::kSvc) {
      if (!set.svc) set.svc = EncodeSvc(source);
      continue;
    }
    auto add = [&](TrackResolution res, int gop) {
      if (!set.tracks.contains({res, gop})) set.tracks.emplace(std::pair{res, gop}, EncodeTrack(source, gop, res));
    };
    add(TrackResolution::kBase, s.LowGop());
    add(TrackResolution::kFull, s.long_gop);
    if (s.short_gop > 0) add(TrackResolution::kFull, s.short_gop);
  }
  return set;
}

SessionReport RunSession(const Scheme& scheme, const Trace& trace, const NetworkModel& network,
                         const StreamSet& streams, const SessionOptions& options) {
  if (trace.empty()) throw Error(ErrorCode::kTraceEmpty, "trace has no entries");
  CheckTrace(trace);
  scheme.Check();
  network.Check();
  const SequenceConfig& config = streams.config;
  const Clock clock(config);
  const bool svc = scheme.kind == SchemeKind::kSvc;

  std::optional<SvcBytes> svc_bytes;
  std::optional<TrackBytes> low, long_track, short_track;
  std::vector<int> gops;
  if (svc) {
    if (!streams.svc) throw Error(ErrorCode::kNoStream, "SVC stream was not encoded");
    svc_bytes.emplace(*streams.svc);
  } else {
    low.emplace(TrackOrThrow(streams, TrackResolution::kBase, scheme.LowGop()));
    long_track.emplace(TrackOrThrow(streams, TrackResolution::kFull, scheme.long_gop));
    gops = {scheme.LowGop(), scheme.long_gop};
    if (scheme.short_gop > 0) {
      short_track.emplace(TrackOrThrow(streams, TrackResolution::kFull, scheme.short_gop));
      gops.push_back(scheme.short_gop);
    }
  }
  const std::size_t clip = streams.ClipFrames();
  if (clip == 0) throw Error(ErrorCode::kNoStream, "streams are empty");
  for (int g : gops) {
    if (clip % g != 0) {
      throw Error(ErrorCode::kBadArgs, "clip of " + std::to_string(clip) +
                                           " frames is not a multiple of GOP " + std::to_string(g));
    }
  }

  TileSelector selector(config, options);
  SessionReport report;
  report.scheme = scheme.Name();
  report.frame_period_ms = clock.Period();
  if (svc) {
    report.byte_keys = {std::string(kBaseKey), std::string(kEnhancedKey)};
  } else {
    report.byte_keys = {std::string(kLowKey), std::string(kLongKey), std::string(kShortKey)};
  }
  if (options.duration_ms > 0) {
    report.duration_ms = options.duration_ms;
  } else {
    const int max_gop = gops.empty() ? 1 : *std::max_element(gops.begin(), gops.end());
    report.duration_ms = trace.back().t_ms + network.uplink_ms + network.downlink_ms +
                         (max_gop + 3) * clock.Period();
  }

  std::size_t pose = 0;
  double link_free = 0;
  TileSet long_region, short_region;
  for (std::int64_t n = 0; clock.Tick(n) < report.duration_ms - kTimeEpsilon; ++n) {
    const double tick = clock.Tick(n);
    while (pose + 1 < trace.size() && trace[pose + 1].t_ms + network.uplink_ms <= tick + kTimeEpsilon) {
      ++pose;
    }
    const TileSet& wanted = selector.Select(trace[pose].viewport);
    const std::size_t clip_frame = static_cast<std::size_t>(n) % clip;

    FrameRecord f;
    f.frame = static_cast<std::uint32_t>(n);
    f.compose_ms = tick;
    if (svc) {
      auto [base, enhanced] = svc_bytes->Rewritten(clip_frame, wanted);
      f.bytes[std::string(kBaseKey)] = base;
      f.bytes[std::string(kEnhancedKey)] = enhanced;
      f.full_enhanced_bytes = svc_bytes->FullEnhanced(clip_frame);
      f.hq_tiles = wanted;
    } else {
      if (n % scheme.long_gop == 0) long_region = wanted;
      if (short_track && n % scheme.short_gop == 0) short_region = wanted.Difference(long_region);
      if (!short_track) short_region = TileSet();
      f.bytes[std::string(kLowKey)] = low->whole[clip_frame];
      f.bytes[std::string(kLongKey)] = long_track->Subset(clip_frame, long_region);
      f.bytes[std::string(kShortKey)] = short_track ? short_track->Subset(clip_frame, short_region) : 0;
      f.hq_tiles = long_region.Union(short_region);
    }
    f.coded_tiles = f.hq_tiles;

    std::size_t total = 0;
    for (const auto& [key, b] : f.bytes) total += b;
    const double start = std::max(tick, link_free);
    const double serialization =
        network.bandwidth_bytes_per_s ? 1000.0 * total / *network.bandwidth_bytes_per_s : 0.0;
    link_free = start + serialization;
    f.arrival_ms = link_free + network.downlink_ms;
    f.display_ms = clock.BoundaryAfter(f.arrival_ms);
    report.frames.push_back(std::move(f));
  }

  ResolveSwitches(trace, clock, network, selector, report);
  return report;
}

SessionReport RunSession(const Scheme& scheme, const Trace& trace, const NetworkModel& network,
                         const SequenceConfig& config, std::uint64_t source_seed,
                         const SessionOptions& options) {
  scheme.Check();
  std::int64_t clip = config.gop_size;
  if (scheme.kind == SchemeKind::kMultitrack) {
    clip = std::lcm(clip, std::int64_t{scheme.long_gop});
    clip = std::lcm(clip, std::int64_t{scheme.LowGop()});
    if (scheme.short_gop > 0) clip = std::lcm(clip, std::int64_t{scheme.short_gop});
  }
  if (clip > 100000) throw Error(ErrorCode::kBadArgs, "GOP combination needs too long a clip");
  const VideoSource source = GenerateContent(source_seed, config, static_cast<int>(clip));
  return RunSession(scheme, trace, network, EncodeStreams(source, {scheme}), options);
}

BitrateTable BitrateReport(const SessionReport& report) {
  BitrateTable table;
  table.scheme = report.scheme;
  table.keys = report.byte_keys;
  const int seconds = static_cast<int>(std::ceil(report.duration_ms / 1000.0 - 1e-9));
  table.rows.resize(std::max(seconds, 0));
  for (int s = 0; s < seconds; ++s) {
    table.rows[s].second = s;
    for (const std::string& k : table.keys) table.rows[s].bytes[k] = 0;
  }
  for (const std::string& k : table.keys) table.totals[k] = 0;
  for (const FrameRecord& f : report.frames) {
    const auto s = static_cast<std::size_t>(std::floor(f.compose_ms / 1000.0 + 1e-9));
    if (s >= table.rows.size()) table.rows.resize(s + 1, BitrateRow{});
    BitrateRow& row = table.rows[s];
    row.second = static_cast<int>(s);
    for (const auto& [k, b] : f.bytes) {
      row.bytes[k] += b;
      row.total += b;
      table.totals[k] += b;
      table.total += b;
    }
    table.full_enhanced_total += f.full_enhanced_bytes;
  }
  return table;
}

double Percentile(std::vector<double> values, double q) {
  if (values.empty()) throw Error(ErrorCode::kEmpty, "no samples");
  std::sort(values.begin(), values.end());
  const double pos = std::clamp(q, 0.0, 1.0) * (values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (values[hi] - values[lo]) * (pos - lo);
}

LatencyStats SummarizeLatency(const std::string& scheme, std::size_t switches,
                              std::vector<double> reached_mthq, std::vector<double> mtp,
                              double threshold_ms) {
  constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
  auto mean = [](const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / v.size();
  };
  LatencyStats s;
  s.scheme = scheme;
  s.switches = switches;
  s.reached = reached_mthq.size();
  s.mean_mthq_ms = s.median_mthq_ms = s.p95_mthq_ms = kNan;
  s.mean_mtp_ms = s.median_mtp_ms = s.p95_mtp_ms = kNan;
  std::erase_if(mtp, [](double v) { return std::isnan(v); });
  if (!reached_mthq.empty()) {
    s.mean_mthq_ms = mean(reached_mthq);
    s.median_mthq_ms = Percentile(reached_mthq, 0.5);
    s.p95_mthq_ms = Percentile(reached_mthq, 0.95);
  }
  if (!mtp.empty()) {
    s.mean_mtp_ms = mean(mtp);
    s.median_mtp_ms = Percentile(mtp, 0.5);
    s.p95_mtp_ms = Percentile(mtp, 0.95);
  }
  s.compliant = switches > 0 && s.reached == switches && s.p95_mthq_ms <= threshold_ms + 1e-9;
  return s;
}

std::vector<LatencyStats> LatencySummary(const std::vector<SessionReport>& reports, double threshold_ms) {
  if (reports.empty()) throw Error(ErrorCode::kEmpty, "no session reports");
  std::vector<std::string> order;
  std::map<std::string, std::tuple<std::size_t, std::vector<double>, std::vector<double>>> samples;
  for (const SessionReport& r : reports) {
    auto [it, inserted] = samples.try_emplace(r.scheme);
    if (inserted) order.push_back(r.scheme);
    auto& [count, mthq, mtp] = it->second;
    for (const SwitchRecord& sw : r.switches) {
      ++count;
      if (sw.reached) mthq.push_back(sw.mthq_ms);
      mtp.push_back(sw.mtp_ms);
    }
  }
  std::vector<LatencyStats> out;
  for (const std::string& name : order) {
    auto& [count, mthq, mtp] = samples[name];
    out.push_back(SummarizeLatency(name, count, std::move(mthq), std::move(mtp), threshold_ms));
  }
  return out;
}

}  // namespace svb
