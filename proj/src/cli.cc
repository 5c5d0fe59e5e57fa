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

#include "svb/cli.h"

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "svb/codec.h"
#include "svb/container.h"
#include "svb/digest.h"
#include "svb/error.h"
#include "svb/geometry.h"
#include "svb/rewriter.h"
#include "svb/session_io.h"
#include "svb/simulator.h"
#include "svb/trace.h"

namespace svb {
namespace {

namespace fs = std::filesystem;

// Problems with flag values that CLI11 cannot see.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<std::uint8_t> ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), {});
}

void WriteFileAtomic(const std::string& path, std::string_view data) {
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const std::string tmp = path + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + tmp);
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out) throw Error(ErrorCode::kIo, "write failed: " + tmp);
  }
  fs::rename(tmp, target);
}

void WriteFileAtomic(const std::string& path, std::span<const std::uint8_t> data) {
  WriteFileAtomic(path, std::string_view(reinterpret_cast<const char*>(data.data()), data.size()));
}

Bitstream LoadStream(const std::string& path) { return Parse(ReadFile(path)); }

Viewport ParseViewport(const std::string& text) {
  std::vector<double> v;
  std::stringstream in(text);
  std::string cell;
  while (std::getline(in, cell, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(cell, &used));
      if (used != cell.size()) throw std::invalid_argument(cell);
    } catch (const std::exception&) {
      throw UsageError("--viewport: not a number: '" + cell + "'");
    }
  }
  if (v.size() != 4) throw UsageError("--viewport expects yaw,pitch,h_fov,v_fov in degrees");
  try {
    return Viewport::FromDegrees(v[0], v[1], v[2], v[3]);
  } catch (const Error& e) {
    throw UsageError(std::string("--viewport: ") + e.what());
  }
}

ProjectionKind ParseProjection(const std::string& s) {
  return s == "cubemap" ? ProjectionKind::kCubemap3x2 : ProjectionKind::kErp;
}

// Options shared by every subcommand.
struct Common {
  std::uint64_t seed = 1;
  std::string out;
  int jobs = 1;
};

// Sequence parameters for generated material.
struct SequenceFlags {
  int width = 768;
  int height = 384;
  int scale = 2;
  int tile_cols = 6;
  int tile_rows = 4;
  std::string fps = "30";
  int gop = 30;
  int ref_window = 1;
  bool tiled_base = false;

  void Add(CLI::App* app, bool grid_only = false) {
    app->add_option("--width", width, "Frame width in pixels")->capture_default_str()->check(CLI::Range(1, 65535));
    app->add_option("--height", height, "Frame height in pixels")->capture_default_str()->check(CLI::Range(1, 65535));
    app->add_option("--tile-cols", tile_cols, "Tile grid columns")->capture_default_str()->check(CLI::Range(1, 255));
    app->add_option("--tile-rows", tile_rows, "Tile grid rows")->capture_default_str()->check(CLI::Range(1, 255));
    if (grid_only) return;
    app->add_option("--scale", scale, "Base-layer downscale factor")->capture_default_str()->check(CLI::Range(1, 255));
    app->add_option("--fps", fps, "Frame rate, N or N/D frames per second")->capture_default_str();
    app->add_option("--gop", gop, "GOP length in frames")->capture_default_str()->check(CLI::Range(1, 65535));
    app->add_option("--ref-window", ref_window, "Base frames an enhanced frame may reference")
        ->capture_default_str()
        ->check(CLI::Range(1, 255));
    app->add_flag("--tiled-base", tiled_base, "Tile the base layer on the same grid");
  }

  SequenceConfig Config() const {
    SequenceConfig c;
    c.width = static_cast<std::uint16_t>(width);
    c.height = static_cast<std::uint16_t>(height);
    c.scale_factor = static_cast<std::uint8_t>(scale);
    c.tile_cols = static_cast<std::uint8_t>(tile_cols);
    c.tile_rows = static_cast<std::uint8_t>(tile_rows);
    try {
      std::tie(c.fps_num, c.fps_den) = ParseFps(fps);
    } catch (const Error& e) {
      throw UsageError(std::string("--fps: ") + e.what());
    }
    c.gop_size = static_cast<std::uint16_t>(gop);
    c.ref_window = static_cast<std::uint8_t>(ref_window);
    c.base_single_tile = !tiled_base;
    if (auto problems = CheckConfig(c); !problems.empty()) throw UsageError(problems.front());
    return c;
  }
};

struct Manifest {
  std::string command;
  std::vector<std::string> argv;
  std::string config;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;

  // Written next to the first output.
  void Write() const {
    if (outputs.empty()) return;
    nlohmann::json j;
    j["tool"] = "svb";
    j["version"] = kToolVersion;
    j["command"] = command;
    j["argv"] = argv;
    j["config"] = config;
    auto files = [](const std::vector<std::string>& paths) {
      nlohmann::json list = nlohmann::json::array();
      for (const std::string& p : paths) {
        list.push_back({{"path", p}, {"sha256", Sha256File(p)}, {"bytes", fs::file_size(p)}});
      }
      return list;
    };
    j["inputs"] = files(inputs);
    j["outputs"] = files(outputs);
    WriteFileAtomic(outputs.front() + ".manifest.json", j.dump(2) + "\n");
  }
};

class Cli {
 public:
  Cli(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  int Run(const std::vector<std::string>& args);

 private:
  void AddCommon(CLI::App* sub) {
    sub->add_option("--seed", common_.seed, "Seed for all generated content")->capture_default_str();
    sub->add_option("--out", common_.out, "Output path (or prefix for multi-file outputs)");
    sub->add_option("--jobs", common_.jobs, "Worker threads for parameter sweeps; results do not depend on it")
        ->capture_default_str()
        ->check(CLI::Range(1, 256));
  }

  std::string OutOr(const std::string& fallback) const {
    return common_.out.empty() ? fallback : common_.out;
  }

  void Generate();
  void Encode();
  void Rewrite();
  void Decode();
  int Validate();
  void SelectTilesCommand();
  void Simulate();
  void Report();

  std::ostream& out_;
  std::ostream& err_;
  Common common_;
  Manifest manifest_;
  SequenceFlags seq_;

  int frames_ = 30;
  std::string input_;
  std::string schema_ = "svc";
  std::string resolution_ = "full";
  std::string viewport_;
  std::string trace_path_;
  int frame_ = -1;
  std::string projection_ = "erp";
  double step_deg_ = 0.25;
  std::string tiles_ = "all";
  bool oracle_ = false;
  std::vector<std::string> schemes_;
  int long_gop_ = 30;
  int short_gop_ = 0;
  int low_gop_ = 0;
  std::string net_path_;
  std::vector<std::string> streams_;
  double duration_ms_ = 0;
  std::vector<std::string> csv_inputs_;
};

void Cli::Generate() {
  const SequenceConfig c = seq_.Config();
  const VideoSource source = GenerateContent(common_.seed, c, frames_);
  std::string raw;
  raw.reserve(std::size_t{c.width} * c.height * source.frames.size());
  for (const RasterFrame& f : source.frames) raw.append(f.samples.begin(), f.samples.end());
  const std::string path = OutOr("source.raw");
  WriteFileAtomic(path, raw);
  manifest_.outputs.push_back(path);
  out_ << "wrote " << source.frames.size() << " frames of " << c.width << "x" << c.height << " to "
       << path << "\n";
}

void Cli::Encode() {
  SequenceConfig c = seq_.Config();
  VideoSource source;
  if (input_.empty()) {
    source = GenerateContent(common_.seed, c, frames_);
  } else {
    const std::vector<std::uint8_t> raw = ReadFile(input_);
    manifest_.inputs.push_back(input_);
    const std::size_t frame_size = std::size_t{c.width} * c.height;
    if (raw.empty() || raw.size() % frame_size != 0) {
      throw Error(ErrorCode::kBadDimensions, input_ + " is not a whole number of " +
                                                 std::to_string(c.width) + "x" +
                                                 std::to_string(c.height) + " frames");
    }
    source.config = c;
    for (std::size_t off = 0; off < raw.size(); off += frame_size) {
      RasterFrame f{c.width, c.height, {}};
      f.samples.assign(raw.begin() + off, raw.begin() + off + frame_size);
      source.frames.push_back(std::move(f));
    }
  }
  Bitstream stream;
  if (schema_ == "svc") {
    stream = EncodeSvc(source);
  } else {
    stream = EncodeTrack(source, seq_.gop,
                         resolution_ == "base" ? TrackResolution::kBase : TrackResolution::kFull);
  }
  const std::vector<std::uint8_t> bytes = Serialize(stream);
  const std::string path = OutOr("stream.svb");
  WriteFileAtomic(path, bytes);
  manifest_.outputs.push_back(path);
  out_ << "wrote " << bytes.size() << " bytes (" << source.frames.size() << " frames, " << schema_
       << ") to " << path << "\n";
}

void Cli::Rewrite() {
  if (viewport_.empty() == trace_path_.empty()) {
    throw UsageError("give exactly one of --viewport or --trace");
  }
  const Bitstream stream = LoadStream(input_);
  manifest_.inputs.push_back(input_);
  const SequenceConfig& c = stream.config;
  if (c.single_layer) throw Error(ErrorCode::kInvalidInput, "rewrite needs a two-layer stream");
  const Projection projection{ParseProjection(projection_), c.width, c.height};
  const double step = step_deg_ * kDegree;

  Trace trace;
  if (!trace_path_.empty()) {
    trace = LoadTrace(trace_path_);
    manifest_.inputs.push_back(trace_path_);
    if (trace.empty()) throw Error(ErrorCode::kTraceEmpty, "trace has no entries");
  } else {
    trace.push_back({0, ParseViewport(viewport_)});
  }
  std::map<std::size_t, TileSet> selections;  // by trace entry
  auto pose_at = [&](std::uint32_t frame) {
    const double t = frame * c.FramePeriodMs();
    std::size_t i = 0;
    while (i + 1 < trace.size() && trace[i + 1].t_ms <= t + 1e-6) ++i;
    return i;
  };
  std::size_t rewritten = 0;
  const Bitstream result = RewriteStream(stream, [&](std::uint32_t frame) -> std::optional<TileSet> {
    if (frame_ >= 0 && frame != static_cast<std::uint32_t>(frame_)) return std::nullopt;
    const std::size_t pose = pose_at(frame);
    auto it = selections.find(pose);
    if (it == selections.end()) {
      it = selections.emplace(pose, SelectTiles(trace[pose].viewport, projection, c, step)).first;
    }
    ++rewritten;
    return it->second;
  });
  if (frame_ >= 0 && rewritten == 0) {
    throw Error(ErrorCode::kBadIndex, "frame " + std::to_string(frame_) + " not in stream");
  }
  const std::vector<std::uint8_t> bytes = Serialize(result);
  const std::string path = OutOr("rewritten.svb");
  WriteFileAtomic(path, bytes);
  manifest_.outputs.push_back(path);
  for (const auto& [pose, tiles] : selections) {
    out_ << "pose " << pose << " tiles: " << tiles.ToString() << "\n";
  }
  out_ << "rewrote " << rewritten << " frame(s): " << SerializedSize(stream.units) + kSequenceHeaderSize
       << " -> " << bytes.size() << " bytes, wrote " << path << "\n";
}

void Cli::Decode() {
  const Bitstream stream = LoadStream(input_);
  manifest_.inputs.push_back(input_);
  Decoder decoder(stream);
  const std::uint32_t frame = frame_ < 0 ? 0 : static_cast<std::uint32_t>(frame_);
  if (frame >= decoder.FrameCount()) {
    throw Error(ErrorCode::kBadIndex, "frame " + std::to_string(frame) + " not in stream");
  }
  RasterFrame picture;
  if (stream.config.single_layer) {
    picture = decoder.TrackFrame(frame);
  } else {
    TileSet received;
    try {
      received = TileSet::ParseList(tiles_, stream.config.TileCount());
    } catch (const Error& e) {
      throw UsageError(std::string("--tiles: ") + e.what());
    }
    picture = decoder.DecodeFrame(frame, received);
  }
  const std::string path = OutOr("frame.raw");
  WriteFileAtomic(path, std::span<const std::uint8_t>(picture.samples));
  manifest_.outputs.push_back(path);
  out_ << "decoded frame " << frame << " (" << picture.width << "x" << picture.height << ") to "
       << path << "\n";
}

int Cli::Validate() {
  const Bitstream stream = LoadStream(input_);
  manifest_.inputs.push_back(input_);
  const ValidationReport report = ValidateStructure(stream);
  const std::string text = report.Ok() ? "OK\n" : report.ToString();
  out_ << text;
  if (!common_.out.empty()) {
    WriteFileAtomic(common_.out, text);
    manifest_.outputs.push_back(common_.out);
  }
  return report.Ok() ? kExitOk : kExitData;
}

void Cli::SelectTilesCommand() {
  if (viewport_.empty()) throw UsageError("--viewport is required");
  SequenceConfig c;
  c.width = static_cast<std::uint16_t>(seq_.width);
  c.height = static_cast<std::uint16_t>(seq_.height);
  c.tile_cols = static_cast<std::uint8_t>(seq_.tile_cols);
  c.tile_rows = static_cast<std::uint8_t>(seq_.tile_rows);
  const Projection projection{ParseProjection(projection_), c.width, c.height};
  try {
    CheckProjection(projection);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  const Viewport v = ParseViewport(viewport_);
  const TileSet tiles = SelectTiles(v, projection, c, step_deg_ * kDegree);
  std::ostringstream text;
  text << "tiles: " << tiles.ToString() << "\n";
  const auto columns = tiles.Columns(c.tile_cols);
  text << "columns:";
  for (auto col : columns) text << ' ' << col;
  text << (ColumnsNonContiguous(columns) ? " (non-contiguous)" : "") << "\n";
  if (oracle_) text << "oracle: " << TileCoverageOracle(v, projection, c).ToString() << "\n";
  out_ << text.str();
  if (!common_.out.empty()) {
    WriteFileAtomic(common_.out, text.str());
    manifest_.outputs.push_back(common_.out);
  }
}

Scheme ParseSchemeSpec(const std::string& spec, const Scheme& defaults) {
  if (spec == "svc") return Scheme::Svc();
  if (spec == "multitrack" || spec == "mt") {
    Scheme s = defaults;
    s.kind = SchemeKind::kMultitrack;
    return s;
  }
  // multitrack:LONG:SHORT[:LOW]
  std::vector<int> parts;
  std::stringstream in(spec);
  std::string cell;
  std::getline(in, cell, ':');
  if (cell == "multitrack" || cell == "mt") {
    while (std::getline(in, cell, ':')) {
      try {
        parts.push_back(std::stoi(cell));
      } catch (const std::exception&) {
        parts.clear();
        break;
      }
    }
  }
  if (parts.size() < 2 || parts.size() > 3) {
    throw UsageError("--scheme: expected svc, multitrack or multitrack:LONG:SHORT[:LOW], got " + spec);
  }
  Scheme s = Scheme::Multitrack(parts[0], parts[1], parts.size() > 2 ? parts[2] : 0);
  try {
    s.Check();
  } catch (const Error& e) {
    throw UsageError(std::string("--scheme: ") + e.what());
  }
  return s;
}

void Cli::Simulate() {
  if (trace_path_.empty()) throw UsageError("--trace is required");
  SimulationConfig sim;
  if (!net_path_.empty()) {
    sim = LoadSimulationConfig(net_path_);
    manifest_.inputs.push_back(net_path_);
  }
  // A multitrack scheme in --net supplies the GOPs for a bare "multitrack".
  const Scheme defaults = sim.scheme && sim.scheme->kind == SchemeKind::kMultitrack
                              ? *sim.scheme
                              : Scheme::Multitrack(long_gop_, short_gop_, low_gop_);
  std::vector<Scheme> schemes;
  for (const std::string& spec : schemes_) schemes.push_back(ParseSchemeSpec(spec, defaults));
  if (schemes.empty()) {
    if (!sim.scheme) throw UsageError("--scheme is required (or scheme= in --net)");
    schemes.push_back(*sim.scheme);
  }
  const Trace trace = LoadTrace(trace_path_);
  manifest_.inputs.push_back(trace_path_);

  StreamSet streams;
  if (!streams_.empty()) {
    for (const std::string& path : streams_) {
      Bitstream b = LoadStream(path);
      manifest_.inputs.push_back(path);
      if (!b.config.single_layer) {
        streams.config = b.config;
        streams.svc = std::move(b);
      }
    }
    for (const std::string& path : streams_) {
      Bitstream b = LoadStream(path);
      if (!b.config.single_layer) continue;
      if (!streams.svc) {
        streams.config = b.config;
        streams.config.single_layer = false;
      }
      const bool full = b.config.width == streams.config.width;
      streams.tracks.emplace(std::pair{full ? TrackResolution::kFull : TrackResolution::kBase,
                                       int{b.config.gop_size}},
                             std::move(b));
    }
  } else {
    SequenceConfig c = seq_.Config();
    if (sim.fps && seq_.fps == "30") std::tie(c.fps_num, c.fps_den) = *sim.fps;
    std::int64_t clip = c.gop_size;
    for (const Scheme& s : schemes) {
      if (s.kind == SchemeKind::kSvc) continue;
      for (int g : {s.long_gop, s.short_gop, s.LowGop()}) {
        if (g > 0) clip = std::lcm(clip, std::int64_t{g});
      }
    }
    if (clip > 100000) throw UsageError("GOP combination needs too long a clip");
    streams = EncodeStreams(GenerateContent(common_.seed, c, static_cast<int>(clip)), schemes);
  }

  SessionOptions options;
  options.projection = ParseProjection(projection_);
  options.step = step_deg_ * kDegree;
  options.duration_ms = duration_ms_;

  std::vector<std::optional<SessionReport>> reports(schemes.size());
  std::vector<std::exception_ptr> failures(schemes.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < schemes.size();) {
      try {
        reports[i] = RunSession(schemes[i], trace, sim.network, streams, options);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  const int workers = std::min<int>(common_.jobs, static_cast<int>(schemes.size()));
  for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }

  nlohmann::json sessions = nlohmann::json::array();
  std::ostringstream csv;
  out_ << "scheme               switches reached mean_mthq_ms p95_mthq_ms mean_mtp_ms        bytes compliant\n";
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const SessionReport& r = *reports[i];
    const BitrateTable table = BitrateReport(r);
    const LatencyStats stats = LatencySummary({r}).front();
    sessions.push_back(nlohmann::json::parse(ReportJson(r, table, stats)));
    WriteReportCsv(csv, r, table, i == 0);
    out_ << std::left << std::setw(21) << r.scheme << std::right << std::setw(8) << stats.switches
         << std::setw(8) << stats.reached << std::fixed << std::setprecision(1) << std::setw(13)
         << stats.mean_mthq_ms << std::setw(12) << stats.p95_mthq_ms << std::setw(12)
         << stats.mean_mtp_ms << std::setw(13) << table.total << std::setw(10)
         << (stats.compliant ? "yes" : "no") << "\n" << std::defaultfloat;
  }
  const std::string json = nlohmann::json{{"sessions", sessions}}.dump(2) + "\n";
  const std::string prefix = OutOr("session");
  WriteFileAtomic(prefix + ".json", json);
  WriteFileAtomic(prefix + ".csv", csv.str());
  manifest_.outputs = {prefix + ".json", prefix + ".csv"};
}

void Cli::Report() {
  if (csv_inputs_.empty()) throw UsageError("give one or more CSV files");
  std::vector<CsvRow> rows;
  std::string merged = std::string(kCsvHeader) + "\n";
  for (const std::string& path : csv_inputs_) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
    manifest_.inputs.push_back(path);
    std::vector<CsvRow> part = ReadReportCsv(in);
    for (CsvRow& row : part) {
      for (std::size_t k = 0; k < row.fields.size(); ++k) merged += (k ? "," : "") + row.fields[k];
      merged += "\n";
      rows.push_back(std::move(row));
    }
  }
  const std::vector<CsvSchemeSummary> summary = SummarizeCsv(rows);
  nlohmann::json j = nlohmann::json::array();
  auto nullable = [](double v) { return std::isnan(v) ? nlohmann::json(nullptr) : nlohmann::json(v); };
  for (const CsvSchemeSummary& s : summary) {
    const LatencyStats& l = s.latency;
    j.push_back({{"scheme", l.scheme},
                 {"switches", l.switches},
                 {"reached", l.reached},
                 {"mean_mthq_ms", nullable(l.mean_mthq_ms)},
                 {"median_mthq_ms", nullable(l.median_mthq_ms)},
                 {"p95_mthq_ms", nullable(l.p95_mthq_ms)},
                 {"mean_mtp_ms", nullable(l.mean_mtp_ms)},
                 {"total_bytes", s.total_bytes},
                 {"bytes_per_second", s.seconds > 0 ? s.total_bytes / s.seconds : 0.0},
                 {"compliant", l.compliant}});
    out_ << l.scheme << ": mean MTHQ " << l.mean_mthq_ms << " ms, p95 " << l.p95_mthq_ms
         << " ms, " << s.total_bytes << " bytes" << (l.compliant ? ", compliant" : "") << "\n";
  }
  const std::string prefix = OutOr("report");
  WriteFileAtomic(prefix + ".csv", merged);
  WriteFileAtomic(prefix + ".json", nlohmann::json{{"schemes", j}}.dump(2) + "\n");
  manifest_.outputs = {prefix + ".csv", prefix + ".json"};
}

int Cli::Run(const std::vector<std::string>& args) {
  CLI::App app{"Scalable viewport bitstream toolkit: encode, rewrite and simulate tiled two-layer 360-degree video."};
  app.name("svb");
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  CLI::App* generate = app.add_subcommand("generate", "Write seeded synthetic frames as raw 8-bit planes");
  SequenceFlags& s = seq_;
  s.Add(generate);
  generate->add_option("--frames", frames_, "Frame count")->capture_default_str()->check(CLI::Range(1, 100000));

  CLI::App* encode = app.add_subcommand("encode", "Encode a two-layer SVC stream or a single-layer tiled track");
  s.Add(encode);
  encode->add_option("--frames", frames_, "Frames to generate when no --input is given")
      ->capture_default_str()
      ->check(CLI::Range(1, 100000));
  encode->add_option("--input", input_, "Raw frames from `generate` (default: generate from --seed)");
  encode->add_option("--schema", schema_, "svc or track")->capture_default_str()->check(CLI::IsMember({"svc", "track"}));
  encode->add_option("--resolution", resolution_, "Track resolution: full or base")
      ->capture_default_str()
      ->check(CLI::IsMember({"full", "base"}));

  CLI::App* rewrite = app.add_subcommand("rewrite", "Rewrite frames for a viewport, skipping unselected tiles");
  rewrite->add_option("--input", input_, "SVC stream")->required();
  rewrite->add_option("--viewport", viewport_, "yaw,pitch,h_fov,v_fov in degrees");
  rewrite->add_option("--trace", trace_path_, "Viewport trace (JSON lines, t_ms and degrees)");
  rewrite->add_option("--frame", frame_, "Only rewrite this frame (default: every frame)")->check(CLI::NonNegativeNumber);
  rewrite->add_option("--projection", projection_, "erp or cubemap")->capture_default_str()->check(CLI::IsMember({"erp", "cubemap"}));
  rewrite->add_option("--step-deg", step_deg_, "Ray sampling step in degrees")->capture_default_str();

  CLI::App* decode = app.add_subcommand("decode", "Decode one frame to a raw 8-bit plane");
  decode->add_option("--input", input_, "Stream")->required();
  decode->add_option("--frame", frame_, "Frame index (default 0)")->check(CLI::NonNegativeNumber);
  decode->add_option("--tiles", tiles_, "Received enhanced tiles: comma list, all or none")->capture_default_str();

  CLI::App* validate = app.add_subcommand("validate", "Check a stream against the structural rules");
  validate->add_option("--input", input_, "Stream")->required();

  CLI::App* select = app.add_subcommand("select-tiles", "Print the tiles covering a viewport");
  s.Add(select, /*grid_only=*/true);
  select->add_option("--viewport", viewport_, "yaw,pitch,h_fov,v_fov in degrees")->required();
  select->add_option("--projection", projection_, "erp or cubemap")->capture_default_str()->check(CLI::IsMember({"erp", "cubemap"}));
  select->add_option("--step-deg", step_deg_, "Ray sampling step in degrees")->capture_default_str();
  select->add_flag("--oracle", oracle_, "Also print the brute-force per-pixel result");

  CLI::App* simulate = app.add_subcommand("simulate", "Simulate a streaming session and report MTP/MTHQ latency and bytes");
  s.Add(simulate);
  simulate->add_option("--scheme", schemes_, "svc, multitrack, or multitrack:LONG:SHORT[:LOW]; repeatable");
  simulate->add_option("--long-gop", long_gop_, "Long-track GOP in frames")->capture_default_str()->check(CLI::Range(1, 65535));
  simulate->add_option("--short-gop", short_gop_, "Short-track GOP in frames, 0 for none")->capture_default_str()->check(CLI::Range(0, 65535));
  simulate->add_option("--low-gop", low_gop_, "Low-resolution track GOP, 0 = long GOP")->capture_default_str()->check(CLI::Range(0, 65535));
  simulate->add_option("--trace", trace_path_, "Viewport trace (JSON lines, t_ms and degrees)");
  simulate->add_option("--net", net_path_, "key=value file: scheme, long_gop, short_gop, low_gop, uplink_ms, downlink_ms, bandwidth_Bps, fps");
  simulate->add_option("--stream", streams_, "Pre-encoded SVC or track stream; repeatable (default: encode from --seed)");
  simulate->add_option("--projection", projection_, "erp or cubemap")->capture_default_str()->check(CLI::IsMember({"erp", "cubemap"}));
  simulate->add_option("--step-deg", step_deg_, "Ray sampling step in degrees")->capture_default_str();
  simulate->add_option("--duration-ms", duration_ms_, "Simulated span in ms (0 = until switches settle)")->capture_default_str()->check(CLI::NonNegativeNumber);

  CLI::App* report = app.add_subcommand("report", "Merge session CSVs and summarize latency and bytes per scheme");
  report->add_option("csv", csv_inputs_, "CSV files from `simulate`")->required();

  for (CLI::App* sub : app.get_subcommands({})) AddCommon(sub);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  CLI::App* active = &app;
  try {
    app.parse(reversed);
    active = app.get_subcommands().front();
    manifest_.command = active->get_name();
    manifest_.argv = args;
    manifest_.config = active->config_to_str(/*default_also=*/true, /*write_description=*/false);

    int code = kExitOk;
    if (active == generate) Generate();
    else if (active == encode) Encode();
    else if (active == rewrite) Rewrite();
    else if (active == decode) Decode();
    else if (active == validate) code = Validate();
    else if (active == select) SelectTilesCommand();
    else if (active == simulate) Simulate();
    else if (active == report) Report();
    manifest_.Write();
    return code;
  } catch (const CLI::CallForHelp&) {
    out_ << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out_ << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out_ << kToolVersion << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err_ << "error: " << e.what() << "\n";
    for (CLI::App* sub : app.get_subcommands({})) {
      if (sub->parsed()) active = sub;
    }
    err_ << active->help();
    return kExitUsage;
  } catch (const UsageError& e) {
    err_ << "error: " << e.what() << "\n" << active->help();
    return kExitUsage;
  } catch (const Error& e) {
    err_ << "error: " << e.what() << "\n";
    if (e.code() == ErrorCode::kBadArgs || e.code() == ErrorCode::kBadStep) {
      err_ << active->help();
      return kExitUsage;
    }
    return kExitData;
  } catch (const std::exception& e) {
    err_ << "error: " << e.what() << "\n";
    return kExitData;
  }
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  return Cli(out, err).Run(args);
}

int RunCli(int argc, const char* const* argv) {
  return RunCli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}

}  // namespace svb
