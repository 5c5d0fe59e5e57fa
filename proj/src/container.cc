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

#include "svb/container.h"

#include <algorithm>
#include <cstring>
#include <set>
#include <sstream>

#include "byte_io.h"
#include "svb/error.h"
#include "svb/rle.h"

namespace svb {

// ---------------------------------------------------------------------------
// ByteReader

void ByteReader::Require(std::size_t n) const {
  if (bytes_.size() - pos_ < n) {
    throw Error(ErrorCode::kTruncated,
                "need " + std::to_string(n) + " bytes, have " + std::to_string(Remaining()),
                Offset());
  }
}

std::uint8_t ByteReader::U8() {
  Require(1);
  return bytes_[pos_++];
}

std::uint16_t ByteReader::U16() {
  Require(2);
  const std::uint16_t v = GetU16(bytes_.data() + pos_);
  pos_ += 2;
  return v;
}

std::uint32_t ByteReader::U32() {
  Require(4);
  const std::uint32_t v = GetU32(bytes_.data() + pos_);
  pos_ += 4;
  return v;
}

std::span<const std::uint8_t> ByteReader::Bytes(std::size_t n) {
  Require(n);
  auto out = bytes_.subspan(pos_, n);
  pos_ += n;
  return out;
}

// ---------------------------------------------------------------------------
// Config

std::vector<std::string> CheckConfig(const SequenceConfig& c) {
  std::vector<std::string> problems;
  if (c.width == 0 || c.height == 0) problems.push_back("width and height must be positive");
  if (c.scale_factor < 2) problems.push_back("scale_factor must be >= 2");
  if (c.tile_cols == 0 || c.tile_rows == 0) problems.push_back("tile grid must be at least 1x1");
  if (c.fps_num == 0 || c.fps_den == 0) problems.push_back("fps must be a positive rational");
  if (c.gop_size == 0) problems.push_back("gop_size must be >= 1");
  if (c.ref_window == 0) problems.push_back("ref_window must be >= 1");
  if (c.ref_window > c.gop_size) problems.push_back("ref_window must not exceed gop_size");
  if (!problems.empty()) return problems;
  if (c.TileCount() > 0xFFFF) problems.push_back("tile grid too large for u16 indices");
  return problems;
}

namespace {

// Both layers' tile grids must tile their frames exactly.
std::vector<std::string> CheckGridAlignment(const SequenceConfig& c) {
  std::vector<std::string> problems;
  if (c.tile_cols == 0 || c.tile_rows == 0 || c.scale_factor == 0) return problems;
  const std::uint32_t col_unit = c.single_layer ? c.tile_cols : c.tile_cols * c.scale_factor;
  const std::uint32_t row_unit = c.single_layer ? c.tile_rows : c.tile_rows * c.scale_factor;
  if (c.width % col_unit != 0) {
    problems.push_back("width " + std::to_string(c.width) + " not divisible by " +
                       std::to_string(col_unit));
  }
  if (c.height % row_unit != 0) {
    problems.push_back("height " + std::to_string(c.height) + " not divisible by " +
                       std::to_string(row_unit));
  }
  return problems;
}

}  // namespace

UnitType TypeOf(const Unit& unit) {
  switch (unit.index()) {
    case 0: return UnitType::kTemporalDelimiter;
    case 1: return UnitType::kFrameHeader;
    case 2: return UnitType::kTileGroup;
    default: return UnitType::kMetadata;
  }
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

std::size_t TileRecordSize(const Tile& tile) {
  if (tile.kind == TileKind::kCoded) return 2 + 1 + 4 + tile.coded_payload.size();
  return kSkippedTileRecordSize;
}

std::size_t PayloadSize(const Unit& unit) {
  return std::visit(
      [](const auto& body) -> std::size_t {
        using T = std::decay_t<decltype(body)>;
        if constexpr (std::is_same_v<T, TemporalDelimiter>) {
          return 0;
        } else if constexpr (std::is_same_v<T, FrameHeader>) {
          return kFrameHeaderPayloadSize;
        } else if constexpr (std::is_same_v<T, TileGroup>) {
          std::size_t size = kTileGroupHeaderSize;
          for (const Tile& tile : body.tiles) size += TileRecordSize(tile);
          return size;
        } else {
          return body.payload.size();
        }
      },
      unit);
}

void AppendTile(std::vector<std::uint8_t>& out, const Tile& tile) {
  PutU16(out, tile.tile_index);
  PutU8(out, static_cast<std::uint8_t>(tile.kind));
  if (tile.kind == TileKind::kCoded) {
    PutU32(out, static_cast<std::uint32_t>(tile.coded_payload.size()));
    out.insert(out.end(), tile.coded_payload.begin(), tile.coded_payload.end());
    return;
  }
  PutU16(out, tile.superblock_count);
  const SuperblockMode& m = tile.skipped_mode;
  PutU8(out, static_cast<std::uint8_t>(m.partition_mode));
  PutU8(out, m.skip);
  PutU8(out, m.is_inter);
  PutU8(out, static_cast<std::uint8_t>(m.ref_frames));
  PutU8(out, static_cast<std::uint8_t>(m.inter_mode));
  PutU8(out, m.use_obmc);
}

}  // namespace

std::size_t SerializedSize(const Unit& unit) { return kUnitHeaderSize + PayloadSize(unit); }

std::size_t SerializedSize(std::span<const Unit> units) {
  std::size_t total = 0;
  for (const Unit& unit : units) total += SerializedSize(unit);
  return total;
}

void AppendUnit(std::vector<std::uint8_t>& out, const Unit& unit) {
  PutU8(out, static_cast<std::uint8_t>(TypeOf(unit)));
  PutU32(out, static_cast<std::uint32_t>(PayloadSize(unit)));
  std::visit(
      [&out](const auto& body) {
        using T = std::decay_t<decltype(body)>;
        if constexpr (std::is_same_v<T, FrameHeader>) {
          PutU32(out, body.frame_index);
          PutU8(out, static_cast<std::uint8_t>(body.layer_id));
          PutU8(out, static_cast<std::uint8_t>(body.frame_type));
          PutU8(out, static_cast<std::uint8_t>((body.cdf_update_disabled ? 1 : 0) |
                                               (body.global_mv_zero ? 2 : 0) |
                                               (body.refs_enhanced ? 4 : 0)));
          PutU8(out, body.base_ref_offset);
        } else if constexpr (std::is_same_v<T, TileGroup>) {
          PutU16(out, body.tg_start);
          PutU16(out, body.tg_end);
          for (const Tile& tile : body.tiles) AppendTile(out, tile);
        } else if constexpr (std::is_same_v<T, Metadata>) {
          out.insert(out.end(), body.payload.begin(), body.payload.end());
        }
      },
      unit);
}

std::vector<std::uint8_t> SerializeUnits(std::span<const Unit> units) {
  std::vector<std::uint8_t> out;
  out.reserve(SerializedSize(units));
  for (const Unit& unit : units) AppendUnit(out, unit);
  return out;
}

std::vector<std::uint8_t> SerializeSequenceHeader(const SequenceConfig& c) {
  std::vector<std::uint8_t> out(std::begin(kMagic), std::end(kMagic));
  PutU8(out, kFormatVersion);
  PutU16(out, c.width);
  PutU16(out, c.height);
  PutU8(out, c.scale_factor);
  PutU8(out, c.tile_cols);
  PutU8(out, c.tile_rows);
  PutU16(out, c.fps_num);
  PutU16(out, c.fps_den);
  PutU16(out, c.gop_size);
  PutU8(out, static_cast<std::uint8_t>((c.base_single_tile ? 1 : 0) | (c.single_layer ? 2 : 0)));
  PutU8(out, c.ref_window);
  return out;
}

std::vector<std::uint8_t> SerializeUnvalidated(const Bitstream& bitstream) {
  std::vector<std::uint8_t> out = SerializeSequenceHeader(bitstream.config);
  out.reserve(out.size() + SerializedSize(bitstream.units));
  for (const Unit& unit : bitstream.units) AppendUnit(out, unit);
  return out;
}

std::vector<std::uint8_t> Serialize(const Bitstream& bitstream) {
  ValidationReport report = ValidateStructure(bitstream);
  if (!report.Ok()) throw Error(ErrorCode::kInvalidStructure, report.ToString());
  return SerializeUnvalidated(bitstream);
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

template <typename Enum>
Enum ReadEnum(ByteReader& r, std::uint8_t max_value, const char* what) {
  const std::size_t at = r.Offset();
  const std::uint8_t v = r.U8();
  if (v > max_value) {
    throw Error(ErrorCode::kBadPayload, std::string("bad ") + what + " " + std::to_string(v), at);
  }
  return static_cast<Enum>(v);
}

bool ReadBool(ByteReader& r, const char* what) {
  const std::size_t at = r.Offset();
  const std::uint8_t v = r.U8();
  if (v > 1) throw Error(ErrorCode::kBadPayload, std::string("bad ") + what, at);
  return v != 0;
}

FrameHeader ParseFrameHeader(ByteReader& r) {
  FrameHeader h;
  h.frame_index = r.U32();
  h.layer_id = ReadEnum<LayerId>(r, 1, "layer_id");
  h.frame_type = ReadEnum<FrameType>(r, 1, "frame_type");
  const std::size_t at = r.Offset();
  const std::uint8_t flags = r.U8();
  if (flags & ~0x07) throw Error(ErrorCode::kBadPayload, "reserved frame flags set", at);
  h.cdf_update_disabled = flags & 1;
  h.global_mv_zero = flags & 2;
  h.refs_enhanced = flags & 4;
  h.base_ref_offset = r.U8();
  return h;
}

TileGroup ParseTileGroup(ByteReader& r) {
  TileGroup g;
  const std::size_t at = r.Offset();
  g.tg_start = r.U16();
  g.tg_end = r.U16();
  if (g.tg_end < g.tg_start) {
    throw Error(ErrorCode::kBadPayload, "tg_end < tg_start", at);
  }
  const std::size_t count = std::size_t{g.tg_end} - g.tg_start + 1;
  g.tiles.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Tile tile;
    tile.tile_index = r.U16();
    tile.kind = ReadEnum<TileKind>(r, 1, "tile_kind");
    if (tile.kind == TileKind::kCoded) {
      const std::uint32_t length = r.U32();
      auto bytes = r.Bytes(length);
      tile.coded_payload.assign(bytes.begin(), bytes.end());
    } else {
      tile.superblock_count = r.U16();
      SuperblockMode& m = tile.skipped_mode;
      m.partition_mode = ReadEnum<PartitionMode>(r, 3, "partition_mode");
      m.skip = ReadBool(r, "skip");
      m.is_inter = ReadBool(r, "is_inter");
      m.ref_frames = ReadEnum<RefFrames>(r, 1, "ref_frames");
      m.inter_mode = ReadEnum<InterMode>(r, 2, "inter_mode");
      m.use_obmc = ReadBool(r, "use_obmc");
    }
    g.tiles.push_back(std::move(tile));
  }
  return g;
}

}  // namespace

Bitstream Parse(std::span<const std::uint8_t> bytes) {
  ByteReader header(bytes);
  auto magic = header.Bytes(4);
  if (std::memcmp(magic.data(), kMagic, 4) != 0) {
    throw Error(ErrorCode::kBadMagic, "not an SVB stream", 0);
  }
  const std::uint8_t version = header.U8();
  if (version != kFormatVersion) {
    throw Error(ErrorCode::kUnsupportedVersion, "version " + std::to_string(version), 4);
  }
  Bitstream b;
  SequenceConfig& c = b.config;
  c.width = header.U16();
  c.height = header.U16();
  c.scale_factor = header.U8();
  c.tile_cols = header.U8();
  c.tile_rows = header.U8();
  c.fps_num = header.U16();
  c.fps_den = header.U16();
  c.gop_size = header.U16();
  const std::size_t flags_at = header.Offset();
  const std::uint8_t flags = header.U8();
  if (flags & ~0x03) throw Error(ErrorCode::kBadPayload, "reserved sequence flags set", flags_at);
  c.base_single_tile = flags & 1;
  c.single_layer = flags & 2;
  c.ref_window = header.U8();

  ByteReader r(bytes.subspan(kSequenceHeaderSize), kSequenceHeaderSize);
  while (!r.AtEnd()) {
    const std::size_t unit_at = r.Offset();
    const std::uint8_t type = r.U8();
    const std::uint32_t size = r.U32();
    const std::size_t payload_at = r.Offset();
    ByteReader payload(r.Bytes(size), payload_at);
    switch (type) {
      case static_cast<std::uint8_t>(UnitType::kTemporalDelimiter):
        if (size != 0) {
          throw Error(ErrorCode::kBadPayload, "temporal delimiter with payload", payload_at);
        }
        b.units.emplace_back(TemporalDelimiter{});
        break;
      case static_cast<std::uint8_t>(UnitType::kFrameHeader):
        b.units.emplace_back(ParseFrameHeader(payload));
        break;
      case static_cast<std::uint8_t>(UnitType::kTileGroup):
        b.units.emplace_back(ParseTileGroup(payload));
        break;
      case static_cast<std::uint8_t>(UnitType::kMetadata): {
        auto all = payload.Bytes(size);
        b.units.emplace_back(Metadata{{all.begin(), all.end()}});
        break;
      }
      default:
        throw Error(ErrorCode::kUnknownUnitType, "unit_type " + std::to_string(type), unit_at);
    }
    if (!payload.AtEnd()) {
      throw Error(ErrorCode::kBadPayload, "trailing bytes in unit payload", payload.Offset());
    }
  }
  return b;
}

// ---------------------------------------------------------------------------
// Validation

std::string_view RuleName(Rule rule) {
  switch (rule) {
    case Rule::kConfig: return "R_CONFIG";
    case Rule::kGridAlignment: return "R_GRID_ALIGNMENT";
    case Rule::kTemporalDelimiter: return "R_TEMPORAL_DELIMITER";
    case Rule::kFrameSequence: return "R_FRAME_SEQUENCE";
    case Rule::kLayerOrder: return "R_LAYER_ORDER";
    case Rule::kBaseType: return "R_BASE_TYPE";
    case Rule::kClosedGop: return "R_CLOSED_GOP";
    case Rule::kRefWindow: return "R_REF_WINDOW";
    case Rule::kTemporalInEnhanced: return "R_TEMPORAL_IN_ENH";
    case Rule::kSingleLayer: return "R_SINGLE_LAYER";
    case Rule::kTileGroupRange: return "R_TG_RANGE";
    case Rule::kEnhancedGroupSingleTile: return "R_ENH_TG_SINGLE_TILE";
    case Rule::kDuplicateTile: return "R_DUPLICATE_TILE";
    case Rule::kBaseCoverage: return "R_BASE_COVERAGE";
    case Rule::kTileKind: return "R_TILE_KIND";
    case Rule::kSkippedInBase: return "R_SKIPPED_IN_BASE";
    case Rule::kSkipFlags: return "R_SKIP_FLAGS";
    case Rule::kSkipMode: return "R_SKIP_MODE";
    case Rule::kPayload: return "R_PAYLOAD";
  }
  return "R_UNKNOWN";
}

bool ValidationReport::Has(Rule rule) const {
  return std::any_of(violations.begin(), violations.end(),
                     [rule](const Violation& v) { return v.rule == rule; });
}

std::string ValidationReport::ToString() const {
  std::ostringstream os;
  for (const Violation& v : violations) {
    os << RuleName(v.rule);
    if (v.frame_index) os << " frame=" << *v.frame_index;
    os << ": " << v.detail << '\n';
  }
  return os.str();
}

namespace {

class Validator {
 public:
  explicit Validator(const Bitstream& b) : b_(b), c_(b.config) {}

  ValidationReport Run() {
    for (auto& p : CheckConfig(c_)) Add(std::nullopt, Rule::kConfig, p);
    if (!report_.Ok()) return std::move(report_);
    for (auto& p : CheckGridAlignment(c_)) Add(std::nullopt, Rule::kGridAlignment, p);
    if (!report_.Ok()) return std::move(report_);

    std::size_t i = 0;
    const auto& units = b_.units;
    if (!units.empty() && TypeOf(units[0]) != UnitType::kTemporalDelimiter) {
      Add(std::nullopt, Rule::kTemporalDelimiter, "stream does not start with a temporal delimiter");
      while (i < units.size() && TypeOf(units[i]) != UnitType::kTemporalDelimiter) ++i;
    }
    std::optional<std::uint32_t> previous_index;
    while (i < units.size()) {
      std::size_t end = i + 1;
      while (end < units.size() && TypeOf(units[end]) != UnitType::kTemporalDelimiter) ++end;
      CheckFrame(i + 1, end, previous_index);
      i = end;
    }
    return std::move(report_);
  }

 private:
  void Add(std::optional<std::uint32_t> frame, Rule rule, std::string detail) {
    report_.violations.push_back({frame, rule, std::move(detail)});
  }

  void CheckFrame(std::size_t begin, std::size_t end,
                  std::optional<std::uint32_t>& previous_index) {
    const auto& units = b_.units;
    const FrameHeader* base = nullptr;
    const FrameHeader* enhanced = nullptr;
    std::vector<const TileGroup*> base_groups;
    std::vector<const TileGroup*> enhanced_groups;
    std::optional<std::uint32_t> frame = previous_index ? std::optional(*previous_index + 1)
                                                        : std::optional<std::uint32_t>(0);
    if (begin == end) {
      Add(frame, Rule::kTemporalDelimiter, "temporal unit without frame data");
      return;
    }
    for (std::size_t i = begin; i < end; ++i) {
      const Unit& unit = units[i];
      if (const auto* h = std::get_if<FrameHeader>(&unit)) {
        if (h->layer_id == LayerId::kBase) {
          if (base) {
            Add(h->frame_index, Rule::kTemporalDelimiter,
                "base header without a preceding temporal delimiter");
          } else if (enhanced) {
            Add(h->frame_index, Rule::kLayerOrder, "base header after enhanced header");
          } else {
            base = h;
          }
        } else {
          if (!base) Add(h->frame_index, Rule::kLayerOrder, "enhanced header before base header");
          else if (enhanced) Add(h->frame_index, Rule::kLayerOrder, "second enhanced header");
          else enhanced = h;
        }
      } else if (const auto* g = std::get_if<TileGroup>(&unit)) {
        if (enhanced) enhanced_groups.push_back(g);
        else if (base) base_groups.push_back(g);
        else Add(frame, Rule::kLayerOrder, "tile group before any frame header");
      }
    }
    if (!base) {
      Add(frame, Rule::kLayerOrder, "temporal unit without base frame header");
      return;
    }
    const std::uint32_t index = base->frame_index;
    const std::uint32_t expected = previous_index ? *previous_index + 1 : 0;
    if (index != expected) {
      Add(index, Rule::kFrameSequence,
          "frame_index " + std::to_string(index) + ", expected " + std::to_string(expected));
    }
    previous_index = index;

    CheckBaseHeader(*base);
    CheckLayerTiles(index, base_groups, LayerId::kBase);
    if (enhanced) {
      if (c_.single_layer) {
        Add(index, Rule::kSingleLayer, "enhanced frame in a single-layer stream");
      }
      if (enhanced->frame_index != index) {
        Add(index, Rule::kLayerOrder, "enhanced frame_index differs from base");
      }
      CheckEnhancedHeader(index, *enhanced);
      CheckLayerTiles(index, enhanced_groups, LayerId::kEnhanced);
      CheckSkipFlags(index, *enhanced, enhanced_groups);
    }
  }

  void CheckBaseHeader(const FrameHeader& h) {
    if (h.frame_type == FrameType::kInter && h.frame_index % c_.gop_size == 0) {
      Add(h.frame_index, Rule::kBaseType, "INTER base frame at a GOP start");
    }
    if (h.base_ref_offset != 0 || h.refs_enhanced) {
      Add(h.frame_index, Rule::kBaseType, "base frame carries enhanced-layer reference fields");
    }
  }

  void CheckEnhancedHeader(std::uint32_t index, const FrameHeader& h) {
    if (h.refs_enhanced) {
      Add(index, Rule::kTemporalInEnhanced, "enhanced frame references an enhanced frame");
    }
    if (h.base_ref_offset >= c_.ref_window) {
      Add(index, Rule::kRefWindow,
          "base_ref_offset " + std::to_string(h.base_ref_offset) + " outside ref_window " +
              std::to_string(c_.ref_window));
    }
    if (h.base_ref_offset > index % c_.gop_size) {
      Add(index, Rule::kClosedGop, "base reference precedes the GOP start");
    }
  }

  void CheckLayerTiles(std::uint32_t index, const std::vector<const TileGroup*>& groups,
                       LayerId layer) {
    const bool single_base_tile =
        layer == LayerId::kBase && c_.base_single_tile && !c_.single_layer;
    const std::uint32_t tile_count = single_base_tile ? 1 : c_.TileCount();
    const std::uint64_t tile_area = single_base_tile ? std::uint64_t{c_.BaseWidth()} * c_.BaseHeight()
                                    : layer == LayerId::kBase && !c_.single_layer
                                        ? std::uint64_t{c_.TileWidth() / c_.scale_factor} *
                                              (c_.TileHeight() / c_.scale_factor)
                                        : std::uint64_t{c_.TileWidth()} * c_.TileHeight();
    std::set<std::uint32_t> seen;
    for (const TileGroup* g : groups) {
      if (g->tg_start > g->tg_end || g->tg_end >= tile_count) {
        Add(index, Rule::kTileGroupRange,
            "tile group " + std::to_string(g->tg_start) + ".." + std::to_string(g->tg_end) +
                " outside grid");
      } else if (g->tiles.size() != std::size_t{g->tg_end} - g->tg_start + 1) {
        Add(index, Rule::kTileGroupRange, "tile count does not match tg_start..tg_end");
      }
      if (layer == LayerId::kEnhanced && g->tg_start != g->tg_end) {
        Add(index, Rule::kEnhancedGroupSingleTile, "enhanced tile group spans several tiles");
      }
      for (std::size_t k = 0; k < g->tiles.size(); ++k) {
        const Tile& t = g->tiles[k];
        if (t.tile_index != g->tg_start + k) {
          Add(index, Rule::kTileGroupRange,
              "tile_index " + std::to_string(t.tile_index) + " out of tile group order");
        }
        if (!seen.insert(t.tile_index).second) {
          Add(index, Rule::kDuplicateTile, "tile " + std::to_string(t.tile_index) + " repeated");
        }
        CheckTile(index, t, layer, tile_area);
      }
    }
    if (layer == LayerId::kBase && seen.size() != tile_count) {
      Add(index, Rule::kBaseCoverage,
          "base layer carries " + std::to_string(seen.size()) + " of " +
              std::to_string(tile_count) + " tiles");
    }
  }

  void CheckTile(std::uint32_t index, const Tile& t, LayerId layer, std::uint64_t tile_area) {
    if (t.kind == TileKind::kCoded) {
      if (t.superblock_count != 0 || t.skipped_mode != SuperblockMode{}) {
        Add(index, Rule::kTileKind, "coded tile carries skipped-tile fields");
      }
      auto decoded = RleDecodedSize(t.coded_payload);
      if (!decoded || *decoded != tile_area) {
        Add(index, Rule::kPayload,
            "tile " + std::to_string(t.tile_index) + " payload does not decode to " +
                std::to_string(tile_area) + " samples");
      }
      return;
    }
    if (!t.coded_payload.empty()) {
      Add(index, Rule::kTileKind, "skipped tile carries a coded payload");
    }
    if (layer == LayerId::kBase) {
      Add(index, Rule::kSkippedInBase, "skipped tile in base layer");
      return;
    }
    if (t.skipped_mode.ref_frames == RefFrames::kPreviousEnhanced) {
      Add(index, Rule::kTemporalInEnhanced,
          "skipped tile " + std::to_string(t.tile_index) + " references an enhanced frame");
    } else if (t.skipped_mode != CanonicalSkippedMode()) {
      Add(index, Rule::kSkipMode, "skipped tile " + std::to_string(t.tile_index) +
                                      " carries a non-canonical superblock mode");
    }
    const std::uint64_t superblock_area = std::uint64_t{kSuperblockSize} * kSuperblockSize;
    const std::uint64_t expected = (tile_area + superblock_area - 1) / superblock_area;
    if (t.superblock_count != expected) {
      Add(index, Rule::kSkipMode,
          "skipped tile superblock_count " + std::to_string(t.superblock_count) + ", expected " +
              std::to_string(expected));
    }
  }

  void CheckSkipFlags(std::uint32_t index, const FrameHeader& h,
                      const std::vector<const TileGroup*>& groups) {
    bool any_skipped = false;
    for (const TileGroup* g : groups) {
      for (const Tile& t : g->tiles) any_skipped |= t.kind == TileKind::kSkipped;
    }
    if (any_skipped && !(h.cdf_update_disabled && h.global_mv_zero)) {
      Add(index, Rule::kSkipFlags,
          "frame with skipped tiles must disable CDF update and zero global MV");
    }
  }

  const Bitstream& b_;
  const SequenceConfig& c_;
  ValidationReport report_;
};

}  // namespace

ValidationReport ValidateStructure(const Bitstream& bitstream) {
  return Validator(bitstream).Run();
}

// ---------------------------------------------------------------------------
// Frame views

const Tile* LayerUnits::FindTile(std::uint32_t tile_index) const {
  for (const TileGroup* g : groups) {
    if (tile_index < g->tg_start || tile_index > g->tg_end) continue;
    for (const Tile& t : g->tiles) {
      if (t.tile_index == tile_index) return &t;
    }
  }
  return nullptr;
}

std::vector<FrameUnits> IndexFrames(const Bitstream& bitstream) {
  ValidationReport report = ValidateStructure(bitstream);
  if (!report.Ok()) throw Error(ErrorCode::kInvalidStructure, report.ToString());
  std::vector<FrameUnits> frames;
  const auto& units = bitstream.units;
  for (std::size_t i = 0; i < units.size(); ++i) {
    const Unit& unit = units[i];
    if (TypeOf(unit) == UnitType::kTemporalDelimiter) {
      if (!frames.empty()) frames.back().end_unit = i;
      frames.emplace_back();
      frames.back().first_unit = i;
      continue;
    }
    FrameUnits& f = frames.back();
    if (const auto* h = std::get_if<FrameHeader>(&unit)) {
      if (h->layer_id == LayerId::kBase) {
        f.frame_index = h->frame_index;
        f.base.header = h;
      } else {
        f.enhanced.emplace();
        f.enhanced->header = h;
      }
    } else if (const auto* g = std::get_if<TileGroup>(&unit)) {
      (f.enhanced ? f.enhanced->groups : f.base.groups).push_back(g);
    }
  }
  if (!frames.empty()) frames.back().end_unit = units.size();
  return frames;
}

std::vector<FrameByteSizes> MeasureFrameBytes(const Bitstream& bitstream) {
  std::vector<FrameUnits> frames = IndexFrames(bitstream);
  const SequenceConfig& c = bitstream.config;
  std::vector<FrameByteSizes> sizes;
  sizes.reserve(frames.size());
  for (const FrameUnits& f : frames) {
    FrameByteSizes s;
    s.frame_index = f.frame_index;
    s.tile_bytes.assign(c.TileCount(), 0);
    bool in_enhanced = false;
    for (std::size_t i = f.first_unit; i < f.end_unit; ++i) {
      const Unit& unit = bitstream.units[i];
      const std::size_t unit_bytes = SerializedSize(unit);
      if (const auto* h = std::get_if<FrameHeader>(&unit)) {
        in_enhanced = h->layer_id == LayerId::kEnhanced;
      }
      (in_enhanced ? s.enhanced_bytes : s.base_bytes) += unit_bytes;
      const auto* g = std::get_if<TileGroup>(&unit);
      const bool tiled_layer = in_enhanced || c.single_layer;
      if (g && tiled_layer && !g->tiles.empty()) {
        // Group overhead is charged to the first tile of the group.
        s.tile_bytes[g->tiles.front().tile_index] += kUnitHeaderSize + kTileGroupHeaderSize;
        for (const Tile& t : g->tiles) s.tile_bytes[t.tile_index] += TileRecordSize(t);
      }
    }
    sizes.push_back(std::move(s));
  }
  return sizes;
}

}  // namespace svb
