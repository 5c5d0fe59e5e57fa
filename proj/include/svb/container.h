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

// Scalable viewport bitstream (SVB): an OBU-like container carrying a
// low-resolution base layer and a tiled high-resolution enhanced layer.
//
// File layout (little-endian):
//   "SVBS" u8 version=1
//   width u16, height u16, scale_factor u8, tile_cols u8, tile_rows u8,
//   fps_num u16, fps_den u16, gop_size u16, flags u8, ref_window u8
//   { unit_type u8, payload_size u32, payload }*

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "svb/superblock_mode.h"

namespace svb {

inline constexpr char kMagic[4] = {'S', 'V', 'B', 'S'};
inline constexpr std::uint8_t kFormatVersion = 1;
inline constexpr std::size_t kSequenceHeaderSize = 20;
inline constexpr std::size_t kUnitHeaderSize = 5;
inline constexpr std::size_t kFrameHeaderPayloadSize = 8;
inline constexpr std::size_t kTileGroupHeaderSize = 4;
inline constexpr std::size_t kSkippedTileRecordSize = 2 + 1 + 2 + 6;

struct SequenceConfig {
  std::uint16_t width = 0;
  std::uint16_t height = 0;
  std::uint8_t scale_factor = 2;
  std::uint8_t tile_cols = 1;
  std::uint8_t tile_rows = 1;
  std::uint16_t fps_num = 30;
  std::uint16_t fps_den = 1;
  std::uint16_t gop_size = 30;
  bool base_single_tile = true;
  // Conventional single-layer tiled track (flags bit1). Frames carry only
  // layer 0, tiled over the grid at width x height.
  bool single_layer = false;
  std::uint8_t ref_window = 1;

  std::uint32_t TileCount() const { return std::uint32_t{tile_cols} * tile_rows; }
  // Tile size of the tiled layer (enhanced, or the only layer of a track).
  std::uint32_t TileWidth() const { return width / tile_cols; }
  std::uint32_t TileHeight() const { return height / tile_rows; }
  std::uint32_t BaseWidth() const { return width / scale_factor; }
  std::uint32_t BaseHeight() const { return height / scale_factor; }
  double Fps() const { return double(fps_num) / fps_den; }
  double FramePeriodMs() const { return 1000.0 * fps_den / fps_num; }

  bool operator==(const SequenceConfig&) const = default;
};

// Problems with the parameters themselves; empty when usable. Covers ranges
// and tile-grid alignment of both layers.
std::vector<std::string> CheckConfig(const SequenceConfig& config);

enum class UnitType : std::uint8_t {
  kTemporalDelimiter = 2,
  kFrameHeader = 3,
  kTileGroup = 4,
  kMetadata = 5,
};

enum class LayerId : std::uint8_t { kBase = 0, kEnhanced = 1 };
enum class FrameType : std::uint8_t { kKey = 0, kInter = 1 };
enum class TileKind : std::uint8_t { kCoded = 0, kSkipped = 1 };

struct TemporalDelimiter {
  bool operator==(const TemporalDelimiter&) const = default;
};

struct FrameHeader {
  std::uint32_t frame_index = 0;
  LayerId layer_id = LayerId::kBase;
  FrameType frame_type = FrameType::kKey;
  bool cdf_update_disabled = false;
  bool global_mv_zero = false;
  // Enhanced frame predicts from the previous enhanced frame (flags bit2).
  // Never produced by the encoder; present so violations can be expressed.
  bool refs_enhanced = false;
  // Enhanced only: predict from base frame (frame_index - base_ref_offset).
  std::uint8_t base_ref_offset = 0;

  bool operator==(const FrameHeader&) const = default;
};

struct Tile {
  std::uint16_t tile_index = 0;
  TileKind kind = TileKind::kCoded;
  std::vector<std::uint8_t> coded_payload;  // kCoded
  std::uint16_t superblock_count = 0;       // kSkipped
  SuperblockMode skipped_mode{};            // kSkipped

  std::uint32_t Col(std::uint32_t tile_cols) const { return tile_index % tile_cols; }
  std::uint32_t Row(std::uint32_t tile_cols) const { return tile_index / tile_cols; }

  bool operator==(const Tile&) const = default;
};

struct TileGroup {
  std::uint16_t tg_start = 0;
  std::uint16_t tg_end = 0;
  std::vector<Tile> tiles;

  bool operator==(const TileGroup&) const = default;
};

struct Metadata {
  std::vector<std::uint8_t> payload;
  bool operator==(const Metadata&) const = default;
};

using Unit = std::variant<TemporalDelimiter, FrameHeader, TileGroup, Metadata>;

UnitType TypeOf(const Unit& unit);

struct Bitstream {
  SequenceConfig config;
  std::vector<Unit> units;

  bool operator==(const Bitstream&) const = default;
};

// ---------------------------------------------------------------------------
// Serialization

// Throws Error(kInvalidStructure) when ValidateStructure reports violations.
std::vector<std::uint8_t> Serialize(const Bitstream& bitstream);
// Writes whatever it is given; used to produce deliberately broken files.
std::vector<std::uint8_t> SerializeUnvalidated(const Bitstream& bitstream);

std::vector<std::uint8_t> SerializeSequenceHeader(const SequenceConfig& config);
void AppendUnit(std::vector<std::uint8_t>& out, const Unit& unit);
std::vector<std::uint8_t> SerializeUnits(std::span<const Unit> units);
// Bytes AppendUnit would write, including the 5-byte unit header.
std::size_t SerializedSize(const Unit& unit);
std::size_t SerializedSize(std::span<const Unit> units);

// Errors: kBadMagic, kUnsupportedVersion, kTruncated(offset),
// kUnknownUnitType(offset), kBadPayload(offset).
Bitstream Parse(std::span<const std::uint8_t> bytes);

// ---------------------------------------------------------------------------
// Structural validation

enum class Rule {
  kConfig,
  kGridAlignment,
  kTemporalDelimiter,
  kFrameSequence,
  kLayerOrder,
  kBaseType,
  kClosedGop,
  kRefWindow,
  kTemporalInEnhanced,
  kSingleLayer,
  kTileGroupRange,
  kEnhancedGroupSingleTile,
  kDuplicateTile,
  kBaseCoverage,
  kTileKind,
  kSkippedInBase,
  kSkipFlags,
  kSkipMode,
  kPayload,
};

std::string_view RuleName(Rule rule);  // e.g. "R_CLOSED_GOP"

struct Violation {
  std::optional<std::uint32_t> frame_index;
  Rule rule;
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool Ok() const { return violations.empty(); }
  bool Has(Rule rule) const;
  std::string ToString() const;
};

ValidationReport ValidateStructure(const Bitstream& bitstream);

// ---------------------------------------------------------------------------
// Frame views over a validated stream. Pointers borrow from the bitstream.

struct LayerUnits {
  const FrameHeader* header = nullptr;
  std::vector<const TileGroup*> groups;

  // Tile with the given index, or nullptr.
  const Tile* FindTile(std::uint32_t tile_index) const;
};

struct FrameUnits {
  std::uint32_t frame_index = 0;
  std::size_t first_unit = 0;  // the temporal delimiter
  std::size_t end_unit = 0;
  LayerUnits base;
  std::optional<LayerUnits> enhanced;
};

// Throws Error(kInvalidStructure) on a stream that fails validation.
std::vector<FrameUnits> IndexFrames(const Bitstream& bitstream);

struct FrameByteSizes {
  std::uint32_t frame_index = 0;
  // Temporal delimiter, metadata, base header and base tile groups.
  std::size_t base_bytes = 0;
  // Enhanced header and enhanced tile groups.
  std::size_t enhanced_bytes = 0;
  // Per grid tile: bytes of the tile-group unit carrying it in the tiled layer
  // (enhanced for SVC streams, the only layer for tracks); 0 when absent.
  std::vector<std::size_t> tile_bytes;
};

// Sum of base_bytes + enhanced_bytes over all frames equals the serialized
// size minus kSequenceHeaderSize. Throws Error(kInvalidStructure).
std::vector<FrameByteSizes> MeasureFrameBytes(const Bitstream& bitstream);

}  // namespace svb
