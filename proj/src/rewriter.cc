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

#include "svb/rewriter.h"

#include <string>

#include "svb/error.h"

namespace svb {
namespace {

struct FrameParts {
  std::size_t enhanced_header = 0;  // unit position
  const FrameHeader* enhanced = nullptr;
};

// Validates a lone temporal unit and locates its enhanced header.
FrameParts CheckFrame(const SequenceConfig& config, std::span<const Unit> units) {
  if (config.single_layer) throw Error(ErrorCode::kInvalidInput, "single-layer streams have no enhanced tiles");
  if (units.empty() || TypeOf(units[0]) != UnitType::kTemporalDelimiter) {
    throw Error(ErrorCode::kInvalidInput, "frame must start with a temporal delimiter");
  }
  Bitstream probe{config, std::vector<Unit>(units.begin(), units.end())};
  for (const Violation& v : ValidateStructure(probe).violations) {
    // A lone frame cannot satisfy the stream-level numbering rule.
    if (v.rule == Rule::kFrameSequence) continue;
    throw Error(ErrorCode::kInvalidInput, std::string(RuleName(v.rule)) + ": " + v.detail);
  }
  FrameParts parts;
  for (std::size_t i = 1; i < units.size(); ++i) {
    if (TypeOf(units[i]) == UnitType::kTemporalDelimiter) {
      throw Error(ErrorCode::kInvalidInput, "more than one temporal unit");
    }
    const auto* h = std::get_if<FrameHeader>(&units[i]);
    if (h && h->layer_id == LayerId::kEnhanced) {
      parts.enhanced_header = i;
      parts.enhanced = h;
    }
  }
  if (!parts.enhanced) throw Error(ErrorCode::kInvalidInput, "frame has no enhanced layer");
  return parts;
}

}  // namespace

Tile SynthesizeSkippedTile(std::uint32_t tile_index, const SequenceConfig& config) {
  if (tile_index >= config.TileCount()) {
    throw Error(ErrorCode::kBadIndex, "tile " + std::to_string(tile_index) + " outside grid of " +
                                          std::to_string(config.TileCount()));
  }
  const std::uint64_t area = std::uint64_t{config.TileWidth()} * config.TileHeight();
  const std::uint64_t superblock_area = std::uint64_t{kSuperblockSize} * kSuperblockSize;
  Tile tile;
  tile.tile_index = static_cast<std::uint16_t>(tile_index);
  tile.kind = TileKind::kSkipped;
  tile.superblock_count = static_cast<std::uint16_t>((area + superblock_area - 1) / superblock_area);
  tile.skipped_mode = CanonicalSkippedMode();
  return tile;
}

std::vector<Unit> RewriteViewportFrame(const SequenceConfig& config,
                                       std::span<const Unit> frame_units,
                                       const TileSet& selected) {
  const FrameParts parts = CheckFrame(config, frame_units);
  const std::uint32_t tile_count = config.TileCount();
  if (!selected.Empty() && selected.Indices().back() >= tile_count) {
    throw Error(ErrorCode::kInvalidInput, "selection outside the tile grid");
  }

  std::vector<const TileGroup*> by_tile(tile_count, nullptr);
  for (std::size_t i = parts.enhanced_header + 1; i < frame_units.size(); ++i) {
    const auto* g = std::get_if<TileGroup>(&frame_units[i]);
    if (g && g->tiles.size() == 1) by_tile[g->tg_start] = g;
  }

  std::vector<Unit> out(frame_units.begin(), frame_units.begin() + parts.enhanced_header);
  out.reserve(out.size() + 1 + tile_count);
  FrameHeader header = *parts.enhanced;
  header.cdf_update_disabled = true;
  header.global_mv_zero = true;
  out.emplace_back(header);
  for (std::uint32_t t = 0; t < tile_count; ++t) {
    if (selected.Contains(t)) {
      const TileGroup* g = by_tile[t];
      if (!g || g->tiles.front().kind != TileKind::kCoded) {
        throw Error(ErrorCode::kTileMissing, "selected tile " + std::to_string(t) + " not coded in input");
      }
      out.emplace_back(*g);
    } else {
      const auto index = static_cast<std::uint16_t>(t);
      out.emplace_back(TileGroup{index, index, {SynthesizeSkippedTile(t, config)}});
    }
  }
  return out;
}

std::span<const Unit> FrameUnitSpan(const Bitstream& bitstream, std::uint32_t frame_index) {
  const std::vector<FrameUnits> frames = IndexFrames(bitstream);
  if (frame_index >= frames.size()) {
    throw Error(ErrorCode::kBadIndex, "frame " + std::to_string(frame_index) + " not in stream");
  }
  const FrameUnits& f = frames[frame_index];
  return std::span<const Unit>(bitstream.units).subspan(f.first_unit, f.end_unit - f.first_unit);
}

std::vector<Unit> RewriteSessionFrame(const Bitstream& bitstream, std::uint32_t frame_index,
                                      const Viewport& viewport, const Projection& projection,
                                      double step) {
  const TileSet selected = SelectTiles(viewport, projection, bitstream.config, step);
  return RewriteViewportFrame(bitstream.config, FrameUnitSpan(bitstream, frame_index), selected);
}

Bitstream RewriteStream(const Bitstream& bitstream,
                        const std::function<std::optional<TileSet>(std::uint32_t)>& selection) {
  Bitstream out{bitstream.config, {}};
  out.units.reserve(bitstream.units.size());
  const std::span<const Unit> units(bitstream.units);
  for (const FrameUnits& f : IndexFrames(bitstream)) {
    const auto frame = units.subspan(f.first_unit, f.end_unit - f.first_unit);
    if (std::optional<TileSet> selected = selection(f.frame_index)) {
      for (Unit& u : RewriteViewportFrame(bitstream.config, frame, *selected)) {
        out.units.push_back(std::move(u));
      }
    } else {
      out.units.insert(out.units.end(), frame.begin(), frame.end());
    }
  }
  return out;
}

Bitstream ReplaceFrame(const Bitstream& bitstream, std::uint32_t frame_index,
                       std::vector<Unit> units) {
  const std::vector<FrameUnits> frames = IndexFrames(bitstream);
  if (frame_index >= frames.size()) {
    throw Error(ErrorCode::kBadIndex, "frame " + std::to_string(frame_index) + " not in stream");
  }
  const FrameUnits& f = frames[frame_index];
  Bitstream out{bitstream.config, {}};
  out.units.reserve(bitstream.units.size() - (f.end_unit - f.first_unit) + units.size());
  out.units.insert(out.units.end(), bitstream.units.begin(), bitstream.units.begin() + f.first_unit);
  for (Unit& u : units) out.units.push_back(std::move(u));
  out.units.insert(out.units.end(), bitstream.units.begin() + f.end_unit, bitstream.units.end());
  return out;
}

}  // namespace svb
