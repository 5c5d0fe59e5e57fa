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

#include <algorithm>
#include <deque>
#include <limits>

#include "svb/codec.h"
#include "svb/error.h"
#include "svb/kernels.h"
#include "svb/rle.h"

namespace svb {

Rect TileRect(const SequenceConfig& config, std::uint32_t tile_index, std::uint32_t layer_width,
              std::uint32_t layer_height) {
  const std::uint32_t tw = layer_width / config.tile_cols;
  const std::uint32_t th = layer_height / config.tile_rows;
  return Rect{(tile_index % config.tile_cols) * tw, (tile_index / config.tile_cols) * th, tw, th};
}

namespace {

void RequireUsable(const SequenceConfig& config) {
  if (auto problems = CheckConfig(config); !problems.empty()) {
    throw Error(ErrorCode::kBadConfig, problems.front());
  }
}

std::vector<std::uint8_t> CompressDelta(std::span<const std::uint8_t> current,
                                        std::span<const std::uint8_t> reference) {
  std::vector<std::uint8_t> delta(current.size());
  kernels::SubWrap(current, reference, delta);
  return RleCompress(delta);
}

Tile CodedTile(std::uint32_t index, std::vector<std::uint8_t> payload) {
  Tile tile;
  tile.tile_index = static_cast<std::uint16_t>(index);
  tile.coded_payload = std::move(payload);
  return tile;
}

Tile CodeRegion(const SequenceConfig& config, std::uint32_t tile_index, const RasterFrame& current,
                const RasterFrame* previous) {
  const Rect rect = TileRect(config, tile_index, current.width, current.height);
  const RasterFrame region = Crop(current, rect);
  if (!previous) return CodedTile(tile_index, RleCompress(region.samples));
  return CodedTile(tile_index, CompressDelta(region.samples, Crop(*previous, rect).samples));
}

TileGroup SingleTileGroup(Tile tile) {
  TileGroup group;
  group.tg_start = group.tg_end = tile.tile_index;
  group.tiles.push_back(std::move(tile));
  return group;
}

}  // namespace

Bitstream EncodeSvc(const VideoSource& source) {
  const SequenceConfig& config = source.config;
  RequireUsable(config);
  if (config.single_layer) throw Error(ErrorCode::kBadConfig, "single_layer set for SVC encode");
  if (auto grid = ValidateStructure(Bitstream{config, {}}); !grid.Ok()) {
    throw Error(ErrorCode::kBadConfig, grid.ToString());
  }
  Bitstream out{config, {}};
  const std::uint32_t scale = config.scale_factor;
  const std::uint32_t tiles = config.TileCount();

  // Upsampled base frames still reachable by the reference window.
  std::deque<RasterFrame> upsampled;
  RasterFrame previous_base;
  for (std::size_t t = 0; t < source.frames.size(); ++t) {
    const RasterFrame& frame = source.frames[t];
    if (frame.width != config.width || frame.height != config.height) {
      throw Error(ErrorCode::kBadConfig, "source frame size differs from config");
    }
    const auto index = static_cast<std::uint32_t>(t);
    const std::uint32_t gop_pos = index % config.gop_size;
    const bool key = gop_pos == 0;
    RasterFrame base = Downsample(frame, scale);

    out.units.emplace_back(TemporalDelimiter{});
    FrameHeader base_header;
    base_header.frame_index = index;
    base_header.layer_id = LayerId::kBase;
    base_header.frame_type = key ? FrameType::kKey : FrameType::kInter;
    out.units.emplace_back(base_header);

    const RasterFrame* reference = key ? nullptr : &previous_base;
    if (config.base_single_tile) {
      Tile tile = reference ? CodedTile(0, CompressDelta(base.samples, reference->samples))
                            : CodedTile(0, RleCompress(base.samples));
      out.units.emplace_back(SingleTileGroup(std::move(tile)));
    } else {
      TileGroup group;
      group.tg_start = 0;
      group.tg_end = static_cast<std::uint16_t>(tiles - 1);
      for (std::uint32_t i = 0; i < tiles; ++i) {
        group.tiles.push_back(CodeRegion(config, i, base, reference));
      }
      out.units.emplace_back(std::move(group));
    }

    if (key) upsampled.clear();
    upsampled.push_front(UpsampleNearest(base, scale));
    while (upsampled.size() > config.ref_window) upsampled.pop_back();

    // Pick the base reference with the smallest total payload; ties go to
    // the nearest frame.
    std::vector<Tile> best;
    std::size_t best_bytes = std::numeric_limits<std::size_t>::max();
    std::uint8_t best_offset = 0;
    for (std::size_t offset = 0; offset < upsampled.size(); ++offset) {
      std::vector<Tile> candidate;
      std::size_t bytes = 0;
      for (std::uint32_t i = 0; i < tiles; ++i) {
        const Rect rect = TileRect(config, i, config.width, config.height);
        candidate.push_back(CodedTile(
            i, CompressDelta(Crop(frame, rect).samples, Crop(upsampled[offset], rect).samples)));
        bytes += candidate.back().coded_payload.size();
      }
      if (bytes < best_bytes) {
        best_bytes = bytes;
        best = std::move(candidate);
        best_offset = static_cast<std::uint8_t>(offset);
      }
    }
    FrameHeader enhanced_header;
    enhanced_header.frame_index = index;
    enhanced_header.layer_id = LayerId::kEnhanced;
    enhanced_header.frame_type = FrameType::kInter;
    enhanced_header.base_ref_offset = best_offset;
    out.units.emplace_back(enhanced_header);
    for (Tile& tile : best) out.units.emplace_back(SingleTileGroup(std::move(tile)));

    previous_base = std::move(base);
  }
  return out;
}

Bitstream EncodeTrack(const VideoSource& source, int gop, TrackResolution resolution) {
  if (gop < 1 || gop > 0xFFFF) throw Error(ErrorCode::kBadConfig, "gop must be in [1, 65535]");
  RequireUsable(source.config);
  SequenceConfig config = source.config;
  config.single_layer = true;
  config.base_single_tile = false;
  config.gop_size = static_cast<std::uint16_t>(gop);
  config.ref_window = 1;
  if (resolution == TrackResolution::kBase) {
    config.width = static_cast<std::uint16_t>(source.config.BaseWidth());
    config.height = static_cast<std::uint16_t>(source.config.BaseHeight());
  }
  if (auto grid = ValidateStructure(Bitstream{config, {}}); !grid.Ok()) {
    throw Error(ErrorCode::kBadConfig, grid.ToString());
  }
  Bitstream out{config, {}};
  RasterFrame previous;
  for (std::size_t t = 0; t < source.frames.size(); ++t) {
    RasterFrame frame = resolution == TrackResolution::kBase
                            ? Downsample(source.frames[t], source.config.scale_factor)
                            : source.frames[t];
    if (frame.width != config.width || frame.height != config.height) {
      throw Error(ErrorCode::kBadConfig, "source frame size differs from config");
    }
    const auto index = static_cast<std::uint32_t>(t);
    const bool key = index % config.gop_size == 0;
    out.units.emplace_back(TemporalDelimiter{});
    FrameHeader header;
    header.frame_index = index;
    header.frame_type = key ? FrameType::kKey : FrameType::kInter;
    out.units.emplace_back(header);
    for (std::uint32_t i = 0; i < config.TileCount(); ++i) {
      out.units.emplace_back(SingleTileGroup(CodeRegion(config, i, frame, key ? nullptr : &previous)));
    }
    previous = std::move(frame);
  }
  return out;
}

std::vector<RateRecord> RateRecords(const Bitstream& bitstream) {
  std::vector<RateRecord> records;
  for (const FrameUnits& f : IndexFrames(bitstream)) {
    auto add_layer = [&](const LayerUnits& layer, LayerId id) {
      for (const TileGroup* g : layer.groups) {
        for (std::size_t k = 0; k < g->tiles.size(); ++k) {
          const Tile& tile = g->tiles[k];
          std::size_t bytes = tile.kind == TileKind::kCoded ? 7 + tile.coded_payload.size()
                                                            : kSkippedTileRecordSize;
          // Unit and group headers are charged to the group's first tile.
          if (k == 0) bytes += kUnitHeaderSize + kTileGroupHeaderSize;
          records.push_back({f.frame_index, id, tile.tile_index, bytes});
        }
      }
    };
    add_layer(f.base, LayerId::kBase);
    if (f.enhanced) add_layer(*f.enhanced, LayerId::kEnhanced);
  }
  return records;
}

}  // namespace svb
