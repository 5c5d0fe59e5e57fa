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

#include "svb/codec.h"
#include "svb/error.h"
#include "svb/kernels.h"
#include "svb/rle.h"

namespace svb {
namespace {

std::vector<FrameUnits> IndexValidated(const Bitstream& bitstream) {
  ValidationReport report = ValidateStructure(bitstream);
  if (!report.Ok()) throw Error(ErrorCode::kNotValidated, report.ToString());
  return IndexFrames(bitstream);
}

// Rebuilds one tile's samples from its payload and optional reference.
std::vector<std::uint8_t> Reconstruct(const Tile& tile, std::size_t samples,
                                      std::span<const std::uint8_t> reference) {
  std::vector<std::uint8_t> out = RleDecompress(tile.coded_payload, samples);
  if (out.size() != samples) throw Error(ErrorCode::kCorruptRle, "tile payload size mismatch");
  if (!reference.empty()) kernels::AddWrap(out, reference, out);
  return out;
}

}  // namespace

Decoder::Decoder(const Bitstream& bitstream)
    : bitstream_(bitstream), frames_(IndexValidated(bitstream)) {}

const FrameUnits& Decoder::Frame(std::uint32_t frame_index) const {
  if (frame_index >= frames_.size()) {
    throw Error(ErrorCode::kMissingBase, "no base frame " + std::to_string(frame_index));
  }
  return frames_[frame_index];
}

const RasterFrame& Decoder::Base(std::uint32_t frame_index) {
  if (auto it = base_cache_.find(frame_index); it != base_cache_.end()) return it->second;
  Frame(frame_index);
  // Walk back to a cached frame or the KEY frame, then decode forward.
  std::uint32_t start = frame_index;
  while (start > 0 && !base_cache_.count(start) &&
         frames_[start].base.header->frame_type == FrameType::kInter) {
    --start;
  }
  const SequenceConfig& c = bitstream_.config;
  const std::uint32_t w = c.single_layer ? c.width : c.BaseWidth();
  const std::uint32_t h = c.single_layer ? c.height : c.BaseHeight();
  for (std::uint32_t k = start; k <= frame_index; ++k) {
    if (base_cache_.count(k)) continue;
    const FrameUnits& f = frames_[k];
    const bool key = f.base.header->frame_type == FrameType::kKey;
    const RasterFrame* previous = key ? nullptr : &base_cache_.at(k - 1);
    RasterFrame base(w, h);
    if (c.base_single_tile && !c.single_layer) {
      base.samples = Reconstruct(*f.base.FindTile(0), base.samples.size(),
                                 previous ? std::span<const std::uint8_t>(previous->samples)
                                          : std::span<const std::uint8_t>());
    } else {
      for (std::uint32_t i = 0; i < c.TileCount(); ++i) {
        const Rect rect = TileRect(c, i, w, h);
        RasterFrame reference = previous ? Crop(*previous, rect) : RasterFrame();
        Paste(base, rect,
              Reconstruct(*f.base.FindTile(i), std::size_t{rect.width} * rect.height,
                          reference.samples));
      }
    }
    base_cache_.emplace(k, std::move(base));
  }
  return base_cache_.at(frame_index);
}

RasterFrame Decoder::DecodeFrame(std::uint32_t frame_index, const TileSet& received) {
  const SequenceConfig& c = bitstream_.config;
  if (c.single_layer) throw Error(ErrorCode::kInvalidInput, "track stream has no enhanced layer");
  const FrameUnits& f = Frame(frame_index);
  RasterFrame out = UpsampleNearest(Base(frame_index), c.scale_factor);
  if (!f.enhanced || received.Empty()) return out;
  const std::uint32_t offset = f.enhanced->header->base_ref_offset;
  RasterFrame reference = offset == 0 ? out
                                      : UpsampleNearest(Base(frame_index - offset), c.scale_factor);
  for (std::uint32_t index : received) {
    if (index >= c.TileCount()) throw Error(ErrorCode::kBadIndex, std::to_string(index));
    const Tile* tile = f.enhanced->FindTile(index);
    if (!tile || tile->kind != TileKind::kCoded) continue;
    const Rect rect = TileRect(c, index, c.width, c.height);
    Paste(out, rect,
          Reconstruct(*tile, std::size_t{rect.width} * rect.height, Crop(reference, rect).samples));
  }
  return out;
}

const RasterFrame& Decoder::TrackFrame(std::uint32_t frame_index) {
  if (!bitstream_.config.single_layer) {
    throw Error(ErrorCode::kInvalidInput, "not a single-layer track");
  }
  return Base(frame_index);
}

RasterFrame DecodeFrame(const Bitstream& bitstream, std::uint32_t frame_index,
                        const TileSet& received) {
  return Decoder(bitstream).DecodeFrame(frame_index, received);
}

}  // namespace svb
