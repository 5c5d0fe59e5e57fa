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

// Mock two-layer tiled codec. The base layer is the source downsampled by
// scale_factor and coded as KEY (raw) or INTER (wrapping delta against the
// previous base frame). Each enhanced tile is the wrapping residual between
// the source tile and the nearest-upsampled base frame it references. All
// payloads are RLE-compressed, so byte counts follow content. Coding is
// lossless: decoding every tile reproduces the source exactly.

#include <cstdint>
#include <map>
#include <vector>

#include "svb/container.h"
#include "svb/raster.h"
#include "svb/tile_set.h"

namespace svb {

struct VideoSource {
  SequenceConfig config;
  std::vector<RasterFrame> frames;
  std::uint64_t seed = 0;
};

// Posterized drifting sinusoids plus slowly moving seeded discs. Content wraps
// horizontally so the left and right edges meet like an ERP seam.
// Throws Error(kBadConfig) for an unusable config or frame_count < 1.
VideoSource GenerateContent(std::uint64_t seed, const SequenceConfig& config, int frame_count);

// Throws Error(kBadConfig).
Bitstream EncodeSvc(const VideoSource& source);

enum class TrackResolution { kFull, kBase };

// Conventional single-layer tiled track with a closed GOP of `gop` frames.
// Each tile sits in its own tile group and predicts only from the co-located
// tile of the previous frame. Throws Error(kBadConfig).
Bitstream EncodeTrack(const VideoSource& source, int gop, TrackResolution resolution);

// Pixel rectangle of a grid tile at the given layer dimensions.
Rect TileRect(const SequenceConfig& config, std::uint32_t tile_index, std::uint32_t layer_width,
              std::uint32_t layer_height);

// Reconstructs frames of a validated stream. Holds a reference to the
// bitstream, which must outlive the decoder. Decoded base frames are cached.
class Decoder {
 public:
  // Throws Error(kNotValidated) when the stream fails ValidateStructure.
  explicit Decoder(const Bitstream& bitstream);

  std::size_t FrameCount() const { return frames_.size(); }

  // Base layer at base resolution. Throws Error(kMissingBase).
  const RasterFrame& Base(std::uint32_t frame_index);

  // Enhanced-resolution frame: CODED tiles in `received` are reconstructed
  // exactly, every other region is the upsampled same-index base frame.
  // Throws Error(kMissingBase), or Error(kInvalidInput) for track streams.
  RasterFrame DecodeFrame(std::uint32_t frame_index, const TileSet& received);

  // Full reconstruction of a single-layer track frame.
  // Throws Error(kInvalidInput) for SVC streams.
  const RasterFrame& TrackFrame(std::uint32_t frame_index);

 private:
  const FrameUnits& Frame(std::uint32_t frame_index) const;

  const Bitstream& bitstream_;
  std::vector<FrameUnits> frames_;
  std::map<std::uint32_t, RasterFrame> base_cache_;
};

RasterFrame DecodeFrame(const Bitstream& bitstream, std::uint32_t frame_index,
                        const TileSet& received);

struct RateRecord {
  std::uint32_t frame_index = 0;
  LayerId layer = LayerId::kBase;
  std::uint32_t tile_index = 0;
  std::size_t bytes = 0;  // tile-group unit bytes carrying the tile
};

std::vector<RateRecord> RateRecords(const Bitstream& bitstream);

}  // namespace svb
