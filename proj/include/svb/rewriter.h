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

// Server-side construction of viewport-dependent frames. Selected enhanced
// tiles are forwarded untouched; every other grid tile becomes a synthesized
// SKIPPED tile that reconstructs as upsampled base-layer content.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "svb/container.h"
#include "svb/geometry.h"
#include "svb/tile_set.h"

namespace svb {

// Throws Error(kBadIndex) when tile_index is outside the grid.
Tile SynthesizeSkippedTile(std::uint32_t tile_index, const SequenceConfig& config);

// `frame_units` is one temporal unit of a two-layer stream: temporal
// delimiter, base header and tile groups, enhanced header and tile groups.
// Output order: temporal delimiter (and any metadata), base layer unchanged,
// enhanced header with CDF update disabled and zero global MV, then one
// single-tile group per grid tile in raster order.
// Throws Error(kInvalidInput) for a malformed frame or a selection outside
// the grid, Error(kTileMissing) when a selected tile is not CODED in the input.
std::vector<Unit> RewriteViewportFrame(const SequenceConfig& config,
                                       std::span<const Unit> frame_units,
                                       const TileSet& selected);

// Units of one frame of a validated stream. Throws Error(kBadIndex).
std::span<const Unit> FrameUnitSpan(const Bitstream& bitstream, std::uint32_t frame_index);

// select_tiles followed by RewriteViewportFrame on the stream's own grid.
std::vector<Unit> RewriteSessionFrame(const Bitstream& bitstream, std::uint32_t frame_index,
                                      const Viewport& viewport, const Projection& projection,
                                      double step = kDefaultStep);

// Rewrites every frame for which `selection` returns a tile set and copies
// the rest. The stream is indexed once, so this is the bulk path.
Bitstream RewriteStream(const Bitstream& bitstream,
                        const std::function<std::optional<TileSet>(std::uint32_t)>& selection);

// Copy of the stream with frame `frame_index` replaced by `units`.
Bitstream ReplaceFrame(const Bitstream& bitstream, std::uint32_t frame_index,
                       std::vector<Unit> units);

}  // namespace svb
