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

#include <cstdint>

namespace svb {

enum class PartitionMode : std::uint8_t { kNone = 0, kHorz = 1, kVert = 2, kSplit = 3 };
enum class RefFrames : std::uint8_t { kBaseLayerOnly = 0, kPreviousEnhanced = 1 };
enum class InterMode : std::uint8_t { kZeroMv = 0, kGlobalMv = 1, kNewMv = 2 };

// The per-superblock syntax a skipped tile repeats for every superblock it
// covers. Serialized as six bytes in field order.
struct SuperblockMode {
  PartitionMode partition_mode = PartitionMode::kNone;
  bool skip = false;
  bool is_inter = false;
  RefFrames ref_frames = RefFrames::kBaseLayerOnly;
  InterMode inter_mode = InterMode::kZeroMv;
  bool use_obmc = false;

  bool operator==(const SuperblockMode&) const = default;
};

// PARTITION_NONE, skip, inter, base-layer-only reference, zero MV, no OBMC.
constexpr SuperblockMode CanonicalSkippedMode() {
  return SuperblockMode{PartitionMode::kNone, true, true, RefFrames::kBaseLayerOnly,
                        InterMode::kZeroMv, false};
}

inline constexpr int kSuperblockSize = 64;

}  // namespace svb
