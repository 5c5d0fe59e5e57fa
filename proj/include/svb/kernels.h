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

// Byte-plane inner loops used by the codec. Each kernel has a scalar
// reference and, on x86-64, an AVX2 variant chosen at runtime. All variants
// produce bit-identical results.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace svb::kernels {

enum class Isa { kScalar, kAvx2 };

std::string_view IsaName(Isa isa);
bool IsaAvailable(Isa isa);  // compiled in and supported by this CPU
Isa ActiveIsa();
// Selects the implementation for subsequent calls. Throws Error(kBadArgs)
// when the ISA is unavailable. The SVB_ISA environment variable ("scalar" or
// "avx2") sets the initial choice; otherwise the best available is used.
void SetActiveIsa(Isa isa);

// dst[x] = round_half_up(mean of the 2x2 block at (2x, 0..1)).
void Downsample2xRows(const std::uint8_t* row0, const std::uint8_t* row1, std::uint8_t* dst,
                      std::size_t dst_width);
// dst[2x] = dst[2x+1] = src[x].
void UpsampleNearest2xRow(const std::uint8_t* src, std::uint8_t* dst, std::size_t src_width);
// out = (a - b) mod 256.
void SubWrap(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b,
             std::span<std::uint8_t> out);
// out = (a + b) mod 256.
void AddWrap(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b,
             std::span<std::uint8_t> out);
std::uint64_t SumAbsDiff(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b);
std::uint64_t SumSquaredDiff(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b);
// Number of leading zero bytes.
std::size_t ZeroPrefixLength(std::span<const std::uint8_t> data);

// Per-ISA entry points, exposed for equivalence testing.
struct KernelTable {
  void (*downsample_2x_rows)(const std::uint8_t*, const std::uint8_t*, std::uint8_t*,
                             std::size_t);
  void (*upsample_nearest_2x_row)(const std::uint8_t*, std::uint8_t*, std::size_t);
  void (*sub_wrap)(const std::uint8_t*, const std::uint8_t*, std::uint8_t*, std::size_t);
  void (*add_wrap)(const std::uint8_t*, const std::uint8_t*, std::uint8_t*, std::size_t);
  std::uint64_t (*sum_abs_diff)(const std::uint8_t*, const std::uint8_t*, std::size_t);
  std::uint64_t (*sum_squared_diff)(const std::uint8_t*, const std::uint8_t*, std::size_t);
  std::size_t (*zero_prefix_length)(const std::uint8_t*, std::size_t);
};

// Throws Error(kBadArgs) when the ISA is unavailable.
const KernelTable& TableFor(Isa isa);

}  // namespace svb::kernels
