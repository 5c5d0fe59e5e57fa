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
#include <span>
#include <vector>

namespace svb {

// 8-bit luma plane, row-major.
struct RasterFrame {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::vector<std::uint8_t> samples;

  RasterFrame() = default;
  RasterFrame(std::uint32_t w, std::uint32_t h, std::uint8_t fill = 0)
      : width(w), height(h), samples(std::size_t{w} * h, fill) {}

  std::uint8_t At(std::uint32_t x, std::uint32_t y) const {
    return samples[std::size_t{y} * width + x];
  }
  std::uint8_t& At(std::uint32_t x, std::uint32_t y) { return samples[std::size_t{y} * width + x]; }
  std::span<const std::uint8_t> Row(std::uint32_t y) const {
    return {samples.data() + std::size_t{y} * width, width};
  }
  std::span<std::uint8_t> Row(std::uint32_t y) {
    return {samples.data() + std::size_t{y} * width, width};
  }

  bool operator==(const RasterFrame&) const = default;
};

struct Rect {
  std::uint32_t x = 0;
  std::uint32_t y = 0;
  std::uint32_t width = 0;
  std::uint32_t height = 0;
};

// Box filter: mean of each factor x factor block, rounded half up.
// Throws Error(kBadDimensions) unless both dimensions divide by factor.
RasterFrame Downsample(const RasterFrame& frame, std::uint32_t factor);

// Replicates each sample factor x factor times. Throws Error(kBadDimensions)
// for factor 0 or when the result would not fit in 32-bit dimensions.
RasterFrame UpsampleNearest(const RasterFrame& frame, std::uint32_t factor);

// Copies a region out as a tightly packed frame / writes one back.
RasterFrame Crop(const RasterFrame& frame, const Rect& rect);
void Paste(RasterFrame& frame, const Rect& rect, std::span<const std::uint8_t> samples);

// 10*log10(255^2 / MSE); +infinity for identical frames.
// Throws Error(kBadDimensions) when sizes differ.
double Psnr(const RasterFrame& a, const RasterFrame& b);

double MeanAbsDiff(const RasterFrame& a, const RasterFrame& b);

}  // namespace svb
