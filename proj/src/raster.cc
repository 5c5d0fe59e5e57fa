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

#include "svb/raster.h"

#include <cmath>
#include <cstring>
#include <limits>
#include <string>

#include "svb/error.h"
#include "svb/kernels.h"

namespace svb {

RasterFrame Downsample(const RasterFrame& frame, std::uint32_t factor) {
  if (factor == 0 || frame.width % factor != 0 || frame.height % factor != 0) {
    throw Error(ErrorCode::kBadDimensions,
                std::to_string(frame.width) + "x" + std::to_string(frame.height) +
                    " not divisible by " + std::to_string(factor));
  }
  RasterFrame out(frame.width / factor, frame.height / factor);
  if (factor == 2) {
    for (std::uint32_t y = 0; y < out.height; ++y) {
      kernels::Downsample2xRows(frame.Row(2 * y).data(), frame.Row(2 * y + 1).data(),
                                out.Row(y).data(), out.width);
    }
    return out;
  }
  const std::uint64_t area = std::uint64_t{factor} * factor;
  for (std::uint32_t y = 0; y < out.height; ++y) {
    for (std::uint32_t x = 0; x < out.width; ++x) {
      std::uint64_t sum = 0;
      for (std::uint32_t dy = 0; dy < factor; ++dy) {
        const std::uint8_t* row = frame.Row(y * factor + dy).data() + std::size_t{x} * factor;
        for (std::uint32_t dx = 0; dx < factor; ++dx) sum += row[dx];
      }
      out.At(x, y) = static_cast<std::uint8_t>((2 * sum + area) / (2 * area));
    }
  }
  return out;
}

RasterFrame UpsampleNearest(const RasterFrame& frame, std::uint32_t factor) {
  if (factor == 0 ||
      std::uint64_t{frame.width} * factor > std::numeric_limits<std::uint32_t>::max() ||
      std::uint64_t{frame.height} * factor > std::numeric_limits<std::uint32_t>::max()) {
    throw Error(ErrorCode::kBadDimensions, "bad upsample factor " + std::to_string(factor));
  }
  if (factor == 1) return frame;
  RasterFrame out(frame.width * factor, frame.height * factor);
  for (std::uint32_t y = 0; y < frame.height; ++y) {
    auto first = out.Row(y * factor);
    if (factor == 2) {
      kernels::UpsampleNearest2xRow(frame.Row(y).data(), first.data(), frame.width);
    } else {
      auto src = frame.Row(y);
      for (std::uint32_t x = 0; x < frame.width; ++x) {
        std::memset(first.data() + std::size_t{x} * factor, src[x], factor);
      }
    }
    for (std::uint32_t dy = 1; dy < factor; ++dy) {
      std::memcpy(out.Row(y * factor + dy).data(), first.data(), out.width);
    }
  }
  return out;
}

RasterFrame Crop(const RasterFrame& frame, const Rect& rect) {
  if (rect.x + rect.width > frame.width || rect.y + rect.height > frame.height) {
    throw Error(ErrorCode::kBadDimensions, "crop rectangle outside frame");
  }
  RasterFrame out(rect.width, rect.height);
  for (std::uint32_t y = 0; y < rect.height; ++y) {
    std::memcpy(out.Row(y).data(), frame.Row(rect.y + y).data() + rect.x, rect.width);
  }
  return out;
}

void Paste(RasterFrame& frame, const Rect& rect, std::span<const std::uint8_t> samples) {
  if (rect.x + rect.width > frame.width || rect.y + rect.height > frame.height ||
      samples.size() != std::size_t{rect.width} * rect.height) {
    throw Error(ErrorCode::kBadDimensions, "paste rectangle does not fit");
  }
  for (std::uint32_t y = 0; y < rect.height; ++y) {
    std::memcpy(frame.Row(rect.y + y).data() + rect.x, samples.data() + std::size_t{y} * rect.width,
                rect.width);
  }
}

double Psnr(const RasterFrame& a, const RasterFrame& b) {
  if (a.width != b.width || a.height != b.height) {
    throw Error(ErrorCode::kBadDimensions, "psnr operands differ in size");
  }
  const std::uint64_t sse = kernels::SumSquaredDiff(a.samples, b.samples);
  if (sse == 0) return std::numeric_limits<double>::infinity();
  const double mse = double(sse) / double(a.samples.size());
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

double MeanAbsDiff(const RasterFrame& a, const RasterFrame& b) {
  if (a.width != b.width || a.height != b.height) {
    throw Error(ErrorCode::kBadDimensions, "operands differ in size");
  }
  if (a.samples.empty()) return 0.0;
  return double(kernels::SumAbsDiff(a.samples, b.samples)) / double(a.samples.size());
}

}  // namespace svb
