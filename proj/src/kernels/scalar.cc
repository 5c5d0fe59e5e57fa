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

#include <cstdlib>

#include "kernels/kernels_internal.h"

namespace svb::kernels {
namespace scalar {

void Downsample2xRows(const std::uint8_t* row0, const std::uint8_t* row1, std::uint8_t* dst,
                      std::size_t dst_width) {
  for (std::size_t x = 0; x < dst_width; ++x) {
    const unsigned sum = row0[2 * x] + row0[2 * x + 1] + row1[2 * x] + row1[2 * x + 1];
    dst[x] = static_cast<std::uint8_t>((sum + 2) >> 2);
  }
}

void UpsampleNearest2xRow(const std::uint8_t* src, std::uint8_t* dst, std::size_t src_width) {
  for (std::size_t x = 0; x < src_width; ++x) {
    dst[2 * x] = src[x];
    dst[2 * x + 1] = src[x];
  }
}

void SubWrap(const std::uint8_t* a, const std::uint8_t* b, std::uint8_t* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<std::uint8_t>(a[i] - b[i]);
}

void AddWrap(const std::uint8_t* a, const std::uint8_t* b, std::uint8_t* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<std::uint8_t>(a[i] + b[i]);
}

std::uint64_t SumAbsDiff(const std::uint8_t* a, const std::uint8_t* b, std::size_t n) {
  std::uint64_t sum = 0;
  for (std::size_t i = 0; i < n; ++i) sum += std::abs(int{a[i]} - int{b[i]});
  return sum;
}

std::uint64_t SumSquaredDiff(const std::uint8_t* a, const std::uint8_t* b, std::size_t n) {
  std::uint64_t sum = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const int d = int{a[i]} - int{b[i]};
    sum += static_cast<std::uint64_t>(d * d);
  }
  return sum;
}

std::size_t ZeroPrefixLength(const std::uint8_t* data, std::size_t n) {
  std::size_t i = 0;
  while (i < n && data[i] == 0) ++i;
  return i;
}

}  // namespace scalar

const KernelTable kScalarTable = {
    scalar::Downsample2xRows,
    scalar::UpsampleNearest2xRow,
    scalar::SubWrap,
    scalar::AddWrap,
    scalar::SumAbsDiff,
    scalar::SumSquaredDiff,
    scalar::ZeroPrefixLength,
};

}  // namespace svb::kernels
