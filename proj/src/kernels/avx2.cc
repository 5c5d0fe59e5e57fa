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

// Compiled with -mavx2; only reached when the CPU reports AVX2.

#include <immintrin.h>

#include "kernels/kernels_internal.h"

namespace svb::kernels {
namespace avx2 {

inline __m256i Load(const std::uint8_t* p) {
  return _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p));
}

inline void Store(std::uint8_t* p, __m256i v) {
  _mm256_storeu_si256(reinterpret_cast<__m256i*>(p), v);
}

void Downsample2xRows(const std::uint8_t* row0, const std::uint8_t* row1, std::uint8_t* dst,
                      std::size_t dst_width) {
  const __m256i ones = _mm256_set1_epi8(1);
  const __m256i two = _mm256_set1_epi16(2);
  std::size_t x = 0;
  for (; x + 32 <= dst_width; x += 32) {
    const std::uint8_t* s0 = row0 + 2 * x;
    const std::uint8_t* s1 = row1 + 2 * x;
    // Horizontal pair sums as 16-bit lanes.
    __m256i lo = _mm256_add_epi16(_mm256_maddubs_epi16(Load(s0), ones),
                                  _mm256_maddubs_epi16(Load(s1), ones));
    __m256i hi = _mm256_add_epi16(_mm256_maddubs_epi16(Load(s0 + 32), ones),
                                  _mm256_maddubs_epi16(Load(s1 + 32), ones));
    lo = _mm256_srli_epi16(_mm256_add_epi16(lo, two), 2);
    hi = _mm256_srli_epi16(_mm256_add_epi16(hi, two), 2);
    // packus interleaves 128-bit lanes; restore order.
    const __m256i packed = _mm256_packus_epi16(lo, hi);
    Store(dst + x, _mm256_permute4x64_epi64(packed, 0xD8));
  }
  kScalarTable.downsample_2x_rows(row0 + 2 * x, row1 + 2 * x, dst + x, dst_width - x);
}

void UpsampleNearest2xRow(const std::uint8_t* src, std::uint8_t* dst, std::size_t src_width) {
  std::size_t x = 0;
  for (; x + 32 <= src_width; x += 32) {
    const __m256i s = Load(src + x);
    const __m256i lo = _mm256_unpacklo_epi8(s, s);
    const __m256i hi = _mm256_unpackhi_epi8(s, s);
    Store(dst + 2 * x, _mm256_permute2x128_si256(lo, hi, 0x20));
    Store(dst + 2 * x + 32, _mm256_permute2x128_si256(lo, hi, 0x31));
  }
  kScalarTable.upsample_nearest_2x_row(src + x, dst + 2 * x, src_width - x);
}

void SubWrap(const std::uint8_t* a, const std::uint8_t* b, std::uint8_t* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 32 <= n; i += 32) Store(out + i, _mm256_sub_epi8(Load(a + i), Load(b + i)));
  kScalarTable.sub_wrap(a + i, b + i, out + i, n - i);
}

void AddWrap(const std::uint8_t* a, const std::uint8_t* b, std::uint8_t* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 32 <= n; i += 32) Store(out + i, _mm256_add_epi8(Load(a + i), Load(b + i)));
  kScalarTable.add_wrap(a + i, b + i, out + i, n - i);
}

std::uint64_t HorizontalSum64(__m256i v) {
  alignas(32) std::uint64_t lanes[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), v);
  return lanes[0] + lanes[1] + lanes[2] + lanes[3];
}

std::uint64_t SumAbsDiff(const std::uint8_t* a, const std::uint8_t* b, std::size_t n) {
  __m256i acc = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 32 <= n; i += 32) acc = _mm256_add_epi64(acc, _mm256_sad_epu8(Load(a + i), Load(b + i)));
  return HorizontalSum64(acc) + kScalarTable.sum_abs_diff(a + i, b + i, n - i);
}

std::uint64_t SumSquaredDiff(const std::uint8_t* a, const std::uint8_t* b, std::size_t n) {
  __m256i acc = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 32 <= n; i += 32) {
    const __m256i va = Load(a + i);
    const __m256i vb = Load(b + i);
    const __m256i d0 = _mm256_sub_epi16(_mm256_cvtepu8_epi16(_mm256_castsi256_si128(va)),
                                        _mm256_cvtepu8_epi16(_mm256_castsi256_si128(vb)));
    const __m256i d1 = _mm256_sub_epi16(_mm256_cvtepu8_epi16(_mm256_extracti128_si256(va, 1)),
                                        _mm256_cvtepu8_epi16(_mm256_extracti128_si256(vb, 1)));
    // Each 32-bit lane holds at most 4 * 255^2, well inside u32.
    const __m256i sq = _mm256_add_epi32(_mm256_madd_epi16(d0, d0), _mm256_madd_epi16(d1, d1));
    acc = _mm256_add_epi64(acc, _mm256_cvtepu32_epi64(_mm256_castsi256_si128(sq)));
    acc = _mm256_add_epi64(acc, _mm256_cvtepu32_epi64(_mm256_extracti128_si256(sq, 1)));
  }
  return HorizontalSum64(acc) + kScalarTable.sum_squared_diff(a + i, b + i, n - i);
}

std::size_t ZeroPrefixLength(const std::uint8_t* data, std::size_t n) {
  const __m256i zero = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 32 <= n; i += 32) {
    const auto mask =
        static_cast<std::uint32_t>(_mm256_movemask_epi8(_mm256_cmpeq_epi8(Load(data + i), zero)));
    if (mask != 0xFFFFFFFFu) return i + static_cast<std::size_t>(__builtin_ctz(~mask));
  }
  return i + kScalarTable.zero_prefix_length(data + i, n - i);
}

}  // namespace avx2

const KernelTable kAvx2Table = {
    avx2::Downsample2xRows,
    avx2::UpsampleNearest2xRow,
    avx2::SubWrap,
    avx2::AddWrap,
    avx2::SumAbsDiff,
    avx2::SumSquaredDiff,
    avx2::ZeroPrefixLength,
};

}  // namespace svb::kernels
