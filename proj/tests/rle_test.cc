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

#include "svb/rle.h"

#include <random>

#include <gtest/gtest.h>

#include "svb/error.h"

namespace svb {
namespace {

// Straightforward reference decoder for the record format.
std::vector<std::uint8_t> ReferenceDecode(const std::vector<std::uint8_t>& in) {
  std::vector<std::uint8_t> out;
  std::size_t i = 0;
  while (i < in.size()) {
    const std::uint8_t type = in[i];
    const std::uint32_t len = in[i + 1] | in[i + 2] << 8 | in[i + 3] << 16 | std::uint32_t{in[i + 4]} << 24;
    i += 5;
    if (type == 0) {
      out.insert(out.end(), len, 0);
    } else {
      out.insert(out.end(), in.begin() + i, in.begin() + i + len);
      i += len;
    }
  }
  return out;
}

ErrorCode CodeOf(const std::vector<std::uint8_t>& in) {
  try {
    RleDecompress(in);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kIo;  // sentinel: no error
}

TEST(RleTest, LongZeroRunIsOneRecord) {
  const std::vector<std::uint8_t> zeros(65536, 0);
  const auto packed = RleCompress(zeros);
  EXPECT_EQ(packed, (std::vector<std::uint8_t>{0, 0x00, 0x00, 0x01, 0x00}));
  EXPECT_EQ(RleDecompress(packed), zeros);
}

TEST(RleTest, EmptyRoundTrips) {
  EXPECT_TRUE(RleCompress({}).empty());
  EXPECT_TRUE(RleDecompress({}).empty());
}

TEST(RleTest, RandomBytesCostAtLeastOneRecordHeader) {
  std::mt19937_64 rng(4);
  std::vector<std::uint8_t> data(4096);
  for (auto& b : data) b = static_cast<std::uint8_t>(rng());
  const auto packed = RleCompress(data);
  EXPECT_GE(packed.size(), 4096u + 5);
  EXPECT_EQ(RleDecompress(packed), data);
}

TEST(RleTest, ShortZeroRunsFoldIntoLiterals) {
  // Five zeros between literals stay literal; six become a run.
  std::vector<std::uint8_t> five = {7, 0, 0, 0, 0, 0, 9};
  EXPECT_EQ(RleCompress(five).size(), 5u + five.size());
  std::vector<std::uint8_t> six = {7, 0, 0, 0, 0, 0, 0, 9};
  EXPECT_EQ(RleCompress(six).size(), 3 * 5u + 2);
}

TEST(RleTest, RoundTripMatchesReferenceDecoder) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<std::uint8_t> data(rng() % 3000);
    const int density = static_cast<int>(rng() % 100);
    for (auto& b : data) b = static_cast<int>(rng() % 100) < density ? static_cast<std::uint8_t>(rng()) : 0;
    const auto packed = RleCompress(data);
    ASSERT_EQ(ReferenceDecode(packed), data);
    ASSERT_EQ(RleDecompress(packed), data);
    ASSERT_EQ(RleDecodedSize(packed), data.size());
  }
}

TEST(RleTest, MalformedInputIsRejected) {
  EXPECT_EQ(CodeOf({0, 1, 0}), ErrorCode::kCorruptRle);           // short header
  EXPECT_EQ(CodeOf({2, 1, 0, 0, 0}), ErrorCode::kCorruptRle);     // bad run type
  EXPECT_EQ(CodeOf({0, 0, 0, 0, 0}), ErrorCode::kCorruptRle);     // zero length
  EXPECT_EQ(CodeOf({1, 4, 0, 0, 0, 1, 2}), ErrorCode::kCorruptRle);  // literal overruns
  EXPECT_FALSE(RleDecodedSize(std::vector<std::uint8_t>{1, 4, 0, 0, 0, 1}).has_value());
}

TEST(RleTest, OutputLimitIsEnforced) {
  const auto packed = RleCompress(std::vector<std::uint8_t>(100, 0));
  EXPECT_THROW(RleDecompress(packed, 99), Error);
  EXPECT_EQ(RleDecompress(packed, 100).size(), 100u);
}

}  // namespace
}  // namespace svb
