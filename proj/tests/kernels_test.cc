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

#include "svb/kernels.h"

#include <cstdlib>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "svb/error.h"

namespace svb::kernels {
namespace {

std::vector<std::uint8_t> Bytes(std::mt19937_64& rng, std::size_t n, int zero_percent = 0) {
  std::vector<std::uint8_t> v(n);
  for (auto& b : v) {
    b = static_cast<int>(rng() % 100) < zero_percent ? 0 : static_cast<std::uint8_t>(rng());
  }
  return v;
}

// Sizes straddling the 32-byte vector width, with unaligned starts.
const std::size_t kSizes[] = {0, 1, 7, 15, 16, 17, 31, 32, 33, 63, 64, 65, 100, 255, 1024, 4099};
const std::size_t kOffsets[] = {0, 1, 3, 17};

class KernelEquivalenceTest : public ::testing::Test {
 protected:
  void SetUp() override {
    if (!IsaAvailable(Isa::kAvx2)) GTEST_SKIP() << "AVX2 not available on this machine";
  }

  const KernelTable& scalar_ = TableFor(Isa::kScalar);
  const KernelTable& Avx2() { return TableFor(Isa::kAvx2); }
  std::mt19937_64 rng_{42};
};

TEST_F(KernelEquivalenceTest, Downsample2xRows) {
  for (std::size_t n : kSizes) {
    for (std::size_t off : kOffsets) {
      auto r0 = Bytes(rng_, 2 * n + off), r1 = Bytes(rng_, 2 * n + off);
      std::vector<std::uint8_t> a(n + off), b(n + off);
      scalar_.downsample_2x_rows(r0.data() + off, r1.data() + off, a.data() + off, n);
      Avx2().downsample_2x_rows(r0.data() + off, r1.data() + off, b.data() + off, n);
      ASSERT_EQ(a, b) << "n=" << n << " off=" << off;
    }
  }
}

TEST_F(KernelEquivalenceTest, Downsample2xRowsRoundingEdges) {
  // Sums of 2 mod 4 exercise the half-up rounding.
  std::vector<std::uint8_t> r0(128), r1(128), a(64), b(64);
  for (std::size_t i = 0; i < 128; ++i) {
    r0[i] = static_cast<std::uint8_t>(i % 2 ? 255 : 254);
    r1[i] = static_cast<std::uint8_t>(i % 4 == 0 ? 1 : 0);
  }
  scalar_.downsample_2x_rows(r0.data(), r1.data(), a.data(), 64);
  Avx2().downsample_2x_rows(r0.data(), r1.data(), b.data(), 64);
  EXPECT_EQ(a, b);
}

TEST_F(KernelEquivalenceTest, UpsampleNearest2xRow) {
  for (std::size_t n : kSizes) {
    for (std::size_t off : kOffsets) {
      auto src = Bytes(rng_, n + off);
      std::vector<std::uint8_t> a(2 * n + off), b(2 * n + off);
      scalar_.upsample_nearest_2x_row(src.data() + off, a.data() + off, n);
      Avx2().upsample_nearest_2x_row(src.data() + off, b.data() + off, n);
      ASSERT_EQ(a, b) << "n=" << n << " off=" << off;
    }
  }
}

TEST_F(KernelEquivalenceTest, WrapArithmetic) {
  for (std::size_t n : kSizes) {
    for (std::size_t off : kOffsets) {
      auto x = Bytes(rng_, n + off), y = Bytes(rng_, n + off);
      std::vector<std::uint8_t> a(n + off), b(n + off);
      scalar_.sub_wrap(x.data() + off, y.data() + off, a.data() + off, n);
      Avx2().sub_wrap(x.data() + off, y.data() + off, b.data() + off, n);
      ASSERT_EQ(a, b);
      scalar_.add_wrap(x.data() + off, y.data() + off, a.data() + off, n);
      Avx2().add_wrap(x.data() + off, y.data() + off, b.data() + off, n);
      ASSERT_EQ(a, b);
    }
  }
}

TEST_F(KernelEquivalenceTest, Reductions) {
  for (std::size_t n : kSizes) {
    for (std::size_t off : kOffsets) {
      auto x = Bytes(rng_, n + off), y = Bytes(rng_, n + off);
      EXPECT_EQ(scalar_.sum_abs_diff(x.data() + off, y.data() + off, n),
                Avx2().sum_abs_diff(x.data() + off, y.data() + off, n));
      EXPECT_EQ(scalar_.sum_squared_diff(x.data() + off, y.data() + off, n),
                Avx2().sum_squared_diff(x.data() + off, y.data() + off, n));
    }
  }
  // Extremes: every byte differs by 255.
  std::vector<std::uint8_t> zeros(5000, 0), full(5000, 255);
  EXPECT_EQ(Avx2().sum_squared_diff(zeros.data(), full.data(), 5000), 5000ull * 255 * 255);
  EXPECT_EQ(Avx2().sum_abs_diff(full.data(), zeros.data(), 5000), 5000ull * 255);
}

TEST_F(KernelEquivalenceTest, ZeroPrefixLength) {
  for (std::size_t n : kSizes) {
    for (std::size_t stop = 0; stop <= n; stop += 1 + n / 7) {
      std::vector<std::uint8_t> v(n, 0);
      if (stop < n) v[stop] = static_cast<std::uint8_t>(1 + rng_() % 255);
      EXPECT_EQ(scalar_.zero_prefix_length(v.data(), n), Avx2().zero_prefix_length(v.data(), n));
      EXPECT_EQ(Avx2().zero_prefix_length(v.data(), n), stop < n ? stop : n);
    }
  }
}

TEST(KernelScalarTest, MatchesDefinitions) {
  const KernelTable& k = TableFor(Isa::kScalar);
  const std::uint8_t r0[] = {0, 1, 254, 255}, r1[] = {1, 0, 255, 255};
  std::uint8_t d[2];
  k.downsample_2x_rows(r0, r1, d, 2);
  EXPECT_EQ(d[0], 1);    // 2/4 = 0.5 rounds up
  EXPECT_EQ(d[1], 255);  // 1019/4 = 254.75
  const std::uint8_t a[] = {0, 10}, b[] = {1, 250};
  std::uint8_t out[2];
  k.sub_wrap(a, b, out, 2);
  EXPECT_EQ(out[0], 255);
  EXPECT_EQ(out[1], 16);
  k.add_wrap(out, b, out, 2);
  EXPECT_EQ(out[0], 0);
  EXPECT_EQ(out[1], 10);
}

TEST(KernelDispatchTest, ActiveIsaCanBeSwitched) {
  const Isa before = ActiveIsa();
  SetActiveIsa(Isa::kScalar);
  EXPECT_EQ(ActiveIsa(), Isa::kScalar);
  std::vector<std::uint8_t> x(100, 3), y(100, 1), out(100);
  SubWrap(x, y, out);
  EXPECT_EQ(out, std::vector<std::uint8_t>(100, 2));
  SetActiveIsa(before);
}

TEST(KernelDispatchTest, MismatchedSpansAreRejected) {
  std::vector<std::uint8_t> x(4), y(5), out(4);
  try {
    SubWrap(x, y, out);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBadArgs);
  }
}

}  // namespace
}  // namespace svb::kernels
