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

#include <cstring>

#include "byte_io.h"
#include "svb/error.h"
#include "svb/kernels.h"

namespace svb {
namespace {

void AppendRecord(std::vector<std::uint8_t>& out, std::uint8_t type,
                  std::span<const std::uint8_t> literal, std::size_t length) {
  out.push_back(type);
  PutU32(out, static_cast<std::uint32_t>(length));
  out.insert(out.end(), literal.begin(), literal.end());
}

}  // namespace

std::vector<std::uint8_t> RleCompress(std::span<const std::uint8_t> input) {
  std::vector<std::uint8_t> out;
  const std::size_t n = input.size();
  std::size_t literal_start = 0;
  std::size_t pos = 0;
  while (pos < n) {
    if (input[pos] != 0) {
      const void* zero = std::memchr(input.data() + pos, 0, n - pos);
      pos = zero ? static_cast<std::size_t>(static_cast<const std::uint8_t*>(zero) -
                                            input.data())
                 : n;
      continue;
    }
    const std::size_t run = kernels::ZeroPrefixLength(input.subspan(pos));
    if (run >= kMinZeroRun) {
      if (pos > literal_start) {
        AppendRecord(out, 1, input.subspan(literal_start, pos - literal_start),
                     pos - literal_start);
      }
      AppendRecord(out, 0, {}, run);
      pos += run;
      literal_start = pos;
    } else {
      pos += run;
    }
  }
  if (n > literal_start) {
    AppendRecord(out, 1, input.subspan(literal_start), n - literal_start);
  }
  return out;
}

std::vector<std::uint8_t> RleDecompress(std::span<const std::uint8_t> input,
                                        std::size_t max_output) {
  std::vector<std::uint8_t> out;
  std::size_t pos = 0;
  while (pos < input.size()) {
    if (input.size() - pos < kRleRecordHeader) {
      throw Error(ErrorCode::kCorruptRle, "truncated record header", pos);
    }
    const std::uint8_t type = input[pos];
    const std::uint32_t length = GetU32(input.data() + pos + 1);
    if (type > 1) throw Error(ErrorCode::kCorruptRle, "bad run type", pos);
    if (length == 0) throw Error(ErrorCode::kCorruptRle, "empty record", pos);
    if (length > max_output - out.size()) {
      throw Error(ErrorCode::kCorruptRle, "output exceeds limit", pos);
    }
    pos += kRleRecordHeader;
    if (type == 0) {
      out.resize(out.size() + length, 0);
    } else {
      if (input.size() - pos < length) {
        throw Error(ErrorCode::kCorruptRle, "truncated literal", pos);
      }
      out.insert(out.end(), input.begin() + pos, input.begin() + pos + length);
      pos += length;
    }
  }
  return out;
}

std::optional<std::size_t> RleDecodedSize(std::span<const std::uint8_t> input) {
  std::size_t total = 0;
  std::size_t pos = 0;
  while (pos < input.size()) {
    if (input.size() - pos < kRleRecordHeader) return std::nullopt;
    const std::uint8_t type = input[pos];
    const std::uint32_t length = GetU32(input.data() + pos + 1);
    if (type > 1 || length == 0) return std::nullopt;
    pos += kRleRecordHeader;
    if (type == 1) {
      if (input.size() - pos < length) return std::nullopt;
      pos += length;
    }
    total += length;
  }
  return total;
}

}  // namespace svb
