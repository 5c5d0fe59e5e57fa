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

// Zero-run-length coding for residual payloads.
//
// Stream of records: run_type u8 (0 = zero run, 1 = literal), length u32 LE,
// then `length` literal bytes for run_type 1. Zero runs shorter than
// kMinZeroRun are folded into the surrounding literal. Lengths are never 0.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace svb {

inline constexpr std::size_t kMinZeroRun = 6;
inline constexpr std::size_t kRleRecordHeader = 5;

std::vector<std::uint8_t> RleCompress(std::span<const std::uint8_t> input);

// Throws Error(kCorruptRle) on malformed input or when the output would
// exceed max_output bytes.
std::vector<std::uint8_t> RleDecompress(std::span<const std::uint8_t> input,
                                        std::size_t max_output = SIZE_MAX);

// Decoded length of a well-formed stream without materializing it;
// nullopt when malformed.
std::optional<std::size_t> RleDecodedSize(std::span<const std::uint8_t> input);

}  // namespace svb
