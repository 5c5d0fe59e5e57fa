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

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace svb {

enum class ErrorCode {
  kBadMagic,
  kUnsupportedVersion,
  kTruncated,
  kUnknownUnitType,
  kBadPayload,
  kInvalidStructure,
  kBadConfig,
  kBadDimensions,
  kCorruptRle,
  kMissingBase,
  kNotValidated,
  kBadStep,
  kTooLarge,
  kBadIndex,
  kInvalidInput,
  kTileMissing,
  kBadArgs,
  kNoStream,
  kTraceEmpty,
  kEmpty,
  kIo,
};

// Stable identifier, e.g. "E_TRUNCATED".
std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<std::size_t> offset = std::nullopt);

  ErrorCode code() const { return code_; }
  // Byte offset into the input for positioned parse errors.
  std::optional<std::size_t> offset() const { return offset_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> offset_;
};

}  // namespace svb
