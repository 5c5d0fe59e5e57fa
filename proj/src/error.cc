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

#include "svb/error.h"

namespace svb {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kBadMagic: return "E_BAD_MAGIC";
    case ErrorCode::kUnsupportedVersion: return "E_UNSUPPORTED_VERSION";
    case ErrorCode::kTruncated: return "E_TRUNCATED";
    case ErrorCode::kUnknownUnitType: return "E_UNKNOWN_UNIT_TYPE";
    case ErrorCode::kBadPayload: return "E_BAD_PAYLOAD";
    case ErrorCode::kInvalidStructure: return "E_INVALID_STRUCTURE";
    case ErrorCode::kBadConfig: return "E_BAD_CONFIG";
    case ErrorCode::kBadDimensions: return "E_BAD_DIMENSIONS";
    case ErrorCode::kCorruptRle: return "E_CORRUPT_RLE";
    case ErrorCode::kMissingBase: return "E_MISSING_BASE";
    case ErrorCode::kNotValidated: return "E_NOT_VALIDATED";
    case ErrorCode::kBadStep: return "E_BAD_STEP";
    case ErrorCode::kTooLarge: return "E_TOO_LARGE";
    case ErrorCode::kBadIndex: return "E_BAD_INDEX";
    case ErrorCode::kInvalidInput: return "E_INVALID_INPUT";
    case ErrorCode::kTileMissing: return "E_TILE_MISSING";
    case ErrorCode::kBadArgs: return "E_BAD_ARGS";
    case ErrorCode::kNoStream: return "E_NO_STREAM";
    case ErrorCode::kTraceEmpty: return "E_TRACE_EMPTY";
    case ErrorCode::kEmpty: return "E_EMPTY";
    case ErrorCode::kIo: return "E_IO";
  }
  return "E_UNKNOWN";
}

namespace {

std::string Compose(ErrorCode code, const std::string& message,
                    std::optional<std::size_t> offset) {
  std::string text(ErrorCodeName(code));
  if (offset) text += " at offset " + std::to_string(*offset);
  if (!message.empty()) text += ": " + message;
  return text;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message,
             std::optional<std::size_t> offset)
    : std::runtime_error(Compose(code, message, offset)),
      code_(code),
      offset_(offset) {}

}  // namespace svb
