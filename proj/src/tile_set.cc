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

#include "svb/tile_set.h"

#include <algorithm>
#include <charconv>
#include <iterator>

#include "svb/error.h"

namespace svb {

TileSet::TileSet(std::initializer_list<std::uint32_t> indices)
    : TileSet(std::vector<std::uint32_t>(indices)) {}

TileSet::TileSet(std::vector<std::uint32_t> indices)
    : indices_(std::move(indices)) {
  std::sort(indices_.begin(), indices_.end());
  indices_.erase(std::unique(indices_.begin(), indices_.end()), indices_.end());
}

TileSet TileSet::Full(std::uint32_t tile_count) {
  TileSet set;
  set.indices_.resize(tile_count);
  for (std::uint32_t i = 0; i < tile_count; ++i) set.indices_[i] = i;
  return set;
}

void TileSet::Insert(std::uint32_t index) {
  auto it = std::lower_bound(indices_.begin(), indices_.end(), index);
  if (it == indices_.end() || *it != index) indices_.insert(it, index);
}

bool TileSet::Contains(std::uint32_t index) const {
  return std::binary_search(indices_.begin(), indices_.end(), index);
}

bool TileSet::IsSubsetOf(const TileSet& other) const {
  return std::includes(other.indices_.begin(), other.indices_.end(),
                       indices_.begin(), indices_.end());
}

TileSet TileSet::Union(const TileSet& other) const {
  TileSet out;
  std::set_union(indices_.begin(), indices_.end(), other.indices_.begin(),
                 other.indices_.end(), std::back_inserter(out.indices_));
  return out;
}

TileSet TileSet::Difference(const TileSet& other) const {
  TileSet out;
  std::set_difference(indices_.begin(), indices_.end(), other.indices_.begin(),
                      other.indices_.end(), std::back_inserter(out.indices_));
  return out;
}

std::vector<std::uint32_t> TileSet::Columns(std::uint32_t tile_cols) const {
  std::vector<std::uint32_t> cols;
  for (std::uint32_t index : indices_) cols.push_back(index % tile_cols);
  std::sort(cols.begin(), cols.end());
  cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
  return cols;
}

std::string TileSet::ToString() const {
  std::string out;
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(indices_[i]);
  }
  return out;
}

TileSet TileSet::ParseList(const std::string& text, std::uint32_t tile_count) {
  if (text == "all") return Full(tile_count);
  if (text == "none" || text.empty()) return {};
  std::vector<std::uint32_t> indices;
  const char* p = text.data();
  const char* end = p + text.size();
  while (p < end) {
    std::uint32_t value = 0;
    auto [next, ec] = std::from_chars(p, end, value);
    if (ec != std::errc() || value >= tile_count) {
      throw Error(ErrorCode::kBadIndex, "bad tile list '" + text + "'");
    }
    indices.push_back(value);
    p = next;
    if (p < end) {
      if (*p != ',') throw Error(ErrorCode::kBadIndex, "bad tile list '" + text + "'");
      ++p;
    }
  }
  return TileSet(std::move(indices));
}

bool ColumnsNonContiguous(const std::vector<std::uint32_t>& sorted_columns) {
  for (std::size_t i = 1; i < sorted_columns.size(); ++i) {
    if (sorted_columns[i] != sorted_columns[i - 1] + 1) return true;
  }
  return false;
}

}  // namespace svb
