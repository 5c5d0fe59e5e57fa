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

#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace svb {

// Sorted, duplicate-free set of tile indices over a tile grid.
class TileSet {
 public:
  TileSet() = default;
  TileSet(std::initializer_list<std::uint32_t> indices);
  explicit TileSet(std::vector<std::uint32_t> indices);

  static TileSet Full(std::uint32_t tile_count);

  void Insert(std::uint32_t index);
  bool Contains(std::uint32_t index) const;
  bool IsSubsetOf(const TileSet& other) const;
  bool Empty() const { return indices_.empty(); }
  std::size_t Size() const { return indices_.size(); }
  const std::vector<std::uint32_t>& Indices() const { return indices_; }

  TileSet Union(const TileSet& other) const;
  TileSet Difference(const TileSet& other) const;

  // Sorted, distinct grid columns touched by the set.
  std::vector<std::uint32_t> Columns(std::uint32_t tile_cols) const;

  // "0,4,7" style rendering; ParseList accepts the same plus "all"/"none".
  std::string ToString() const;
  static TileSet ParseList(const std::string& text, std::uint32_t tile_count);

  auto begin() const { return indices_.begin(); }
  auto end() const { return indices_.end(); }

  bool operator==(const TileSet&) const = default;

 private:
  std::vector<std::uint32_t> indices_;
};

// True when the sorted column list has a gap, i.e. the columns do not form a
// single run (with no wrap-around).
bool ColumnsNonContiguous(const std::vector<std::uint32_t>& sorted_columns);

}  // namespace svb
