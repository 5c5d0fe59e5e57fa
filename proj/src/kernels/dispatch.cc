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

#include <atomic>
#include <cstdlib>
#include <string>

#include "kernels/kernels_internal.h"
#include "svb/error.h"

namespace svb::kernels {
namespace {

bool CpuHasAvx2() {
#if defined(SVB_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa InitialIsa() {
  if (const char* env = std::getenv("SVB_ISA")) {
    const std::string choice(env);
    if (choice == "scalar") return Isa::kScalar;
    if (choice == "avx2" && CpuHasAvx2()) return Isa::kAvx2;
  }
  return CpuHasAvx2() ? Isa::kAvx2 : Isa::kScalar;
}

std::atomic<const KernelTable*>& ActiveTable() {
  static std::atomic<const KernelTable*> table{&TableFor(InitialIsa())};
  return table;
}

std::atomic<Isa>& ActiveIsaSlot() {
  static std::atomic<Isa> isa{InitialIsa()};
  return isa;
}

const KernelTable& Active() { return *ActiveTable().load(std::memory_order_relaxed); }

void RequireSameSize(std::size_t a, std::size_t b, std::size_t out) {
  if (a != b || a != out) throw Error(ErrorCode::kBadArgs, "kernel operand sizes differ");
}

}  // namespace

std::string_view IsaName(Isa isa) { return isa == Isa::kAvx2 ? "avx2" : "scalar"; }

bool IsaAvailable(Isa isa) { return isa == Isa::kScalar || CpuHasAvx2(); }

const KernelTable& TableFor(Isa isa) {
  if (isa == Isa::kScalar) return kScalarTable;
#if defined(SVB_HAVE_AVX2)
  if (CpuHasAvx2()) return kAvx2Table;
#endif
  throw Error(ErrorCode::kBadArgs, std::string(IsaName(isa)) + " kernels unavailable");
}

Isa ActiveIsa() { return ActiveIsaSlot().load(); }

void SetActiveIsa(Isa isa) {
  ActiveTable().store(&TableFor(isa));
  ActiveIsaSlot().store(isa);
}

void Downsample2xRows(const std::uint8_t* row0, const std::uint8_t* row1, std::uint8_t* dst,
                      std::size_t dst_width) {
  Active().downsample_2x_rows(row0, row1, dst, dst_width);
}

void UpsampleNearest2xRow(const std::uint8_t* src, std::uint8_t* dst, std::size_t src_width) {
  Active().upsample_nearest_2x_row(src, dst, src_width);
}

void SubWrap(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b,
             std::span<std::uint8_t> out) {
  RequireSameSize(a.size(), b.size(), out.size());
  Active().sub_wrap(a.data(), b.data(), out.data(), a.size());
}

void AddWrap(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b,
             std::span<std::uint8_t> out) {
  RequireSameSize(a.size(), b.size(), out.size());
  Active().add_wrap(a.data(), b.data(), out.data(), a.size());
}

std::uint64_t SumAbsDiff(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
  RequireSameSize(a.size(), b.size(), a.size());
  return Active().sum_abs_diff(a.data(), b.data(), a.size());
}

std::uint64_t SumSquaredDiff(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
  RequireSameSize(a.size(), b.size(), a.size());
  return Active().sum_squared_diff(a.data(), b.data(), a.size());
}

std::size_t ZeroPrefixLength(std::span<const std::uint8_t> data) {
  return Active().zero_prefix_length(data.data(), data.size());
}

}  // namespace svb::kernels
