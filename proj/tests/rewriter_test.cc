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

#include "svb/rewriter.h"

#include <random>

#include <gtest/gtest.h>

#include "svb/codec.h"
#include "svb/error.h"
#include "test_util.h"

namespace svb {
namespace {

using testing::MakeConfig;

const Projection kErp{ProjectionKind::kErp, 768, 384};

ErrorCode CodeOf(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error";
  return ErrorCode::kIo;
}

struct Fixture {
  VideoSource source;
  Bitstream stream;
};

Fixture Make(const SequenceConfig& config, int frames, std::uint64_t seed = 1) {
  Fixture f{GenerateContent(seed, config, frames), {}};
  f.stream = EncodeSvc(f.source);
  return f;
}

std::vector<const TileGroup*> EnhancedGroups(std::span<const Unit> units) {
  std::vector<const TileGroup*> out;
  bool enhanced = false;
  for (const Unit& u : units) {
    if (const auto* h = std::get_if<FrameHeader>(&u)) enhanced = h->layer_id == LayerId::kEnhanced;
    if (const auto* g = std::get_if<TileGroup>(&u); g && enhanced) out.push_back(g);
  }
  return out;
}

// Checks the decoded rewritten frame against the source and base.
void ExpectPixelContract(const Fixture& f, std::uint32_t frame, const std::vector<Unit>& units,
                         const TileSet& selected) {
  const Bitstream rewritten = ReplaceFrame(f.stream, frame, units);
  ASSERT_TRUE(ValidateStructure(rewritten).Ok()) << ValidateStructure(rewritten).ToString();
  const SequenceConfig& c = f.stream.config;
  const RasterFrame out = DecodeFrame(rewritten, frame, selected);
  const RasterFrame base_up =
      UpsampleNearest(Downsample(f.source.frames[frame], c.scale_factor), c.scale_factor);
  for (std::uint32_t t = 0; t < c.TileCount(); ++t) {
    const Rect r = TileRect(c, t, c.width, c.height);
    const RasterFrame& expected = selected.Contains(t) ? f.source.frames[frame] : base_up;
    ASSERT_EQ(Crop(out, r), Crop(expected, r)) << "tile " << t;
  }
  // Decoding with the full grid must not invent content for skipped tiles.
  EXPECT_EQ(DecodeFrame(rewritten, frame, TileSet::Full(c.TileCount())), out);
}

TEST(SkippedTileTest, SuperblockCountAndMode) {
  const Tile t = SynthesizeSkippedTile(4, MakeConfig(1920, 1152, 3, 3));
  EXPECT_EQ(t.kind, TileKind::kSkipped);
  EXPECT_EQ(t.superblock_count, 60);
  EXPECT_EQ(t.skipped_mode, CanonicalSkippedMode());
  EXPECT_EQ(t.tile_index, 4);
  EXPECT_TRUE(t.coded_payload.empty());
  EXPECT_EQ(SynthesizeSkippedTile(0, MakeConfig(130, 66, 1, 1)).superblock_count, 3);
}

TEST(SkippedTileTest, SerializedSizeIsSmallAndConstant) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 100; ++i) {
    const int cols = testing::UniformInt(rng, 1, 8), rows = testing::UniformInt(rng, 1, 8);
    const SequenceConfig c = MakeConfig(cols * 2 * testing::UniformInt(rng, 1, 200),
                                        rows * 2 * testing::UniformInt(rng, 1, 100), cols, rows);
    std::vector<std::uint8_t> a, b;
    AppendUnit(a, TileGroup{0, 0, {SynthesizeSkippedTile(0, c)}});
    const std::uint16_t last = static_cast<std::uint16_t>(c.TileCount() - 1);
    AppendUnit(b, TileGroup{last, last, {SynthesizeSkippedTile(last, c)}});
    EXPECT_EQ(a.size(), b.size());
    EXPECT_LE(a.size() - kUnitHeaderSize - kTileGroupHeaderSize, 16u);
  }
}

TEST(SkippedTileTest, RejectsOutOfGrid) {
  EXPECT_EQ(CodeOf([] { SynthesizeSkippedTile(9, MakeConfig(96, 96, 3, 3)); }),
            ErrorCode::kBadIndex);
}

TEST(RewriteTest, NonAdjacentCornerTiles) {
  const Fixture f = Make(MakeConfig(192, 192, 3, 3, 4, 2), 4);
  const TileSet selected{3, 5, 6, 8};  // T4, T6, T7, T9 counted from one
  for (std::uint32_t frame = 0; frame < 4; ++frame) {
    const auto units = RewriteViewportFrame(f.stream.config, FrameUnitSpan(f.stream, frame), selected);
    const auto groups = EnhancedGroups(units);
    ASSERT_EQ(groups.size(), 9u);
    int coded = 0, skipped = 0;
    for (std::uint32_t t = 0; t < 9; ++t) {
      EXPECT_EQ(groups[t]->tg_start, t);
      EXPECT_EQ(groups[t]->tg_end, t);
      const bool is_coded = groups[t]->tiles[0].kind == TileKind::kCoded;
      EXPECT_EQ(is_coded, selected.Contains(t));
      is_coded ? ++coded : ++skipped;
    }
    EXPECT_EQ(coded, 4);
    EXPECT_EQ(skipped, 5);
    ExpectPixelContract(f, frame, units, selected);
  }
}

TEST(RewriteTest, OutputOrderAndFlags) {
  const Fixture f = Make(MakeConfig(96, 96, 3, 3, 4), 2);
  const auto input = FrameUnitSpan(f.stream, 1);
  const auto units = RewriteViewportFrame(f.stream.config, input, TileSet{0, 8});
  ASSERT_GE(units.size(), 3u);
  EXPECT_EQ(TypeOf(units[0]), UnitType::kTemporalDelimiter);
  // Base header and base groups are forwarded unchanged.
  std::size_t i = 1;
  for (; i < input.size(); ++i) {
    const auto* h = std::get_if<FrameHeader>(&input[i]);
    if (h && h->layer_id == LayerId::kEnhanced) break;
    EXPECT_EQ(units[i], input[i]);
  }
  const FrameHeader& in_header = std::get<FrameHeader>(input[i]);
  const FrameHeader& out_header = std::get<FrameHeader>(units[i]);
  EXPECT_TRUE(out_header.cdf_update_disabled);
  EXPECT_TRUE(out_header.global_mv_zero);
  EXPECT_EQ(out_header.base_ref_offset, in_header.base_ref_offset);
  EXPECT_EQ(units.size(), i + 1 + 9);
}

TEST(RewriteTest, FullSelectionDecodesLikeTheInput) {
  const Fixture f = Make(MakeConfig(96, 96, 3, 3, 4, 2), 5);
  for (std::uint32_t frame = 0; frame < 5; ++frame) {
    const auto units =
        RewriteViewportFrame(f.stream.config, FrameUnitSpan(f.stream, frame), TileSet::Full(9));
    EXPECT_EQ(DecodeFrame(ReplaceFrame(f.stream, frame, units), frame, TileSet::Full(9)),
              f.source.frames[frame]);
  }
}

TEST(RewriteTest, EmptySelectionIsAllSkipped) {
  const Fixture f = Make(MakeConfig(96, 96, 3, 3, 4), 3);
  const auto units = RewriteViewportFrame(f.stream.config, FrameUnitSpan(f.stream, 2), {});
  for (const TileGroup* g : EnhancedGroups(units)) EXPECT_EQ(g->tiles[0].kind, TileKind::kSkipped);
  ExpectPixelContract(f, 2, units, {});
}

TEST(RewriteTest, Idempotent) {
  const Fixture f = Make(MakeConfig(96, 96, 3, 3, 4), 3);
  const TileSet selected{1, 2, 7};
  const auto once = RewriteViewportFrame(f.stream.config, FrameUnitSpan(f.stream, 1), selected);
  const auto twice = RewriteViewportFrame(f.stream.config, once, selected);
  EXPECT_EQ(SerializeUnits(once), SerializeUnits(twice));
}

TEST(RewriteTest, SizeFollowsTheByteFormula) {
  const Fixture f = Make(MakeConfig(384, 192, 6, 4, 8), 4);
  const auto sizes = MeasureFrameBytes(f.stream);
  const std::size_t skipped_group =
      SerializedSize(Unit{TileGroup{0, 0, {SynthesizeSkippedTile(0, f.stream.config)}}});
  std::mt19937_64 rng(4);
  for (int i = 0; i < 30; ++i) {
    const std::uint32_t frame = i % 4;
    TileSet selected;
    for (std::uint32_t t = 0; t < 24; ++t) {
      if (testing::UniformInt(rng, 0, 2) == 0) selected.Insert(t);
    }
    const auto units = RewriteViewportFrame(f.stream.config, FrameUnitSpan(f.stream, frame), selected);
    std::size_t expected = sizes[frame].base_bytes + kUnitHeaderSize + kFrameHeaderPayloadSize +
                           (24 - selected.Size()) * skipped_group;
    for (std::uint32_t t : selected) expected += sizes[frame].tile_bytes[t];
    const std::size_t actual = SerializedSize(units);
    EXPECT_EQ(actual, expected);
    if (selected.Size() < 24) {
      EXPECT_LT(actual, sizes[frame].base_bytes + sizes[frame].enhanced_bytes);
    }
  }
}

TEST(RewriteTest, Errors) {
  const Fixture f = Make(MakeConfig(96, 96, 3, 3, 4), 2);
  const auto frame = FrameUnitSpan(f.stream, 1);
  EXPECT_EQ(CodeOf([&] { RewriteViewportFrame(f.stream.config, frame, TileSet{9}); }),
            ErrorCode::kInvalidInput);
  const auto partial = RewriteViewportFrame(f.stream.config, frame, TileSet{0});
  EXPECT_EQ(CodeOf([&] { RewriteViewportFrame(f.stream.config, partial, TileSet{0, 1}); }),
            ErrorCode::kTileMissing);
  std::vector<Unit> no_tiles(frame.begin(), frame.end());
  no_tiles.pop_back();  // drops enhanced tile 8
  EXPECT_EQ(CodeOf([&] { RewriteViewportFrame(f.stream.config, no_tiles, TileSet{8}); }),
            ErrorCode::kTileMissing);
  std::vector<Unit> garbage(frame.begin() + 1, frame.end());
  EXPECT_EQ(CodeOf([&] { RewriteViewportFrame(f.stream.config, garbage, TileSet{}); }),
            ErrorCode::kInvalidInput);
  EXPECT_EQ(CodeOf([&] { FrameUnitSpan(f.stream, 2); }), ErrorCode::kBadIndex);
}

TEST(RewriteSessionTest, FullSphereEqualsFullSelection) {
  const Fixture f = Make(MakeConfig(768, 384, 6, 4), 1);
  const Viewport all{0, 0, 2 * std::numbers::pi, std::numbers::pi};
  EXPECT_EQ(RewriteSessionFrame(f.stream, 0, all, kErp),
            RewriteViewportFrame(f.stream.config, FrameUnitSpan(f.stream, 0), TileSet::Full(24)));
}

TEST(RewriteSessionTest, SeamViewportCodesTheOracleSet) {
  const Fixture f = Make(MakeConfig(768, 384, 6, 4), 1);
  const Viewport seam = Viewport{std::numbers::pi, 0, std::numbers::pi / 2, std::numbers::pi / 2}
                            .Normalized();
  const auto units = RewriteSessionFrame(f.stream, 0, seam, kErp);
  TileSet coded;
  for (const TileGroup* g : EnhancedGroups(units)) {
    if (g->tiles[0].kind == TileKind::kCoded) coded.Insert(g->tg_start);
  }
  EXPECT_EQ(coded, TileCoverageOracle(seam, kErp, f.stream.config));
  EXPECT_TRUE(ColumnsNonContiguous(coded.Columns(6)));
  ExpectPixelContract(f, 0, units, coded);
}

TEST(RewriteStreamTest, RewritesOnlyRequestedFrames) {
  const Fixture f = Make(MakeConfig(96, 96, 3, 3, 4, 2), 6);
  const Bitstream out = RewriteStream(f.stream, [](std::uint32_t frame) -> std::optional<TileSet> {
    if (frame % 2) return TileSet{frame % 9};
    return std::nullopt;
  });
  ASSERT_TRUE(ValidateStructure(out).Ok());
  for (std::uint32_t frame = 0; frame < 6; ++frame) {
    const auto span = FrameUnitSpan(out, frame);
    const auto original = FrameUnitSpan(f.stream, frame);
    if (frame % 2) {
      EXPECT_EQ(std::vector<Unit>(span.begin(), span.end()),
                RewriteViewportFrame(f.stream.config, original, TileSet{frame % 9}));
    } else {
      EXPECT_TRUE(std::equal(span.begin(), span.end(), original.begin(), original.end()));
    }
  }
}

}  // namespace
}  // namespace svb
