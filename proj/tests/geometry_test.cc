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

#include "svb/geometry.h"

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "svb/error.h"
#include "test_util.h"

namespace svb {
namespace {

using testing::MakeConfig;
using testing::OracleInWindow;

constexpr double kPi = std::numbers::pi;

const Projection kErp{ProjectionKind::kErp, 768, 384};
const Projection kCube{ProjectionKind::kCubemap3x2, 768, 512};

Vec3 Normalize(Vec3 v) {
  const double n = Norm(v);
  return {v.x / n, v.y / n, v.z / n};
}

Vec3 Add(Vec3 a, Vec3 b, double k = 1) { return {a.x + k * b.x, a.y + k * b.y, a.z + k * b.z}; }

Vec3 Cross(Vec3 a, Vec3 b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

// Brute-force coverage written against the test's own rotation basis and
// ERP/cube inverse maps.
TileSet IndependentCoverage(const Viewport& v, const Projection& p, const SequenceConfig& c) {
  TileSet out;
  for (std::uint32_t py = 0; py < p.height; ++py) {
    for (std::uint32_t px = 0; px < p.width; ++px) {
      const double u = px + 0.5, w = py + 0.5;
      Vec3 d;
      if (p.kind == ProjectionKind::kErp) {
        const double lon = (u / p.width - 0.5) * 2 * kPi;
        const double lat = (0.5 - w / p.height) * kPi;
        d = {std::cos(lat) * std::cos(lon), std::cos(lat) * std::sin(lon), std::sin(lat)};
      } else {
        // Layout: left front right / bottom back top. Each face is addressed
        // by (normal, right, up) with s to the right and t upward.
        struct F {
          Vec3 n, r, up;
        };
        static const F kCells[2][3] = {
            {{{0, 1, 0}, {1, 0, 0}, {0, 0, 1}},
             {{1, 0, 0}, {0, -1, 0}, {0, 0, 1}},
             {{0, -1, 0}, {-1, 0, 0}, {0, 0, 1}}},
            {{{0, 0, -1}, {0, -1, 0}, {1, 0, 0}},
             {{-1, 0, 0}, {0, 1, 0}, {0, 0, 1}},
             {{0, 0, 1}, {0, -1, 0}, {-1, 0, 0}}},
        };
        const double fw = p.width / 3.0, fh = p.height / 2.0;
        const int cx = static_cast<int>(u / fw), cy = static_cast<int>(w / fh);
        const F& f = kCells[cy][cx];
        const double s = 2 * (u - cx * fw) / fw - 1;
        const double t = 1 - 2 * (w - cy * fh) / fh;
        d = Add(Add(f.n, f.r, s), f.up, t);
      }
      if (OracleInWindow(v, d.x, d.y, d.z)) out.Insert(py * c.tile_rows / p.height * c.tile_cols +
                                                       px * c.tile_cols / p.width);
    }
  }
  return out;
}

TEST(ViewportTest, Normalization) {
  const Viewport v = Viewport::FromDegrees(190, 0, 90, 90).Normalized();
  EXPECT_NEAR(v.yaw, -170 * kDegree, 1e-12);
  EXPECT_NEAR(Viewport::FromDegrees(180, 0, 90, 90).Normalized().yaw, -kPi, 1e-12);
  EXPECT_THROW(Viewport::FromDegrees(0, 91, 90, 90).Normalized(), Error);
  EXPECT_THROW(Viewport::FromDegrees(0, 0, 0, 90).Normalized(), Error);
  EXPECT_THROW(Viewport::FromDegrees(0, 0, 90, 181).Normalized(), Error);
  EXPECT_THROW((Viewport{NAN, 0, 1, 1}.Normalized()), Error);
}

TEST(ViewportDirectionsTest, MinimalGridHasNineRays) {
  const double step = 10 * kDegree;
  EXPECT_EQ(ViewportDirections(Viewport{0.3, 0.2, 2 * step, 2 * step}, step).size(), 9u);
}

TEST(ViewportDirectionsTest, CentreOfIdentityViewportIsForward) {
  const auto dirs = ViewportDirections(Viewport{0, 0, 0.2, 0.2}, 0.1);
  ASSERT_EQ(dirs.size(), 9u);
  bool found = false;
  for (const Vec3& d : dirs) {
    if (std::abs(d.x - 1) < 1e-12 && std::abs(d.y) < 1e-12 && std::abs(d.z) < 1e-12) found = true;
  }
  EXPECT_TRUE(found);
}

TEST(ViewportDirectionsTest, UnitNormAndInsideWindow) {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 100; ++i) {
    const Viewport v = testing::RandomViewport(rng).Normalized();
    const auto dirs = ViewportDirections(v, 2 * kDegree);
    for (const Vec3& d : dirs) {
      ASSERT_NEAR(Norm(d), 1.0, 1e-9);
      ASSERT_TRUE(OracleInWindow(v, d.x, d.y, d.z));
    }
  }
}

TEST(ViewportDirectionsTest, IncludesCornersAndCentre) {
  const Viewport v = Viewport::FromDegrees(40, 20, 70, 50);
  const auto dirs = ViewportDirections(v, 3 * kDegree);
  int corners = 0;
  bool centre = false;
  for (const Vec3& d : dirs) {
    const Vec3 c{std::cos(v.pitch) * std::cos(v.yaw), std::cos(v.pitch) * std::sin(v.yaw),
                 std::sin(v.pitch)};
    if (Norm(Add(d, c, -1)) < 1e-12) centre = true;
    // Corners are in the window but leave it when pushed outward slightly.
    const Viewport shrunk{v.yaw, v.pitch, v.h_fov - 1e-6, v.v_fov - 1e-6};
    if (!OracleInWindow(shrunk, d.x, d.y, d.z)) {
      Viewport only_h = shrunk, only_v = shrunk;
      only_h.v_fov = v.v_fov;
      only_v.h_fov = v.h_fov;
      if (!OracleInWindow(only_h, d.x, d.y, d.z) && !OracleInWindow(only_v, d.x, d.y, d.z)) {
        ++corners;
      }
    }
  }
  EXPECT_TRUE(centre);
  EXPECT_EQ(corners, 4);
}

TEST(ViewportDirectionsTest, RejectsBadStep) {
  const Viewport v{0, 0, 0.2, 0.4};
  EXPECT_THROW(ViewportDirections(v, 0), Error);
  EXPECT_THROW(ViewportDirections(v, 0.11), Error);
  EXPECT_NO_THROW(ViewportDirections(v, 0.1));
}

TEST(ProjectErpTest, AxisCases) {
  PixelCoord p = ProjectErp({1, 0, 0}, 768, 384);
  EXPECT_DOUBLE_EQ(p.u, 384);
  EXPECT_DOUBLE_EQ(p.v, 192);
  EXPECT_DOUBLE_EQ(ProjectErp({-1, 0, 0}, 768, 384).u, 0);
  EXPECT_DOUBLE_EQ(ProjectErp({0, 0, 1}, 768, 384).v, 0);
  const PixelCoord down = ProjectErp({0, 0, -1}, 768, 384);
  EXPECT_GE(down.v, 0);
  EXPECT_LT(down.v, 384);
  // Looking left (+y) lands right of centre: longitude grows with u.
  EXPECT_DOUBLE_EQ(ProjectErp({0, 1, 0}, 768, 384).u, 576);
}

TEST(ProjectCubemapTest, AxisCasesLandInFaceCentres) {
  struct Case {
    Vec3 d;
    double u, v;
  };
  const Case cases[] = {
      {{0, 1, 0}, 128, 128},  {{1, 0, 0}, 384, 128},  {{0, -1, 0}, 640, 128},
      {{0, 0, -1}, 128, 384}, {{-1, 0, 0}, 384, 384}, {{0, 0, 1}, 640, 384},
  };
  for (const Case& c : cases) {
    const PixelCoord p = ProjectCubemap(c.d, 768, 512);
    EXPECT_NEAR(p.u, c.u, 1e-9);
    EXPECT_NEAR(p.v, c.v, 1e-9);
  }
}

TEST(ProjectionTest, UnprojectInvertsProject) {
  std::mt19937_64 rng(5);
  for (const Projection& p : {kErp, kCube}) {
    for (int i = 0; i < 2000; ++i) {
      const double u = testing::Uniform(rng, 0.01, p.width - 0.01);
      const double v = testing::Uniform(rng, 0.01, p.height - 0.01);
      const Vec3 d = Unproject(p, u, v);
      ASSERT_NEAR(Norm(d), 1, 1e-12);
      const PixelCoord back = Project(p, d);
      ASSERT_NEAR(back.u, u, 1e-6) << u << "," << v;
      ASSERT_NEAR(back.v, v, 1e-6) << u << "," << v;
    }
  }
}

int CellOf(const PixelCoord& p) {
  return static_cast<int>(p.v / 256) * 3 + static_cast<int>(p.u / 256);
}

int CellOfNormal(const Vec3& n) {
  if (n.y > 0.5) return 0;
  if (n.x > 0.5) return 1;
  if (n.y < -0.5) return 2;
  if (n.z < -0.5) return 3;
  if (n.x < -0.5) return 4;
  return 5;
}

double DistanceToCellBorder(const PixelCoord& p) {
  const double fu = std::fmod(p.u, 256), fv = std::fmod(p.v, 256);
  return std::min({fu, 256 - fu, fv, 256 - fv});
}

TEST(ProjectCubemapTest, TwelveEdgesAreContinuous) {
  const Vec3 normals[6] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  int edges = 0;
  for (int a = 0; a < 6; ++a) {
    for (int b = a + 1; b < 6; ++b) {
      const Vec3 na = normals[a], nb = normals[b];
      if (na.x * nb.x + na.y * nb.y + na.z * nb.z != 0) continue;  // opposite faces
      ++edges;
      const Vec3 along = Cross(na, nb);
      for (double s : {-0.8, -0.3, 0.0, 0.5, 0.9}) {
        const Vec3 edge = Normalize(Add(Add(na, nb), along, s));
        const PixelCoord pa = ProjectCubemap(Normalize(Add(edge, na, 0.001)), 768, 512);
        const PixelCoord pb = ProjectCubemap(Normalize(Add(edge, nb, 0.001)), 768, 512);
        EXPECT_EQ(CellOf(pa), CellOfNormal(na));
        EXPECT_EQ(CellOf(pb), CellOfNormal(nb));
        EXPECT_LT(DistanceToCellBorder(pa), 1.0);
        EXPECT_LT(DistanceToCellBorder(pb), 1.0);
        // The two sides map back to nearly the same direction.
        const Vec3 da = Unproject(kCube, pa.u, pa.v), db = Unproject(kCube, pb.u, pb.v);
        EXPECT_LT(Norm(Add(da, db, -1)), 0.003);
      }
    }
  }
  EXPECT_EQ(edges, 12);
}

TEST(CheckProjectionTest, CubemapNeedsSquareFaces) {
  EXPECT_NO_THROW(CheckProjection(kCube));
  EXPECT_THROW(CheckProjection({ProjectionKind::kCubemap3x2, 768, 384}), Error);
  EXPECT_THROW(CheckProjection({ProjectionKind::kErp, 0, 384}), Error);
}

TEST(SelectTilesTest, FullSphereSelectsEverything) {
  const Viewport all{0, 0, 2 * kPi, kPi};
  const SequenceConfig c = MakeConfig(768, 384, 6, 4);
  const SequenceConfig cube = MakeConfig(768, 512, 6, 4);
  EXPECT_EQ(SelectTiles(all, kErp, c, kDefaultStep), TileSet::Full(24));
  EXPECT_EQ(SelectTiles(all, kCube, cube, kDefaultStep), TileSet::Full(24));
  EXPECT_EQ(TileCoverageOracle(all, kErp, c), TileSet::Full(24));
  EXPECT_EQ(TileCoverageOracle(all, kCube, cube), TileSet::Full(24));
}

TEST(SelectTilesTest, SeamViewportIsNonAdjacent) {
  const SequenceConfig c = MakeConfig(768, 384, 6, 4);
  const Viewport v{kPi, 0, kPi / 2, kPi / 2};
  const TileSet s = SelectTiles(v.Normalized(), kErp, c);
  const auto cols = s.Columns(6);
  EXPECT_EQ(cols, (std::vector<std::uint32_t>{0, 5}));
  EXPECT_TRUE(ColumnsNonContiguous(cols));
  EXPECT_EQ(s, TileCoverageOracle(v.Normalized(), kErp, c));
}

TEST(SelectTilesTest, LargeErpMatchesOracle) {
  const SequenceConfig c = MakeConfig(3840, 1920, 6, 4);
  const Projection p{ProjectionKind::kErp, 3840, 1920};
  const Viewport v = Viewport::FromDegrees(0, 0, 90, 90);
  EXPECT_EQ(SelectTiles(v, p, c, 0.5 * kDegree), TileCoverageOracle(v, p, c));
}

TEST(SelectTilesTest, TinyViewportHitsTheCentreTile) {
  // On 3x3 the frame centre lies strictly inside the middle tile.
  const SequenceConfig c = MakeConfig(768, 384, 3, 3);
  const Viewport v = Viewport::FromDegrees(0, 0, 1, 1);
  EXPECT_EQ(SelectTiles(v, kErp, c), TileSet({4}));
  EXPECT_EQ(TileCoverageOracle(v, kErp, c), TileSet({4}));
}

TEST(SelectTilesTest, EquatorialFractionMatchesTheRoughSixth) {
  const SequenceConfig c = MakeConfig(768, 384, 6, 4);
  for (double yaw : {-150.0, -90.0, -17.0, 0.0, 33.0, 120.0, 180.0}) {
    const double fraction =
        SelectTiles(Viewport::FromDegrees(yaw, 0, 90, 90).Normalized(), kErp, c).Size() / 24.0;
    EXPECT_GE(fraction, 1.0 / 8) << yaw;
    EXPECT_LE(fraction, 1.0 / 4) << yaw;
  }
}

class OracleEquivalenceTest : public ::testing::TestWithParam<ProjectionKind> {};

TEST_P(OracleEquivalenceTest, RandomViewportsMatchOracle) {
  const Projection p = GetParam() == ProjectionKind::kErp ? kErp : kCube;
  const SequenceConfig c = MakeConfig(p.width, p.height, 6, 4);
  std::mt19937_64 rng(GetParam() == ProjectionKind::kErp ? 101 : 202);
  for (int i = 0; i < 60; ++i) {
    const Viewport v = (i % 4 == 0 ? testing::SeamViewport(rng) : testing::RandomViewport(rng))
                           .Normalized();
    const TileSet selected = SelectTiles(v, p, c);
    const TileSet oracle = TileCoverageOracle(v, p, c);
    EXPECT_TRUE(selected.IsSubsetOf(oracle));
    EXPECT_EQ(selected, oracle) << "viewport " << i;
    if (i < 10) EXPECT_EQ(oracle, IndependentCoverage(v, p, c)) << "viewport " << i;
  }
}

INSTANTIATE_TEST_SUITE_P(Projections, OracleEquivalenceTest,
                         ::testing::Values(ProjectionKind::kErp, ProjectionKind::kCubemap3x2),
                         [](const auto& info) {
                           return info.param == ProjectionKind::kErp ? "Erp" : "Cubemap";
                         });

TEST(SelectTilesTest, CoarseSamplingIsASubsetOfFine) {
  const SequenceConfig c = MakeConfig(768, 384, 12, 8);
  std::mt19937_64 rng(77);
  for (int i = 0; i < 40; ++i) {
    const Viewport v = testing::RandomViewport(rng).Normalized();
    const TileSet coarse = SelectTiles(v, kErp, c, 4 * kDegree);
    const TileSet fine = SelectTiles(v, kErp, c, 1 * kDegree);
    EXPECT_TRUE(coarse.IsSubsetOf(fine)) << i;
  }
}

TEST(SelectTilesTest, YawPeriodicity) {
  const SequenceConfig c = MakeConfig(768, 384, 6, 4);
  std::mt19937_64 rng(13);
  for (int i = 0; i < 20; ++i) {
    Viewport v = testing::RandomViewport(rng);
    Viewport turned = v;
    turned.yaw += 2 * kPi;
    EXPECT_EQ(SelectTiles(v.Normalized(), kErp, c), SelectTiles(turned.Normalized(), kErp, c));
  }
}

TEST(SelectTilesTest, Errors) {
  const SequenceConfig c = MakeConfig(768, 384, 6, 4);
  const Viewport v = Viewport::FromDegrees(0, 0, 90, 90);
  try {
    SelectTiles(v, kErp, c, 0);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBadStep);
  }
  try {
    TileCoverageOracle(v, kErp, c, 1000);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTooLarge);
  }
  EXPECT_THROW(SelectTiles(v, {ProjectionKind::kCubemap3x2, 768, 384}, c), Error);
}

}  // namespace
}  // namespace svb
