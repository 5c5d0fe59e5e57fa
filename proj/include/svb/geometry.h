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

// Viewport-to-tile mapping for ERP and 3x2 cube-map frames.
//
// Conventions: x forward, y left, z up. A viewport looks along
// (cos(pitch) cos(yaw), cos(pitch) sin(yaw), sin(pitch)); its field of view
// is the set of directions whose azimuth and elevation, measured in the
// viewport's own frame (yaw applied first, then pitch, no roll), lie within
// +-h_fov/2 and +-v_fov/2.

#include <cstddef>
#include <cstdint>
#include <numbers>
#include <vector>

#include "svb/container.h"
#include "svb/tile_set.h"

namespace svb {

struct Vec3 {
  double x = 0;
  double y = 0;
  double z = 0;
};

double Norm(const Vec3& v);

struct Viewport {
  double yaw = 0;    // radians, normalized into [-pi, pi)
  double pitch = 0;  // radians, [-pi/2, pi/2]
  double h_fov = 0;  // radians, (0, 2pi]
  double v_fov = 0;  // radians, (0, pi]

  static Viewport FromDegrees(double yaw, double pitch, double h_fov, double v_fov);
  // Copy with yaw wrapped into [-pi, pi). Throws Error(kBadArgs) when any
  // field is out of range or not finite.
  Viewport Normalized() const;
};

inline constexpr double kDegree = std::numbers::pi / 180.0;
inline constexpr double kDefaultStep = 0.25 * kDegree;
inline constexpr std::size_t kDefaultPixelBudget = std::size_t{1} << 24;

enum class ProjectionKind { kErp, kCubemap3x2 };

struct Projection {
  ProjectionKind kind = ProjectionKind::kErp;
  std::uint32_t width = 0;
  std::uint32_t height = 0;
};

// Throws Error(kBadArgs) for zero sizes or a cube map without square faces.
void CheckProjection(const Projection& projection);

struct PixelCoord {
  double u = 0;
  double v = 0;
};

// Sampled rays covering the viewport: an angular grid at `step` spacing that
// always includes the centre, the edges and the four corners.
// Throws Error(kBadStep) unless 0 < step <= min(h_fov, v_fov) / 2.
std::vector<Vec3> ViewportDirections(const Viewport& viewport, double step);

// Membership in the viewport's angular window (inclusive).
bool InViewport(const Viewport& viewport, const Vec3& direction);

PixelCoord ProjectErp(const Vec3& direction, std::uint32_t width, std::uint32_t height);
// Face order in the 3x2 layout: top row left, front, right; bottom row
// bottom, back, top.
PixelCoord ProjectCubemap(const Vec3& direction, std::uint32_t width, std::uint32_t height);
PixelCoord Project(const Projection& projection, const Vec3& direction);

// Direction through a frame position (pixel centres are at +0.5).
Vec3 UnprojectErp(double u, double v, std::uint32_t width, std::uint32_t height);
Vec3 UnprojectCubemap(double u, double v, std::uint32_t width, std::uint32_t height);
Vec3 Unproject(const Projection& projection, double u, double v);

// Grid tile holding frame pixel (px, py).
std::uint32_t TileOfPixel(const SequenceConfig& config, const Projection& projection,
                          std::uint32_t px, std::uint32_t py);

// Union of the tiles whose pixels are hit by sampled rays, counting a hit
// only when the pixel's centre is inside the viewport.
// Throws Error(kBadStep), Error(kBadArgs).
TileSet SelectTiles(const Viewport& viewport, const Projection& projection,
                    const SequenceConfig& config, double step = kDefaultStep);

// Brute force: every pixel centre is unprojected and tested for membership.
// Throws Error(kTooLarge) when width * height exceeds pixel_budget.
TileSet TileCoverageOracle(const Viewport& viewport, const Projection& projection,
                           const SequenceConfig& config,
                           std::size_t pixel_budget = kDefaultPixelBudget);

}  // namespace svb
