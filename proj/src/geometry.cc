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

#include <algorithm>
#include <cmath>
#include <string>

#include "svb/error.h"

namespace svb {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2 * std::numbers::pi;
// Inclusive tolerance on the angular window edges.
constexpr double kAngleEpsilon = 1e-12;

struct Face {
  int cell_x;
  int cell_y;
  Vec3 normal;
  Vec3 right;
  Vec3 up;
};

// Indexed by dominant axis: +x, -x, +y, -y, +z, -z.
constexpr Face kFaces[6] = {
    {1, 0, {1, 0, 0}, {0, -1, 0}, {0, 0, 1}},   // front
    {1, 1, {-1, 0, 0}, {0, 1, 0}, {0, 0, 1}},   // back
    {0, 0, {0, 1, 0}, {1, 0, 0}, {0, 0, 1}},    // left
    {2, 0, {0, -1, 0}, {-1, 0, 0}, {0, 0, 1}},  // right
    {2, 1, {0, 0, 1}, {0, -1, 0}, {-1, 0, 0}},  // top
    {0, 1, {0, 0, -1}, {0, -1, 0}, {1, 0, 0}},  // bottom
};

double Dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

double WrapAngle(double a) {
  double r = std::fmod(a + kPi, kTwoPi);
  if (r < 0) r += kTwoPi;
  return r - kPi;
}

int DominantFace(const Vec3& d) {
  const double ax = std::abs(d.x), ay = std::abs(d.y), az = std::abs(d.z);
  if (ax >= ay && ax >= az) return d.x >= 0 ? 0 : 1;
  if (ay >= az) return d.y >= 0 ? 2 : 3;
  return d.z >= 0 ? 4 : 5;
}

double ClampBelow(double value, double limit) {
  return value < limit ? value : std::nextafter(limit, 0.0);
}

// Rotation from viewport-local coordinates to world coordinates.
struct Rotation {
  double cy, sy, cp, sp;

  explicit Rotation(const Viewport& v)
      : cy(std::cos(v.yaw)), sy(std::sin(v.yaw)), cp(std::cos(v.pitch)), sp(std::sin(v.pitch)) {}

  Vec3 ToWorld(const Vec3& l) const {
    const double x1 = l.x * cp - l.z * sp;
    const double z1 = l.x * sp + l.z * cp;
    return {x1 * cy - l.y * sy, x1 * sy + l.y * cy, z1};
  }

  Vec3 ToLocal(const Vec3& w) const {
    const double x1 = w.x * cy + w.y * sy;
    const double y1 = -w.x * sy + w.y * cy;
    return {x1 * cp + w.z * sp, y1, -x1 * sp + w.z * cp};
  }
};

bool InWindow(const Viewport& v, const Vec3& local) {
  const double azimuth = std::atan2(local.y, local.x);
  const double elevation = std::asin(std::clamp(local.z / Norm(local), -1.0, 1.0));
  return std::abs(azimuth) <= v.h_fov / 2 + kAngleEpsilon &&
         std::abs(elevation) <= v.v_fov / 2 + kAngleEpsilon;
}

std::vector<double> AxisSamples(double half_extent, double step) {
  const auto n = static_cast<long>(std::floor(half_extent / step + 1e-9));
  std::vector<double> samples;
  samples.reserve(2 * n + 3);
  if (std::abs(n * step - half_extent) > 1e-12) samples.push_back(-half_extent);
  for (long i = -n; i <= n; ++i) samples.push_back(i * step);
  if (std::abs(n * step - half_extent) > 1e-12) samples.push_back(half_extent);
  return samples;
}

}  // namespace

double Norm(const Vec3& v) { return std::sqrt(Dot(v, v)); }

Viewport Viewport::FromDegrees(double yaw, double pitch, double h_fov, double v_fov) {
  return Viewport{yaw * kDegree, pitch * kDegree, h_fov * kDegree, v_fov * kDegree}.Normalized();
}

Viewport Viewport::Normalized() const {
  if (!std::isfinite(yaw) || !std::isfinite(pitch) || !std::isfinite(h_fov) ||
      !std::isfinite(v_fov)) {
    throw Error(ErrorCode::kBadArgs, "viewport fields must be finite");
  }
  if (std::abs(pitch) > kPi / 2 + 1e-12) throw Error(ErrorCode::kBadArgs, "pitch out of range");
  if (!(h_fov > 0) || h_fov > kTwoPi + 1e-12) throw Error(ErrorCode::kBadArgs, "h_fov out of range");
  if (!(v_fov > 0) || v_fov > kPi + 1e-12) throw Error(ErrorCode::kBadArgs, "v_fov out of range");
  return Viewport{WrapAngle(yaw), std::clamp(pitch, -kPi / 2, kPi / 2), std::min(h_fov, kTwoPi),
                  std::min(v_fov, kPi)};
}

void CheckProjection(const Projection& p) {
  if (p.width == 0 || p.height == 0) throw Error(ErrorCode::kBadArgs, "empty projection frame");
  if (p.kind == ProjectionKind::kCubemap3x2 &&
      std::uint64_t{p.width} * 2 != std::uint64_t{p.height} * 3) {
    throw Error(ErrorCode::kBadArgs, "3x2 cube map needs width*2 == height*3, got " +
                                         std::to_string(p.width) + "x" + std::to_string(p.height));
  }
}

std::vector<Vec3> ViewportDirections(const Viewport& viewport, double step) {
  const Viewport v = viewport.Normalized();
  if (!(step > 0) || step > std::min(v.h_fov, v.v_fov) / 2 + 1e-15) {
    throw Error(ErrorCode::kBadStep, "step must be in (0, min(h_fov, v_fov)/2]");
  }
  const Rotation rotation(v);
  const std::vector<double> azimuths = AxisSamples(v.h_fov / 2, step);
  const std::vector<double> elevations = AxisSamples(v.v_fov / 2, step);
  std::vector<Vec3> out;
  out.reserve(azimuths.size() * elevations.size());
  for (double e : elevations) {
    const double ce = std::cos(e), se = std::sin(e);
    for (double a : azimuths) {
      out.push_back(rotation.ToWorld({ce * std::cos(a), ce * std::sin(a), se}));
    }
  }
  return out;
}

bool InViewport(const Viewport& viewport, const Vec3& direction) {
  const Viewport v = viewport.Normalized();
  return InWindow(v, Rotation(v).ToLocal(direction));
}

PixelCoord ProjectErp(const Vec3& d, std::uint32_t width, std::uint32_t height) {
  const double longitude = std::atan2(d.y, d.x);
  const double latitude = std::asin(std::clamp(d.z / Norm(d), -1.0, 1.0));
  double u = (longitude / kTwoPi + 0.5) * width;
  if (u >= width) u -= width;
  if (u < 0) u += width;
  double v = (0.5 - latitude / kPi) * height;
  v = ClampBelow(std::max(v, 0.0), height);
  return {ClampBelow(u, width), v};
}

PixelCoord ProjectCubemap(const Vec3& d, std::uint32_t width, std::uint32_t height) {
  const Face& face = kFaces[DominantFace(d)];
  const double depth = Dot(d, face.normal);
  const double s = std::clamp(Dot(d, face.right) / depth, -1.0, 1.0);
  const double t = std::clamp(Dot(d, face.up) / depth, -1.0, 1.0);
  const double face_w = width / 3.0;
  const double face_h = height / 2.0;
  const double x0 = face.cell_x * face_w;
  const double y0 = face.cell_y * face_h;
  return {ClampBelow(x0 + (s + 1) / 2 * face_w, x0 + face_w),
          ClampBelow(y0 + (1 - t) / 2 * face_h, y0 + face_h)};
}

PixelCoord Project(const Projection& projection, const Vec3& direction) {
  return projection.kind == ProjectionKind::kErp
             ? ProjectErp(direction, projection.width, projection.height)
             : ProjectCubemap(direction, projection.width, projection.height);
}

Vec3 UnprojectErp(double u, double v, std::uint32_t width, std::uint32_t height) {
  const double longitude = (u / width - 0.5) * kTwoPi;
  const double latitude = (0.5 - v / height) * kPi;
  const double cl = std::cos(latitude);
  return {cl * std::cos(longitude), cl * std::sin(longitude), std::sin(latitude)};
}

Vec3 UnprojectCubemap(double u, double v, std::uint32_t width, std::uint32_t height) {
  const double face_w = width / 3.0;
  const double face_h = height / 2.0;
  const int cell_x = std::clamp(static_cast<int>(u / face_w), 0, 2);
  const int cell_y = std::clamp(static_cast<int>(v / face_h), 0, 1);
  const Face* face = &kFaces[0];
  for (const Face& f : kFaces) {
    if (f.cell_x == cell_x && f.cell_y == cell_y) face = &f;
  }
  const double s = 2 * (u - cell_x * face_w) / face_w - 1;
  const double t = 1 - 2 * (v - cell_y * face_h) / face_h;
  Vec3 d{face->normal.x + s * face->right.x + t * face->up.x,
         face->normal.y + s * face->right.y + t * face->up.y,
         face->normal.z + s * face->right.z + t * face->up.z};
  const double n = Norm(d);
  return {d.x / n, d.y / n, d.z / n};
}

Vec3 Unproject(const Projection& projection, double u, double v) {
  return projection.kind == ProjectionKind::kErp
             ? UnprojectErp(u, v, projection.width, projection.height)
             : UnprojectCubemap(u, v, projection.width, projection.height);
}

std::uint32_t TileOfPixel(const SequenceConfig& config, const Projection& projection,
                          std::uint32_t px, std::uint32_t py) {
  const std::uint32_t col =
      static_cast<std::uint32_t>(std::uint64_t{px} * config.tile_cols / projection.width);
  const std::uint32_t row =
      static_cast<std::uint32_t>(std::uint64_t{py} * config.tile_rows / projection.height);
  return row * config.tile_cols + col;
}

TileSet SelectTiles(const Viewport& viewport, const Projection& projection,
                    const SequenceConfig& config, double step) {
  CheckProjection(projection);
  const Viewport v = viewport.Normalized();
  const Rotation rotation(v);
  // 0 = not yet tested, 1 = centre inside, 2 = centre outside.
  std::vector<std::uint8_t> pixel_state(std::size_t{projection.width} * projection.height, 0);
  std::vector<bool> selected(config.TileCount(), false);
  for (const Vec3& d : ViewportDirections(v, step)) {
    const PixelCoord p = Project(projection, d);
    const auto px = static_cast<std::uint32_t>(p.u);
    const auto py = static_cast<std::uint32_t>(p.v);
    std::uint8_t& state = pixel_state[std::size_t{py} * projection.width + px];
    if (state == 0) {
      const Vec3 centre = Unproject(projection, px + 0.5, py + 0.5);
      state = InWindow(v, rotation.ToLocal(centre)) ? 1 : 2;
      if (state == 1) selected[TileOfPixel(config, projection, px, py)] = true;
    }
  }
  TileSet out;
  for (std::uint32_t i = 0; i < selected.size(); ++i) {
    if (selected[i]) out.Insert(i);
  }
  return out;
}

TileSet TileCoverageOracle(const Viewport& viewport, const Projection& projection,
                           const SequenceConfig& config, std::size_t pixel_budget) {
  CheckProjection(projection);
  if (std::uint64_t{projection.width} * projection.height > pixel_budget) {
    throw Error(ErrorCode::kTooLarge, "frame exceeds oracle pixel budget");
  }
  const Viewport v = viewport.Normalized();
  const Rotation rotation(v);
  std::vector<bool> selected(config.TileCount(), false);
  for (std::uint32_t py = 0; py < projection.height; ++py) {
    for (std::uint32_t px = 0; px < projection.width; ++px) {
      const std::uint32_t tile = TileOfPixel(config, projection, px, py);
      if (selected[tile]) continue;
      if (InWindow(v, rotation.ToLocal(Unproject(projection, px + 0.5, py + 0.5)))) {
        selected[tile] = true;
      }
    }
  }
  TileSet out;
  for (std::uint32_t i = 0; i < selected.size(); ++i) {
    if (selected[i]) out.Insert(i);
  }
  return out;
}

}  // namespace svb
