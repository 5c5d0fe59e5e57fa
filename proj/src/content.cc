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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "svb/codec.h"
#include "svb/error.h"

namespace svb {
namespace {

constexpr int kWaveCount = 4;
constexpr double kPosterizeStep = 16.0;
constexpr double kMaxPhaseDrift = 0.01;  // radians per frame
constexpr double kMaxDiscSpeed = 0.5;    // pixels per frame at 384 px height

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  // Uniform in [lo, hi) from the top 53 bits; independent of the standard
  // library's distribution implementations.
  double Uniform(double lo, double hi) {
    return lo + (hi - lo) * double(engine_() >> 11) * 0x1.0p-53;
  }
  int Int(int lo, int hi) { return lo + static_cast<int>(engine_() % std::uint64_t(hi - lo + 1)); }

 private:
  std::mt19937_64 engine_;
};

struct Wave {
  double amplitude;
  int cycles_x;  // whole cycles across the width so the seam is continuous
  double cycles_y;
  double phase;
  double drift;
};

struct Disc {
  double x, y, vx, vy, radius, offset;
};

}  // namespace

VideoSource GenerateContent(std::uint64_t seed, const SequenceConfig& config, int frame_count) {
  if (frame_count < 1) throw Error(ErrorCode::kBadConfig, "frame_count must be >= 1");
  if (auto problems = CheckConfig(config); !problems.empty()) {
    throw Error(ErrorCode::kBadConfig, problems.front());
  }
  const std::uint32_t w = config.width;
  const std::uint32_t h = config.height;
  const double scale = h / 384.0;
  Rng rng(seed);

  std::vector<Wave> waves(kWaveCount);
  for (Wave& wave : waves) {
    wave.amplitude = rng.Uniform(20, 50);
    wave.cycles_x = rng.Int(1, 3);
    wave.cycles_y = rng.Uniform(0.5, 2.0);
    wave.phase = rng.Uniform(0, 2 * std::numbers::pi);
    wave.drift = rng.Uniform(-kMaxPhaseDrift, kMaxPhaseDrift);
  }
  const int disc_count = std::max(1, static_cast<int>(std::lround(12.0 * w * h / (768.0 * 384.0))));
  std::vector<Disc> discs(disc_count);
  for (Disc& d : discs) {
    d.x = rng.Uniform(0, w);
    d.y = rng.Uniform(0, h);
    d.vx = rng.Uniform(-kMaxDiscSpeed, kMaxDiscSpeed) * scale;
    d.vy = rng.Uniform(-kMaxDiscSpeed / 2, kMaxDiscSpeed / 2) * scale;
    d.radius = std::max(1.0, rng.Uniform(6, 24) * scale);
    d.offset = rng.Uniform(-60, 60);
  }

  // sin(ax + by + c) = sin(ax) cos(by + c) + cos(ax) sin(by + c)
  std::vector<std::vector<double>> sin_x(kWaveCount, std::vector<double>(w));
  std::vector<std::vector<double>> cos_x(kWaveCount, std::vector<double>(w));
  for (int k = 0; k < kWaveCount; ++k) {
    for (std::uint32_t x = 0; x < w; ++x) {
      const double a = 2 * std::numbers::pi * waves[k].cycles_x * x / w;
      sin_x[k][x] = std::sin(a);
      cos_x[k][x] = std::cos(a);
    }
  }

  VideoSource source{config, {}, seed};
  source.frames.reserve(frame_count);
  std::vector<double> field(w);
  for (int t = 0; t < frame_count; ++t) {
    RasterFrame frame(w, h);
    for (std::uint32_t y = 0; y < h; ++y) {
      std::fill(field.begin(), field.end(), 0.0);
      for (int k = 0; k < kWaveCount; ++k) {
        const Wave& wave = waves[k];
        const double b = 2 * std::numbers::pi * wave.cycles_y * y / h + wave.phase + wave.drift * t;
        const double sb = wave.amplitude * std::sin(b);
        const double cb = wave.amplitude * std::cos(b);
        for (std::uint32_t x = 0; x < w; ++x) field[x] += sin_x[k][x] * cb + cos_x[k][x] * sb;
      }
      auto row = frame.Row(y);
      for (std::uint32_t x = 0; x < w; ++x) {
        const double v = 128.0 + kPosterizeStep * std::floor(field[x] / kPosterizeStep + 0.5);
        row[x] = static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
      }
    }
    for (const Disc& d : discs) {
      const double cx = std::fmod(std::fmod(d.x + d.vx * t, w) + w, w);
      const double cy = std::fmod(std::fmod(d.y + d.vy * t, h) + h, h);
      const int r = static_cast<int>(std::ceil(d.radius));
      for (int dy = -r; dy <= r; ++dy) {
        const int py = static_cast<int>(std::floor(cy)) + dy;
        const std::uint32_t y = static_cast<std::uint32_t>((py % int(h) + int(h)) % int(h));
        for (int dx = -r; dx <= r; ++dx) {
          const int px = static_cast<int>(std::floor(cx)) + dx;
          const double ex = px - cx;
          const double ey = py - cy;
          if (ex * ex + ey * ey >= d.radius * d.radius) continue;
          const std::uint32_t x = static_cast<std::uint32_t>((px % int(w) + int(w)) % int(w));
          const double v = frame.At(x, y) + d.offset;
          frame.At(x, y) = static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
        }
      }
    }
    source.frames.push_back(std::move(frame));
  }
  return source;
}

}  // namespace svb
