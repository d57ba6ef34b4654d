//
// Copyright 2026 The LDPC Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "ldpc/random.h"

#include <cmath>
#include <stdexcept>

namespace ldpc {

int64_t Rng::NextIndex(int64_t n) {
  if (n <= 0) throw std::invalid_argument("NextIndex requires n >= 1");
  const uint64_t bound = static_cast<uint64_t>(n);
  unsigned __int128 m =
      static_cast<unsigned __int128>(NextU64()) * static_cast<unsigned __int128>(bound);
  uint64_t lo = static_cast<uint64_t>(m);
  if (lo < bound) {
    const uint64_t threshold = (0 - bound) % bound;
    while (lo < threshold) {
      m = static_cast<unsigned __int128>(NextU64()) * static_cast<unsigned __int128>(bound);
      lo = static_cast<uint64_t>(m);
    }
  }
  return static_cast<int64_t>(m >> 64);
}

namespace {

// Ziggurat layout for the standard normal: 128 layers of equal area
// kZigV with base edge kZigR.
constexpr int kZigLayers = 128;
constexpr double kZigR = 3.442619855899;
constexpr double kZigV = 9.91256303526217e-3;

struct ZigguratTables {
  double x[kZigLayers + 1];
  double ratio[kZigLayers];

  ZigguratTables() {
    x[0] = kZigV / std::exp(-0.5 * kZigR * kZigR);
    x[1] = kZigR;
    x[kZigLayers] = 0.0;
    for (int i = 2; i < kZigLayers; ++i) {
      x[i] = std::sqrt(-2.0 * std::log(kZigV / x[i - 1] +
                                       std::exp(-0.5 * x[i - 1] * x[i - 1])));
    }
    for (int i = 0; i < kZigLayers; ++i) ratio[i] = x[i + 1] / x[i];
  }
};

const ZigguratTables& Zig() {
  static const ZigguratTables tables;
  return tables;
}

}  // namespace

double Rng::NextGaussian() {
  const ZigguratTables& zig = Zig();
  for (;;) {
    const uint64_t bits = NextU64();
    const int layer = static_cast<int>(bits & (kZigLayers - 1));
    const double u =
        2.0 * (static_cast<double>(bits >> 11) * 0x1.0p-53) - 1.0;
    if (std::fabs(u) < zig.ratio[layer]) return u * zig.x[layer];
    const double value = GaussianSlowPath(bits, layer);
    // The tail branch always yields a sample; the wedge branch signals a
    // resample with an exact zero, which it can never produce itself.
    if (layer == 0 || value != 0.0) return value;
  }
}

double Rng::GaussianSlowPath(uint64_t bits, int layer) {
  const ZigguratTables& zig = Zig();
  const double u = 2.0 * (static_cast<double>(bits >> 11) * 0x1.0p-53) - 1.0;
  if (layer == 0) {
    // Tail beyond the base edge.
    double x, y;
    do {
      x = -std::log(1.0 - NextDouble()) / kZigR;
      y = -std::log(1.0 - NextDouble());
    } while (y + y < x * x);
    return u < 0.0 ? -(kZigR + x) : kZigR + x;
  }
  // Wedge between the layer rectangle and the density.
  const double x = u * zig.x[layer];
  const double f0 = std::exp(-0.5 * (zig.x[layer] * zig.x[layer] - x * x));
  const double f1 =
      std::exp(-0.5 * (zig.x[layer + 1] * zig.x[layer + 1] - x * x));
  if (f1 + NextDouble() * (f0 - f1) < 1.0) return x;
  return 0.0;  // resample; exact zero never leaves the wedge branch
}

uint64_t DeriveSeed(uint64_t seed, uint64_t a) {
  return Mix64(seed + kGoldenGamma + Mix64(a + kGoldenGamma));
}

uint64_t DeriveSeed(uint64_t seed, uint64_t a, uint64_t b) {
  return DeriveSeed(DeriveSeed(seed, a), b);
}

uint64_t DeriveSeed(uint64_t seed, uint64_t a, uint64_t b, uint64_t c) {
  return DeriveSeed(DeriveSeed(seed, a, b), c);
}

void FillGaussian(Rng& rng, Eigen::Ref<Eigen::VectorXd> out) {
  for (Eigen::Index i = 0; i < out.size(); ++i) out[i] = rng.NextGaussian();
}

Eigen::VectorXd UniformUnitVector(int d, Rng& rng) {
  if (d < 1) throw std::invalid_argument("UniformUnitVector requires d >= 1");
  Eigen::VectorXd g(d);
  double norm2;
  do {
    FillGaussian(rng, g);
    norm2 = g.squaredNorm();
  } while (norm2 == 0.0);
  return g / std::sqrt(norm2);
}

}  // namespace ldpc
