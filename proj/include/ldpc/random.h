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

#ifndef LDPC_RANDOM_H_
#define LDPC_RANDOM_H_

#include <cstdint>

#include <Eigen/Dense>

namespace ldpc {

inline constexpr uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

inline uint64_t Mix64(uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// SplitMix64 stream. Every source of randomness in the library is one of
// these, seeded by an explicit 64-bit key, so runs are reproducible from
// seeds alone and streams can be derived per user, per trial, and per
// candidate without materializing any prefix.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t NextU64() {
    state_ += kGoldenGamma;
    return Mix64(state_);
  }

  // Uniform in [0, 1) with 53 random bits.
  double NextDouble() { return static_cast<double>(NextU64() >> 11) * 0x1.0p-53; }

  bool NextBernoulli(double p) { return NextDouble() < p; }

  // Unbiased uniform index in [0, n). Lemire's multiply-shift rejection.
  int64_t NextIndex(int64_t n);

  // Standard normal via a 128-layer ziggurat.
  double NextGaussian();

 private:
  double GaussianSlowPath(uint64_t bits, int layer);

  uint64_t state_;
};

// Key derivation for independent substreams. Order-sensitive in both
// arguments, so DeriveSeed(s, a, b) and DeriveSeed(s, b, a) differ.
uint64_t DeriveSeed(uint64_t seed, uint64_t a);
uint64_t DeriveSeed(uint64_t seed, uint64_t a, uint64_t b);
uint64_t DeriveSeed(uint64_t seed, uint64_t a, uint64_t b, uint64_t c);

void FillGaussian(Rng& rng, Eigen::Ref<Eigen::VectorXd> out);

Eigen::VectorXd UniformUnitVector(int d, Rng& rng);

}  // namespace ldpc

#endif  // LDPC_RANDOM_H_
