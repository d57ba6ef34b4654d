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
#include <vector>

#include "gtest/gtest.h"

namespace ldpc {
namespace {

TEST(RngTest, DeterministicFromSeed) {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.NextU64(), b.NextU64());
}

TEST(RngTest, DerivedSeedsDiffer) {
  EXPECT_NE(DeriveSeed(1, 2), DeriveSeed(2, 1));
  EXPECT_NE(DeriveSeed(1, 2, 3), DeriveSeed(1, 3, 2));
  EXPECT_NE(DeriveSeed(7, 0), DeriveSeed(7, 1));
}

TEST(RngTest, DoubleInUnitInterval) {
  Rng rng(3);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.NextDouble();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}

TEST(RngTest, IndexUniform) {
  Rng rng(11);
  const int64_t n = 7;
  const int kDraws = 70000;
  std::vector<int> counts(n, 0);
  for (int i = 0; i < kDraws; ++i) ++counts[rng.NextIndex(n)];
  const double expected = static_cast<double>(kDraws) / n;
  const double sigma = std::sqrt(expected * (1.0 - 1.0 / n));
  for (int64_t k = 0; k < n; ++k) {
    EXPECT_NEAR(counts[k], expected, 4.5 * sigma) << "bucket " << k;
  }
}

TEST(RngTest, GaussianMoments) {
  Rng rng(5);
  const int kDraws = 200000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < kDraws; ++i) {
    const double g = rng.NextGaussian();
    sum += g;
    sumsq += g * g;
  }
  const double mean = sum / kDraws;
  const double var = sumsq / kDraws - mean * mean;
  EXPECT_NEAR(mean, 0.0, 4.0 / std::sqrt(static_cast<double>(kDraws)));
  EXPECT_NEAR(var, 1.0, 4.0 * std::sqrt(2.0 / kDraws));
}

TEST(RngTest, UnitVectorHasUnitNorm) {
  Rng rng(9);
  for (int d : {2, 3, 17, 500}) {
    const Eigen::VectorXd v = UniformUnitVector(d, rng);
    EXPECT_NEAR(v.norm(), 1.0, 1e-12);
  }
}

TEST(RngTest, UnitVectorIsotropic) {
  Rng rng(13);
  const int d = 4;
  const int kDraws = 50000;
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(d);
  for (int i = 0; i < kDraws; ++i) mean += UniformUnitVector(d, rng);
  mean /= kDraws;
  // Each coordinate has variance 1/d.
  const double tol = 4.0 / std::sqrt(static_cast<double>(d) * kDraws);
  for (int j = 0; j < d; ++j) EXPECT_NEAR(mean[j], 0.0, tol);
}

}  // namespace
}  // namespace ldpc
