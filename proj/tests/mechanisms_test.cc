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

#include "ldpc/mechanisms.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "gtest/gtest.h"
#include "ldpc/errors.h"
#include "ldpc/numerics.h"

namespace ldpc {
namespace {

// Quadrature oracle for the unbiasing scale: m equals E[<z, x>] where the
// inner product t has density proportional to (1 - t^2)^((d-3)/2),
// restricted to the cap [gamma, 1] with probability p0 and its complement
// otherwise.
double QuadratureScaleOracle(const PrivUnitParams& p) {
  const double power = 0.5 * (p.d - 3.0);
  auto density = [power](double t) { return std::pow(1.0 - t * t, power); };
  // Composite Simpson weights 1,4,2,...,4,1 over an odd grid.
  auto integrate = [&](double lo, double hi, auto f) {
    const int kSteps = 2000001;
    const double h = (hi - lo) / (kSteps - 1);
    double acc = 0.0;
    for (int i = 0; i < kSteps; ++i) {
      const double t = lo + i * h;
      double w;
      if (i == 0 || i == kSteps - 1) {
        w = 1.0;
      } else if (i % 2 == 1) {
        w = 4.0;
      } else {
        w = 2.0;
      }
      acc += w * f(t);
    }
    return acc * h / 3.0;
  };
  const double eps_t = 1e-12;
  const double in_mass = integrate(p.gamma, 1.0 - eps_t, density);
  const double in_mean = integrate(p.gamma, 1.0 - eps_t,
                                   [&](double t) { return t * density(t); });
  const double out_mass = integrate(-1.0 + eps_t, p.gamma, density);
  const double out_mean = integrate(-1.0 + eps_t, p.gamma,
                                    [&](double t) { return t * density(t); });
  return p.p0 * in_mean / in_mass + (1.0 - p.p0) * out_mean / out_mass;
}

// Exact conditional probability that the subset output contains the input.
double SubsetInCapProbability(const SubsetParams& p) {
  const double e = std::exp(p.eps);
  return p.s * e / (p.s * e + (p.d - p.s));
}

// All weight-s binary strings of length d, as sorted supports.
std::vector<SHotVector> EnumerateOutputs(int d, int s) {
  std::vector<SHotVector> out;
  std::vector<int32_t> comb(s);
  for (int i = 0; i < s; ++i) comb[i] = i;
  while (true) {
    out.push_back(SHotVector{d, comb});
    int i = s - 1;
    while (i >= 0 && comb[i] == d - s + i) --i;
    if (i < 0) break;
    ++comb[i];
    for (int j = i + 1; j < s; ++j) comb[j] = comb[j - 1] + 1;
  }
  return out;
}

double SubsetPmf(const SubsetParams& p, int x, const SHotVector& z) {
  const CapLevels levels = AsCapLevels(p);
  return z.Contains(x) ? levels.c1 : levels.c2;
}

TEST(CalibratePrivUnitTest, BranchOneExample) {
  // eps = 2, mu = 0.5 puts one nat in the cap: gamma =
  // tanh(1/2) sqrt(pi/4) for d = 3.
  const PrivUnitParams p = CalibratePrivUnit(2.0, 3, 0.5);
  const double want = (std::exp(1.0) - 1.0) / (std::exp(1.0) + 1.0) *
                      std::sqrt(M_PI / 4.0);
  EXPECT_NEAR(p.gamma, want, 1e-12);
  EXPECT_NEAR(p.gamma, 0.4095, 1e-4);
  EXPECT_NEAR(p.p0, std::exp(1.0) / (1.0 + std::exp(1.0)), 1e-12);
}

TEST(CalibratePrivUnitTest, FullBudgetOnCapGivesEvenCoin) {
  const PrivUnitParams p = CalibratePrivUnit(4.0, 16, 1.0);
  EXPECT_DOUBLE_EQ(p.p0, 0.5);
  EXPECT_GT(p.gamma, 0.0);
}

TEST(CalibratePrivUnitTest, BranchTwoWinsWhenFeasible) {
  // d = 10, four nats on the cap: branch two is feasible and larger.
  const PrivUnitParams p = CalibratePrivUnit(4.0, 10, 1.0);
  const double branch1 = std::tanh(2.0) * std::sqrt(M_PI / 18.0);
  EXPECT_GT(p.gamma, branch1);
  EXPECT_GE(p.gamma, std::sqrt(2.0 / 10.0));
  // The chosen gamma saturates the branch-two budget.
  const double budget = 0.5 * std::log(10.0) + std::log(6.0) -
                        4.5 * std::log1p(-p.gamma * p.gamma) + std::log(p.gamma);
  EXPECT_NEAR(budget, 4.0, 1e-9);
}

TEST(CalibratePrivUnitTest, HighDimensionalRatioBound) {
  const PrivUnitParams p = CalibratePrivUnit(6.0, 500, 0.5);
  const CapLevels levels = AsCapLevels(p);
  EXPECT_LE(levels.c1 / levels.c2, std::exp(6.0) * (1.0 + 1e-9));
  EXPECT_GE(levels.c1, levels.c2);
}

TEST(CalibratePrivUnitTest, RejectsBadArguments) {
  EXPECT_THROW(CalibratePrivUnit(0.0, 3, 0.5), std::invalid_argument);
  EXPECT_THROW(CalibratePrivUnit(1.0, 1, 0.5), std::invalid_argument);
  EXPECT_THROW(CalibratePrivUnit(1.0, 3, 1.5), std::invalid_argument);
}

TEST(PrivUnitScalesTest, SymmetricMechanismHasZeroScale) {
  PrivUnitParams p;
  p.eps = 1.0;
  p.d = 3;
  p.mu = 0.0;
  p.gamma = 0.0;
  p.p0 = 0.5;
  EXPECT_DOUBLE_EQ(PrivUnitScales(p).m, 0.0);
}

TEST(PrivUnitScalesTest, MatchesQuadratureOracle) {
  for (const auto& [eps, d, mu] : std::vector<std::tuple<double, int, double>>{
           {2.0, 3, 0.5}, {3.0, 10, 0.5}, {6.0, 25, 0.5}, {1.0, 4, 1.0}}) {
    const PrivUnitParams p = CalibratePrivUnit(eps, d, mu);
    const double got = PrivUnitScales(p).m;
    const double want = QuadratureScaleOracle(p);
    EXPECT_NEAR(got, want, 1e-8 * std::fabs(want)) << "eps=" << eps << " d=" << d;
  }
}

TEST(PrivUnitScalesTest, LargeDimensionStaysFinite) {
  const PrivUnitParams p = CalibratePrivUnit(6.0, 500, 0.5);
  const double m = PrivUnitScales(p).m;
  EXPECT_TRUE(std::isfinite(m));
  EXPECT_GT(m, 0.0);
}

TEST(SamplePrivUnitTest, DegenerateCoinAlwaysLandsInCap) {
  PrivUnitParams p = CalibratePrivUnit(3.0, 6, 0.5);
  p.p0 = 1.0;
  Rng rng(21);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(6);
  x[0] = 1.0;
  for (int i = 0; i < 2000; ++i) {
    const Eigen::VectorXd z = SamplePrivUnit(x, p, rng);
    EXPECT_GE(z.dot(x), p.gamma);
  }
}

TEST(SamplePrivUnitTest, UnitNormAndCapFrequency) {
  const PrivUnitParams p = CalibratePrivUnit(2.0, 3, 0.5);
  Rng rng(22);
  Eigen::VectorXd x(3);
  x << 0.6, 0.0, 0.8;
  const int kDraws = 100000;
  int in_cap = 0;
  for (int i = 0; i < kDraws; ++i) {
    const Eigen::VectorXd z = SamplePrivUnit(x, p, rng);
    ASSERT_NEAR(z.norm(), 1.0, 1e-9);
    if (z.dot(x) >= p.gamma) ++in_cap;
  }
  const double freq = static_cast<double>(in_cap) / kDraws;
  const double sigma = std::sqrt(p.p0 * (1.0 - p.p0) / kDraws);
  EXPECT_NEAR(freq, p.p0, 4.0 * sigma);
}

TEST(SamplePrivUnitTest, InCapInnerProductLawPassesKs) {
  // u = (1 + t)/2 restricted to in-cap draws follows Beta(a, a) truncated
  // to [tau, 1]; one-percent Kolmogorov-Smirnov test.
  const PrivUnitParams p = CalibratePrivUnit(2.0, 8, 0.5);
  const double alpha = 0.5 * (p.d - 1.0);
  const double tau = 0.5 * (1.0 + p.gamma);
  const BetaShape shape{alpha, alpha};
  const double i_tau = RegIncBeta(tau, shape);

  Rng rng(23);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(p.d);
  x[2] = 1.0;
  std::vector<double> us;
  const int kDraws = 60000;
  for (int i = 0; i < kDraws; ++i) {
    const Eigen::VectorXd z = SamplePrivUnit(x, p, rng);
    const double t = z.dot(x);
    if (t >= p.gamma) us.push_back(0.5 * (1.0 + t));
  }
  std::sort(us.begin(), us.end());
  double ks = 0.0;
  const double n = static_cast<double>(us.size());
  for (size_t i = 0; i < us.size(); ++i) {
    const double cdf = (RegIncBeta(us[i], shape) - i_tau) / (1.0 - i_tau);
    ks = std::max(ks, std::fabs(cdf - (i + 1) / n));
    ks = std::max(ks, std::fabs(cdf - i / n));
  }
  EXPECT_LT(ks, 1.628 / std::sqrt(n));
}

TEST(PrivUnitEstimateTest, InverseScaling) {
  const PrivUnitParams p = CalibratePrivUnit(2.0, 3, 0.5);
  const EstimatorScales scales = PrivUnitScales(p);
  Eigen::VectorXd x(3);
  x << 1.0, 0.0, 0.0;
  const Eigen::VectorXd z = scales.m * x;
  EXPECT_TRUE(PrivUnitEstimate(z, scales).isApprox(x, 1e-12));
}

TEST(PrivUnitEstimateTest, EstimateNormIsReciprocalScale) {
  const PrivUnitParams p = CalibratePrivUnit(3.0, 5, 0.5);
  const EstimatorScales scales = PrivUnitScales(p);
  Rng rng(31);
  Eigen::VectorXd x = UniformUnitVector(5, rng);
  for (int i = 0; i < 50; ++i) {
    const Eigen::VectorXd z = SamplePrivUnit(x, p, rng);
    EXPECT_NEAR(PrivUnitEstimate(z, scales).norm(), 1.0 / scales.m, 1e-9);
  }
}

TEST(PrivUnitEstimateTest, ZeroScaleIsAnError) {
  Eigen::VectorXd z = Eigen::VectorXd::Ones(3);
  EXPECT_THROW(Debias(z, {0.0, 0.0}), DegeneracyError);
}

TEST(MechanismMonteCarloTest, RawMechanismsUnbiased) {
  // Five-standard-error componentwise check at d = 10 for both mechanisms.
  const int d = 10;
  const int kDraws = 1000000;
  for (double eps : {1.0, 4.0}) {
    {
      const PrivUnitParams p = CalibratePrivUnit(eps, d, 0.5);
      const EstimatorScales scales = PrivUnitScales(p);
      Rng rng(41);
      Eigen::VectorXd x = UniformUnitVector(d, rng);
      Eigen::VectorXd sum = Eigen::VectorXd::Zero(d);
      Eigen::VectorXd sumsq = Eigen::VectorXd::Zero(d);
      for (int i = 0; i < kDraws; ++i) {
        const Eigen::VectorXd est = PrivUnitEstimate(SamplePrivUnit(x, p, rng), scales);
        sum += est;
        sumsq += est.cwiseProduct(est);
      }
      for (int j = 0; j < d; ++j) {
        const double mean = sum[j] / kDraws;
        const double var = sumsq[j] / kDraws - mean * mean;
        const double se = std::sqrt(var / kDraws);
        EXPECT_NEAR(mean, x[j], 5.0 * se) << "privunit eps=" << eps << " coord " << j;
      }
    }
    {
      const SubsetParams p = CalibrateSubset(eps, d);
      const EstimatorScales scales = SubsetScales(p);
      Rng rng(42);
      const int x = 3;
      Eigen::VectorXd sum = Eigen::VectorXd::Zero(d);
      Eigen::VectorXd sumsq = Eigen::VectorXd::Zero(d);
      for (int i = 0; i < kDraws; ++i) {
        const Eigen::VectorXd est = SubsetEstimate(SampleSubset(x, p, rng), scales);
        sum += est;
        sumsq += est.cwiseProduct(est);
      }
      for (int j = 0; j < d; ++j) {
        const double mean = sum[j] / kDraws;
        const double var = sumsq[j] / kDraws - mean * mean;
        const double se = std::sqrt(var / kDraws);
        const double want = j == x ? 1.0 : 0.0;
        EXPECT_NEAR(mean, want, 5.0 * se) << "ss eps=" << eps << " coord " << j;
      }
    }
  }
}

TEST(CalibrateSubsetTest, SubsetSizeExamples) {
  EXPECT_EQ(CalibrateSubset(6.0, 500).s, 2);
  EXPECT_EQ(CalibrateSubset(1.0, 500).s, 135);
  EXPECT_EQ(CalibrateSubset(std::log(2.0), 3).s, 1);
}

TEST(SampleSubsetTest, TinyInstancePmf) {
  // d = 3, s = 1, e^eps = 2: P(z = e_x) = 1/2, others 1/4 each.
  const SubsetParams p{std::log(2.0), 3, 1};
  Rng rng(51);
  const int kDraws = 100000;
  std::vector<int> counts(3, 0);
  for (int i = 0; i < kDraws; ++i) {
    const SHotVector z = SampleSubset(0, p, rng);
    ASSERT_EQ(z.ones.size(), 1u);
    ++counts[z.ones[0]];
  }
  auto near = [&](int idx, double want) {
    const double sigma = std::sqrt(want * (1.0 - want) / kDraws);
    EXPECT_NEAR(static_cast<double>(counts[idx]) / kDraws, want, 4.0 * sigma);
  };
  near(0, 0.5);
  near(1, 0.25);
  near(2, 0.25);
}

TEST(SampleSubsetTest, FullSubsetIsAllOnes) {
  const SubsetParams p{1.0, 4, 4};
  Rng rng(52);
  const SHotVector z = SampleSubset(2, p, rng);
  EXPECT_EQ(z.ones, (std::vector<int32_t>{0, 1, 2, 3}));
}

TEST(SampleSubsetTest, WeightAlwaysS) {
  const SubsetParams p = CalibrateSubset(1.0, 20);
  Rng rng(53);
  for (int i = 0; i < 2000; ++i) {
    EXPECT_EQ(SampleSubset(i % 20, p, rng).ones.size(), static_cast<size_t>(p.s));
  }
}

TEST(SampleSubsetTest, ExhaustivePmfMatchAtDFour) {
  const SubsetParams p = CalibrateSubset(1.0, 4);
  ASSERT_EQ(p.s, 2);
  const auto outputs = EnumerateOutputs(4, 2);
  ASSERT_EQ(outputs.size(), 6u);
  const int x = 1;
  Rng rng(54);
  const int kDraws = 1000000;
  std::vector<int> counts(outputs.size(), 0);
  for (int i = 0; i < kDraws; ++i) {
    const SHotVector z = SampleSubset(x, p, rng);
    for (size_t o = 0; o < outputs.size(); ++o) {
      if (outputs[o] == z) {
        ++counts[o];
        break;
      }
    }
  }
  for (size_t o = 0; o < outputs.size(); ++o) {
    const double want = SubsetPmf(p, x, outputs[o]);
    const double sigma = std::sqrt(want * (1.0 - want) / kDraws);
    EXPECT_NEAR(static_cast<double>(counts[o]) / kDraws, want, 4.0 * sigma) << "outcome " << o;
  }
}

TEST(SubsetScalesTest, TinyInstanceValues) {
  const SubsetParams p{std::log(2.0), 3, 1};
  const EstimatorScales s = SubsetScales(p);
  EXPECT_NEAR(s.m, 0.25, 1e-15);
  EXPECT_NEAR(s.b, 0.25, 1e-15);
  // Marginal identity: q_x = m + b equals the in-cap marginal mass.
  EXPECT_NEAR(s.m + s.b, SubsetInCapProbability(p), 1e-15);
}

TEST(SubsetScalesTest, NoBudgetMeansNoSignal) {
  const SubsetParams p{0.0, 5, 2};
  EXPECT_DOUBLE_EQ(SubsetScales(p).m, 0.0);
}

TEST(SubsetScalesTest, MarginalIdentityHighDimension) {
  const SubsetParams p = CalibrateSubset(6.0, 500);
  const EstimatorScales s = SubsetScales(p);
  EXPECT_NEAR(s.m + s.b, SubsetInCapProbability(p), 1e-12);
}

TEST(SubsetEstimateTest, ExhaustiveExpectationIsOneHot) {
  const SubsetParams p{std::log(2.0), 3, 1};
  const EstimatorScales s = SubsetScales(p);
  const auto outputs = EnumerateOutputs(3, 1);
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(3);
  for (const auto& z : outputs) {
    mean += SubsetPmf(p, 0, z) * SubsetEstimate(z, s);
  }
  EXPECT_NEAR(mean[0], 1.0, 1e-12);
  EXPECT_NEAR(mean[1], 0.0, 1e-12);
  EXPECT_NEAR(mean[2], 0.0, 1e-12);
}

TEST(SubsetEstimateTest, CoordinateSumIsConstant) {
  const SubsetParams p = CalibrateSubset(2.0, 12);
  const EstimatorScales s = SubsetScales(p);
  Rng rng(61);
  const double expected = (p.s - p.d * s.b) / s.m;
  for (int i = 0; i < 200; ++i) {
    const SHotVector z = SampleSubset(i % p.d, p, rng);
    EXPECT_NEAR(SubsetEstimate(z, s).sum(), expected, 1e-9);
  }
}

TEST(RawLdpTest, SubsetRatioIsExactlyEps) {
  // Exhaustive over all (x, x', z) for small d.
  for (int d : {3, 4, 5}) {
    const SubsetParams p = CalibrateSubset(1.0, d);
    const auto outputs = EnumerateOutputs(d, p.s);
    double max_log_ratio = 0.0;
    for (int x = 0; x < d; ++x) {
      for (int y = 0; y < d; ++y) {
        for (const auto& z : outputs) {
          const double ratio = SubsetPmf(p, x, z) / SubsetPmf(p, y, z);
          max_log_ratio = std::max(max_log_ratio, std::log(ratio));
        }
      }
    }
    EXPECT_NEAR(max_log_ratio, 1.0, 1e-12) << "d=" << d;
  }
}

TEST(AsCapLevelsTest, SubsetTinyInstance) {
  const SubsetParams p{std::log(2.0), 3, 1};
  const CapLevels levels = AsCapLevels(p);
  EXPECT_NEAR(levels.cap_mass, 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(levels.c1 / levels.c2, 2.0, 1e-12);
  EXPECT_NEAR(levels.c1, 0.5, 1e-12);
  EXPECT_NEAR(levels.c2, 0.25, 1e-12);
}

TEST(AsCapLevelsTest, PrivUnitClosedFormCapMass) {
  // d = 3: I_x(1, 1/2) = 1 - sqrt(1 - x).
  const PrivUnitParams p = CalibratePrivUnit(2.0, 3, 0.5);
  const CapLevels levels = AsCapLevels(p);
  const double x = 1.0 - p.gamma * p.gamma;
  EXPECT_NEAR(levels.cap_mass, (1.0 - std::sqrt(1.0 - x)) / 2.0, 1e-12);
  EXPECT_NEAR(levels.cap_mass, 0.2952, 2e-4);
}

TEST(AsCapLevelsTest, DefinitionConditionHolds) {
  for (const auto& [eps, d] : std::vector<std::pair<double, int>>{
           {1.0, 3}, {2.0, 10}, {6.0, 100}, {6.0, 500}}) {
    const CapLevels pu = AsCapLevels(CalibratePrivUnit(eps, d, 0.5));
    EXPECT_GE(pu.cap_mass, pu.c2 / (2.0 * pu.c1) - 1e-12);
    const CapLevels ss = AsCapLevels(CalibrateSubset(eps, d));
    EXPECT_GE(ss.cap_mass, ss.c2 / (2.0 * ss.c1) - 1e-12);
  }
}

TEST(JsonRoundTripTest, BothMechanisms) {
  const PrivUnitParams pu = CalibratePrivUnit(4.0, 64, 0.3);
  const PrivUnitParams pu2 = PrivUnitParamsFromJson(ToJson(pu));
  EXPECT_EQ(pu2.d, pu.d);
  EXPECT_DOUBLE_EQ(pu2.gamma, pu.gamma);
  EXPECT_DOUBLE_EQ(pu2.p0, pu.p0);
  EXPECT_DOUBLE_EQ(pu2.mu, pu.mu);

  const SubsetParams ss = CalibrateSubset(2.0, 40);
  const SubsetParams ss2 = SubsetParamsFromJson(ToJson(ss));
  EXPECT_EQ(ss2.s, ss.s);
  EXPECT_EQ(ss2.d, ss.d);
  EXPECT_THROW(SubsetParamsFromJson(ToJson(pu)), std::invalid_argument);
}

TEST(DegenerateDimensionTest, BothMechanismsRunAtDTwo) {
  const PrivUnitParams pu = CalibratePrivUnit(2.0, 2, 0.5);
  EXPECT_GT(pu.gamma, 0.0);
  EXPECT_LE(pu.gamma, 1.0);
  Rng rng(81);
  Eigen::VectorXd x(2);
  x << std::sqrt(0.5), -std::sqrt(0.5);
  for (int i = 0; i < 200; ++i) {
    EXPECT_NEAR(SamplePrivUnit(x, pu, rng).norm(), 1.0, 1e-9);
  }

  const SubsetParams ss = CalibrateSubset(1.0, 2);
  EXPECT_EQ(ss.s, 1);
  const EstimatorScales scales = SubsetScales(ss);
  const double e = std::exp(1.0);
  EXPECT_NEAR(scales.m, (e - 1.0) / (e + 1.0), 1e-12);
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(SampleSubset(i % 2, ss, rng).ones.size(), 1u);
  }
}

TEST(MechanismFrontEndTest, CandidateScanMatchesMaterialized) {
  const PrivUnitMechanism pu(CalibratePrivUnit(3.0, 12, 0.5));
  Rng rng(71);
  const Eigen::VectorXd x = UniformUnitVector(12, rng);
  for (int64_t k = 0; k < 300; ++k) {
    const Eigen::VectorXd z = pu.CandidateAt(99, k);
    EXPECT_NEAR(z.norm(), 1.0, 1e-12);
    EXPECT_EQ(pu.CandidateInCap(99, k, x), pu.InCap(x, z)) << "k=" << k;
  }

  const SubsetMechanism ss(CalibrateSubset(1.0, 9));
  for (int64_t k = 0; k < 300; ++k) {
    const SHotVector z = ss.CandidateAt(99, k);
    EXPECT_EQ(z.ones.size(), static_cast<size_t>(ss.params().s));
    EXPECT_EQ(ss.CandidateInCap(99, k, 4), ss.InCap(4, z)) << "k=" << k;
  }
}

}  // namespace
}  // namespace ldpc
