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

#include "ldpc/mmrc.h"

#include <cmath>
#include <stdexcept>

#include "ldpc/errors.h"
#include "ldpc/numerics.h"

namespace ldpc {

Thresholds ThresholdsFor(const CapLevels& levels, int64_t n) {
  if (n < 1) throw std::invalid_argument("pool size must be >= 1");
  Thresholds t;
  t.expected_theta = levels.cap_mass;
  const double denom = static_cast<double>(n) *
                       (levels.cap_mass * levels.c1 + (1.0 - levels.cap_mass) * levels.c2);
  t.t_u = levels.c1 / denom;
  t.t_l = levels.c2 / denom;
  return t;
}

TwoLevelProbs MmrcTwoLevel(const CapLevels& levels, int64_t n_in, int64_t n) {
  TwoLevelProbs probs = MrcTwoLevel(levels, n_in, n);
  const Thresholds t = ThresholdsFor(levels, n);
  const double nd = static_cast<double>(n);
  const double n_in_d = static_cast<double>(n_in);

  const double max_prob = n_in > 0 ? probs.in_cap : probs.out_cap;
  const double min_prob = n_in < n ? probs.out_cap : probs.in_cap;
  if (max_prob > t.t_u) {
    // Only reachable with in-cap indices present and theta below its mean,
    // so the out-of-cap side is nonempty.
    probs.in_cap = t.t_u;
    probs.out_cap = (1.0 - n_in_d * t.t_u) / (nd - n_in_d);
  } else if (min_prob < t.t_l) {
    probs.out_cap = t.t_l;
    probs.in_cap = (1.0 - (nd - n_in_d) * t.t_l) / n_in_d;
  }
  return probs;
}

double ClampedCapProbability(const CapLevels& levels, int64_t n) {
  const double c1 = levels.c1;
  const double c2 = levels.c2;
  const double expected = levels.cap_mass;
  const double denom = expected * c1 + (1.0 - expected) * c2;
  return ExpectOverBinomial({n, expected}, [=](double theta) {
    if (theta <= expected) return theta * c1 / denom;
    return (expected * c1 + (theta - expected) * c2) / denom;
  });
}

MmrcScales MmrcPrivUnitScales(const PrivUnitParams& params, int64_t n) {
  MmrcScales scales;
  scales.p_cap = ClampedCapProbability(AsCapLevels(params), n);
  scales.m = PrivUnitScaleFromCapProb(params, scales.p_cap);
  scales.b = 0.0;
  return scales;
}

MmrcScales MmrcSubsetScales(const SubsetParams& params, int64_t n) {
  MmrcScales scales;
  scales.p_cap = ClampedCapProbability(AsCapLevels(params), n);
  const double d = params.d;
  scales.b = (params.s - scales.p_cap) / (d - 1.0);
  scales.m = scales.p_cap - scales.b;
  return scales;
}

int64_t MmrcPrivUnitCandidateCount(double eps, double p0, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  if (!(p0 > 0.5)) {
    throw InfeasibleError("candidate bound needs p0 > 1/2: the coin carries no slack");
  }
  const double ratio = 2.0 * (1.0 + lambda) / (lambda * (p0 - 0.5));
  const double bound =
      0.5 * std::exp(2.0 * eps) * ratio * ratio * std::log(2.0 * ratio);
  if (!(bound < 9.0e18)) throw InfeasibleError("candidate bound overflows");
  return static_cast<int64_t>(std::ceil(bound));
}

int64_t MmrcSubsetCandidateCount(double eps, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  const double kScaleFloor = 0.24;
  const double e1 = std::exp(eps) + 1.0;
  const double bound = 2.0 * e1 * e1 * (1.0 + lambda) * (1.0 + lambda) /
                       (kScaleFloor * kScaleFloor * lambda * lambda) *
                       std::log(8.0 * (1.0 + lambda) / (kScaleFloor * lambda));
  if (!(bound < 9.0e18)) throw InfeasibleError("candidate bound overflows");
  return static_cast<int64_t>(std::ceil(bound));
}

double RhoFromCandidateCount(double eps, int64_t n) {
  if (n < 1) throw std::invalid_argument("candidate count must be >= 1");
  const double scale = 2.0 * std::pow(std::exp(eps) - 1.0, 2.0);
  auto count_for = [scale](double rho) { return scale * std::log(2.0 / rho) / (rho * rho); };
  const double nd = static_cast<double>(n);
  if (count_for(1.0) > nd) {
    throw InfeasibleError("candidate count too small: no rho in (0, 1) matches");
  }
  // count_for decreases in rho, so bisect.
  double lo = 1e-12, hi = 1.0;
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (count_for(mid) > nd) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo < 1e-10 * hi) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace ldpc
