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

#ifndef LDPC_MMRC_H_
#define LDPC_MMRC_H_

#include <cstdint>

#include "ldpc/mechanisms.h"
#include "ldpc/mrc.h"

namespace ldpc {

// Per-index probability bounds that restore the exact privacy guarantee of
// the underlying cap-based mechanism. Their ratio equals c1 / c2 and they
// mix to 1/N under the expected in-cap fraction.
struct Thresholds {
  double t_l = 0.0;
  double t_u = 0.0;
  double expected_theta = 0.0;
};

// Debiasing constants of the clamped codec plus the clamped in-cap
// probability they derive from.
struct MmrcScales {
  double m = 0.0;
  double b = 0.0;
  double p_cap = 0.0;
};

Thresholds ThresholdsFor(const CapLevels& levels, int64_t n);

// Clamps the importance-weight index probabilities into [t_l, t_u]: when
// the in-cap fraction runs below its mean only the upper threshold can be
// violated and in-cap indices are pinned to t_u; above the mean, out-of-cap
// indices are pinned to t_l. The other side renormalizes.
TwoLevelProbs MmrcTwoLevel(const CapLevels& levels, int64_t n_in, int64_t n);

// P(z_K lands in the cap) under the clamped index law, as an exact
// binomial expectation over the in-cap candidate fraction.
double ClampedCapProbability(const CapLevels& levels, int64_t n);

MmrcScales MmrcPrivUnitScales(const PrivUnitParams& params, int64_t n);
MmrcScales MmrcSubsetScales(const SubsetParams& params, int64_t n);

// Smallest candidate count for which the clamped codec provably tracks the
// spherical-cap mechanism at slack lambda; requires p0 > 1/2.
int64_t MmrcPrivUnitCandidateCount(double eps, double p0, double lambda);

// Subset-selection analogue; the 0.24 constant is the uncompressed scale's
// lower bound.
int64_t MmrcSubsetCandidateCount(double eps, double lambda);

// Inverts n = 2 (e^eps - 1)^2 ln(2 / rho) / rho^2 for rho in (0, 1).
double RhoFromCandidateCount(double eps, int64_t n);

}  // namespace ldpc

#endif  // LDPC_MMRC_H_
