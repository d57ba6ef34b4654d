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

#include "ldpc/mrc.h"

#include <cmath>
#include <stdexcept>

#include "ldpc/errors.h"

namespace ldpc {
namespace {

// Selects the j-th set (or unset) flag position.
int64_t SelectFlagged(const std::vector<uint8_t>& flags, bool want, int64_t j) {
  int64_t seen = 0;
  for (int64_t k = 0; k < static_cast<int64_t>(flags.size()); ++k) {
    if (static_cast<bool>(flags[k]) == want) {
      if (seen == j) return k;
      ++seen;
    }
  }
  throw std::logic_error("flag selection ran off the pool");
}

}  // namespace

int BitWidthFor(int64_t n) {
  if (n < 1) throw std::invalid_argument("pool size must be >= 1");
  int width = 0;
  while ((int64_t{1} << width) < n) ++width;
  return width;
}

TwoLevelProbs MrcTwoLevel(const CapLevels& levels, int64_t n_in, int64_t n) {
  if (n < 1 || n_in < 0 || n_in > n) throw std::invalid_argument("bad pool counts");
  TwoLevelProbs probs;
  probs.n = n;
  probs.n_in = n_in;
  const double theta = probs.theta();
  const double denom =
      static_cast<double>(n) * (theta * levels.c1 + (1.0 - theta) * levels.c2);
  probs.in_cap = levels.c1 / denom;
  probs.out_cap = levels.c2 / denom;
  return probs;
}

IndexDistribution MaterializeDistribution(const TwoLevelProbs& probs,
                                          const std::vector<uint8_t>& in_cap_flags,
                                          CodecKind kind) {
  if (static_cast<int64_t>(in_cap_flags.size()) != probs.n) {
    throw std::invalid_argument("flag count does not match distribution size");
  }
  IndexDistribution dist;
  dist.kind = kind;
  dist.theta = probs.theta();
  dist.probs.resize(probs.n);
  for (int64_t k = 0; k < probs.n; ++k) {
    dist.probs[k] = in_cap_flags[k] ? probs.in_cap : probs.out_cap;
  }
  return dist;
}

CompressedMessage EncodeTwoLevel(const TwoLevelProbs& probs, const PoolScan& scan,
                                 Rng& rng) {
  if (scan.n() != probs.n || scan.n_in != probs.n_in) {
    throw std::invalid_argument("scan does not match distribution");
  }
  CompressedMessage msg;
  msg.bit_width = BitWidthFor(probs.n);
  const double in_mass = static_cast<double>(probs.n_in) * probs.in_cap;
  if (rng.NextBernoulli(in_mass)) {
    msg.index = SelectFlagged(scan.in_cap, true, rng.NextIndex(probs.n_in));
  } else {
    msg.index = SelectFlagged(scan.in_cap, false, rng.NextIndex(probs.n - probs.n_in));
  }
  return msg;
}

CompressedMessage Encode(const IndexDistribution& dist, Rng& rng) {
  const int64_t n = dist.probs.size();
  if (n < 1) throw std::invalid_argument("empty distribution");
  CompressedMessage msg;
  msg.bit_width = BitWidthFor(n);
  const double u = rng.NextDouble();
  double acc = 0.0;
  for (int64_t k = 0; k < n; ++k) {
    acc += dist.probs[k];
    if (u < acc) {
      msg.index = k;
      return msg;
    }
  }
  msg.index = n - 1;  // absorbs rounding in the final partial sum
  return msg;
}

std::vector<uint8_t> SerializeMessage(const CompressedMessage& msg) {
  if (msg.bit_width < 0 || msg.bit_width > 62) throw std::invalid_argument("bad bit width");
  if (msg.index < 0 || (msg.bit_width < 62 && msg.index >= (int64_t{1} << msg.bit_width))) {
    throw std::invalid_argument("index does not fit in the declared width");
  }
  std::vector<uint8_t> bytes;
  bytes.push_back(static_cast<uint8_t>(msg.bit_width));
  const int payload_bytes = (msg.bit_width + 7) / 8;
  uint64_t v = static_cast<uint64_t>(msg.index);
  for (int i = 0; i < payload_bytes; ++i) {
    bytes.push_back(static_cast<uint8_t>(v & 0xff));
    v >>= 8;
  }
  return bytes;
}

CompressedMessage ParseMessage(const std::vector<uint8_t>& bytes) {
  if (bytes.empty()) throw std::invalid_argument("empty message");
  CompressedMessage msg;
  msg.bit_width = bytes[0];
  const int payload_bytes = (msg.bit_width + 7) / 8;
  if (static_cast<int>(bytes.size()) != 1 + payload_bytes) {
    throw std::invalid_argument("message length does not match the width header");
  }
  uint64_t v = 0;
  for (int i = payload_bytes - 1; i >= 0; --i) {
    v = (v << 8) | bytes[1 + i];
  }
  if (msg.bit_width < 62 && v >= (uint64_t{1} << msg.bit_width)) {
    throw std::invalid_argument("payload exceeds the declared width");
  }
  msg.index = static_cast<int64_t>(v);
  return msg;
}

double MrcCapProbability(const CapLevels& levels, int64_t n) {
  const double c1 = levels.c1;
  const double c2 = levels.c2;
  return ExpectOverBinomial({n, levels.cap_mass}, [c1, c2](double theta) {
    const double mass = theta * c1 + (1.0 - theta) * c2;
    return mass == 0.0 ? 0.0 : theta * c1 / mass;
  });
}

EstimatorScales MrcPrivUnitScales(const PrivUnitParams& params, int64_t n) {
  const CapLevels levels = AsCapLevels(params);
  return {PrivUnitScaleFromCapProb(params, MrcCapProbability(levels, n)), 0.0};
}

EstimatorScales MrcSubsetScales(const SubsetParams& params, int64_t n) {
  const double e = std::exp(params.eps);
  const double in_cap_prob =
      ExpectOverBinomial({n, static_cast<double>(params.s) / params.d},
                         [e](double theta) {
                           const double mass = e * theta + (1.0 - theta);
                           return mass == 0.0 ? 0.0 : e * theta / mass;
                         });
  EstimatorScales scales;
  scales.b = (params.s - in_cap_prob) / (params.d - 1.0);
  scales.m = in_cap_prob - scales.b;
  return scales;
}

CandidateCount MrcCandidateCount(double eps, double c, int64_t max_n) {
  if (c < 0.0) throw std::invalid_argument("c must be nonnegative");
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  const double log2e = 1.0 / std::log(2.0);
  const double exponent = (log2e + 4.0 * c) * eps;
  if (exponent > 62.0 || std::exp2(exponent) > static_cast<double>(max_n)) {
    throw InfeasibleError("candidate count exceeds the overflow guard");
  }
  CandidateCount count;
  count.n = static_cast<int64_t>(std::ceil(std::exp2(exponent)));
  count.alpha = std::sqrt(std::exp2(-c * eps) + std::exp2(-c * c / log2e + 1.0));
  count.vacuous = count.alpha >= 1.0;
  return count;
}

ApproxDpParams ComputeApproxDpParams(double eps, double c0, double delta) {
  if (c0 < 0.0) throw std::invalid_argument("c0 must be nonnegative");
  if (!(delta > 0.0 && delta <= 1.0)) throw std::domain_error("delta must lie in (0, 1]");
  ApproxDpParams params;
  params.c0 = c0;
  params.delta = delta;
  params.a0 = std::exp(-c0) * std::sqrt(0.5 * std::log(2.0 / delta));
  if (params.a0 >= 1.0) {
    throw InfeasibleError("delta too small for this c0: concentration slack reaches one");
  }
  params.eps0 = std::log((1.0 + params.a0) / (1.0 - params.a0));
  params.eps_total = eps + params.eps0;
  const double n_exact = std::exp(2.0 * eps + 2.0 * c0);
  if (n_exact > 9.0e18) throw InfeasibleError("required candidate count overflows");
  params.n_required = static_cast<int64_t>(std::ceil(n_exact));
  return params;
}

}  // namespace ldpc
