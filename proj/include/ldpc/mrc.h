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

#ifndef LDPC_MRC_H_
#define LDPC_MRC_H_

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "ldpc/mechanisms.h"
#include "ldpc/numerics.h"
#include "ldpc/random.h"

namespace ldpc {

enum class CodecKind { kMrc, kMmrc };

// Distribution over candidate indices. For cap-based mechanisms with a
// uniform reference it collapses to one probability for in-cap indices and
// one for the rest; probs materializes the full vector for audits.
struct IndexDistribution {
  Eigen::VectorXd probs;
  double theta = 0.0;
  CodecKind kind = CodecKind::kMrc;
};

struct TwoLevelProbs {
  double in_cap = 0.0;
  double out_cap = 0.0;
  int64_t n_in = 0;
  int64_t n = 0;

  double theta() const { return static_cast<double>(n_in) / static_cast<double>(n); }
};

// The transmitted payload: an index into the shared pool, in
// ceil(log2 N) bits.
struct CompressedMessage {
  int64_t index = 0;
  int bit_width = 0;
};

// Cap-membership flags of one shared pool against one input.
struct PoolScan {
  std::vector<uint8_t> in_cap;
  int64_t n_in = 0;

  int64_t n() const { return static_cast<int64_t>(in_cap.size()); }
};

int BitWidthFor(int64_t n);

// Importance-weight index probabilities: proportional to c1 for in-cap
// candidates and c2 otherwise, normalized over the pool. The reference
// density constant cancels.
TwoLevelProbs MrcTwoLevel(const CapLevels& levels, int64_t n_in, int64_t n);

IndexDistribution MaterializeDistribution(const TwoLevelProbs& probs,
                                          const std::vector<uint8_t>& in_cap_flags,
                                          CodecKind kind);

template <typename Mech>
PoolScan ScanPool(const Mech& mech, uint64_t pool_seed, int64_t n,
                  const typename Mech::Input& x) {
  PoolScan scan;
  scan.in_cap.resize(n);
  for (int64_t k = 0; k < n; ++k) {
    const bool in = mech.CandidateInCap(pool_seed, k, x);
    scan.in_cap[k] = in ? 1 : 0;
    scan.n_in += in;
  }
  return scan;
}

template <typename Mech>
std::vector<typename Mech::Output> MaterializePool(const Mech& mech,
                                                   uint64_t pool_seed, int64_t n) {
  std::vector<typename Mech::Output> pool;
  pool.reserve(n);
  for (int64_t k = 0; k < n; ++k) pool.push_back(mech.CandidateAt(pool_seed, k));
  return pool;
}

// Samples an index from a two-level distribution using the scan flags.
CompressedMessage EncodeTwoLevel(const TwoLevelProbs& probs, const PoolScan& scan,
                                 Rng& rng);

// Generic inverse-CDF sampler over a materialized distribution.
CompressedMessage Encode(const IndexDistribution& dist, Rng& rng);

template <typename Mech>
typename Mech::Output Decode(const Mech& mech, uint64_t pool_seed,
                             const CompressedMessage& msg, int64_t n) {
  if (msg.index < 0 || msg.index >= n) throw std::out_of_range("index outside pool");
  return mech.CandidateAt(pool_seed, msg.index);
}

// Wire format: one byte holding the bit width, then the zero-based index
// packed little-endian into exactly ceil(bit_width / 8) bytes.
std::vector<uint8_t> SerializeMessage(const CompressedMessage& msg);
CompressedMessage ParseMessage(const std::vector<uint8_t>& bytes);

// Debiasing constants for the compressed mechanisms, from exact binomial
// expectations over the in-cap candidate fraction.
EstimatorScales MrcPrivUnitScales(const PrivUnitParams& params, int64_t n);
EstimatorScales MrcSubsetScales(const SubsetParams& params, int64_t n);

// P(z_K lands in the cap) under the importance-weight index law.
double MrcCapProbability(const CapLevels& levels, int64_t n);

struct CandidateCount {
  int64_t n = 0;
  double alpha = 0.0;   // confidence parameter of the utility bound
  bool vacuous = false; // alpha >= 1 carries no information
};

// Number of candidates N = 2^((log2 e + 4c) eps) and the associated
// confidence alpha. Counts beyond max_n are refused.
CandidateCount MrcCandidateCount(double eps, double c,
                                 int64_t max_n = kMaxBinomialTrials);

struct ApproxDpParams {
  double eps_total = 0.0;  // eps + eps0
  double eps0 = 0.0;
  double delta = 0.0;
  double c0 = 0.0;
  double a0 = 0.0;
  int64_t n_required = 0;  // ceil(exp(2 eps + 2 c0))
};

ApproxDpParams ComputeApproxDpParams(double eps, double c0, double delta);

}  // namespace ldpc

#endif  // LDPC_MRC_H_
