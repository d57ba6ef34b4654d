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

#ifndef LDPC_AUDIT_H_
#define LDPC_AUDIT_H_

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "ldpc/mechanisms.h"
#include "ldpc/mmrc.h"
#include "ldpc/mrc.h"

namespace ldpc {

enum class AuditCodec { kRaw, kMrc, kMmrc };
enum class AuditMode { kExhaustive, kSampled };

std::string ToString(AuditCodec codec);
std::string ToString(AuditMode mode);

// Worst observed likelihood ratio of a privatization channel between any
// two inputs, against the privacy level the codec is supposed to deliver.
struct LdpReport {
  AuditCodec codec = AuditCodec::kRaw;
  std::string mech;
  double claimed_eps = 0.0;
  double max_log_ratio = 0.0;
  AuditMode mode = AuditMode::kExhaustive;
  int64_t trials = 0;  // pools examined (0 when the max is closed-form)
  uint64_t seed = 0;   // sampled mode only
  bool pass = false;
  int64_t n_candidates = 0;
};

nlohmann::json ToJson(const LdpReport& report);

// Exhaustive enumeration is bounded by |Z|^N * |X|^2 states.
inline constexpr double kMaxExhaustiveStates = 1e7;

std::vector<SHotVector> EnumerateSubsetOutputs(int d, int s);

// Certifies the raw mechanism, the importance-weight codec (claimed level
// 2 eps) or the clamped codec (claimed level eps). Exhaustive mode
// enumerates every candidate tuple and input pair; for the spherical
// mechanism the raw ratio is closed-form and codecs require sampled mode.
LdpReport CertifyPureLdp(AuditCodec codec, const SubsetMechanism& mech, int64_t n,
                         AuditMode mode, int64_t trials = 1000, uint64_t seed = 1);
LdpReport CertifyPureLdp(AuditCodec codec, const PrivUnitMechanism& mech, int64_t n,
                         AuditMode mode, int64_t trials = 1000, uint64_t seed = 1);

// Empirical check of the approximate privacy guarantee of the
// importance-weight codec: the fraction of sampled pools whose worst ratio
// exceeds exp(eps + eps0) must stay within delta plus binomial allowance.
struct ApproxLdpReport {
  double eps_total = 0.0;
  double delta = 0.0;
  int64_t trials = 0;
  int64_t violations = 0;
  double violation_fraction = 0.0;
  double allowed_fraction = 0.0;
  bool precondition_met = false;  // pool size reaches the bound's required count
  bool pass = false;
  uint64_t seed = 0;
};

nlohmann::json ToJson(const ApproxLdpReport& report);

ApproxLdpReport CheckApproxLdp(const SubsetMechanism& mech, int64_t n,
                               const ApproxDpParams& params, int64_t trials,
                               uint64_t seed);

// KL(mrc || mmrc) in nats for a pool with n_in in-cap candidates.
double KlBetweenCodecs(const CapLevels& levels, int64_t n_in, int64_t n);

// Total variation between the two index laws on the same pool.
double TvBetweenCodecs(const CapLevels& levels, int64_t n_in, int64_t n);

}  // namespace ldpc

#endif  // LDPC_AUDIT_H_
