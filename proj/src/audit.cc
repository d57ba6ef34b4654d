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

#include "ldpc/audit.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ldpc/errors.h"

namespace ldpc {
namespace {

constexpr double kRatioSlack = 1e-9;

double ClaimedEps(AuditCodec codec, double eps) {
  return codec == AuditCodec::kMrc ? 2.0 * eps : eps;
}

TwoLevelProbs CodecProbs(AuditCodec codec, const CapLevels& levels, int64_t n_in,
                         int64_t n) {
  return codec == AuditCodec::kMmrc ? MmrcTwoLevel(levels, n_in, n)
                                    : MrcTwoLevel(levels, n_in, n);
}

// Worst log ratio over indices between two flag patterns on the same pool.
double MaxLogRatio(const TwoLevelProbs& pa, const std::vector<uint8_t>& fa,
                   const TwoLevelProbs& pb, const std::vector<uint8_t>& fb) {
  bool seen[4] = {false, false, false, false};
  for (size_t k = 0; k < fa.size(); ++k) {
    seen[(fa[k] ? 2 : 0) + (fb[k] ? 1 : 0)] = true;
  }
  double best = -1.0;
  auto consider = [&](bool present, double num, double den) {
    if (present) best = std::max(best, num / den);
  };
  consider(seen[0], pa.out_cap, pb.out_cap);
  consider(seen[1], pa.out_cap, pb.in_cap);
  consider(seen[2], pa.in_cap, pb.out_cap);
  consider(seen[3], pa.in_cap, pb.in_cap);
  return std::log(best);
}

// Odometer over all |Z|^n ordered candidate tuples of a small subset
// instance; the visitor receives per-input in-cap counts and flags.
template <typename Visitor>
void ForEachSubsetPool(const SubsetMechanism& mech, int64_t n, Visitor visit) {
  const auto outputs = EnumerateSubsetOutputs(mech.params().d, mech.params().s);
  const int64_t z_count = static_cast<int64_t>(outputs.size());
  std::vector<int64_t> odometer(n, 0);
  const int d = mech.params().d;
  std::vector<std::vector<uint8_t>> flags(d, std::vector<uint8_t>(n));
  std::vector<int64_t> n_in(d);
  while (true) {
    for (int x = 0; x < d; ++x) {
      int64_t count = 0;
      for (int64_t k = 0; k < n; ++k) {
        flags[x][k] = outputs[odometer[k]].Contains(x) ? 1 : 0;
        count += flags[x][k];
      }
      n_in[x] = count;
    }
    visit(flags, n_in);
    int64_t slot = 0;
    while (slot < n && ++odometer[slot] == z_count) {
      odometer[slot] = 0;
      ++slot;
    }
    if (slot == n) break;
  }
}

void CheckExhaustiveBudget(const SubsetMechanism& mech, int64_t n) {
  const auto outputs_count =
      std::exp(std::lgamma(mech.params().d + 1.0) -
               std::lgamma(mech.params().s + 1.0) -
               std::lgamma(mech.params().d - mech.params().s + 1.0));
  const double states = std::pow(outputs_count, static_cast<double>(n)) *
                        static_cast<double>(mech.params().d) * mech.params().d;
  if (!(states <= kMaxExhaustiveStates)) {
    throw InfeasibleError("exhaustive audit state space exceeds the 1e7 guard");
  }
}

template <typename Mech>
double SampledCodecMaxLogRatio(AuditCodec codec, const Mech& mech,
                               const std::vector<typename Mech::Input>& probes,
                               int64_t n, int64_t trials, uint64_t seed) {
  const CapLevels& levels = mech.levels();
  double worst = 0.0;
  std::vector<std::vector<uint8_t>> flags(probes.size());
  std::vector<int64_t> n_in(probes.size());
  std::vector<TwoLevelProbs> probs(probes.size());
  for (int64_t t = 0; t < trials; ++t) {
    const uint64_t pool_seed = DeriveSeed(seed, static_cast<uint64_t>(t));
    for (size_t i = 0; i < probes.size(); ++i) {
      const PoolScan scan = ScanPool(mech, pool_seed, n, probes[i]);
      flags[i] = scan.in_cap;
      n_in[i] = scan.n_in;
      probs[i] = CodecProbs(codec, levels, scan.n_in, n);
    }
    for (size_t a = 0; a < probes.size(); ++a) {
      for (size_t b = 0; b < probes.size(); ++b) {
        if (a == b) continue;
        worst = std::max(worst, MaxLogRatio(probs[a], flags[a], probs[b], flags[b]));
      }
    }
  }
  return worst;
}

}  // namespace

std::string ToString(AuditCodec codec) {
  switch (codec) {
    case AuditCodec::kRaw:
      return "raw";
    case AuditCodec::kMrc:
      return "mrc";
    case AuditCodec::kMmrc:
      return "mmrc";
  }
  return "unknown";
}

std::string ToString(AuditMode mode) {
  return mode == AuditMode::kExhaustive ? "exhaustive" : "sampled";
}

nlohmann::json ToJson(const LdpReport& report) {
  return {{"codec", ToString(report.codec)},
          {"mech", report.mech},
          {"eps_claimed", report.claimed_eps},
          {"max_log_ratio", report.max_log_ratio},
          {"mode", ToString(report.mode)},
          {"trials", report.trials},
          {"seed", report.seed},
          {"pass", report.pass},
          {"n_candidates", report.n_candidates}};
}

nlohmann::json ToJson(const ApproxLdpReport& report) {
  return {{"eps_total", report.eps_total},
          {"delta", report.delta},
          {"trials", report.trials},
          {"violations", report.violations},
          {"violation_fraction", report.violation_fraction},
          {"allowed_fraction", report.allowed_fraction},
          {"precondition_met", report.precondition_met},
          {"pass", report.pass},
          {"seed", report.seed}};
}

std::vector<SHotVector> EnumerateSubsetOutputs(int d, int s) {
  if (d < 1 || s < 1 || s > d) throw std::invalid_argument("bad output alphabet");
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

LdpReport CertifyPureLdp(AuditCodec codec, const SubsetMechanism& mech, int64_t n,
                         AuditMode mode, int64_t trials, uint64_t seed) {
  const double eps = mech.params().eps;
  LdpReport report;
  report.codec = codec;
  report.mech = "ss";
  report.claimed_eps = ClaimedEps(codec, eps);
  report.mode = mode;
  report.n_candidates = codec == AuditCodec::kRaw ? 0 : n;

  if (codec == AuditCodec::kRaw) {
    // Exhaustive over (z, x, x'); the density takes two levels, so the max
    // is attained whenever some output separates a pair of inputs.
    const auto outputs = EnumerateSubsetOutputs(mech.params().d, mech.params().s);
    double best = 1.0;
    const CapLevels& levels = mech.levels();
    for (const auto& z : outputs) {
      for (int x = 0; x < mech.params().d; ++x) {
        for (int y = 0; y < mech.params().d; ++y) {
          const double qx = z.Contains(x) ? levels.c1 : levels.c2;
          const double qy = z.Contains(y) ? levels.c1 : levels.c2;
          best = std::max(best, qx / qy);
        }
      }
    }
    report.max_log_ratio = std::log(best);
    report.trials = static_cast<int64_t>(outputs.size());
  } else if (mode == AuditMode::kExhaustive) {
    CheckExhaustiveBudget(mech, n);
    const CapLevels& levels = mech.levels();
    const int d = mech.params().d;
    double worst = 0.0;
    int64_t pools = 0;
    ForEachSubsetPool(mech, n, [&](const auto& flags, const auto& n_in) {
      ++pools;
      std::vector<TwoLevelProbs> probs(d);
      for (int x = 0; x < d; ++x) probs[x] = CodecProbs(codec, levels, n_in[x], n);
      for (int a = 0; a < d; ++a) {
        for (int b = 0; b < d; ++b) {
          if (a == b) continue;
          worst = std::max(worst, MaxLogRatio(probs[a], flags[a], probs[b], flags[b]));
        }
      }
    });
    report.max_log_ratio = worst;
    report.trials = pools;
  } else {
    std::vector<int> probes(mech.params().d);
    for (int x = 0; x < mech.params().d; ++x) probes[x] = x;
    report.max_log_ratio =
        SampledCodecMaxLogRatio(codec, mech, probes, n, trials, seed);
    report.trials = trials;
    report.seed = seed;
  }
  report.pass = report.max_log_ratio <= report.claimed_eps + kRatioSlack;
  return report;
}

LdpReport CertifyPureLdp(AuditCodec codec, const PrivUnitMechanism& mech, int64_t n,
                         AuditMode mode, int64_t trials, uint64_t seed) {
  const double eps = mech.params().eps;
  LdpReport report;
  report.codec = codec;
  report.mech = "privunit";
  report.claimed_eps = ClaimedEps(codec, eps);
  report.mode = mode;
  report.n_candidates = codec == AuditCodec::kRaw ? 0 : n;

  if (codec == AuditCodec::kRaw) {
    // The density takes exactly two levels, so the worst ratio is c1 / c2
    // whichever mode was requested.
    report.max_log_ratio = std::log(mech.levels().c1 / mech.levels().c2);
  } else {
    if (mode == AuditMode::kExhaustive) {
      throw InfeasibleError(
          "exhaustive audit needs a finite output alphabet; use sampled mode");
    }
    const int d = mech.params().d;
    std::vector<Eigen::VectorXd> probes;
    Eigen::VectorXd e1 = Eigen::VectorXd::Zero(d);
    e1[0] = 1.0;
    probes.push_back(e1);
    probes.push_back(-e1);  // antipodal pair attains disjoint caps
    Rng rng(DeriveSeed(seed, 0x70726f62));
    for (int i = 0; i < 6; ++i) probes.push_back(UniformUnitVector(d, rng));
    report.max_log_ratio =
        SampledCodecMaxLogRatio(codec, mech, probes, n, trials, seed);
    report.trials = trials;
    report.seed = seed;
  }
  report.pass = report.max_log_ratio <= report.claimed_eps + kRatioSlack;
  return report;
}

ApproxLdpReport CheckApproxLdp(const SubsetMechanism& mech, int64_t n,
                               const ApproxDpParams& params, int64_t trials,
                               uint64_t seed) {
  if (trials < 1000) throw std::invalid_argument("approximate audit needs >= 1000 trials");
  ApproxLdpReport report;
  report.eps_total = mech.params().eps + params.eps0;
  report.delta = params.delta;
  report.trials = trials;
  report.seed = seed;
  report.precondition_met = n >= params.n_required;

  const CapLevels& levels = mech.levels();
  const int d = mech.params().d;
  std::vector<std::vector<uint8_t>> flags(d);
  std::vector<TwoLevelProbs> probs(d);
  const double threshold = report.eps_total + kRatioSlack;
  for (int64_t t = 0; t < trials; ++t) {
    const uint64_t pool_seed = DeriveSeed(seed, static_cast<uint64_t>(t));
    for (int x = 0; x < d; ++x) {
      const PoolScan scan = ScanPool(mech, pool_seed, n, x);
      flags[x] = scan.in_cap;
      probs[x] = MrcTwoLevel(levels, scan.n_in, n);
    }
    bool violated = false;
    for (int a = 0; a < d && !violated; ++a) {
      for (int b = 0; b < d && !violated; ++b) {
        if (a == b) continue;
        violated = MaxLogRatio(probs[a], flags[a], probs[b], flags[b]) > threshold;
      }
    }
    report.violations += violated;
  }
  report.violation_fraction =
      static_cast<double>(report.violations) / static_cast<double>(trials);
  report.allowed_fraction =
      params.delta + 4.0 * std::sqrt(params.delta * (1.0 - params.delta) /
                                     static_cast<double>(trials));
  report.pass = report.precondition_met &&
                report.violation_fraction <= report.allowed_fraction;
  return report;
}

double KlBetweenCodecs(const CapLevels& levels, int64_t n_in, int64_t n) {
  const TwoLevelProbs mrc = MrcTwoLevel(levels, n_in, n);
  const TwoLevelProbs mmrc = MmrcTwoLevel(levels, n_in, n);
  double kl = 0.0;
  if (n_in > 0) kl += n_in * mrc.in_cap * std::log(mrc.in_cap / mmrc.in_cap);
  if (n_in < n) kl += (n - n_in) * mrc.out_cap * std::log(mrc.out_cap / mmrc.out_cap);
  return std::max(kl, 0.0);
}

double TvBetweenCodecs(const CapLevels& levels, int64_t n_in, int64_t n) {
  const TwoLevelProbs mrc = MrcTwoLevel(levels, n_in, n);
  const TwoLevelProbs mmrc = MmrcTwoLevel(levels, n_in, n);
  return 0.5 * (n_in * std::fabs(mrc.in_cap - mmrc.in_cap) +
                (n - n_in) * std::fabs(mrc.out_cap - mmrc.out_cap));
}

}  // namespace ldpc
