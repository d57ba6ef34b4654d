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

#ifndef LDPC_MECHANISMS_H_
#define LDPC_MECHANISMS_H_

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"
#include "ldpc/random.h"

namespace ldpc {

// Parameters of the spherical-cap randomizer for unit vectors. The total
// budget eps splits as mu * eps for the cap threshold gamma and
// (1 - mu) * eps for the cap-choice probability p0.
struct PrivUnitParams {
  double eps = 1.0;
  int d = 2;
  double mu = 0.5;
  double gamma = 0.0;
  double p0 = 0.5;
};

// Parameters of the s-hot subset randomizer for categorical data.
struct SubsetParams {
  double eps = 1.0;
  int d = 2;
  int s = 1;
};

// Debiasing constants: estimate = (z - b) / m componentwise.
struct EstimatorScales {
  double m = 0.0;
  double b = 0.0;
};

// The two-level density view shared by both randomizers: density c1 on an
// input-dependent cap, c2 off it, with the cap's mass under the uniform
// reference independent of the input.
struct CapLevels {
  double c1 = 1.0;
  double c2 = 1.0;
  double cap_mass = 1.0;
  double eps = 0.0;
};

// Output alphabet element of the subset randomizer: a d-bit string of
// Hamming weight s, stored as its sorted support.
struct SHotVector {
  int d = 0;
  std::vector<int32_t> ones;

  bool Contains(int32_t i) const;
  Eigen::VectorXd Dense() const;
  bool operator==(const SHotVector& other) const = default;
};

void ValidateUnitVector(const Eigen::Ref<const Eigen::VectorXd>& x);

// Picks p0 from the budget split and the largest cap threshold gamma that
// any feasible branch of the privacy condition admits.
PrivUnitParams CalibratePrivUnit(double eps, int d, double mu = 0.5);

// The unbiasing scale for a cap-based spherical mechanism whose in-cap
// probability is cap_prob; evaluated in log space so shapes up to d = 500
// and beyond stay finite.
double PrivUnitScaleFromCapProb(const PrivUnitParams& params, double cap_prob);

EstimatorScales PrivUnitScales(const PrivUnitParams& params);

Eigen::VectorXd SamplePrivUnit(const Eigen::Ref<const Eigen::VectorXd>& x,
                               const PrivUnitParams& params, Rng& rng);

SubsetParams CalibrateSubset(double eps, int d);

EstimatorScales SubsetScales(const SubsetParams& params);

SHotVector SampleSubset(int x, const SubsetParams& params, Rng& rng);

// (z - b) / m. Throws DegeneracyError when m == 0.
Eigen::VectorXd Debias(const Eigen::Ref<const Eigen::VectorXd>& z,
                       const EstimatorScales& scales);

inline Eigen::VectorXd PrivUnitEstimate(const Eigen::Ref<const Eigen::VectorXd>& z,
                                        const EstimatorScales& scales) {
  return Debias(z, scales);
}

inline Eigen::VectorXd SubsetEstimate(const SHotVector& z, const EstimatorScales& scales) {
  return Debias(z.Dense(), scales);
}

// Two-level views. Both check the cap condition
// cap_mass >= c2 / (2 c1) and the density-ratio bound at construction.
CapLevels AsCapLevels(const PrivUnitParams& params);
CapLevels AsCapLevels(const SubsetParams& params);

nlohmann::json ToJson(const PrivUnitParams& params);
nlohmann::json ToJson(const SubsetParams& params);
PrivUnitParams PrivUnitParamsFromJson(const nlohmann::json& j);
SubsetParams SubsetParamsFromJson(const nlohmann::json& j);

// Mechanism front ends consumed by the codecs. Candidates of the uniform
// reference distribution are addressed by (pool seed, index), so the
// server can regenerate exactly the transmitted one.
class PrivUnitMechanism {
 public:
  using Input = Eigen::VectorXd;
  using Output = Eigen::VectorXd;
  static constexpr uint64_t kPoolTag = 0x7075;

  explicit PrivUnitMechanism(const PrivUnitParams& params);

  const PrivUnitParams& params() const { return params_; }
  const CapLevels& levels() const { return levels_; }
  const EstimatorScales& scales() const { return scales_; }

  Output Sample(const Input& x, Rng& rng) const { return SamplePrivUnit(x, params_, rng); }
  Output CandidateAt(uint64_t pool_seed, int64_t k) const;
  bool CandidateInCap(uint64_t pool_seed, int64_t k, const Input& x) const;
  bool InCap(const Input& x, const Output& z) const { return x.dot(z) >= params_.gamma; }
  Eigen::VectorXd ToDense(const Output& z) const { return z; }

 private:
  PrivUnitParams params_;
  CapLevels levels_;
  EstimatorScales scales_;
};

class SubsetMechanism {
 public:
  using Input = int;
  using Output = SHotVector;
  static constexpr uint64_t kPoolTag = 0x7373;

  explicit SubsetMechanism(const SubsetParams& params);

  const SubsetParams& params() const { return params_; }
  const CapLevels& levels() const { return levels_; }
  const EstimatorScales& scales() const { return scales_; }

  Output Sample(Input x, Rng& rng) const { return SampleSubset(x, params_, rng); }
  Output CandidateAt(uint64_t pool_seed, int64_t k) const;
  bool CandidateInCap(uint64_t pool_seed, int64_t k, Input x) const;
  bool InCap(Input x, const Output& z) const { return z.Contains(x); }
  Eigen::VectorXd ToDense(const Output& z) const { return z.Dense(); }

 private:
  SubsetParams params_;
  CapLevels levels_;
  EstimatorScales scales_;
};

}  // namespace ldpc

#endif  // LDPC_MECHANISMS_H_
