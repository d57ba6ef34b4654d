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
#include <limits>
#include <stdexcept>

#include "ldpc/errors.h"
#include "ldpc/numerics.h"

namespace ldpc {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

uint64_t CandidateSeed(uint64_t pool_seed, uint64_t kind_tag, int64_t k) {
  return DeriveSeed(pool_seed, kind_tag, static_cast<uint64_t>(k));
}

double LogBinomialCoefficient(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// Branch-two feasibility function for the cap threshold: the privacy budget
// spent on the cap must dominate 0.5 ln d + ln 6 - ((d-1)/2) ln(1-g^2) + ln g.
double BranchTwoBudget(double gamma, int d) {
  return 0.5 * std::log(static_cast<double>(d)) + std::log(6.0) -
         0.5 * (d - 1.0) * std::log1p(-gamma * gamma) + std::log(gamma);
}

void CheckCapLevels(const CapLevels& levels) {
  if (!(levels.c1 >= levels.c2 && levels.c2 > 0.0)) {
    throw DegeneracyError("cap mechanism has degenerate density levels");
  }
  const double ratio = levels.c1 / levels.c2;
  if (ratio > std::exp(levels.eps) * (1.0 + 1e-9)) {
    throw InfeasibleError("cap mechanism violates the density-ratio privacy bound");
  }
  if (levels.cap_mass < levels.c2 / (2.0 * levels.c1) - 1e-12) {
    throw InfeasibleError("cap mass below c2 / (2 c1); mechanism is miscalibrated");
  }
}

// Uniform k-subset of [0, m) by Floyd's algorithm. Linear membership scans
// are fine at the subset sizes the calibration produces.
void FloydSample(int64_t m, int64_t k, Rng& rng, std::vector<int32_t>* out) {
  out->clear();
  for (int64_t j = m - k; j < m; ++j) {
    const int64_t r = rng.NextIndex(j + 1);
    const int32_t candidate = static_cast<int32_t>(r);
    if (std::find(out->begin(), out->end(), candidate) != out->end()) {
      out->push_back(static_cast<int32_t>(j));
    } else {
      out->push_back(candidate);
    }
  }
}

}  // namespace

bool SHotVector::Contains(int32_t i) const {
  return std::binary_search(ones.begin(), ones.end(), i);
}

Eigen::VectorXd SHotVector::Dense() const {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(d);
  for (const int32_t i : ones) v[i] = 1.0;
  return v;
}

void ValidateUnitVector(const Eigen::Ref<const Eigen::VectorXd>& x) {
  if (x.size() < 2) throw std::invalid_argument("unit vectors need dimension >= 2");
  if (std::fabs(x.norm() - 1.0) > 1e-9) {
    throw std::invalid_argument("input vector is not unit norm");
  }
}

PrivUnitParams CalibratePrivUnit(double eps, int d, double mu) {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  if (d < 2) throw std::invalid_argument("dimension must be >= 2");
  if (!(mu >= 0.0 && mu <= 1.0)) throw std::invalid_argument("mu must lie in [0, 1]");

  const double eps_cap = mu * eps;
  const double eps_coin = (1.0 - mu) * eps;

  PrivUnitParams params;
  params.eps = eps;
  params.d = d;
  params.mu = mu;
  params.p0 = 1.0 / (1.0 + std::exp(-eps_coin));

  // Branch one saturates gamma <= tanh(eps_cap / 2) sqrt(pi / (2(d-1))).
  double best = std::min(1.0, std::tanh(0.5 * eps_cap) * std::sqrt(M_PI / (2.0 * (d - 1.0))));

  // Branch two admits gamma in [sqrt(2/d), 1) while its budget stays under
  // eps_cap; the budget is strictly increasing in gamma, so the saturating
  // threshold is the unique root.
  const double gamma_min = std::sqrt(2.0 / static_cast<double>(d));
  if (gamma_min < 1.0 && BranchTwoBudget(gamma_min, d) <= eps_cap) {
    double lo = gamma_min;
    double hi = 1.0 - 1e-15;
    if (BranchTwoBudget(hi, d) <= eps_cap) {
      best = std::max(best, hi);
    } else {
      for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (BranchTwoBudget(mid, d) <= eps_cap) {
          lo = mid;
        } else {
          hi = mid;
        }
        if (hi - lo < 1e-14) break;
      }
      best = std::max(best, lo);
    }
  }

  if (!(best >= 0.0 && best <= 1.0)) {
    throw InfeasibleError("no feasible cap threshold for the requested budget");
  }
  params.gamma = best;
  return params;
}

double PrivUnitScaleFromCapProb(const PrivUnitParams& params, double cap_prob) {
  if (!(cap_prob >= 0.0 && cap_prob <= 1.0)) {
    throw std::domain_error("cap probability outside [0, 1]");
  }
  const double alpha = 0.5 * (params.d - 1.0);
  const double tau = 0.5 * (1.0 + params.gamma);
  const BetaShape shape{alpha, alpha};

  const double log_upper_mass = LogRegIncBeta(1.0 - tau, shape);  // 1 - I_tau
  const double log_lower_mass = LogRegIncBeta(tau, shape);
  if (log_upper_mass == -kInf) {
    throw DegeneracyError("upper incomplete-beta mass underflowed to zero");
  }

  // Signed bracket p / (1 - I_tau) - (1 - p) / I_tau in log space. A
  // difference below cancellation precision is an exact zero: the two cap
  // halves carry equal signal.
  const double s1 = cap_prob > 0.0 ? std::log(cap_prob) - log_upper_mass : -kInf;
  const double s2 = cap_prob < 1.0 ? std::log1p(-cap_prob) - log_lower_mass : -kInf;
  if (s1 == s2) return 0.0;
  if (std::isfinite(s1) && std::isfinite(s2) &&
      std::fabs(s1 - s2) <= 1e-12 * std::max({1.0, std::fabs(s1), std::fabs(s2)})) {
    return 0.0;
  }
  const double hi = std::max(s1, s2);
  const double lo = std::min(s1, s2);
  const double log_bracket =
      lo == -kInf ? hi : hi + std::log1p(-std::exp(lo - hi));
  const double sign = s1 >= s2 ? 1.0 : -1.0;

  const double log_prefactor = alpha * std::log1p(-params.gamma * params.gamma) -
                               (params.d - 2.0) * std::log(2.0) -
                               std::log(params.d - 1.0) - LogBeta(shape);
  return sign * std::exp(log_prefactor + log_bracket);
}

EstimatorScales PrivUnitScales(const PrivUnitParams& params) {
  return {PrivUnitScaleFromCapProb(params, params.p0), 0.0};
}

Eigen::VectorXd SamplePrivUnit(const Eigen::Ref<const Eigen::VectorXd>& x,
                               const PrivUnitParams& params, Rng& rng) {
  ValidateUnitVector(x);
  if (x.size() != params.d) throw std::invalid_argument("dimension mismatch");

  const double alpha = 0.5 * (params.d - 1.0);
  const double tau = 0.5 * (1.0 + params.gamma);
  const BetaShape shape{alpha, alpha};
  const double i_tau = RegIncBeta(tau, shape);

  const bool in_cap = rng.NextBernoulli(params.p0);
  const double u = rng.NextDouble();
  // u = (1 + t) / 2 of a uniform sphere point is Beta(alpha, alpha); the
  // cap choice truncates it to [tau, 1] or [0, tau).
  const double target = in_cap ? i_tau + u * (1.0 - i_tau) : u * i_tau;
  double t = 2.0 * RegIncBetaInverse(target, shape) - 1.0;
  if (in_cap) {
    t = std::clamp(t, params.gamma, 1.0);
  } else {
    t = std::clamp(t, -1.0, std::nextafter(params.gamma, -1.0));
  }

  // Uniform direction in the orthogonal complement of x.
  Eigen::VectorXd w(params.d);
  double norm2 = 0.0;
  do {
    FillGaussian(rng, w);
    w -= w.dot(x) * x;
    norm2 = w.squaredNorm();
  } while (norm2 == 0.0);
  w /= std::sqrt(norm2);

  Eigen::VectorXd z = t * x + std::sqrt(std::max(0.0, 1.0 - t * t)) * w;
  z /= z.norm();
  return z;
}

SubsetParams CalibrateSubset(double eps, int d) {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  if (d < 2) throw std::invalid_argument("dimension must be >= 2");
  SubsetParams params;
  params.eps = eps;
  params.d = d;
  // Tolerant ceiling: a budget that is d/(1+e^eps) = k up to floating
  // rounding must not spill to k + 1.
  const double exact = d / (1.0 + std::exp(eps));
  params.s = static_cast<int>(std::ceil(exact * (1.0 - 1e-12)));
  params.s = std::clamp(params.s, 1, d);
  return params;
}

EstimatorScales SubsetScales(const SubsetParams& params) {
  const double d = params.d;
  const double s = params.s;
  const double e = std::exp(params.eps);
  const double denom = (d - 1.0) * (s * (e - 1.0) + d);
  return {s * (d - s) * (e - 1.0) / denom, s * ((s - 1.0) * e + (d - s)) / denom};
}

SHotVector SampleSubset(int x, const SubsetParams& params, Rng& rng) {
  if (x < 0 || x >= params.d) throw std::invalid_argument("symbol out of range");

  const double s = params.s;
  const double d = params.d;
  const double e = std::exp(params.eps);
  const double p_include = s * e / (s * e + (d - s));

  SHotVector z;
  z.d = params.d;
  const bool include = rng.NextBernoulli(p_include);
  const int64_t extra = include ? params.s - 1 : params.s;
  std::vector<int32_t> picks;
  FloydSample(params.d - 1, extra, rng, &picks);
  z.ones.reserve(params.s);
  for (const int32_t v : picks) z.ones.push_back(v < x ? v : v + 1);
  if (include) z.ones.push_back(x);
  std::sort(z.ones.begin(), z.ones.end());
  return z;
}

Eigen::VectorXd Debias(const Eigen::Ref<const Eigen::VectorXd>& z,
                       const EstimatorScales& scales) {
  if (scales.m == 0.0) throw DegeneracyError("estimator scale is zero");
  return (z.array() - scales.b).matrix() / scales.m;
}

CapLevels AsCapLevels(const PrivUnitParams& params) {
  const double alpha = 0.5 * (params.d - 1.0);
  const double cap_fraction = RegIncBeta(1.0 - params.gamma * params.gamma,
                                         BetaShape{alpha, 0.5});
  if (cap_fraction <= 0.0) {
    throw DegeneracyError("spherical cap mass underflowed to zero");
  }
  CapLevels levels;
  levels.eps = params.eps;
  levels.cap_mass = 0.5 * cap_fraction;
  // Densities relative to the uniform reference; the surface area cancels.
  levels.c1 = 2.0 * params.p0 / cap_fraction;
  levels.c2 = 2.0 * (1.0 - params.p0) / (2.0 - cap_fraction);
  CheckCapLevels(levels);
  return levels;
}

CapLevels AsCapLevels(const SubsetParams& params) {
  const double log_a = LogBinomialCoefficient(params.d - 1, params.s - 1) + params.eps;
  const double log_b = LogBinomialCoefficient(params.d - 1, params.s);
  const double log_denom = std::max(log_a, log_b) +
                           std::log1p(std::exp(std::min(log_a, log_b) -
                                               std::max(log_a, log_b)));
  CapLevels levels;
  levels.eps = params.eps;
  levels.cap_mass = static_cast<double>(params.s) / params.d;
  levels.c1 = std::exp(params.eps - log_denom);
  levels.c2 = std::exp(-log_denom);
  CheckCapLevels(levels);
  return levels;
}

nlohmann::json ToJson(const PrivUnitParams& params) {
  return {{"kind", "privunit"}, {"eps", params.eps},     {"d", params.d},
          {"mu", params.mu},    {"gamma", params.gamma}, {"p0", params.p0}};
}

nlohmann::json ToJson(const SubsetParams& params) {
  return {{"kind", "ss"}, {"eps", params.eps}, {"d", params.d}, {"s", params.s}};
}

PrivUnitParams PrivUnitParamsFromJson(const nlohmann::json& j) {
  if (j.at("kind").get<std::string>() != "privunit") {
    throw std::invalid_argument("expected kind 'privunit'");
  }
  PrivUnitParams params;
  params.eps = j.at("eps").get<double>();
  params.d = j.at("d").get<int>();
  params.mu = j.at("mu").get<double>();
  params.gamma = j.at("gamma").get<double>();
  params.p0 = j.at("p0").get<double>();
  return params;
}

SubsetParams SubsetParamsFromJson(const nlohmann::json& j) {
  if (j.at("kind").get<std::string>() != "ss") {
    throw std::invalid_argument("expected kind 'ss'");
  }
  SubsetParams params;
  params.eps = j.at("eps").get<double>();
  params.d = j.at("d").get<int>();
  params.s = j.at("s").get<int>();
  return params;
}

PrivUnitMechanism::PrivUnitMechanism(const PrivUnitParams& params)
    : params_(params), levels_(AsCapLevels(params)), scales_(PrivUnitScales(params)) {}

PrivUnitMechanism::Output PrivUnitMechanism::CandidateAt(uint64_t pool_seed,
                                                         int64_t k) const {
  Rng rng(CandidateSeed(pool_seed, kPoolTag, k));
  return UniformUnitVector(params_.d, rng);
}

bool PrivUnitMechanism::CandidateInCap(uint64_t pool_seed, int64_t k,
                                       const Input& x) const {
  thread_local Eigen::VectorXd scratch;
  scratch.resize(params_.d);
  Rng rng(CandidateSeed(pool_seed, kPoolTag, k));
  double norm2 = 0.0;
  do {
    FillGaussian(rng, scratch);
    norm2 = scratch.squaredNorm();
  } while (norm2 == 0.0);
  return x.dot(scratch) >= params_.gamma * std::sqrt(norm2);
}

SubsetMechanism::SubsetMechanism(const SubsetParams& params)
    : params_(params), levels_(AsCapLevels(params)), scales_(SubsetScales(params)) {}

SubsetMechanism::Output SubsetMechanism::CandidateAt(uint64_t pool_seed,
                                                     int64_t k) const {
  Rng rng(CandidateSeed(pool_seed, kPoolTag, k));
  SHotVector z;
  z.d = params_.d;
  FloydSample(params_.d, params_.s, rng, &z.ones);
  std::sort(z.ones.begin(), z.ones.end());
  return z;
}

bool SubsetMechanism::CandidateInCap(uint64_t pool_seed, int64_t k, Input x) const {
  thread_local std::vector<int32_t> scratch;
  Rng rng(CandidateSeed(pool_seed, kPoolTag, k));
  FloydSample(params_.d, params_.s, rng, &scratch);
  return std::find(scratch.begin(), scratch.end(), x) != scratch.end();
}

}  // namespace ldpc
