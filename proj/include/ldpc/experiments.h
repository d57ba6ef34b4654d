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

#ifndef LDPC_EXPERIMENTS_H_
#define LDPC_EXPERIMENTS_H_

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"
#include "ldpc/mechanisms.h"

namespace ldpc {

enum class Method { kPrivUnit, kMrcPu, kMmrcPu, kSs, kMrcSs, kMmrcSs };

std::string ToString(Method method);
Method MethodFromString(const std::string& name);
bool IsMeanMethod(Method method);
bool UsesCodec(Method method);

// Mean-estimation experiment: n users holding unit vectors, privatized and
// possibly compressed through an N = 2^bits shared pool per user.
struct MeanConfig {
  int64_t n = 1000;
  int d = 10;
  double eps = 1.0;
  double mu = 0.5;
  Method method = Method::kPrivUnit;
  int bits = 8;
  int trials = 10;
  uint64_t master_seed = 0;
  int threads = 0;  // 0 picks the hardware parallelism
};

struct FreqConfig {
  int64_t n = 1000;
  int d = 10;
  double eps = 1.0;
  Method method = Method::kSs;
  int bits = 8;
  int trials = 10;
  uint64_t master_seed = 0;
  int threads = 0;
};

struct TrialResult {
  Method method = Method::kPrivUnit;
  double eps = 0.0;
  int d = 0;
  int64_t n = 0;
  int bits = 0;
  int64_t n_candidates = 0;  // 0 for uncompressed mechanisms
  double l2_error = 0.0;     // squared l2 distance to the target
  int64_t bits_used = 0;
  double wall_time_s = 0.0;
  uint64_t seed = 0;
  int trial_index = 0;
};

struct AggregateResult {
  Method method = Method::kPrivUnit;
  double eps = 0.0;
  int d = 0;
  int64_t n = 0;
  int bits = 0;
  int64_t n_candidates = 0;
  double l2_mean = 0.0;
  double l2_stderr = 0.0;
  int trials = 0;
  uint64_t seed = 0;
};

// Two normalized Gaussian populations, N(1,1)^d then N(10,1)^d, half each.
std::vector<Eigen::VectorXd> GenMeanData(int64_t n, int d, uint64_t seed);

// Zipf(1) symbols over [0, d): P(i) proportional to 1 / (i + 1).
std::vector<int> GenFreqData(int64_t n, int d, uint64_t seed);

TrialResult RunMeanEstimation(const MeanConfig& config, int trial_index = 0);
TrialResult RunFreqEstimation(const FreqConfig& config, int trial_index = 0);

// Mean and standard error of the squared error over config.trials
// independent repetitions.
AggregateResult Aggregate(const MeanConfig& config);
AggregateResult Aggregate(const FreqConfig& config);

enum class SweepAxis { kBits, kEps, kD, kN };
SweepAxis SweepAxisFromString(const std::string& name);
std::string ToString(SweepAxis axis);

std::vector<AggregateResult> SweepMean(SweepAxis axis, const std::vector<double>& grid,
                                       const MeanConfig& base);
std::vector<AggregateResult> SweepFreq(SweepAxis axis, const std::vector<double>& grid,
                                       const FreqConfig& base);

std::string CsvHeader();
std::string ToCsvRow(const AggregateResult& row);
nlohmann::json ToJson(const AggregateResult& row);

MeanConfig MeanConfigFromJson(const nlohmann::json& j);
FreqConfig FreqConfigFromJson(const nlohmann::json& j);
nlohmann::json ToJson(const MeanConfig& config);
nlohmann::json ToJson(const FreqConfig& config);

}  // namespace ldpc

#endif  // LDPC_EXPERIMENTS_H_
