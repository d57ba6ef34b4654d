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

#include "ldpc/experiments.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "ldpc/errors.h"
#include "ldpc/mmrc.h"
#include "ldpc/mrc.h"
#include "ldpc/numerics.h"

namespace ldpc {
namespace {

constexpr uint64_t kDataTag = 0x64617461;
constexpr uint64_t kSharedTag = 0x73686172;
constexpr uint64_t kPrivateTag = 0x70726976;

// Users are accumulated in fixed chunks combined in chunk order, so the
// result does not depend on the thread count.
constexpr int64_t kChunkUsers = 64;

int ResolveThreads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

int64_t PoolSizeFor(int bits) {
  if (bits < 0 || bits > 20) {
    throw InfeasibleError("bits must lie in [0, 20]: the pool guard is 2^20 candidates");
  }
  return int64_t{1} << bits;
}

// Splits [0, n) into kChunkUsers-sized chunks and runs them on a small
// thread pool; worker(chunk_index, begin, end) must only touch its chunk.
template <typename Worker>
void ParallelChunks(int64_t n, int threads, Worker worker) {
  const int64_t chunks = (n + kChunkUsers - 1) / kChunkUsers;
  std::atomic<int64_t> next{0};
  auto run = [&]() {
    while (true) {
      const int64_t c = next.fetch_add(1);
      if (c >= chunks) return;
      const int64_t begin = c * kChunkUsers;
      const int64_t end = std::min(n, begin + kChunkUsers);
      worker(c, begin, end);
    }
  };
  const int team = static_cast<int>(std::max<int64_t>(1, std::min<int64_t>(threads, chunks)));
  if (team == 1) {
    run();
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(team);
  for (int i = 0; i < team; ++i) pool.emplace_back(run);
  for (auto& t : pool) t.join();
}

struct PipelineScales {
  EstimatorScales scales;
  int64_t n_candidates = 0;
};

PipelineScales MeanScalesFor(const MeanConfig& config, const PrivUnitParams& params) {
  switch (config.method) {
    case Method::kPrivUnit:
      return {PrivUnitScales(params), 0};
    case Method::kMrcPu:
      return {MrcPrivUnitScales(params, PoolSizeFor(config.bits)), PoolSizeFor(config.bits)};
    case Method::kMmrcPu: {
      const MmrcScales s = MmrcPrivUnitScales(params, PoolSizeFor(config.bits));
      return {{s.m, s.b}, PoolSizeFor(config.bits)};
    }
    default:
      throw std::invalid_argument("mean estimation needs a unit-vector method");
  }
}

PipelineScales FreqScalesFor(const FreqConfig& config, const SubsetParams& params) {
  switch (config.method) {
    case Method::kSs:
      return {SubsetScales(params), 0};
    case Method::kMrcSs:
      return {MrcSubsetScales(params, PoolSizeFor(config.bits)), PoolSizeFor(config.bits)};
    case Method::kMmrcSs: {
      const MmrcScales s = MmrcSubsetScales(params, PoolSizeFor(config.bits));
      return {{s.m, s.b}, PoolSizeFor(config.bits)};
    }
    default:
      throw std::invalid_argument("frequency estimation needs a categorical method");
  }
}

template <typename Mech>
Eigen::VectorXd CodecEstimate(const Mech& mech, bool clamped,
                              const typename Mech::Input& x, uint64_t shared_seed,
                              int64_t n_candidates, const EstimatorScales& scales,
                              Rng& private_rng) {
  const PoolScan scan = ScanPool(mech, shared_seed, n_candidates, x);
  const TwoLevelProbs probs = clamped
                                  ? MmrcTwoLevel(mech.levels(), scan.n_in, n_candidates)
                                  : MrcTwoLevel(mech.levels(), scan.n_in, n_candidates);
  const CompressedMessage msg = EncodeTwoLevel(probs, scan, private_rng);
  return Debias(mech.ToDense(mech.CandidateAt(shared_seed, msg.index)), scales);
}

}  // namespace

std::string ToString(Method method) {
  switch (method) {
    case Method::kPrivUnit:
      return "privunit";
    case Method::kMrcPu:
      return "mrc-pu";
    case Method::kMmrcPu:
      return "mmrc-pu";
    case Method::kSs:
      return "ss";
    case Method::kMrcSs:
      return "mrc-ss";
    case Method::kMmrcSs:
      return "mmrc-ss";
  }
  return "unknown";
}

Method MethodFromString(const std::string& name) {
  if (name == "privunit") return Method::kPrivUnit;
  if (name == "mrc-pu") return Method::kMrcPu;
  if (name == "mmrc-pu") return Method::kMmrcPu;
  if (name == "ss") return Method::kSs;
  if (name == "mrc-ss") return Method::kMrcSs;
  if (name == "mmrc-ss") return Method::kMmrcSs;
  throw std::invalid_argument("unknown method: " + name);
}

bool IsMeanMethod(Method method) {
  return method == Method::kPrivUnit || method == Method::kMrcPu ||
         method == Method::kMmrcPu;
}

bool UsesCodec(Method method) {
  return method == Method::kMrcPu || method == Method::kMmrcPu ||
         method == Method::kMrcSs || method == Method::kMmrcSs;
}

std::vector<Eigen::VectorXd> GenMeanData(int64_t n, int d, uint64_t seed) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("mean data needs an even n >= 2");
  if (d < 2) throw std::invalid_argument("dimension must be >= 2");
  Rng rng(DeriveSeed(seed, kDataTag));
  std::vector<Eigen::VectorXd> data;
  data.reserve(n);
  for (int64_t i = 0; i < n; ++i) {
    const double center = i < n / 2 ? 1.0 : 10.0;
    Eigen::VectorXd x(d);
    for (int j = 0; j < d; ++j) x[j] = center + rng.NextGaussian();
    const double norm = x.norm();
    if (norm == 0.0) {
      x[0] = 1.0;
    } else {
      x /= norm;
    }
    data.push_back(std::move(x));
  }
  return data;
}

std::vector<int> GenFreqData(int64_t n, int d, uint64_t seed) {
  if (n < 1) throw std::invalid_argument("need at least one user");
  if (d < 1) throw std::invalid_argument("dimension must be >= 1");
  std::vector<double> cdf(d);
  double total = 0.0;
  for (int i = 0; i < d; ++i) {
    total += 1.0 / (i + 1.0);
    cdf[i] = total;
  }
  for (int i = 0; i < d; ++i) cdf[i] /= total;
  Rng rng(DeriveSeed(seed, kDataTag));
  std::vector<int> data(n);
  for (int64_t i = 0; i < n; ++i) {
    const double u = rng.NextDouble();
    data[i] = static_cast<int>(
        std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
  }
  return data;
}

TrialResult RunMeanEstimation(const MeanConfig& config, int trial_index) {
  const auto start = std::chrono::steady_clock::now();
  const uint64_t trial_seed =
      DeriveSeed(config.master_seed, static_cast<uint64_t>(trial_index));
  const std::vector<Eigen::VectorXd> data = GenMeanData(config.n, config.d, trial_seed);

  Eigen::VectorXd target = Eigen::VectorXd::Zero(config.d);
  for (const auto& x : data) target += x;
  target /= static_cast<double>(config.n);

  const PrivUnitParams params = CalibratePrivUnit(config.eps, config.d, config.mu);
  const PipelineScales pipeline = MeanScalesFor(config, params);
  const PrivUnitMechanism mech(params);
  const bool clamped = config.method == Method::kMmrcPu;

  const int64_t chunks = (config.n + kChunkUsers - 1) / kChunkUsers;
  std::vector<Eigen::VectorXd> partial(chunks, Eigen::VectorXd::Zero(config.d));
  ParallelChunks(config.n, ResolveThreads(config.threads),
                 [&](int64_t chunk, int64_t begin, int64_t end) {
                   Eigen::VectorXd& sum = partial[chunk];
                   for (int64_t u = begin; u < end; ++u) {
                     Rng private_rng(DeriveSeed(trial_seed, kPrivateTag,
                                                static_cast<uint64_t>(u)));
                     if (config.method == Method::kPrivUnit) {
                       sum += Debias(mech.Sample(data[u], private_rng), pipeline.scales);
                     } else {
                       const uint64_t shared = DeriveSeed(trial_seed, kSharedTag,
                                                          static_cast<uint64_t>(u));
                       sum += CodecEstimate(mech, clamped, data[u], shared,
                                            pipeline.n_candidates, pipeline.scales,
                                            private_rng);
                     }
                   }
                 });
  Eigen::VectorXd estimate = Eigen::VectorXd::Zero(config.d);
  for (const auto& p : partial) estimate += p;
  estimate /= static_cast<double>(config.n);

  TrialResult result;
  result.method = config.method;
  result.eps = config.eps;
  result.d = config.d;
  result.n = config.n;
  result.bits = config.bits;
  result.n_candidates = pipeline.n_candidates;
  result.l2_error = (estimate - target).squaredNorm();
  result.bits_used = UsesCodec(config.method)
                         ? BitWidthFor(pipeline.n_candidates)
                         : int64_t{64} * config.d;
  result.seed = config.master_seed;
  result.trial_index = trial_index;
  result.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

TrialResult RunFreqEstimation(const FreqConfig& config, int trial_index) {
  const auto start = std::chrono::steady_clock::now();
  const uint64_t trial_seed =
      DeriveSeed(config.master_seed, static_cast<uint64_t>(trial_index));
  const std::vector<int> data = GenFreqData(config.n, config.d, trial_seed);

  Eigen::VectorXd target = Eigen::VectorXd::Zero(config.d);
  for (const int x : data) target[x] += 1.0;
  target /= static_cast<double>(config.n);

  const SubsetParams params = CalibrateSubset(config.eps, config.d);
  const PipelineScales pipeline = FreqScalesFor(config, params);
  const SubsetMechanism mech(params);
  const bool clamped = config.method == Method::kMmrcSs;

  const int64_t chunks = (config.n + kChunkUsers - 1) / kChunkUsers;
  std::vector<Eigen::VectorXd> partial(chunks, Eigen::VectorXd::Zero(config.d));
  ParallelChunks(config.n, ResolveThreads(config.threads),
                 [&](int64_t chunk, int64_t begin, int64_t end) {
                   Eigen::VectorXd& sum = partial[chunk];
                   for (int64_t u = begin; u < end; ++u) {
                     Rng private_rng(DeriveSeed(trial_seed, kPrivateTag,
                                                static_cast<uint64_t>(u)));
                     if (config.method == Method::kSs) {
                       sum += Debias(mech.Sample(data[u], private_rng).Dense(),
                                     pipeline.scales);
                     } else {
                       const uint64_t shared = DeriveSeed(trial_seed, kSharedTag,
                                                          static_cast<uint64_t>(u));
                       sum += CodecEstimate(mech, clamped, data[u], shared,
                                            pipeline.n_candidates, pipeline.scales,
                                            private_rng);
                     }
                   }
                 });
  Eigen::VectorXd estimate = Eigen::VectorXd::Zero(config.d);
  for (const auto& p : partial) estimate += p;
  estimate /= static_cast<double>(config.n);

  TrialResult result;
  result.method = config.method;
  result.eps = config.eps;
  result.d = config.d;
  result.n = config.n;
  result.bits = config.bits;
  result.n_candidates = pipeline.n_candidates;
  result.l2_error = (estimate - target).squaredNorm();
  result.bits_used =
      UsesCodec(config.method) ? BitWidthFor(pipeline.n_candidates) : config.d;
  result.seed = config.master_seed;
  result.trial_index = trial_index;
  result.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

namespace {

template <typename Config, typename Runner>
AggregateResult AggregateImpl(const Config& config, Runner runner) {
  if (config.trials < 1) throw std::invalid_argument("need at least one trial");
  double sum = 0.0;
  double sumsq = 0.0;
  AggregateResult agg;
  for (int t = 0; t < config.trials; ++t) {
    const TrialResult r = runner(config, t);
    sum += r.l2_error;
    sumsq += r.l2_error * r.l2_error;
    if (t == 0) {
      agg.method = r.method;
      agg.eps = r.eps;
      agg.d = r.d;
      agg.n = r.n;
      agg.bits = r.bits;
      agg.n_candidates = r.n_candidates;
      agg.seed = r.seed;
    }
  }
  const double trials = static_cast<double>(config.trials);
  agg.trials = config.trials;
  agg.l2_mean = sum / trials;
  if (config.trials > 1) {
    const double var =
        std::max(0.0, (sumsq - sum * sum / trials) / (trials - 1.0));
    agg.l2_stderr = std::sqrt(var / trials);
  }
  return agg;
}

}  // namespace

AggregateResult Aggregate(const MeanConfig& config) {
  return AggregateImpl(config, [](const MeanConfig& c, int t) {
    return RunMeanEstimation(c, t);
  });
}

AggregateResult Aggregate(const FreqConfig& config) {
  return AggregateImpl(config, [](const FreqConfig& c, int t) {
    return RunFreqEstimation(c, t);
  });
}

SweepAxis SweepAxisFromString(const std::string& name) {
  if (name == "bits") return SweepAxis::kBits;
  if (name == "eps") return SweepAxis::kEps;
  if (name == "d") return SweepAxis::kD;
  if (name == "n") return SweepAxis::kN;
  throw std::invalid_argument("unknown sweep axis: " + name);
}

std::string ToString(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kBits:
      return "bits";
    case SweepAxis::kEps:
      return "eps";
    case SweepAxis::kD:
      return "d";
    case SweepAxis::kN:
      return "n";
  }
  return "unknown";
}

namespace {

template <typename Config>
void ApplyAxis(SweepAxis axis, double value, Config* config) {
  switch (axis) {
    case SweepAxis::kBits:
      config->bits = static_cast<int>(value);
      break;
    case SweepAxis::kEps:
      config->eps = value;
      break;
    case SweepAxis::kD:
      config->d = static_cast<int>(value);
      break;
    case SweepAxis::kN:
      config->n = static_cast<int64_t>(value);
      break;
  }
}

}  // namespace

std::vector<AggregateResult> SweepMean(SweepAxis axis, const std::vector<double>& grid,
                                       const MeanConfig& base) {
  if (grid.empty()) throw std::invalid_argument("sweep grid is empty");
  std::vector<AggregateResult> rows;
  rows.reserve(grid.size());
  for (const double value : grid) {
    MeanConfig config = base;
    ApplyAxis(axis, value, &config);
    rows.push_back(Aggregate(config));
  }
  return rows;
}

std::vector<AggregateResult> SweepFreq(SweepAxis axis, const std::vector<double>& grid,
                                       const FreqConfig& base) {
  if (grid.empty()) throw std::invalid_argument("sweep grid is empty");
  std::vector<AggregateResult> rows;
  rows.reserve(grid.size());
  for (const double value : grid) {
    FreqConfig config = base;
    ApplyAxis(axis, value, &config);
    rows.push_back(Aggregate(config));
  }
  return rows;
}

std::string CsvHeader() {
  return "method,eps,d,n,bits,N,l2_error_mean,l2_error_stderr,trials,seed";
}

std::string ToCsvRow(const AggregateResult& row) {
  std::ostringstream out;
  out.precision(17);
  out << ToString(row.method) << ',' << row.eps << ',' << row.d << ',' << row.n << ','
      << row.bits << ',' << row.n_candidates << ',' << row.l2_mean << ','
      << row.l2_stderr << ',' << row.trials << ',' << row.seed;
  return out.str();
}

nlohmann::json ToJson(const AggregateResult& row) {
  return {{"method", ToString(row.method)},
          {"eps", row.eps},
          {"d", row.d},
          {"n", row.n},
          {"bits", row.bits},
          {"N", row.n_candidates},
          {"l2_error_mean", row.l2_mean},
          {"l2_error_stderr", row.l2_stderr},
          {"trials", row.trials},
          {"seed", row.seed}};
}

namespace {

template <typename Config>
void LoadCommon(const nlohmann::json& j, Config* config) {
  if (j.contains("n")) config->n = j.at("n").get<int64_t>();
  if (j.contains("d")) config->d = j.at("d").get<int>();
  if (j.contains("eps")) config->eps = j.at("eps").get<double>();
  if (j.contains("method")) {
    config->method = MethodFromString(j.at("method").get<std::string>());
  }
  if (j.contains("bits")) config->bits = j.at("bits").get<int>();
  if (j.contains("trials")) config->trials = j.at("trials").get<int>();
  if (j.contains("master_seed")) config->master_seed = j.at("master_seed").get<uint64_t>();
  if (j.contains("threads")) config->threads = j.at("threads").get<int>();
}

}  // namespace

MeanConfig MeanConfigFromJson(const nlohmann::json& j) {
  MeanConfig config;
  LoadCommon(j, &config);
  if (j.contains("mu")) config.mu = j.at("mu").get<double>();
  if (!IsMeanMethod(config.method)) {
    throw std::invalid_argument("mean config carries a categorical method");
  }
  return config;
}

FreqConfig FreqConfigFromJson(const nlohmann::json& j) {
  FreqConfig config;
  LoadCommon(j, &config);
  if (IsMeanMethod(config.method)) {
    throw std::invalid_argument("freq config carries a unit-vector method");
  }
  return config;
}

nlohmann::json ToJson(const MeanConfig& config) {
  return {{"n", config.n},           {"d", config.d},
          {"eps", config.eps},       {"mu", config.mu},
          {"method", ToString(config.method)}, {"bits", config.bits},
          {"trials", config.trials}, {"master_seed", config.master_seed},
          {"threads", config.threads}};
}

nlohmann::json ToJson(const FreqConfig& config) {
  return {{"n", config.n},           {"d", config.d},
          {"eps", config.eps},       {"method", ToString(config.method)},
          {"bits", config.bits},     {"trials", config.trials},
          {"master_seed", config.master_seed}, {"threads", config.threads}};
}

}  // namespace ldpc
