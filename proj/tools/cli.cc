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

#include "cli.h"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "ldpc/audit.h"
#include "ldpc/errors.h"
#include "ldpc/experiments.h"
#include "ldpc/mechanisms.h"
#include "ldpc/mmrc.h"
#include "ldpc/mrc.h"

namespace ldpc {
namespace {

// Shared knobs; eps is taken in nats, --eps-bits converts from bits.
struct CommonFlags {
  double eps = 1.0;
  double eps_bits = 0.0;
  uint64_t seed = 0;
  std::string out_path;
  std::string format = "csv";
};

void AddEpsFlags(CLI::App* cmd, CommonFlags* flags) {
  auto* eps = cmd->add_option("--eps", flags->eps, "privacy budget in nats");
  auto* eps_bits =
      cmd->add_option("--eps-bits", flags->eps_bits, "privacy budget in bits");
  eps->excludes(eps_bits);
  eps_bits->excludes(eps);
}

void ResolveEps(const CLI::App& cmd, CommonFlags* flags) {
  if (cmd.count("--eps-bits") > 0) flags->eps = flags->eps_bits * std::log(2.0);
}

// LDPC_SEED in the environment overrides --seed.
void ResolveSeed(CommonFlags* flags) {
  if (const char* env = std::getenv("LDPC_SEED")) {
    flags->seed = std::strtoull(env, nullptr, 10);
  }
}

void Emit(const CommonFlags& flags, const std::string& text, std::ostream& out) {
  if (flags.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(flags.out_path, std::ios::binary | std::ios::trunc);
  if (!file) throw std::invalid_argument("cannot open output path: " + flags.out_path);
  file << text;
}

std::string RowsToText(const std::vector<AggregateResult>& rows,
                       const std::string& format) {
  if (format == "json") {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& row : rows) arr.push_back(ToJson(row));
    return arr.dump(2) + "\n";
  }
  std::ostringstream text;
  text << CsvHeader() << "\n";
  for (const auto& row : rows) text << ToCsvRow(row) << "\n";
  return text.str();
}

std::vector<double> ParseGrid(const std::string& csv) {
  std::vector<double> grid;
  std::stringstream stream(csv);
  std::string item;
  while (std::getline(stream, item, ',')) {
    if (!item.empty()) grid.push_back(std::stod(item));
  }
  return grid;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"locally differentially private randomizers with shared-randomness compression"};
  app.name("ldpc");
  app.require_subcommand(1);

  // calibrate
  auto* calibrate = app.add_subcommand("calibrate", "emit mechanism parameters as JSON");
  auto calibrate_flags = std::make_shared<CommonFlags>();
  auto calibrate_mech = std::make_shared<std::string>("privunit");
  auto calibrate_d = std::make_shared<int>(10);
  auto calibrate_mu = std::make_shared<double>(0.5);
  AddEpsFlags(calibrate, calibrate_flags.get());
  calibrate->add_option("--mech", *calibrate_mech, "mechanism: privunit | ss")
      ->check(CLI::IsMember({"privunit", "ss"}));
  calibrate->add_option("--d", *calibrate_d, "dimension / alphabet size");
  calibrate->add_option("--mu", *calibrate_mu, "budget split toward the cap threshold");
  calibrate->add_option("--out", calibrate_flags->out_path, "output path (default stdout)");
  calibrate->callback([=, &out]() {
    ResolveEps(*calibrate, calibrate_flags.get());
    const nlohmann::json j =
        *calibrate_mech == "privunit"
            ? ToJson(CalibratePrivUnit(calibrate_flags->eps, *calibrate_d, *calibrate_mu))
            : ToJson(CalibrateSubset(calibrate_flags->eps, *calibrate_d));
    Emit(*calibrate_flags, j.dump(2) + "\n", out);
  });

  // mean / freq
  auto mean_flags = std::make_shared<CommonFlags>();
  auto mean_cfg = std::make_shared<MeanConfig>();
  auto mean_method = std::make_shared<std::string>("privunit");
  auto mean_config_path = std::make_shared<std::string>();
  auto* mean = app.add_subcommand("mean", "empirical mean estimation across users");
  AddEpsFlags(mean, mean_flags.get());
  mean->add_option("--config", *mean_config_path, "JSON config file mirroring the flags");
  mean->add_option("--d", mean_cfg->d, "dimension");
  mean->add_option("--n", mean_cfg->n, "number of users");
  mean->add_option("--method", *mean_method, "privunit | mrc-pu | mmrc-pu");
  mean->add_option("--bits", mean_cfg->bits, "index width; the pool holds 2^bits candidates");
  mean->add_option("--mu", mean_cfg->mu, "budget split toward the cap threshold");
  mean->add_option("--trials", mean_cfg->trials, "independent repetitions to average");
  mean->add_option("--seed", mean_flags->seed, "master seed (env LDPC_SEED overrides)");
  mean->add_option("--threads", mean_cfg->threads, "worker threads; 0 = all cores");
  mean->add_option("--out", mean_flags->out_path, "output path (default stdout)");
  mean->add_option("--format", mean_flags->format, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}));
  mean->callback([=, &out]() {
    MeanConfig cfg = *mean_cfg;
    if (!mean_config_path->empty()) {
      std::ifstream file(*mean_config_path);
      if (!file) throw std::invalid_argument("cannot read config: " + *mean_config_path);
      cfg = MeanConfigFromJson(nlohmann::json::parse(file));
      // Explicit flags override the file.
      if (mean->count("--d")) cfg.d = mean_cfg->d;
      if (mean->count("--n")) cfg.n = mean_cfg->n;
      if (mean->count("--bits")) cfg.bits = mean_cfg->bits;
      if (mean->count("--mu")) cfg.mu = mean_cfg->mu;
      if (mean->count("--trials")) cfg.trials = mean_cfg->trials;
      if (mean->count("--threads")) cfg.threads = mean_cfg->threads;
    }
    ResolveEps(*mean, mean_flags.get());
    ResolveSeed(mean_flags.get());
    if (mean->count("--eps") || mean->count("--eps-bits") || mean_config_path->empty()) {
      cfg.eps = mean_flags->eps;
    }
    if (mean->count("--method") || mean_config_path->empty()) {
      cfg.method = MethodFromString(*mean_method);
    }
    if (mean->count("--seed") || std::getenv("LDPC_SEED") || mean_config_path->empty()) {
      cfg.master_seed = mean_flags->seed;
    }
    if (!IsMeanMethod(cfg.method)) {
      throw std::invalid_argument("mean estimation needs a unit-vector method");
    }
    Emit(*mean_flags, RowsToText({Aggregate(cfg)}, mean_flags->format), out);
  });

  auto freq_flags = std::make_shared<CommonFlags>();
  auto freq_cfg = std::make_shared<FreqConfig>();
  auto freq_method = std::make_shared<std::string>("ss");
  auto freq_config_path = std::make_shared<std::string>();
  auto* freq = app.add_subcommand("freq", "empirical frequency estimation across users");
  AddEpsFlags(freq, freq_flags.get());
  freq->add_option("--config", *freq_config_path, "JSON config file mirroring the flags");
  freq->add_option("--d", freq_cfg->d, "alphabet size");
  freq->add_option("--n", freq_cfg->n, "number of users");
  freq->add_option("--method", *freq_method, "ss | mrc-ss | mmrc-ss");
  freq->add_option("--bits", freq_cfg->bits, "index width; the pool holds 2^bits candidates");
  freq->add_option("--trials", freq_cfg->trials, "independent repetitions to average");
  freq->add_option("--seed", freq_flags->seed, "master seed (env LDPC_SEED overrides)");
  freq->add_option("--threads", freq_cfg->threads, "worker threads; 0 = all cores");
  freq->add_option("--out", freq_flags->out_path, "output path (default stdout)");
  freq->add_option("--format", freq_flags->format, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}));
  freq->callback([=, &out]() {
    FreqConfig cfg = *freq_cfg;
    if (!freq_config_path->empty()) {
      std::ifstream file(*freq_config_path);
      if (!file) throw std::invalid_argument("cannot read config: " + *freq_config_path);
      cfg = FreqConfigFromJson(nlohmann::json::parse(file));
      if (freq->count("--d")) cfg.d = freq_cfg->d;
      if (freq->count("--n")) cfg.n = freq_cfg->n;
      if (freq->count("--bits")) cfg.bits = freq_cfg->bits;
      if (freq->count("--trials")) cfg.trials = freq_cfg->trials;
      if (freq->count("--threads")) cfg.threads = freq_cfg->threads;
    }
    ResolveEps(*freq, freq_flags.get());
    ResolveSeed(freq_flags.get());
    if (freq->count("--eps") || freq->count("--eps-bits") || freq_config_path->empty()) {
      cfg.eps = freq_flags->eps;
    }
    if (freq->count("--method") || freq_config_path->empty()) {
      cfg.method = MethodFromString(*freq_method);
    }
    if (freq->count("--seed") || std::getenv("LDPC_SEED") || freq_config_path->empty()) {
      cfg.master_seed = freq_flags->seed;
    }
    if (IsMeanMethod(cfg.method)) {
      throw std::invalid_argument("frequency estimation needs a categorical method");
    }
    Emit(*freq_flags, RowsToText({Aggregate(cfg)}, freq_flags->format), out);
  });

  // sweep
  auto sweep_flags = std::make_shared<CommonFlags>();
  auto sweep_task = std::make_shared<std::string>("mean");
  auto sweep_axis = std::make_shared<std::string>("bits");
  auto sweep_grid = std::make_shared<std::string>();
  auto sweep_cfg = std::make_shared<MeanConfig>();
  auto sweep_freq_cfg = std::make_shared<FreqConfig>();
  auto sweep_method = std::make_shared<std::string>("privunit");
  auto* sweep = app.add_subcommand("sweep", "grid of runs along one axis");
  AddEpsFlags(sweep, sweep_flags.get());
  sweep->add_option("--task", *sweep_task, "mean | freq")
      ->check(CLI::IsMember({"mean", "freq"}));
  sweep->add_option("--axis", *sweep_axis, "bits | eps | d | n")
      ->check(CLI::IsMember({"bits", "eps", "d", "n"}));
  sweep->add_option("--grid", *sweep_grid, "comma-separated axis values")->required();
  sweep->add_option("--d", sweep_cfg->d, "dimension / alphabet size");
  sweep->add_option("--n", sweep_cfg->n, "number of users");
  sweep->add_option("--method", *sweep_method, "estimation method");
  sweep->add_option("--bits", sweep_cfg->bits, "index width when not the swept axis");
  sweep->add_option("--mu", sweep_cfg->mu, "budget split (privunit family)");
  sweep->add_option("--trials", sweep_cfg->trials, "repetitions per grid point");
  sweep->add_option("--seed", sweep_flags->seed, "master seed (env LDPC_SEED overrides)");
  sweep->add_option("--threads", sweep_cfg->threads, "worker threads; 0 = all cores");
  sweep->add_option("--out", sweep_flags->out_path, "output path (default stdout)");
  sweep->add_option("--format", sweep_flags->format, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}));
  sweep->callback([=, &out]() {
    ResolveEps(*sweep, sweep_flags.get());
    ResolveSeed(sweep_flags.get());
    const std::vector<double> grid = ParseGrid(*sweep_grid);
    const SweepAxis axis = SweepAxisFromString(*sweep_axis);
    std::vector<AggregateResult> rows;
    if (*sweep_task == "mean") {
      MeanConfig cfg = *sweep_cfg;
      cfg.eps = sweep_flags->eps;
      cfg.master_seed = sweep_flags->seed;
      cfg.method = MethodFromString(*sweep_method);
      rows = SweepMean(axis, grid, cfg);
    } else {
      FreqConfig cfg;
      cfg.d = sweep_cfg->d;
      cfg.n = sweep_cfg->n;
      cfg.bits = sweep_cfg->bits;
      cfg.trials = sweep_cfg->trials;
      cfg.threads = sweep_cfg->threads;
      cfg.eps = sweep_flags->eps;
      cfg.master_seed = sweep_flags->seed;
      cfg.method = MethodFromString(*sweep_method);
      rows = SweepFreq(axis, grid, cfg);
    }
    Emit(*sweep_flags, RowsToText(rows, sweep_flags->format), out);
  });

  // audit
  auto audit_flags = std::make_shared<CommonFlags>();
  auto audit_codec = std::make_shared<std::string>("mmrc");
  auto audit_mech = std::make_shared<std::string>("ss");
  auto audit_mode = std::make_shared<std::string>("exhaustive");
  auto audit_d = std::make_shared<int>(3);
  auto audit_mu = std::make_shared<double>(0.5);
  auto audit_n = std::make_shared<int64_t>(2);
  auto audit_trials = std::make_shared<int64_t>(1000);
  auto audit_approx = std::make_shared<bool>(false);
  auto audit_c0 = std::make_shared<double>(3.0);
  auto audit_delta = std::make_shared<double>(1e-6);
  auto* audit = app.add_subcommand("audit", "certify privacy of a codec or raw mechanism");
  AddEpsFlags(audit, audit_flags.get());
  audit->add_option("--codec", *audit_codec, "raw | mrc | mmrc")
      ->check(CLI::IsMember({"raw", "mrc", "mmrc"}));
  audit->add_option("--mech", *audit_mech, "ss | privunit")
      ->check(CLI::IsMember({"ss", "privunit"}));
  audit->add_option("--mode", *audit_mode, "exhaustive | sampled")
      ->check(CLI::IsMember({"exhaustive", "sampled"}));
  audit->add_option("--d", *audit_d, "dimension / alphabet size");
  audit->add_option("--mu", *audit_mu, "budget split (privunit)");
  audit->add_option("--n-candidates", *audit_n, "shared pool size");
  audit->add_option("--trials", *audit_trials, "pools to sample (sampled / approx)");
  audit->add_option("--seed", audit_flags->seed, "sampling seed (env LDPC_SEED overrides)");
  audit->add_flag("--approx", *audit_approx, "check the approximate guarantee instead");
  audit->add_option("--c0", *audit_c0, "concentration constant of the approximate bound");
  audit->add_option("--delta", *audit_delta, "failure probability of the approximate bound");
  audit->add_option("--out", audit_flags->out_path, "output path (default stdout)");
  audit->callback([=, &out]() {
    ResolveEps(*audit, audit_flags.get());
    ResolveSeed(audit_flags.get());
    nlohmann::json j;
    if (*audit_approx) {
      if (*audit_mech != "ss") {
        throw std::invalid_argument("the approximate audit runs on the ss mechanism");
      }
      const SubsetMechanism mech(CalibrateSubset(audit_flags->eps, *audit_d));
      const ApproxDpParams params =
          ComputeApproxDpParams(audit_flags->eps, *audit_c0, *audit_delta);
      const int64_t n = audit->count("--n-candidates") ? *audit_n : params.n_required;
      j = ToJson(CheckApproxLdp(mech, n, params, *audit_trials, audit_flags->seed));
    } else {
      const AuditCodec codec = *audit_codec == "raw"   ? AuditCodec::kRaw
                               : *audit_codec == "mrc" ? AuditCodec::kMrc
                                                       : AuditCodec::kMmrc;
      const AuditMode mode = *audit_mode == "exhaustive" ? AuditMode::kExhaustive
                                                         : AuditMode::kSampled;
      const LdpReport report =
          *audit_mech == "ss"
              ? CertifyPureLdp(codec, SubsetMechanism(CalibrateSubset(audit_flags->eps, *audit_d)),
                               *audit_n, mode, *audit_trials, audit_flags->seed)
              : CertifyPureLdp(codec,
                               PrivUnitMechanism(
                                   CalibratePrivUnit(audit_flags->eps, *audit_d, *audit_mu)),
                               *audit_n, mode, *audit_trials, audit_flags->seed);
      j = ToJson(report);
    }
    Emit(*audit_flags, j.dump(2) + "\n", out);
  });

  // bounds
  auto bounds_flags = std::make_shared<CommonFlags>();
  auto bounds_theorem = std::make_shared<std::string>();
  auto bounds_c = std::make_shared<double>(0.0);
  auto bounds_c0 = std::make_shared<double>(3.0);
  auto bounds_delta = std::make_shared<double>(1e-6);
  auto bounds_lambda = std::make_shared<double>(1.0);
  auto bounds_p0 = std::make_shared<double>(0.8);
  auto bounds_n = std::make_shared<int64_t>(10000);
  auto* bounds = app.add_subcommand("bounds", "candidate-count and privacy-slack calculators");
  AddEpsFlags(bounds, bounds_flags.get());
  bounds->add_option("--theorem", *bounds_theorem,
                     "mrc-n | approx-dp | mmrc-pu-n | mmrc-ss-n | rho")
      ->required()
      ->check(CLI::IsMember({"mrc-n", "approx-dp", "mmrc-pu-n", "mmrc-ss-n", "rho"}));
  bounds->add_option("--c", *bounds_c, "slack constant of the utility bound");
  bounds->add_option("--c0", *bounds_c0, "concentration constant of the approximate bound");
  bounds->add_option("--delta", *bounds_delta, "failure probability");
  bounds->add_option("--lambda", *bounds_lambda, "relative slack of the scale bound");
  bounds->add_option("--p0", *bounds_p0, "cap-choice probability");
  bounds->add_option("--n", *bounds_n, "candidate count to invert");
  bounds->add_option("--format", bounds_flags->format, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}));
  bounds->add_option("--out", bounds_flags->out_path, "output path (default stdout)");
  bounds->callback([=, &out]() {
    ResolveEps(*bounds, bounds_flags.get());
    nlohmann::json j{{"theorem", *bounds_theorem}};
    std::ostringstream text;
    text.precision(10);
    if (*bounds_theorem == "mrc-n") {
      const CandidateCount count = MrcCandidateCount(bounds_flags->eps, *bounds_c);
      j["N"] = count.n;
      j["alpha"] = count.alpha;
      j["vacuous"] = count.vacuous;
      text << "N = " << count.n << "\nalpha = " << count.alpha
           << "\nvacuous = " << (count.vacuous ? "true" : "false") << "\n";
    } else if (*bounds_theorem == "approx-dp") {
      const ApproxDpParams params =
          ComputeApproxDpParams(bounds_flags->eps, *bounds_c0, *bounds_delta);
      j["a0"] = params.a0;
      j["eps0"] = params.eps0;
      j["eps_total"] = params.eps_total;
      j["n_required"] = params.n_required;
      text << "a0 = " << params.a0 << "\neps0 = " << params.eps0
           << "\neps_total = " << params.eps_total
           << "\nn_required = " << params.n_required << "\n";
    } else if (*bounds_theorem == "mmrc-pu-n") {
      const int64_t n = MmrcPrivUnitCandidateCount(bounds_flags->eps, *bounds_p0, *bounds_lambda);
      j["N"] = n;
      text << "N = " << n << "\n";
    } else if (*bounds_theorem == "mmrc-ss-n") {
      const int64_t n = MmrcSubsetCandidateCount(bounds_flags->eps, *bounds_lambda);
      j["N"] = n;
      text << "N = " << n << "\n";
    } else {
      const double rho = RhoFromCandidateCount(bounds_flags->eps, *bounds_n);
      j["rho"] = rho;
      text << "rho = " << rho << "\n";
    }
    Emit(*bounds_flags,
         bounds_flags->format == "json" ? j.dump(2) + "\n" : text.str(), out);
  });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return 2;
  } catch (const InfeasibleError& e) {
    err << "infeasible: " << e.what() << "\n";
    return 3;
  } catch (const DegeneracyError& e) {
    err << "degenerate: " << e.what() << "\n";
    return 4;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace ldpc
