// Copyright 2026 The OnOff Privacy Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: rate curves, privacy audits, policy tables and
// Monte Carlo sessions.
//
//   onoff rate     --alpha 0.2 --beta 0.2 --horizon 20
//   onoff audit    --alpha 0.6 --beta 0.6 --mode YNNYN
//   onoff table    --alpha 0.6 --beta 0.6
//   onoff simulate --alpha 0.2 --beta 0.2 --runs 100000 --seed 7 --out t.csv
//
// Exit codes: 0 success (audit passed), 1 audit or run failure, 2 usage error.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/statusor.h"
#include "absl/strings/str_format.h"
#include "json.hpp"
#include "onoff/analysis.h"
#include "onoff/audit.h"
#include "onoff/export.h"
#include "onoff/markov.h"
#include "onoff/policy.h"
#include "onoff/server_sim.h"

namespace onoff {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

enum class Format { kCsv, kJson };

// Raw command-line values; validated into a RunConfig before any work.
struct Flags {
  double alpha = 0.2;
  double beta = 0.2;
  std::string mode = "step";
  std::optional<int> horizon;
  std::optional<int> runs;
  int length_bits = kDefaultMessageBits;
  std::optional<uint64_t> seed;
  std::string out;
  std::optional<std::string> format;
  std::string policy = "onoff";
  int threads = 0;
};

struct RunConfig {
  MarkovModel model;
  PrivacyMode mode;
  int horizon;
  int runs;
  int length_bits;
  uint64_t seed;
  std::string out;
  Format format;
  bool naive;
  int threads;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <typename T>
T OrUsage(absl::StatusOr<T> value) {
  if (!value.ok()) throw UsageError(std::string(value.status().message()));
  return *std::move(value);
}

RunConfig Validate(const Flags& flags, int default_horizon, int default_runs,
                   Format default_format, bool sampled) {
  RunConfig config{
      .model = OrUsage(MarkovModel::Create(flags.alpha, flags.beta)),
      .mode = OrUsage(PrivacyMode::Parse(flags.mode)),
      .horizon = 0,
      .runs = flags.runs.value_or(default_runs),
      .length_bits = flags.length_bits,
      .seed = 0,
      .out = flags.out,
      .format = default_format,
      .naive = false,
      .threads = flags.threads,
  };
  if (config.mode.is_step()) {
    config.horizon = flags.horizon.value_or(default_horizon);
  } else {
    const int n = static_cast<int>(config.mode.flags().size());
    config.horizon = flags.horizon.value_or(n);
    if (config.horizon > n) {
      throw UsageError(absl::StrFormat(
          "--horizon %d exceeds the %d explicit flags", config.horizon, n));
    }
  }
  if (config.horizon < 1) throw UsageError("--horizon must be >= 1");
  if (config.runs < 0) throw UsageError("--runs must be >= 0");
  if (config.length_bits < 1) throw UsageError("--L must be >= 1");
  if (flags.format.has_value()) {
    if (*flags.format == "csv") {
      config.format = Format::kCsv;
    } else if (*flags.format == "json") {
      config.format = Format::kJson;
    } else {
      throw UsageError("--format must be csv or json");
    }
  }
  if (flags.policy == "naive") {
    config.naive = true;
  } else if (flags.policy != "onoff") {
    throw UsageError("--policy must be onoff or naive");
  }
  if (config.threads <= 0) {
    config.threads = std::max(1u, std::thread::hardware_concurrency());
  }
  if (flags.seed.has_value()) {
    config.seed = *flags.seed;
  } else if (sampled && config.runs > 0) {
    config.seed = (uint64_t{std::random_device{}()} << 32) |
                  std::random_device{}();
    std::cerr << "seed: " << config.seed << "\n";
  }
  return config;
}

// Writes to --out when given, stdout otherwise.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw UsageError("cannot open " + path);
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

// Times reported by `rate` and `simulate`: 0..horizon for the step mode,
// 0..horizon-1 for explicit modes.
std::vector<int64_t> ReportTimes(const RunConfig& config) {
  std::vector<int64_t> times;
  const int64_t last =
      config.mode.is_step() ? config.horizon : config.horizon - 1;
  for (int64_t t = 0; t <= last; ++t) times.push_back(t);
  return times;
}

absl::StatusOr<std::vector<SessionTrace>> Simulate(const RunConfig& config,
                                                   const QueryPolicy* policy) {
  SessionOptions options;
  options.length_bits = config.length_bits;
  options.policy = policy;
  // Step sessions start one ON step before time 0.
  const int steps =
      config.mode.is_step() ? config.horizon + 2 : config.horizon;
  return RunSessions(config.model, config.mode, steps, config.seed,
                     config.runs, options, config.threads);
}

double ConverseRate(const RunConfig& config, int64_t t) {
  if (config.mode.At(t) == Flag::kOn) return 0.5;
  const auto offset = OffsetSinceOn(config.mode, t);
  if (!offset.has_value()) return 1.0;
  double delta = config.model.DefaultInitial().prob_a();
  if (!(delta > 0.0 && delta < 1.0)) delta = 0.5;
  auto length = ConverseMinLength(config.model, static_cast<int>(*offset), delta);
  return length.ok() ? 1.0 / *length : std::nan("");
}

int CmdRate(const RunConfig& config) {
  std::vector<SessionTrace> traces;
  if (config.runs > 0) {
    const NaivePolicy naive;
    auto sims = Simulate(config, config.naive ? &naive : nullptr);
    if (!sims.ok()) {
      std::cerr << sims.status() << "\n";
      return kExitFailure;
    }
    traces = *std::move(sims);
  }
  Output output(config.out);
  std::ostream& out = output.stream();
  const RateCurve curve = MakeRateCurve(config.model, config.mode, 0,
                                        ReportTimes(config).back());
  nlohmann::json rows = nlohmann::json::array();
  if (config.format == Format::kCsv) {
    out << "t,rate,regime,converse_rate";
    if (config.runs > 0) out << ",empirical_rate,std_error";
    out << "\n";
  }
  for (const RatePoint& p : curve.points) {
    const double converse = ConverseRate(config, p.t);
    std::optional<RateEstimate> estimate;
    if (config.runs > 0) {
      if (auto e = EmpiricalRate(traces, p.t); e.ok()) estimate = *e;
    }
    if (config.format == Format::kCsv) {
      out << absl::StrFormat("%d,%.17g,%s,%.17g", p.t, p.rate, p.regime,
                             converse);
      if (config.runs > 0) {
        if (estimate.has_value()) {
          out << absl::StrFormat(",%.17g,%.17g", estimate->rate,
                                 estimate->std_error);
        } else {
          out << ",,";
        }
      }
      out << "\n";
    } else {
      nlohmann::json row = {{"t", p.t},
                            {"rate", p.rate},
                            {"regime", p.regime},
                            {"converse_rate", converse}};
      if (estimate.has_value()) {
        row["empirical_rate"] = estimate->rate;
        row["std_error"] = estimate->std_error;
      }
      rows.push_back(row);
    }
  }
  if (config.format == Format::kJson) out << rows.dump(2) << "\n";
  return kExitOk;
}

int CmdAudit(const RunConfig& config) {
  if (config.format != Format::kJson) {
    throw UsageError("audit reports are JSON only");
  }
  const NaivePolicy naive;
  auto dist = EnumerateJoint(config.model, config.mode, config.horizon,
                             config.model.DefaultInitial(),
                             config.naive ? &naive : nullptr);
  if (!dist.ok()) throw UsageError(std::string(dist.status().message()));
  const LeakageReport report = Leakage(*dist);
  Output output(config.out);
  output.stream() << LeakageReportToJson(*dist, report,
                                         config.naive ? "naive" : "onoff")
                         .dump(2)
                  << "\n";
  return report.passed() ? kExitOk : kExitFailure;
}

int CmdTable(const RunConfig& config) {
  nlohmann::json tables = nlohmann::json::array();
  for (int offset : {1, 2}) {
    nlohmann::json table = PolicyTableToJson(TableFor(config.model, offset));
    table["offset"] = offset;
    tables.push_back(table);
  }
  Output output(config.out);
  output.stream() << tables.dump(2) << "\n";
  return kExitOk;
}

int CmdSimulate(const RunConfig& config) {
  const NaivePolicy naive;
  auto traces = Simulate(config, config.naive ? &naive : nullptr);
  if (!traces.ok()) {
    std::cerr << traces.status() << "\n";
    return kExitFailure;
  }
  if (!config.out.empty()) {
    Output output(config.out);
    if (config.format == Format::kCsv) {
      WriteTracesCsv(output.stream(), *traces);
    } else {
      WriteTracesJsonl(output.stream(), *traces);
    }
  }
  std::cout << "t,theoretical_rate,empirical_rate,std_error,samples,decodable\n";
  for (int64_t t : ReportTimes(config)) {
    bool decodable = true;
    for (const SessionTrace& trace : *traces) {
      if (const StepRecord* r = trace.At(t); r != nullptr && !r->decoded_ok) {
        decodable = false;
      }
    }
    const double theory = TheoreticalRate(config.model, config.mode, t);
    if (auto e = EmpiricalRate(*traces, t); e.ok()) {
      std::cout << absl::StrFormat("%d,%.17g,%.17g,%.17g,%d,%s\n", t, theory,
                                   e->rate, e->std_error, e->samples,
                                   decodable ? "pass" : "fail");
    } else {
      std::cout << absl::StrFormat("%d,%.17g,,,%d,%s\n", t, theory,
                                   traces->size(), decodable ? "pass" : "fail");
    }
  }
  return kExitOk;
}

void AddCommonFlags(CLI::App* cmd, Flags& flags) {
  cmd->add_option("--alpha", flags.alpha, "Pr(A -> B)")->capture_default_str();
  cmd->add_option("--beta", flags.beta, "Pr(B -> A)")->capture_default_str();
  cmd->add_option("--mode", flags.mode,
                  "'step' (ON for t <= 0) or a Y/N flag string from t = 0")
      ->capture_default_str();
  cmd->add_option("--horizon", flags.horizon,
                  "Last reported time (step) or number of flags used");
  cmd->add_option("--runs", flags.runs, "Monte Carlo sessions");
  cmd->add_option("--L", flags.length_bits, "Message length in bits")
      ->capture_default_str();
  cmd->add_option("--seed", flags.seed, "RNG seed (drawn and printed if absent)");
  cmd->add_option("--out", flags.out, "Output path (stdout if absent)");
  cmd->add_option("--format", flags.format, "csv or json");
  cmd->add_option("--policy", flags.policy, "onoff or naive (strawman)")
      ->capture_default_str();
  cmd->add_option("--threads", flags.threads,
                  "Worker threads for Monte Carlo (0 = all cores)");
}

int Main(int argc, char** argv) {
  CLI::App app{"ON-OFF privacy: capacity, audit and simulation tools"};
  app.require_subcommand(1);
  Flags flags;
  CLI::App* rate = app.add_subcommand("rate", "Per-t capacity and bounds");
  CLI::App* audit = app.add_subcommand("audit", "Exact leakage audit (JSON)");
  CLI::App* table = app.add_subcommand("table", "Policy tables for offsets 1, 2");
  CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo sessions");
  for (CLI::App* cmd : {rate, audit, table, simulate}) AddCommonFlags(cmd, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (rate->parsed()) {
      return CmdRate(Validate(flags, 20, 0, Format::kCsv, true));
    }
    if (audit->parsed()) {
      return CmdAudit(Validate(flags, 6, 0, Format::kJson, false));
    }
    if (table->parsed()) {
      return CmdTable(Validate(flags, 1, 0, Format::kJson, false));
    }
    return CmdSimulate(Validate(flags, 10, 1, Format::kCsv, true));
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace
}  // namespace onoff

int main(int argc, char** argv) { return onoff::Main(argc, argv); }
