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

#ifndef ONOFF_AUDIT_H_
#define ONOFF_AUDIT_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "absl/status/statusor.h"
#include "onoff/analysis.h"
#include "onoff/markov.h"
#include "onoff/policy.h"

namespace onoff {

inline constexpr int kMaxAuditHorizon = 14;

// Leakage at or below this many bits counts as zero.
inline constexpr double kLeakageTolerance = 1e-10;

// One (request path, query path) trajectory over times 0..T-1 and its exact
// probability. Bit i of `requests` is set iff X_i = B; bits [2i, 2i+2) of
// `queries` hold Q_i.
struct Atom {
  uint32_t requests = 0;
  uint32_t queries = 0;
  double prob = 0.0;

  Source RequestAt(int i) const {
    return ((requests >> i) & 1u) != 0 ? Source::kB : Source::kA;
  }
  Query QueryAt(int i) const {
    return static_cast<Query>((queries >> (2 * i)) & 3u);
  }
};

// Exact joint law of requests and queries over times 0..horizon-1. For the
// step mode, time 0 is the last ON time; earlier ON steps always query AB and
// are summarized by X_0.
struct HistoryDistribution {
  MarkovModel model;
  PrivacyMode mode;
  int horizon = 0;
  std::vector<Atom> atoms;

  double TotalMass() const;
  QueryDistribution QueryMarginal(int t) const;
};

// Forward enumeration, pruning zero-probability branches. Uses the ON-OFF
// scheme unless `policy` is given. Explicit modes need horizon <= #flags.
absl::StatusOr<HistoryDistribution> EnumerateJoint(
    const MarkovModel& model, const PrivacyMode& mode, int horizon,
    const SourceDistribution& initial, const QueryPolicy* policy = nullptr);

absl::StatusOr<HistoryDistribution> EnumerateJoint(const MarkovModel& model,
                                                   const PrivacyMode& mode,
                                                   int horizon);

// I(X_{B_t}; Q_t | Q_0..Q_{t-1}) and its split around the reference request
// X_r, r = F^-(t):
//   reference_term = I(X_r; Q_t | Q_<t)
//   remainder_term = I(X_{B_t \ r}; Q_t | X_r, Q_<t)
struct LeakageTerms {
  int64_t t = 0;
  double full = 0.0;
  double reference_term = 0.0;
  double remainder_term = 0.0;
};

struct LeakageReport {
  std::vector<LeakageTerms> per_t;
  double max_leakage = 0.0;

  bool passed(double tolerance = kLeakageTolerance) const {
    return max_leakage <= tolerance;
  }
};

// Conditional mutual information in bits, 0 log 0 = 0, skipping conditioning
// events of probability below 1e-15.
LeakageReport Leakage(const HistoryDistribution& dist);

struct QueryChainCheck {
  // max |Pr(Q_t = j | Q_{t-1} = i) - P(i, j)| over observed transitions.
  double max_deviation = 0.0;
  // max |Pr(Q_t | Q_0..Q_{t-1}) - Pr(Q_t | Q_{t-1})| over positive histories.
  double markov_deviation = 0.0;
  int transitions_checked = 0;
};

// Exact conditionals of the query process versus QueryChainFor(model).
// Requires a step-mode distribution.
absl::StatusOr<QueryChainCheck> VerifyQueryChain(
    const HistoryDistribution& dist, const MarkovModel& model);

struct StructureReport {
  // The request is a function of (reference request, query), and equals
  // DecodeReference of that pair.
  int decode_checked = 0;
  int decode_violations = 0;
  // max_t I(X_0..X_{t-1}, Q_0..Q_{t-1}; X_t | X_{t-1}) in bits.
  double markov_request_bits = 0.0;
  // max_t I(X_0..X_{t-1}, Q_0..Q_{t-1}; Q_t | X_t, X_r, Q_{t-1}) in bits.
  double markov_query_bits = 0.0;

  bool passed(double tolerance = kLeakageTolerance) const {
    return decode_violations == 0 && markov_request_bits <= tolerance &&
           markov_query_bits <= tolerance;
  }
};

StructureReport VerifyStructure(const HistoryDistribution& dist,
                                     const MarkovModel& model);

// 1 / (1 + Pr(Q_t = AB)) from the atom table.
absl::StatusOr<double> OracleRate(const HistoryDistribution& dist, int t);

// Moves `delta` of mass onto (or off) entry `query` of one table row and
// rescales the remaining entries proportionally. When the remaining entries
// hold no mass, the complement goes to AB, the only other query that still
// decodes the request. Returns nullopt if the entry would leave [0, 1].
std::optional<QueryDistribution> PerturbEntry(const QueryDistribution& row,
                                              Query query, double delta);

struct ProbeResult {
  Source reference;
  Source current;
  Query entry;
  double delta;
  QueryDistribution perturbed_row;
  double max_leakage;
  // max_t (theoretical rate - oracle rate) over the enumerated OFF times.
  double rate_loss;

  bool leaks() const { return max_leakage > 1e-6; }
  bool loses_rate() const { return rate_loss > 1e-12; }
};

// Perturbs each direct-query entry of the alpha + beta < 1 table by +/-
// `step` (skipping infeasible moves) and audits the resulting scheme in the
// step mode over times 0..horizon-1.
absl::StatusOr<std::vector<ProbeResult>> TightnessProbe(
    const MarkovModel& model, int horizon, double step = 0.05);

}  // namespace onoff

#endif  // ONOFF_AUDIT_H_
