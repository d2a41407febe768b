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

#ifndef ONOFF_ANALYSIS_H_
#define ONOFF_ANALYSIS_H_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "onoff/markov.h"
#include "onoff/policy.h"

namespace onoff {

// t - F^-(t), or nullopt when no ON time precedes t.
std::optional<int64_t> OffsetSinceOn(const PrivacyMode& mode, int64_t t);

// Capacity at time t: 1/2 at ON times, 1 / (1 + |1 - alpha - beta|^offset)
// at OFF times, and 1 at OFF times with no ON time before them.
double TheoreticalRate(const MarkovModel& model, const PrivacyMode& mode,
                       int64_t t);

// Pr(Q = AB) `offset` steps after an ON time under the scheme.
double PrQueryAb(const MarkovModel& model, int offset);

// Transition law of the query process over (A, B, AB).
struct QueryChain {
  std::array<std::array<double, 3>, 3> transition{};

  double operator()(Query from, Query to) const {
    return transition[Index(from)][Index(to)];
  }
};

// Form valid for alpha + beta <= 1: the AB row is (beta, alpha, 1-alpha-beta).
QueryChain QueryChainAtMostOne(const MarkovModel& model);
// Form valid for alpha + beta > 1: the AB row is (1-alpha, 1-beta,
// alpha+beta-1).
QueryChain QueryChainAboveOne(const MarkovModel& model);
// Picks the applicable form; the boundary uses the first one.
QueryChain QueryChainFor(const MarkovModel& model);

// Feasible point of the joint law p(Q_t, X_0, X_t) over query classes
// (decodes A only, decodes B only, decodes both) that maximizes the mass of
// single-message queries.
struct ConverseWitness {
  // Pr(X_0 = A).
  double start_a;
  // Mass of (X_0 = A, X_t = A) answered by a single A query.
  double stay_single;
  // Mass of (X_0 = A, X_t = B) answered by a single B query.
  double move_single;
  // Rows (X_0, X_t) in order AA, AB, BA, BB; columns Q_a, Q_b, Q_ab.
  std::array<std::array<double, 3>, 4> joint{};

  double MinLength() const {
    return 2.0 - (stay_single + move_single) / start_a;
  }
};

// Solves the two-variable linear program over (stay_single, move_single) by
// vertex enumeration of the 12 nonnegativity constraints on the joint table.
// `start_a` is Pr(X_0 = A) and must lie in (0, 1).
absl::StatusOr<ConverseWitness> SolveConverseWitness(const MarkovModel& model,
                                                     int t, double start_a);

// Lower bound on l_t / L from the linear program above.
absl::StatusOr<double> ConverseMinLength(const MarkovModel& model, int t,
                                         double start_a);

// Closed form of the same bound: 1 + |1 - alpha - beta|^t.
double ConverseMinLengthClosedForm(const MarkovModel& model, int t);

struct RatePoint {
  int64_t t;
  double rate;
  // "on", a table regime label for OFF steps, or "free" before any ON time.
  std::string regime;
};

struct RateCurve {
  MarkovModel model;
  PrivacyMode mode;
  std::vector<RatePoint> points;
};

RateCurve MakeRateCurve(const MarkovModel& model, const PrivacyMode& mode,
                        int64_t t_first, int64_t t_last);

}  // namespace onoff

#endif  // ONOFF_ANALYSIS_H_
