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

#ifndef ONOFF_POLICY_H_
#define ONOFF_POLICY_H_

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "absl/strings/string_view.h"
#include "absl/status/statusor.h"
#include "onoff/markov.h"
#include "onoff/rng.h"

namespace onoff {

// Query alphabet. kAB downloads both latest messages.
enum class Query : uint8_t { kA = 0, kB = 1, kAB = 2 };

inline constexpr std::array<Query, 3> kQueries = {Query::kA, Query::kB,
                                                  Query::kAB};

inline constexpr Query DirectQuery(Source s) {
  return s == Source::kA ? Query::kA : Query::kB;
}
inline constexpr int Index(Query q) { return static_cast<int>(q); }
absl::string_view QueryName(Query q);
absl::StatusOr<Query> ParseQuery(absl::string_view name);

enum class Flag : uint8_t { kOff = 0, kOn = 1 };

absl::string_view FlagName(Flag f);

// The ON/OFF privacy process F_t.
//
// kStepAtZero is ON for every t <= 0 and OFF for every t >= 1. kExplicit holds
// a finite sequence for t = 0..T-1; times outside that window read as OFF and
// are reported as not covered.
class PrivacyMode {
 public:
  enum class Kind { kStepAtZero, kExplicit };

  static PrivacyMode StepAtZero() { return PrivacyMode(Kind::kStepAtZero, {}); }
  static absl::StatusOr<PrivacyMode> Explicit(std::vector<Flag> flags);
  // "step", or a string over {Y, N} with Y = ON and index 0 = time 0.
  static absl::StatusOr<PrivacyMode> Parse(absl::string_view text);

  Kind kind() const { return kind_; }
  bool is_step() const { return kind_ == Kind::kStepAtZero; }
  const std::vector<Flag>& flags() const { return flags_; }

  bool Covers(int64_t t) const;
  Flag At(int64_t t) const;

  // F^-(t): the latest time i <= t with F_i = ON, if any.
  std::optional<int64_t> LatestOn(int64_t t) const;

  // ON times in [first, t], i.e. the protected set B_t clipped to a window.
  std::vector<int64_t> OnTimes(int64_t first, int64_t t) const;

  std::string ToString() const;

  friend bool operator==(const PrivacyMode&, const PrivacyMode&) = default;

 private:
  PrivacyMode(Kind kind, std::vector<Flag> flags)
      : kind_(kind), flags_(std::move(flags)) {}
  Kind kind_;
  std::vector<Flag> flags_;
};

// Distribution over the query alphabet, indexed in the order (A, B, AB).
struct QueryDistribution {
  std::array<double, 3> probs{};

  static QueryDistribution PointMass(Query q);

  double operator[](Query q) const { return probs[Index(q)]; }
  double& operator[](Query q) { return probs[Index(q)]; }
  double Sum() const { return probs[0] + probs[1] + probs[2]; }

  // Inverse CDF over the fixed order (A, B, AB); `u` is uniform on [0, 1).
  Query Sample(double u) const;
};

// Which closed-form table governs an OFF step after an AB query.
enum class TableRegime {
  kBelowOne,     // alpha + beta < 1
  kAboveOneEven, // alpha + beta > 1, even offset
  kAboveOneOdd,  // alpha + beta > 1, odd offset
  kIndependent,  // alpha + beta = 1: requests are independent
};

// |alpha + beta - 1| below this is treated as the independent boundary.
inline constexpr double kBoundaryTolerance = 1e-12;

TableRegime RegimeFor(const MarkovModel& model, int offset);

// "lt1", "even", "odd" or "indep".
absl::string_view RegimeLabel(TableRegime regime);

// p(Q_t | reference request, current request, Q_{t-1} = AB).
class PolicyTable {
 public:
  PolicyTable(TableRegime regime, double alpha, double beta, int offset)
      : regime_(regime), alpha_(alpha), beta_(beta), offset_(offset) {}

  TableRegime regime() const { return regime_; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  int offset() const { return offset_; }

  const QueryDistribution& Row(Source reference, Source current) const {
    return rows_[2 * Index(reference) + Index(current)];
  }
  QueryDistribution& MutableRow(Source reference, Source current) {
    return rows_[2 * Index(reference) + Index(current)];
  }

  // Largest deviation of any row sum from 1; negative entries count as
  // deviations of their magnitude.
  double MaxRowError() const;

 private:
  TableRegime regime_;
  double alpha_;
  double beta_;
  int offset_;
  std::array<QueryDistribution, 4> rows_{};
};

// The capacity-achieving table for an OFF step `offset` >= 1 steps after the
// latest ON time.
PolicyTable TableFor(const MarkovModel& model, int offset);

// Everything the randomized policy conditions on.
struct ClientState {
  std::optional<Source> reference_request;  // X at the latest ON time
  std::optional<Query> prev_query;
  int offset = 0;  // t - F^-(t)
  bool ever_on = false;

  friend bool operator==(const ClientState&, const ClientState&) = default;
};

// State after emitting `emitted` at a step with the given flag and request.
ClientState Advance(const ClientState& state, Flag flag, Source current,
                    Query emitted);

// A client-side query rule: the law of Q_t given the client state, the privacy
// flag and the current request.
class QueryPolicy {
 public:
  virtual ~QueryPolicy() = default;
  virtual QueryDistribution Distribution(const ClientState& state, Flag flag,
                                         Source current) const = 0;
};

// The ON-OFF scheme: AB while ON; after an ON step, the closed-form tables
// while the previous query is AB; direct queries once a single source has
// been queried.
class OnOffPolicy : public QueryPolicy {
 public:
  using TableSource = std::function<PolicyTable(int offset)>;

  explicit OnOffPolicy(const MarkovModel& model);
  // Replaces the closed-form tables, e.g. to probe perturbed variants.
  OnOffPolicy(const MarkovModel& model, TableSource tables);

  QueryDistribution Distribution(const ClientState& state, Flag flag,
                                 Source current) const override;

  const MarkovModel& model() const { return model_; }

 private:
  MarkovModel model_;
  TableSource tables_;
};

// Strawman that switches between a private scheme (AB) when ON and direct
// retrieval when OFF. Leaks whenever requests are correlated.
class NaivePolicy : public QueryPolicy {
 public:
  QueryDistribution Distribution(const ClientState& state, Flag flag,
                                 Source current) const override;
};

struct PolicyStep {
  Query query;
  ClientState next;
};

PolicyStep NextQuery(const QueryPolicy& policy, const ClientState& state,
                     Flag flag, Source current, Rng& rng);

PolicyStep NextQuery(const ClientState& state, Flag flag, Source current,
                     const MarkovModel& model, Rng& rng);

// Recovers the current request from the reference request and the emitted
// query. A direct query names the request. An AB query at `offset` >= 1 is
// only emitted on one table row per reference, which identifies the request;
// at offset 0 (ON step) the request is the reference itself.
absl::StatusOr<Source> DecodeReference(Source reference, Query query,
                                       const MarkovModel& model, int offset);

}  // namespace onoff

#endif  // ONOFF_POLICY_H_
