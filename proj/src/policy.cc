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

#include "onoff/policy.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "absl/strings/str_cat.h"
#include "onoff/errors.h"

namespace onoff {

absl::string_view QueryName(Query q) {
  switch (q) {
    case Query::kA:
      return "A";
    case Query::kB:
      return "B";
    case Query::kAB:
      return "AB";
  }
  return "?";
}

absl::StatusOr<Query> ParseQuery(absl::string_view name) {
  for (Query q : kQueries) {
    if (QueryName(q) == name) return q;
  }
  return absl::InvalidArgumentError(absl::StrCat("unknown query: ", name));
}

absl::string_view FlagName(Flag f) { return f == Flag::kOn ? "ON" : "OFF"; }

absl::StatusOr<PrivacyMode> PrivacyMode::Explicit(std::vector<Flag> flags) {
  if (flags.empty()) {
    return absl::InvalidArgumentError("explicit privacy mode needs >= 1 flag");
  }
  return PrivacyMode(Kind::kExplicit, std::move(flags));
}

absl::StatusOr<PrivacyMode> PrivacyMode::Parse(absl::string_view text) {
  if (text == "step") return StepAtZero();
  std::vector<Flag> flags;
  flags.reserve(text.size());
  for (char c : text) {
    if (c == 'Y') {
      flags.push_back(Flag::kOn);
    } else if (c == 'N') {
      flags.push_back(Flag::kOff);
    } else {
      return absl::InvalidArgumentError(absl::StrCat(
          "mode must be 'step' or a string over {Y, N}, got '", text, "'"));
    }
  }
  return Explicit(std::move(flags));
}

bool PrivacyMode::Covers(int64_t t) const {
  if (is_step()) return true;
  return t >= 0 && t < static_cast<int64_t>(flags_.size());
}

Flag PrivacyMode::At(int64_t t) const {
  if (is_step()) return t <= 0 ? Flag::kOn : Flag::kOff;
  return Covers(t) ? flags_[t] : Flag::kOff;
}

std::optional<int64_t> PrivacyMode::LatestOn(int64_t t) const {
  if (is_step()) return std::min<int64_t>(t, 0);
  for (int64_t i = std::min<int64_t>(t, flags_.size() - 1); i >= 0; --i) {
    if (flags_[i] == Flag::kOn) return i;
  }
  return std::nullopt;
}

std::vector<int64_t> PrivacyMode::OnTimes(int64_t first, int64_t t) const {
  std::vector<int64_t> times;
  for (int64_t i = first; i <= t; ++i) {
    if (At(i) == Flag::kOn) times.push_back(i);
  }
  return times;
}

std::string PrivacyMode::ToString() const {
  if (is_step()) return "step";
  std::string out;
  for (Flag f : flags_) out.push_back(f == Flag::kOn ? 'Y' : 'N');
  return out;
}

QueryDistribution QueryDistribution::PointMass(Query q) {
  QueryDistribution d;
  d[q] = 1.0;
  return d;
}

Query QueryDistribution::Sample(double u) const {
  double cumulative = 0.0;
  for (Query q : kQueries) {
    cumulative += probs[Index(q)];
    if (u < cumulative) return q;
  }
  // Rounding can leave the total a hair below 1; fall back to the last
  // symbol with positive mass.
  for (int i = 2; i >= 0; --i) {
    if (probs[i] > 0.0) return kQueries[i];
  }
  return Query::kAB;
}

TableRegime RegimeFor(const MarkovModel& model, int offset) {
  const double excess = model.alpha() + model.beta() - 1.0;
  if (std::abs(excess) <= kBoundaryTolerance) return TableRegime::kIndependent;
  if (excess < 0.0) return TableRegime::kBelowOne;
  return offset % 2 == 0 ? TableRegime::kAboveOneEven
                         : TableRegime::kAboveOneOdd;
}

absl::string_view RegimeLabel(TableRegime regime) {
  switch (regime) {
    case TableRegime::kBelowOne:
      return "lt1";
    case TableRegime::kAboveOneEven:
      return "even";
    case TableRegime::kAboveOneOdd:
      return "odd";
    case TableRegime::kIndependent:
      return "indep";
  }
  return "?";
}

double PolicyTable::MaxRowError() const {
  double worst = 0.0;
  for (const QueryDistribution& row : rows_) {
    worst = std::max(worst, std::abs(row.Sum() - 1.0));
    for (double p : row.probs) worst = std::max(worst, -p);
  }
  return worst;
}

PolicyTable TableFor(const MarkovModel& model, int offset) {
  const double a = model.alpha();
  const double b = model.beta();
  const TableRegime regime = RegimeFor(model, offset);
  PolicyTable table(regime, a, b, offset);
  auto set = [&table](Source ref, Source cur, double pa, double pb,
                      double pab) {
    table.MutableRow(ref, cur).probs = {pa, pb, pab};
  };
  // Rows that mix a direct query with AB; AB takes the exact complement.
  auto mix = [&set](Source ref, Source cur, double direct) {
    direct = std::clamp(direct, 0.0, 1.0);
    if (cur == Source::kA) {
      set(ref, cur, direct, 0, 1 - direct);
    } else {
      set(ref, cur, 0, direct, 1 - direct);
    }
  };
  constexpr Source A = Source::kA;
  constexpr Source B = Source::kB;
  switch (regime) {
    case TableRegime::kBelowOne:
      mix(A, A, b / (1 - a));
      set(A, B, 0, 1, 0);
      set(B, A, 1, 0, 0);
      mix(B, B, a / (1 - b));
      break;
    case TableRegime::kAboveOneEven:
      mix(A, A, (1 - a) / b);
      set(A, B, 0, 1, 0);
      set(B, A, 1, 0, 0);
      mix(B, B, (1 - b) / a);
      break;
    case TableRegime::kAboveOneOdd:
      set(A, A, 1, 0, 0);
      mix(A, B, (1 - b) / a);
      mix(B, A, (1 - a) / b);
      set(B, B, 0, 1, 0);
      break;
    case TableRegime::kIndependent:
      set(A, A, 1, 0, 0);
      set(A, B, 0, 1, 0);
      set(B, A, 1, 0, 0);
      set(B, B, 0, 1, 0);
      break;
  }
  return table;
}

ClientState Advance(const ClientState& state, Flag flag, Source current,
                    Query emitted) {
  if (flag == Flag::kOn) {
    return ClientState{.reference_request = current,
                       .prev_query = Query::kAB,
                       .offset = 0,
                       .ever_on = true};
  }
  ClientState next = state;
  next.prev_query = emitted;
  next.offset = state.offset + 1;
  return next;
}

OnOffPolicy::OnOffPolicy(const MarkovModel& model)
    : model_(model),
      tables_([model](int offset) { return TableFor(model, offset); }) {}

OnOffPolicy::OnOffPolicy(const MarkovModel& model, TableSource tables)
    : model_(model), tables_(std::move(tables)) {}

QueryDistribution OnOffPolicy::Distribution(const ClientState& state,
                                            Flag flag, Source current) const {
  if (flag == Flag::kOn) return QueryDistribution::PointMass(Query::kAB);
  if (!state.ever_on || state.prev_query != Query::kAB) {
    return QueryDistribution::PointMass(DirectQuery(current));
  }
  return tables_(state.offset + 1).Row(*state.reference_request, current);
}

QueryDistribution NaivePolicy::Distribution(const ClientState& /*state*/,
                                            Flag flag, Source current) const {
  if (flag == Flag::kOn) return QueryDistribution::PointMass(Query::kAB);
  return QueryDistribution::PointMass(DirectQuery(current));
}

PolicyStep NextQuery(const QueryPolicy& policy, const ClientState& state,
                     Flag flag, Source current, Rng& rng) {
  const Query query =
      policy.Distribution(state, flag, current).Sample(rng.NextUniform());
  return PolicyStep{query, Advance(state, flag, current, query)};
}

PolicyStep NextQuery(const ClientState& state, Flag flag, Source current,
                     const MarkovModel& model, Rng& rng) {
  return NextQuery(OnOffPolicy(model), state, flag, current, rng);
}

absl::StatusOr<Source> DecodeReference(Source reference, Query query,
                                       const MarkovModel& model, int offset) {
  if (query == Query::kA) return Source::kA;
  if (query == Query::kB) return Source::kB;
  if (offset <= 0) return reference;
  const PolicyTable table = TableFor(model, offset);
  std::optional<Source> decoded;
  for (Source current : kSources) {
    if (table.Row(reference, current)[Query::kAB] > 0.0) {
      if (decoded.has_value()) {
        return MakeError(ErrorKind::kInconsistentHistory,
                         "AB is emitted on both rows for this reference");
      }
      decoded = current;
    }
  }
  if (!decoded.has_value()) {
    return MakeError(
        ErrorKind::kInconsistentHistory,
        absl::StrCat("query AB has zero probability at offset ", offset,
                     " with reference ", SourceName(reference)));
  }
  return *decoded;
}

}  // namespace onoff
