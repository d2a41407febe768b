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

#include "onoff/audit.h"

#include <algorithm>
#include <cmath>
#include <tuple>
#include <utility>

#include "absl/container/flat_hash_map.h"
#include "absl/strings/str_cat.h"
#include "onoff/errors.h"

namespace onoff {
namespace {

constexpr double kNegligibleMass = 1e-15;

// One atom's contribution to I(X; Y | Z), with X, Y, Z encoded as integers.
struct Sample {
  uint64_t x;
  uint64_t y;
  uint64_t z;
  double p;
};

double ConditionalMutualInformationBits(const std::vector<Sample>& samples) {
  absl::flat_hash_map<std::tuple<uint64_t, uint64_t, uint64_t>, double> xyz;
  absl::flat_hash_map<std::pair<uint64_t, uint64_t>, double> xz;
  absl::flat_hash_map<std::pair<uint64_t, uint64_t>, double> yz;
  absl::flat_hash_map<uint64_t, double> z;
  for (const Sample& s : samples) {
    xyz[{s.x, s.y, s.z}] += s.p;
    xz[{s.x, s.z}] += s.p;
    yz[{s.y, s.z}] += s.p;
    z[s.z] += s.p;
  }
  double bits = 0.0;
  for (const auto& [key, p] : xyz) {
    if (p <= 0.0) continue;
    const auto& [x, y, zz] = key;
    const double pz = z[zz];
    if (pz < kNegligibleMass) continue;
    bits += p * std::log2(p * pz / (xz[{x, zz}] * yz[{y, zz}]));
  }
  // Exact value is >= 0; what remains below zero is rounding.
  return std::max(bits, 0.0);
}

uint64_t QueryPrefix(const Atom& a, int t) {
  return t <= 0 ? 0 : a.queries & ((uint64_t{1} << (2 * t)) - 1);
}

uint64_t RequestPrefix(const Atom& a, int t) {
  return t <= 0 ? 0 : a.requests & ((uint64_t{1} << t) - 1);
}

uint64_t Bit(const Atom& a, int i) { return (a.requests >> i) & 1u; }

// F^-(t) within the enumerated window, if any.
std::optional<int> ReferenceIndex(const PrivacyMode& mode, int t) {
  const std::optional<int64_t> latest = mode.LatestOn(t);
  if (!latest.has_value() || *latest < 0) return std::nullopt;
  return static_cast<int>(*latest);
}

struct Node {
  Atom atom;
  ClientState state;
};

}  // namespace

double HistoryDistribution::TotalMass() const {
  double total = 0.0;
  for (const Atom& a : atoms) total += a.prob;
  return total;
}

QueryDistribution HistoryDistribution::QueryMarginal(int t) const {
  QueryDistribution marginal;
  for (const Atom& a : atoms) marginal[a.QueryAt(t)] += a.prob;
  return marginal;
}

absl::StatusOr<HistoryDistribution> EnumerateJoint(
    const MarkovModel& model, const PrivacyMode& mode, int horizon,
    const SourceDistribution& initial, const QueryPolicy* policy) {
  if (horizon < 1) {
    return absl::InvalidArgumentError("horizon must be >= 1");
  }
  if (horizon > kMaxAuditHorizon) {
    return MakeError(ErrorKind::kHorizonTooLarge,
                     absl::StrCat("horizon ", horizon, " exceeds ",
                                  kMaxAuditHorizon));
  }
  if (!mode.is_step() && horizon > static_cast<int>(mode.flags().size())) {
    return absl::InvalidArgumentError(
        absl::StrCat("horizon ", horizon, " exceeds the ", mode.flags().size(),
                     " explicit flags"));
  }
  const OnOffPolicy scheme(model);
  const QueryPolicy& rule = policy != nullptr ? *policy : scheme;

  std::vector<Node> frontier = {Node{}};
  frontier.front().atom.prob = 1.0;
  for (int t = 0; t < horizon; ++t) {
    const Flag flag = mode.At(t);
    std::vector<Node> next;
    next.reserve(frontier.size() * 2);
    for (const Node& node : frontier) {
      for (Source x : kSources) {
        const double px =
            t == 0 ? initial.prob(x)
                   : model.TransitionProb(node.atom.RequestAt(t - 1), x);
        if (px == 0.0) continue;
        const QueryDistribution law = rule.Distribution(node.state, flag, x);
        for (Query q : kQueries) {
          const double pq = law[q];
          if (pq <= 0.0) continue;
          Node child = node;
          child.atom.requests |= static_cast<uint32_t>(Index(x)) << t;
          child.atom.queries |= static_cast<uint32_t>(Index(q)) << (2 * t);
          child.atom.prob *= px * pq;
          child.state = Advance(node.state, flag, x, q);
          next.push_back(child);
        }
      }
    }
    frontier = std::move(next);
  }

  HistoryDistribution dist{model, mode, horizon, {}};
  dist.atoms.reserve(frontier.size());
  for (const Node& node : frontier) dist.atoms.push_back(node.atom);
  return dist;
}

absl::StatusOr<HistoryDistribution> EnumerateJoint(const MarkovModel& model,
                                                   const PrivacyMode& mode,
                                                   int horizon) {
  return EnumerateJoint(model, mode, horizon, model.DefaultInitial());
}

LeakageReport Leakage(const HistoryDistribution& dist) {
  LeakageReport report;
  for (int t = 0; t < dist.horizon; ++t) {
    LeakageTerms terms{.t = t};
    const std::optional<int> ref = ReferenceIndex(dist.mode, t);
    if (ref.has_value()) {
      uint64_t on_mask = 0;
      for (int64_t i : dist.mode.OnTimes(0, t)) on_mask |= uint64_t{1} << i;
      const uint64_t rest_mask = on_mask & ~(uint64_t{1} << *ref);
      std::vector<Sample> full, reference, remainder;
      full.reserve(dist.atoms.size());
      reference.reserve(dist.atoms.size());
      remainder.reserve(dist.atoms.size());
      for (const Atom& a : dist.atoms) {
        const uint64_t q = Index(a.QueryAt(t));
        const uint64_t past = QueryPrefix(a, t);
        full.push_back({a.requests & on_mask, q, past, a.prob});
        reference.push_back({Bit(a, *ref), q, past, a.prob});
        remainder.push_back(
            {a.requests & rest_mask, q, past | (Bit(a, *ref) << 40), a.prob});
      }
      terms.full = ConditionalMutualInformationBits(full);
      terms.reference_term = ConditionalMutualInformationBits(reference);
      terms.remainder_term = ConditionalMutualInformationBits(remainder);
    }
    report.max_leakage = std::max(report.max_leakage, terms.full);
    report.per_t.push_back(terms);
  }
  return report;
}

absl::StatusOr<QueryChainCheck> VerifyQueryChain(
    const HistoryDistribution& dist, const MarkovModel& model) {
  if (!dist.mode.is_step()) {
    return absl::InvalidArgumentError(
        "the query chain is time-homogeneous only in the step mode");
  }
  const QueryChain chain = QueryChainFor(model);
  QueryChainCheck check;
  for (int t = 1; t < dist.horizon; ++t) {
    std::array<std::array<double, 3>, 3> pair{};
    std::array<double, 3> prev{};
    absl::flat_hash_map<uint64_t, double> history;
    absl::flat_hash_map<std::pair<uint64_t, int>, double> history_next;
    for (const Atom& a : dist.atoms) {
      const int i = Index(a.QueryAt(t - 1));
      const int j = Index(a.QueryAt(t));
      pair[i][j] += a.prob;
      prev[i] += a.prob;
      const uint64_t h = QueryPrefix(a, t);
      history[h] += a.prob;
      history_next[{h, j}] += a.prob;
    }
    for (int i = 0; i < 3; ++i) {
      if (prev[i] < kNegligibleMass) continue;
      ++check.transitions_checked;
      for (int j = 0; j < 3; ++j) {
        check.max_deviation =
            std::max(check.max_deviation,
                     std::abs(pair[i][j] / prev[i] - chain.transition[i][j]));
      }
    }
    for (const auto& [h, mass] : history) {
      if (mass < kNegligibleMass) continue;
      const int i = static_cast<int>((h >> (2 * (t - 1))) & 3u);
      for (int j = 0; j < 3; ++j) {
        auto it = history_next.find({h, j});
        const double joint = it == history_next.end() ? 0.0 : it->second;
        check.markov_deviation =
            std::max(check.markov_deviation,
                     std::abs(joint / mass - pair[i][j] / prev[i]));
      }
    }
  }
  return check;
}

StructureReport VerifyStructure(const HistoryDistribution& dist,
                                     const MarkovModel& model) {
  StructureReport report;
  for (int t = 0; t < dist.horizon; ++t) {
    const std::optional<int> ref = ReferenceIndex(dist.mode, t);
    if (ref.has_value()) {
      // (reference, query) -> bitmask of requests seen with positive mass.
      absl::flat_hash_map<std::pair<int, int>, unsigned> seen;
      for (const Atom& a : dist.atoms) {
        if (a.prob <= 0.0) continue;
        seen[{Index(a.RequestAt(*ref)), Index(a.QueryAt(t))}] |=
            1u << Index(a.RequestAt(t));
      }
      for (const auto& [key, mask] : seen) {
        ++report.decode_checked;
        if (mask != 1u && mask != 2u) {
          ++report.decode_violations;
          continue;
        }
        const Source observed = mask == 1u ? Source::kA : Source::kB;
        auto decoded = DecodeReference(static_cast<Source>(key.first),
                                       static_cast<Query>(key.second), model,
                                       t - *ref);
        if (!decoded.ok() || *decoded != observed) ++report.decode_violations;
      }
    }
    if (t == 0) continue;

    std::vector<Sample> requests, queries;
    requests.reserve(dist.atoms.size());
    for (const Atom& a : dist.atoms) {
      const uint64_t past = RequestPrefix(a, t) | (QueryPrefix(a, t) << 16);
      requests.push_back({past, Bit(a, t), Bit(a, t - 1), a.prob});
      if (ref.has_value()) {
        const uint64_t given = Bit(a, t) | (Bit(a, *ref) << 1) |
                               (static_cast<uint64_t>(Index(a.QueryAt(t - 1)))
                                << 2);
        queries.push_back(
            {past, static_cast<uint64_t>(Index(a.QueryAt(t))), given, a.prob});
      }
    }
    report.markov_request_bits =
        std::max(report.markov_request_bits,
                 ConditionalMutualInformationBits(requests));
    if (ref.has_value()) {
      report.markov_query_bits = std::max(
          report.markov_query_bits, ConditionalMutualInformationBits(queries));
    }
  }
  return report;
}

absl::StatusOr<double> OracleRate(const HistoryDistribution& dist, int t) {
  if (t < 0 || t >= dist.horizon) {
    return MakeError(ErrorKind::kOutOfRange,
                     absl::StrCat("t = ", t, " outside [0, ", dist.horizon,
                                  ")"));
  }
  return 1.0 / (1.0 + dist.QueryMarginal(t)[Query::kAB]);
}

std::optional<QueryDistribution> PerturbEntry(const QueryDistribution& row,
                                              Query query, double delta) {
  constexpr double kSlack = 1e-12;
  const double moved = row[query] + delta;
  if (moved < -kSlack || moved > 1.0 + kSlack) return std::nullopt;
  const double target = std::clamp(moved, 0.0, 1.0);
  const double rest = 1.0 - row[query];
  QueryDistribution out = row;
  out[query] = target;
  if (rest > kNegligibleMass) {
    for (Query other : kQueries) {
      if (other != query) out[other] = row[other] * (1.0 - target) / rest;
    }
  } else {
    if (query == Query::kAB) return std::nullopt;
    out[Query::kAB] += 1.0 - target;
  }
  return out;
}

absl::StatusOr<std::vector<ProbeResult>> TightnessProbe(
    const MarkovModel& model, int horizon, double step) {
  if (RegimeFor(model, 1) != TableRegime::kBelowOne) {
    return absl::InvalidArgumentError(
        "the tightness probe perturbs the alpha + beta < 1 table");
  }
  if (horizon < 2) return absl::InvalidArgumentError("horizon must be >= 2");
  const PrivacyMode mode = PrivacyMode::StepAtZero();
  std::vector<ProbeResult> results;
  for (Source ref : kSources) {
    for (Source cur : kSources) {
      const Query entry = DirectQuery(cur);
      for (double delta : {step, -step}) {
        const QueryDistribution base = TableFor(model, 1).Row(ref, cur);
        const std::optional<QueryDistribution> row =
            PerturbEntry(base, entry, delta);
        if (!row.has_value()) continue;
        const OnOffPolicy policy(model, [model, ref, cur, row](int offset) {
          PolicyTable table = TableFor(model, offset);
          table.MutableRow(ref, cur) = *row;
          return table;
        });
        auto dist = EnumerateJoint(model, mode, horizon,
                                   model.DefaultInitial(), &policy);
        if (!dist.ok()) return dist.status();
        ProbeResult result{ref,  cur, entry, delta, *row,
                           Leakage(*dist).max_leakage, 0.0};
        for (int t = 1; t < horizon; ++t) {
          auto oracle = OracleRate(*dist, t);
          if (!oracle.ok()) return oracle.status();
          result.rate_loss = std::max(
              result.rate_loss, TheoreticalRate(model, mode, t) - *oracle);
        }
        results.push_back(result);
      }
    }
  }
  return results;
}

}  // namespace onoff
