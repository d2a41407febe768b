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

#ifndef ONOFF_MARKOV_H_
#define ONOFF_MARKOV_H_

#include <array>
#include <cstdint>
#include <vector>

#include "absl/strings/string_view.h"
#include "absl/status/statusor.h"
#include "onoff/rng.h"

namespace onoff {

// Identity of one of the two message sources. Requests X_t take these values.
enum class Source : uint8_t { kA = 0, kB = 1 };

inline constexpr std::array<Source, 2> kSources = {Source::kA, Source::kB};

inline constexpr Source Other(Source s) {
  return s == Source::kA ? Source::kB : Source::kA;
}
inline constexpr int Index(Source s) { return static_cast<int>(s); }
absl::string_view SourceName(Source s);
absl::StatusOr<Source> ParseSource(absl::string_view name);

// Distribution over {A, B}, stored as Pr(A).
class SourceDistribution {
 public:
  static absl::StatusOr<SourceDistribution> Create(double prob_a);
  static SourceDistribution PointMass(Source s);
  static SourceDistribution Uniform() { return SourceDistribution(0.5); }

  double prob(Source s) const { return s == Source::kA ? prob_a_ : 1 - prob_a_; }
  double prob_a() const { return prob_a_; }

 private:
  explicit SourceDistribution(double prob_a) : prob_a_(prob_a) {}
  double prob_a_;
};

// Two-state request chain with transition matrix
//   [1 - alpha, alpha]
//   [beta,      1 - beta]
// where alpha = Pr(A -> B) and beta = Pr(B -> A).
class MarkovModel {
 public:
  static absl::StatusOr<MarkovModel> Create(double alpha, double beta);

  double alpha() const { return alpha_; }
  double beta() const { return beta_; }

  // 1 - alpha - beta, the second eigenvalue of the transition matrix. Its
  // magnitude is the per-step persistence of the correlation between requests.
  double eigenvalue() const { return 1.0 - alpha_ - beta_; }

  // False for the absorbing chain (0, 0) and the alternating chain (1, 1).
  bool ergodic() const;

  double TransitionProb(Source from, Source to) const;

  // Closed-form Pr(X_{s+t} = to | X_s = from). Identity for t = 0.
  double TStepProb(Source from, Source to, int t) const;

  absl::StatusOr<SourceDistribution> Stationary() const;

  // Stationary law for ergodic chains, uniform otherwise.
  SourceDistribution DefaultInitial() const;

 private:
  MarkovModel(double alpha, double beta) : alpha_(alpha), beta_(beta) {}
  double alpha_;
  double beta_;
};

// Draws X_0..X_{length-1}; X_0 from `initial`, then one chain step at a time.
std::vector<Source> SamplePath(const MarkovModel& model,
                               const SourceDistribution& initial, int length,
                               Rng& rng);

}  // namespace onoff

#endif  // ONOFF_MARKOV_H_
