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

#include "onoff/markov.h"

#include <cmath>

#include "absl/strings/str_cat.h"
#include "onoff/errors.h"

namespace onoff {

absl::string_view SourceName(Source s) { return s == Source::kA ? "A" : "B"; }

absl::StatusOr<Source> ParseSource(absl::string_view name) {
  if (name == "A") return Source::kA;
  if (name == "B") return Source::kB;
  return absl::InvalidArgumentError(absl::StrCat("unknown source: ", name));
}

absl::StatusOr<SourceDistribution> SourceDistribution::Create(double prob_a) {
  if (!(prob_a >= 0.0 && prob_a <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("Pr(A) must lie in [0, 1], got ", prob_a));
  }
  return SourceDistribution(prob_a);
}

SourceDistribution SourceDistribution::PointMass(Source s) {
  return SourceDistribution(s == Source::kA ? 1.0 : 0.0);
}

absl::StatusOr<MarkovModel> MarkovModel::Create(double alpha, double beta) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("alpha must lie in [0, 1], got ", alpha));
  }
  if (!(beta >= 0.0 && beta <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("beta must lie in [0, 1], got ", beta));
  }
  return MarkovModel(alpha, beta);
}

bool MarkovModel::ergodic() const {
  return !(alpha_ == 0.0 && beta_ == 0.0) && !(alpha_ == 1.0 && beta_ == 1.0);
}

double MarkovModel::TransitionProb(Source from, Source to) const {
  if (from == Source::kA) return to == Source::kA ? 1.0 - alpha_ : alpha_;
  return to == Source::kA ? beta_ : 1.0 - beta_;
}

double MarkovModel::TStepProb(Source from, Source to, int t) const {
  const double sum = alpha_ + beta_;
  if (sum == 0.0) return from == to ? 1.0 : 0.0;
  const double decay = std::pow(eigenvalue(), t);
  if (from == Source::kA) {
    return to == Source::kA ? (beta_ + alpha_ * decay) / sum
                            : (alpha_ - alpha_ * decay) / sum;
  }
  return to == Source::kA ? (beta_ - beta_ * decay) / sum
                          : (alpha_ + beta_ * decay) / sum;
}

absl::StatusOr<SourceDistribution> MarkovModel::Stationary() const {
  if (!ergodic()) {
    return MakeError(ErrorKind::kNonErgodic,
                     absl::StrCat("chain (", alpha_, ", ", beta_,
                                  ") has no unique limiting distribution"));
  }
  return SourceDistribution::Create(beta_ / (alpha_ + beta_));
}

SourceDistribution MarkovModel::DefaultInitial() const {
  auto stationary = Stationary();
  return stationary.ok() ? *stationary : SourceDistribution::Uniform();
}

std::vector<Source> SamplePath(const MarkovModel& model,
                               const SourceDistribution& initial, int length,
                               Rng& rng) {
  std::vector<Source> path;
  if (length <= 0) return path;
  path.reserve(length);
  path.push_back(rng.NextUniform() < initial.prob_a() ? Source::kA
                                                      : Source::kB);
  for (int t = 1; t < length; ++t) {
    const Source prev = path.back();
    const double stay = model.TransitionProb(prev, prev);
    path.push_back(rng.NextUniform() < stay ? prev : Other(prev));
  }
  return path;
}

}  // namespace onoff
