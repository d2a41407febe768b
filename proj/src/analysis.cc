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

#include "onoff/analysis.h"

#include <cmath>
#include <limits>

#include "absl/strings/str_cat.h"

namespace onoff {

std::optional<int64_t> OffsetSinceOn(const PrivacyMode& mode, int64_t t) {
  const std::optional<int64_t> latest = mode.LatestOn(t);
  if (!latest.has_value()) return std::nullopt;
  return t - *latest;
}

double PrQueryAb(const MarkovModel& model, int offset) {
  if (offset <= 0) return 1.0;
  return std::pow(std::abs(model.eigenvalue()), offset);
}

double TheoreticalRate(const MarkovModel& model, const PrivacyMode& mode,
                       int64_t t) {
  if (mode.At(t) == Flag::kOn) return 0.5;
  const std::optional<int64_t> offset = OffsetSinceOn(mode, t);
  if (!offset.has_value()) return 1.0;
  return 1.0 / (1.0 + PrQueryAb(model, static_cast<int>(*offset)));
}

namespace {

QueryChain DirectRows(const MarkovModel& model) {
  QueryChain chain;
  chain.transition[0] = {1 - model.alpha(), model.alpha(), 0};
  chain.transition[1] = {model.beta(), 1 - model.beta(), 0};
  return chain;
}

}  // namespace

QueryChain QueryChainAtMostOne(const MarkovModel& model) {
  QueryChain chain = DirectRows(model);
  chain.transition[2] = {model.beta(), model.alpha(),
                         1 - model.alpha() - model.beta()};
  return chain;
}

QueryChain QueryChainAboveOne(const MarkovModel& model) {
  QueryChain chain = DirectRows(model);
  chain.transition[2] = {1 - model.alpha(), 1 - model.beta(),
                         model.alpha() + model.beta() - 1};
  return chain;
}

QueryChain QueryChainFor(const MarkovModel& model) {
  return model.alpha() + model.beta() <= 1.0 ? QueryChainAtMostOne(model)
                                             : QueryChainAboveOne(model);
}

absl::StatusOr<ConverseWitness> SolveConverseWitness(const MarkovModel& model,
                                                     int t, double delta) {
  if (t < 1) return absl::InvalidArgumentError("converse needs t >= 1");
  if (!(delta > 0.0 && delta < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("delta must lie in (0, 1), got ", delta));
  }
  constexpr Source A = Source::kA;
  constexpr Source B = Source::kB;
  const double pAA = delta * model.TStepProb(A, A, t);
  const double pAB = delta * model.TStepProb(A, B, t);
  const double pBA = (1 - delta) * model.TStepProb(B, A, t);
  const double pBB = (1 - delta) * model.TStepProb(B, B, t);
  const double ratio = (1 - delta) / delta;

  // Each table entry is affine in (p1, p2): c1 * p1 + c2 * p2 + c0 >= 0.
  struct Affine {
    double c1, c2, c0;
    double operator()(double p1, double p2) const {
      return c1 * p1 + c2 * p2 + c0;
    }
  };
  const std::array<std::array<Affine, 3>, 4> entries = {{
      {{{1, 0, 0}, {0, 0, 0}, {-1, 0, pAA}}},
      {{{0, 0, 0}, {0, 1, 0}, {0, -1, pAB}}},
      {{{ratio, 0, 0}, {0, 0, 0}, {-ratio, 0, pBA}}},
      {{{0, 0, 0}, {0, ratio, 0}, {0, -ratio, pBB}}},
  }};
  std::vector<Affine> constraints;
  for (const auto& row : entries) {
    for (const Affine& e : row) {
      if (e.c1 != 0.0 || e.c2 != 0.0) constraints.push_back(e);
    }
  }

  constexpr double kFeasibilityTol = 1e-12;
  auto feasible = [&](double p1, double p2) {
    for (const Affine& c : constraints) {
      if (c(p1, p2) < -kFeasibilityTol) return false;
    }
    return true;
  };
  double best = -std::numeric_limits<double>::infinity();
  double best_p1 = 0.0;
  double best_p2 = 0.0;
  for (size_t i = 0; i < constraints.size(); ++i) {
    for (size_t j = i + 1; j < constraints.size(); ++j) {
      const Affine& u = constraints[i];
      const Affine& v = constraints[j];
      const double det = u.c1 * v.c2 - u.c2 * v.c1;
      if (std::abs(det) < 1e-15) continue;
      const double p1 = (-u.c0 * v.c2 + v.c0 * u.c2) / det;
      const double p2 = (-u.c1 * v.c0 + v.c1 * u.c0) / det;
      if (feasible(p1, p2) && p1 + p2 > best) {
        best = p1 + p2;
        best_p1 = p1;
        best_p2 = p2;
      }
    }
  }
  if (!std::isfinite(best)) {
    return absl::InternalError("converse program has no feasible vertex");
  }

  ConverseWitness witness{
      .start_a = delta, .stay_single = best_p1, .move_single = best_p2};
  for (size_t r = 0; r < entries.size(); ++r) {
    for (size_t c = 0; c < 3; ++c) {
      witness.joint[r][c] = entries[r][c](best_p1, best_p2);
    }
  }
  return witness;
}

absl::StatusOr<double> ConverseMinLength(const MarkovModel& model, int t,
                                         double delta) {
  auto witness = SolveConverseWitness(model, t, delta);
  if (!witness.ok()) return witness.status();
  return witness->MinLength();
}

double ConverseMinLengthClosedForm(const MarkovModel& model, int t) {
  return 1.0 + PrQueryAb(model, t);
}

RateCurve MakeRateCurve(const MarkovModel& model, const PrivacyMode& mode,
                        int64_t t_first, int64_t t_last) {
  RateCurve curve{model, mode, {}};
  for (int64_t t = t_first; t <= t_last; ++t) {
    std::string regime;
    if (mode.At(t) == Flag::kOn) {
      regime = "on";
    } else if (auto offset = OffsetSinceOn(mode, t); offset.has_value()) {
      regime = std::string(RegimeLabel(RegimeFor(model, *offset)));
    } else {
      regime = "free";
    }
    curve.points.push_back({t, TheoreticalRate(model, mode, t), regime});
  }
  return curve;
}

}  // namespace onoff
