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

#include <algorithm>
#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "onoff/export.h"
#include "tests/test_util.h"

namespace onoff {
namespace {

using ::onoff::testing::Grid;
using ::onoff::testing::Matrix3;
using ::onoff::testing::Model;

constexpr Source A = Source::kA;
constexpr Source B = Source::kB;

const PrivacyMode kStep = PrivacyMode::StepAtZero();

TEST(TheoreticalRateTest, Examples) {
  EXPECT_NEAR(TheoreticalRate(Model(0.2, 0.2), kStep, 1), 0.625, 1e-12);
  EXPECT_NEAR(TheoreticalRate(Model(0.35, 0.35), kStep, 1), 0.769230769230769,
              1e-12);
  for (double a : Grid(4)) {
    for (double b : Grid(4)) {
      EXPECT_EQ(TheoreticalRate(Model(a, b), kStep, 0), 0.5);
      EXPECT_EQ(TheoreticalRate(Model(a, b), kStep, -7), 0.5);
    }
  }
  for (int t = 1; t <= 20; ++t) {
    EXPECT_EQ(TheoreticalRate(Model(0.5, 0.5), kStep, t), 1.0);
  }
}

TEST(TheoreticalRateTest, GeneralModeUsesLatestOnTime) {
  const MarkovModel m = Model(0.3, 0.2);
  const PrivacyMode mode = *PrivacyMode::Parse("NYNNY");
  EXPECT_EQ(TheoreticalRate(m, mode, 0), 1.0);  // nothing to protect yet
  EXPECT_EQ(TheoreticalRate(m, mode, 1), 0.5);
  EXPECT_NEAR(TheoreticalRate(m, mode, 2), 1 / (1 + 0.5), 1e-12);
  EXPECT_NEAR(TheoreticalRate(m, mode, 3), 1 / (1 + 0.25), 1e-12);
  EXPECT_EQ(TheoreticalRate(m, mode, 4), 0.5);
  EXPECT_EQ(TheoreticalRate(m, *PrivacyMode::Parse("NNNN"), 2), 1.0);
}

TEST(TheoreticalRateTest, SymmetricAboutIndependence) {
  for (double a : Grid(20)) {
    for (double b : Grid(20)) {
      for (int t = 1; t <= 10; ++t) {
        EXPECT_NEAR(TheoreticalRate(Model(a, b), kStep, t),
                    TheoreticalRate(Model(1 - b, 1 - a), kStep, t), 1e-12);
      }
    }
  }
}

TEST(TheoreticalRateTest, ErgodicRatesIncreaseToOne) {
  for (double a : Grid(20)) {
    for (double b : Grid(20)) {
      const MarkovModel m = Model(a, b);
      if (!m.ergodic()) continue;
      double prev = 0.5;
      for (int t = 1; t <= 1000; ++t) {
        const double r = TheoreticalRate(m, kStep, t);
        EXPECT_GE(r, prev);
        prev = r;
      }
      EXPECT_NEAR(prev, 1.0, 1e-6) << a << "," << b;
    }
  }
}

TEST(QueryChainTest, Examples) {
  const QueryChain below = QueryChainFor(Model(0.2, 0.2));
  EXPECT_NEAR(below(Query::kAB, Query::kA), 0.2, 1e-12);
  EXPECT_NEAR(below(Query::kAB, Query::kB), 0.2, 1e-12);
  EXPECT_NEAR(below(Query::kAB, Query::kAB), 0.6, 1e-12);

  const QueryChain above = QueryChainFor(Model(0.6, 0.6));
  EXPECT_NEAR(above(Query::kAB, Query::kA), 0.4, 1e-12);
  EXPECT_NEAR(above(Query::kAB, Query::kB), 0.4, 1e-12);
  EXPECT_NEAR(above(Query::kAB, Query::kAB), 0.2, 1e-12);

  const QueryChain boundary = QueryChainFor(Model(0.5, 0.5));
  EXPECT_NEAR(boundary(Query::kAB, Query::kA), 0.5, 1e-12);
  EXPECT_NEAR(boundary(Query::kAB, Query::kAB), 0.0, 1e-12);
}

TEST(QueryChainTest, RowsStochasticAndDirectQueriesNeverReturnToBoth) {
  for (double a : Grid(20)) {
    for (double b : Grid(20)) {
      const QueryChain chain = QueryChainFor(Model(a, b));
      for (const auto& row : chain.transition) {
        EXPECT_NEAR(row[0] + row[1] + row[2], 1.0, 1e-12);
        for (double p : row) EXPECT_GE(p, -1e-15);
      }
      EXPECT_EQ(chain(Query::kA, Query::kAB), 0.0);
      EXPECT_EQ(chain(Query::kB, Query::kAB), 0.0);
    }
  }
}

TEST(QueryChainTest, BothFormsAgreeAtBoundary) {
  for (double a : Grid(20)) {
    const MarkovModel m = Model(a, 1 - a);
    const QueryChain x = QueryChainAtMostOne(m);
    const QueryChain y = QueryChainAboveOne(m);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        EXPECT_NEAR(x.transition[i][j], y.transition[i][j], 1e-12);
      }
    }
  }
}

TEST(PrQueryAbTest, Examples) {
  EXPECT_EQ(PrQueryAb(Model(0.3, 0.9), 0), 1.0);
  EXPECT_NEAR(PrQueryAb(Model(0.2, 0.2), 2), 0.36, 1e-12);
  EXPECT_NEAR(PrQueryAb(Model(0.7, 0.7), 3), 0.064, 1e-12);
}

// Oracle: push a point mass on AB through the chain matrix.
double AbMassAfter(const QueryChain& chain, int steps) {
  std::array<double, 3> mass = {0, 0, 1};
  for (int k = 0; k < steps; ++k) {
    std::array<double, 3> next{};
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) next[j] += mass[i] * chain.transition[i][j];
    }
    mass = next;
  }
  return mass[2];
}

TEST(PrQueryAbTest, MatchesChainIteration) {
  EXPECT_NEAR(AbMassAfter(QueryChainFor(Model(0.7, 0.7)), 3), 0.064, 1e-12);
  for (double a : Grid(20)) {
    for (double b : Grid(20)) {
      const MarkovModel m = Model(a, b);
      for (int k = 0; k <= 20; ++k) {
        EXPECT_NEAR(AbMassAfter(QueryChainFor(m), k), PrQueryAb(m, k), 1e-12);
      }
    }
  }
}

TEST(ConverseTest, Examples) {
  ASSERT_OK_AND_ASSIGN(double l1, ConverseMinLength(Model(0.2, 0.2), 1, 0.5));
  EXPECT_NEAR(l1, 1.6, 1e-12);
  for (double delta : {0.1, 0.5, 0.93}) {
    ASSERT_OK_AND_ASSIGN(double l, ConverseMinLength(Model(0.5, 0.5), 5, delta));
    EXPECT_NEAR(l, 1.0, 1e-12);
  }
  // Oracle: 2 - min{P(A|A), P(A|B)} - min{P(B|A), P(B|B)} at t = 2.
  const MarkovModel m = Model(0.3, 0.4);
  const double oracle =
      2 - std::min(m.TStepProb(A, A, 2), m.TStepProb(B, A, 2)) -
      std::min(m.TStepProb(A, B, 2), m.TStepProb(B, B, 2));
  EXPECT_NEAR(oracle, 1.09, 1e-12);
  ASSERT_OK_AND_ASSIGN(double l2, ConverseMinLength(m, 2, 0.7));
  EXPECT_NEAR(l2, 1.09, 1e-12);
}

TEST(ConverseTest, WitnessSatisfiesTableConstraints) {
  for (double a : Grid(10)) {
    for (double b : Grid(10)) {
      const MarkovModel m = Model(a, b);
      for (int t = 1; t <= 6; ++t) {
        for (double delta : {0.25, 0.5, 0.9}) {
          ASSERT_OK_AND_ASSIGN(ConverseWitness w,
                               SolveConverseWitness(m, t, delta));
          double total = 0.0;
          for (const auto& row : w.joint) {
            for (double p : row) {
              EXPECT_GE(p, -1e-12);
              total += p;
            }
          }
          EXPECT_NEAR(total, 1.0, 1e-12);
          EXPECT_GE(w.stay_single, -1e-12);
          EXPECT_GE(w.move_single, -1e-12);
          EXPECT_LE(w.stay_single / delta,
                    std::min(m.TStepProb(A, A, t), m.TStepProb(B, A, t)) + 1e-12);
          EXPECT_LE(w.move_single / delta,
                    std::min(m.TStepProb(A, B, t), m.TStepProb(B, B, t)) + 1e-12);
          // Privacy: each query class is equally likely under X_0 = A and B.
          for (int c = 0; c < 3; ++c) {
            const double given_a = (w.joint[0][c] + w.joint[1][c]) / delta;
            const double given_b = (w.joint[2][c] + w.joint[3][c]) / (1 - delta);
            EXPECT_NEAR(given_a, given_b, 1e-9);
          }
        }
      }
    }
  }
}

TEST(ConverseTest, LinearProgramMatchesClosedForm) {
  for (double a : Grid(20)) {
    for (double b : Grid(20)) {
      const MarkovModel m = Model(a, b);
      for (int t = 1; t <= 20; ++t) {
        ASSERT_OK_AND_ASSIGN(double lp, ConverseMinLength(m, t, 0.5));
        EXPECT_NEAR(lp, ConverseMinLengthClosedForm(m, t), 1e-9);
        EXPECT_NEAR(lp * TheoreticalRate(m, kStep, t), 1.0, 1e-9);
      }
    }
  }
}

TEST(ConverseTest, RejectsDegenerateDelta) {
  EXPECT_FALSE(ConverseMinLength(Model(0.2, 0.2), 1, 0.0).ok());
  EXPECT_FALSE(ConverseMinLength(Model(0.2, 0.2), 1, 1.0).ok());
  EXPECT_FALSE(ConverseMinLength(Model(0.2, 0.2), 0, 0.5).ok());
}

TEST(RateCurveTest, Examples) {
  const RateCurve low = MakeRateCurve(Model(0.1, 0.1), kStep, 1, 3);
  ASSERT_EQ(low.points.size(), 3u);
  EXPECT_NEAR(low.points[0].rate, 0.555555555555556, 1e-12);
  EXPECT_NEAR(low.points[1].rate, 0.609756097560976, 1e-12);
  EXPECT_NEAR(low.points[2].rate, 0.661375661375661, 1e-12);
  EXPECT_EQ(low.points[0].regime, "lt1");

  for (const RatePoint& p : MakeRateCurve(Model(0, 0), kStep, 0, 20).points) {
    EXPECT_EQ(p.rate, 0.5);
  }
  const RateCurve high = MakeRateCurve(Model(0.35, 0.35), kStep, 20, 20);
  EXPECT_NEAR(high.points[0].rate, 0.999999999965132, 1e-12);

  const RateCurve parity = MakeRateCurve(Model(0.7, 0.6), kStep, 0, 2);
  EXPECT_EQ(parity.points[0].regime, "on");
  EXPECT_EQ(parity.points[1].regime, "odd");
  EXPECT_EQ(parity.points[2].regime, "even");
}

TEST(RateCurveTest, MonotoneOverOffRuns) {
  const PrivacyMode mode = *PrivacyMode::Parse("YNNNNYNNNYNNNNNN");
  for (double a : Grid(10)) {
    for (double b : Grid(10)) {
      const MarkovModel m = Model(a, b);
      if (!m.ergodic()) continue;
      const RateCurve curve = MakeRateCurve(m, mode, 0, 15);
      for (size_t i = 1; i < curve.points.size(); ++i) {
        if (mode.At(curve.points[i].t) == Flag::kOn) continue;
        EXPECT_GE(curve.points[i].rate, curve.points[i - 1].rate);
      }
      for (const RatePoint& p : curve.points) {
        EXPECT_GT(p.rate, 0.0);
        EXPECT_LE(p.rate, 1.0);
      }
    }
  }
}

TEST(RateCurveTest, CsvExport) {
  std::ostringstream out;
  WriteRateCurveCsv(out, MakeRateCurve(Model(0.2, 0.2), kStep, 0, 1));
  EXPECT_EQ(out.str(), "t,rate,regime\n0,0.5,on\n1,0.625,lt1\n");
}

}  // namespace
}  // namespace onoff
