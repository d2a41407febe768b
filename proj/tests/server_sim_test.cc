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

#include "onoff/server_sim.h"

#include <cmath>
#include <set>
#include <tuple>

#include <gtest/gtest.h>

#include "onoff/analysis.h"
#include "onoff/errors.h"
#include "tests/test_util.h"

namespace onoff {
namespace {

using ::onoff::testing::Model;

constexpr Source A = Source::kA;
constexpr Source B = Source::kB;

TEST(MessageStoreTest, DeterministicAndDistinct) {
  const MessageStore store(11, 100);
  const Message m1 = store.Get(A, 3);
  EXPECT_EQ(m1, store.Get(A, 3));
  EXPECT_NE(m1.payload, store.Get(B, 3).payload);
  EXPECT_NE(m1.payload, store.Get(A, 4).payload);
  ASSERT_EQ(m1.payload.size(), 2u);
  EXPECT_EQ(m1.payload[1] >> 36, 0u);  // 100 bits: 36 bits in the last word
  EXPECT_EQ(MessageStore(11, 1).Get(B, -2).payload[0] >> 1, 0u);
}

TEST(AnswerTest, CaseMap) {
  const MessageStore store8(5, 8);
  const Answer a = MakeAnswer(Query::kA, 0, store8);
  ASSERT_EQ(a.messages.size(), 1u);
  EXPECT_EQ(a.messages[0].source, A);
  EXPECT_EQ(a.length_symbols, 8);

  const Answer ab = MakeAnswer(Query::kAB, 2, store8);
  ASSERT_EQ(ab.messages.size(), 2u);
  EXPECT_EQ(ab.length_symbols, 16);
  EXPECT_EQ(ab.messages[0], store8.Get(A, 2));
  EXPECT_EQ(ab.messages[1], store8.Get(B, 2));

  const MessageStore store1(5, 1);
  const Answer b = MakeAnswer(Query::kB, -1, store1);
  ASSERT_EQ(b.messages.size(), 1u);
  EXPECT_EQ(b.messages[0].source, B);
  EXPECT_EQ(b.length_symbols, 1);
}

TEST(AnswerTest, DecodesOnlyNamedMessages) {
  const MessageStore store(5, 16);
  EXPECT_TRUE(Decodes(MakeAnswer(Query::kA, 1, store), A, 1, store));
  EXPECT_FALSE(Decodes(MakeAnswer(Query::kA, 1, store), B, 1, store));
  EXPECT_FALSE(Decodes(MakeAnswer(Query::kA, 1, store), A, 2, store));
  EXPECT_TRUE(Decodes(MakeAnswer(Query::kAB, 1, store), B, 1, store));
}

TEST(RunSessionTest, OnPrefixAlwaysQueriesBoth) {
  SessionOptions options;
  options.t_min = -3;
  options.length_bits = 8;
  ASSERT_OK_AND_ASSIGN(SessionTrace trace,
                       RunSession(Model(0.2, 0.2), PrivacyMode::StepAtZero(),
                                  4, 42, options));
  ASSERT_EQ(trace.steps.size(), 4u);
  EXPECT_EQ(trace.steps.front().time, -3);
  EXPECT_EQ(trace.steps.back().time, 0);
  for (const StepRecord& r : trace.steps) {
    EXPECT_EQ(r.flag, Flag::kOn);
    EXPECT_EQ(r.query, Query::kAB);
    EXPECT_EQ(r.answer_length, 16);
  }
}

// Oracle for the alternating chain: walk every reachable (state, request)
// pair of the policy from both initial requests and collect OFF queries.
std::set<Query> ReachableOffQueries(const MarkovModel& m, int horizon) {
  std::set<Query> seen;
  const OnOffPolicy policy(m);
  for (Source x0 : kSources) {
    std::vector<std::tuple<ClientState, Source>> frontier = {
        {Advance({}, Flag::kOn, x0, Query::kAB), x0}};
    for (int t = 1; t < horizon; ++t) {
      std::vector<std::tuple<ClientState, Source>> next;
      for (const auto& [state, prev] : frontier) {
        for (Source x : kSources) {
          if (m.TransitionProb(prev, x) == 0.0) continue;
          const QueryDistribution d = policy.Distribution(state, Flag::kOff, x);
          for (Query q : kQueries) {
            if (d[q] == 0.0) continue;
            seen.insert(q);
            next.emplace_back(Advance(state, Flag::kOff, x, q), x);
          }
        }
      }
      frontier = std::move(next);
    }
  }
  return seen;
}

TEST(RunSessionTest, AlternatingChainQueriesBothForever) {
  const MarkovModel m = Model(1, 1);
  EXPECT_EQ(ReachableOffQueries(m, 10), std::set<Query>({Query::kAB}));
  for (uint64_t seed = 0; seed < 20; ++seed) {
    ASSERT_OK_AND_ASSIGN(SessionTrace trace,
                         RunSession(m, PrivacyMode::StepAtZero(), 12, seed));
    for (const StepRecord& r : trace.steps) EXPECT_EQ(r.query, Query::kAB);
  }
  ASSERT_OK_AND_ASSIGN(PrivacyMode mode, PrivacyMode::Parse("NYNNYNNN"));
  ASSERT_OK_AND_ASSIGN(SessionTrace trace, RunSession(m, mode, 8, 5));
  for (const StepRecord& r : trace.steps) {
    if (r.time >= 1) EXPECT_EQ(r.query, Query::kAB) << r.time;
  }
}

TEST(RunSessionTest, DecodabilityAndLengthAccounting) {
  for (double a : {0.1, 0.3, 0.5, 0.8}) {
    for (double b : {0.2, 0.6, 0.9}) {
      SessionOptions options;
      options.length_bits = 13;
      ASSERT_OK_AND_ASSIGN(auto traces,
                           RunSessions(Model(a, b), PrivacyMode::StepAtZero(),
                                       10, 17, 200, options));
      for (const SessionTrace& trace : traces) {
        for (const StepRecord& r : trace.steps) {
          EXPECT_TRUE(r.decoded_ok);
          EXPECT_EQ(r.answer_length, r.query == Query::kAB ? 26 : 13);
          if (r.query != Query::kAB) {
            EXPECT_EQ(r.query, DirectQuery(r.request));
          }
        }
      }
    }
  }
}

TEST(RunSessionTest, ReproducibleGivenSeed) {
  ASSERT_OK_AND_ASSIGN(PrivacyMode mode, PrivacyMode::Parse("NYNNYNNNNN"));
  ASSERT_OK_AND_ASSIGN(SessionTrace t1, RunSession(Model(0.3, 0.2), mode, 10, 9));
  ASSERT_OK_AND_ASSIGN(SessionTrace t2, RunSession(Model(0.3, 0.2), mode, 10, 9));
  EXPECT_EQ(t1, t2);
}

TEST(RunSessionTest, ThreadCountDoesNotChangeResults) {
  const MarkovModel m = Model(0.25, 0.4);
  ASSERT_OK_AND_ASSIGN(auto serial, RunSessions(m, PrivacyMode::StepAtZero(),
                                                6, 1234, 300, {}, 1));
  ASSERT_OK_AND_ASSIGN(auto parallel, RunSessions(m, PrivacyMode::StepAtZero(),
                                                  6, 1234, 300, {}, 4));
  EXPECT_EQ(serial, parallel);
}

TEST(RunSessionTest, RejectsBadArguments) {
  EXPECT_FALSE(RunSession(Model(0.2, 0.2), PrivacyMode::StepAtZero(), 0, 1).ok());
  SessionOptions late;
  late.t_min = 2;
  EXPECT_FALSE(
      RunSession(Model(0.2, 0.2), PrivacyMode::StepAtZero(), 3, 1, late).ok());
  EXPECT_FALSE(
      RunSession(Model(0.2, 0.2), *PrivacyMode::Parse("YN"), 3, 1).ok());
}

TEST(EmpiricalRateTest, ForcedDoubleDownloadGivesOneHalf) {
  ASSERT_OK_AND_ASSIGN(auto traces,
                       RunSessions(Model(0.2, 0.2), PrivacyMode::StepAtZero(),
                                   2, 3, 50));
  ASSERT_OK_AND_ASSIGN(RateEstimate est, EmpiricalRate(traces, 0));
  EXPECT_DOUBLE_EQ(est.rate, 0.5);
  EXPECT_EQ(est.std_error, 0.0);
  EXPECT_EQ(est.samples, 50);
}

TEST(EmpiricalRateTest, NeedsTwoCoveringTraces) {
  ASSERT_OK_AND_ASSIGN(auto traces,
                       RunSessions(Model(0.2, 0.2), PrivacyMode::StepAtZero(),
                                   3, 3, 1));
  auto est = EmpiricalRate(traces, 0);
  ASSERT_FALSE(est.ok());
  EXPECT_TRUE(HasErrorKind(est.status(), ErrorKind::kOutOfRange));
  ASSERT_OK_AND_ASSIGN(auto more,
                       RunSessions(Model(0.2, 0.2), PrivacyMode::StepAtZero(),
                                   3, 3, 5));
  EXPECT_TRUE(HasErrorKind(EmpiricalRate(more, 9).status(),
                           ErrorKind::kOutOfRange));
}

class MonteCarloRateTest : public ::testing::TestWithParam<
                               std::tuple<double, double, int, double>> {};

TEST_P(MonteCarloRateTest, WithinThreeStandardErrors) {
  const auto [alpha, beta, t, expected] = GetParam();
  const MarkovModel m = Model(alpha, beta);
  EXPECT_NEAR(TheoreticalRate(m, PrivacyMode::StepAtZero(), t), expected, 1e-6);
  ASSERT_OK_AND_ASSIGN(auto traces,
                       RunSessions(m, PrivacyMode::StepAtZero(), t + 2, 31337,
                                   100000, {}, 4));
  ASSERT_OK_AND_ASSIGN(RateEstimate est, EmpiricalRate(traces, t));
  EXPECT_GT(est.std_error, 0.0);
  EXPECT_LE(std::abs(est.rate - expected), 3 * est.std_error)
      << "rate " << est.rate << " se " << est.std_error;
}

INSTANTIATE_TEST_SUITE_P(
    FigureTwoPoints, MonteCarloRateTest,
    ::testing::Values(std::make_tuple(0.2, 0.2, 1, 0.625),
                      std::make_tuple(0.2, 0.2, 4, 0.885269121813031),
                      std::make_tuple(0.1, 0.1, 4, 0.709421112372304)));

}  // namespace
}  // namespace onoff
