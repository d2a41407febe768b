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

#ifndef ONOFF_SERVER_SIM_H_
#define ONOFF_SERVER_SIM_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "absl/status/statusor.h"
#include "onoff/markov.h"
#include "onoff/policy.h"

namespace onoff {

inline constexpr int kDefaultMessageBits = 64;

// W_{x,t}: the latest message of source x at time t, L bits packed into
// 64-bit words (low bit first, unused high bits of the last word are zero).
struct Message {
  Source source;
  int64_t time;
  int length_bits;
  std::vector<uint64_t> payload;

  friend bool operator==(const Message&, const Message&) = default;
};

// Produces messages on demand as a pure function of (seed, source, time), so
// sessions of any horizon need no storage.
class MessageStore {
 public:
  MessageStore(uint64_t seed, int length_bits)
      : seed_(seed), length_bits_(length_bits) {}

  Message Get(Source source, int64_t time) const;
  int length_bits() const { return length_bits_; }

 private:
  uint64_t seed_;
  int length_bits_;
};

// Y_t: the messages named by the query, and the answer length in symbols.
struct Answer {
  std::vector<Message> messages;
  int64_t length_symbols = 0;
};

Answer MakeAnswer(Query query, int64_t time, const MessageStore& store);

// True iff `answer` carries W_{request,time} intact.
bool Decodes(const Answer& answer, Source request, int64_t time,
             const MessageStore& store);

struct StepRecord {
  int64_t time;
  Flag flag;
  Source request;
  Query query;
  int64_t answer_length;
  bool decoded_ok;

  friend bool operator==(const StepRecord&, const StepRecord&) = default;
};

struct SessionTrace {
  int length_bits = kDefaultMessageBits;
  std::vector<StepRecord> steps;

  // Record at absolute time t, if the session covered it.
  const StepRecord* At(int64_t t) const;

  friend bool operator==(const SessionTrace&, const SessionTrace&) = default;
};

struct SessionOptions {
  int length_bits = kDefaultMessageBits;
  // First simulated time for step-at-zero sessions; must be <= 0. Explicit
  // modes always start at their time 0.
  int64_t t_min = -1;
  // Law of the first simulated request. Defaults to the model's stationary
  // law (uniform for non-ergodic chains).
  std::optional<SourceDistribution> initial;
  // Defaults to the ON-OFF scheme for the session's model.
  const QueryPolicy* policy = nullptr;
};

// Simulates `horizon` consecutive steps: requests from the chain, queries from
// the policy, answers from the server, with a decodability check per step.
// Step-at-zero sessions cover [t_min, t_min + horizon - 1]; explicit sessions
// cover [0, horizon - 1] and need horizon <= number of flags.
absl::StatusOr<SessionTrace> RunSession(const MarkovModel& model,
                                        const PrivacyMode& mode, int horizon,
                                        uint64_t seed,
                                        const SessionOptions& options = {});

// Runs `count` sessions; session i uses seed Rng(seed).Split(i). Results are
// independent of `threads`.
absl::StatusOr<std::vector<SessionTrace>> RunSessions(
    const MarkovModel& model, const PrivacyMode& mode, int horizon,
    uint64_t seed, int count, const SessionOptions& options = {},
    int threads = 1);

struct RateEstimate {
  double rate;
  double std_error;
  double ab_fraction;
  int64_t samples;
};

// L / mean answer length at time t. The standard error propagates the
// binomial variance of the AB indicator through rate = 1 / (1 + p).
absl::StatusOr<RateEstimate> EmpiricalRate(
    const std::vector<SessionTrace>& traces, int64_t t);

}  // namespace onoff

#endif  // ONOFF_SERVER_SIM_H_
