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

#include <algorithm>
#include <cmath>
#include <thread>

#include "absl/strings/str_cat.h"
#include "onoff/errors.h"
#include "onoff/rng.h"

namespace onoff {

Message MessageStore::Get(Source source, int64_t time) const {
  Message message{source, time, length_bits_, {}};
  const int words = (length_bits_ + 63) / 64;
  Rng rng = Rng(seed_)
                .Split(static_cast<uint64_t>(Index(source)))
                .Split(static_cast<uint64_t>(time));
  message.payload.resize(words);
  for (uint64_t& word : message.payload) word = rng.NextU64();
  if (const int tail = length_bits_ % 64; tail != 0 && words > 0) {
    message.payload.back() &= (uint64_t{1} << tail) - 1;
  }
  return message;
}

Answer MakeAnswer(Query query, int64_t time, const MessageStore& store) {
  Answer answer;
  if (query == Query::kA || query == Query::kAB) {
    answer.messages.push_back(store.Get(Source::kA, time));
  }
  if (query == Query::kB || query == Query::kAB) {
    answer.messages.push_back(store.Get(Source::kB, time));
  }
  answer.length_symbols =
      static_cast<int64_t>(answer.messages.size()) * store.length_bits();
  return answer;
}

bool Decodes(const Answer& answer, Source request, int64_t time,
             const MessageStore& store) {
  const Message wanted = store.Get(request, time);
  return std::any_of(answer.messages.begin(), answer.messages.end(),
                     [&](const Message& m) { return m == wanted; });
}

const StepRecord* SessionTrace::At(int64_t t) const {
  if (steps.empty()) return nullptr;
  const int64_t index = t - steps.front().time;
  if (index < 0 || index >= static_cast<int64_t>(steps.size())) return nullptr;
  return &steps[index];
}

absl::StatusOr<SessionTrace> RunSession(const MarkovModel& model,
                                        const PrivacyMode& mode, int horizon,
                                        uint64_t seed,
                                        const SessionOptions& options) {
  if (horizon < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("horizon must be >= 1, got ", horizon));
  }
  if (options.length_bits < 1) {
    return absl::InvalidArgumentError("message length must be >= 1 bit");
  }
  int64_t first = 0;
  if (mode.is_step()) {
    if (options.t_min > 0) {
      return absl::InvalidArgumentError("t_min must be <= 0");
    }
    first = options.t_min;
  } else if (horizon > static_cast<int>(mode.flags().size())) {
    return absl::InvalidArgumentError(
        absl::StrCat("horizon ", horizon, " exceeds the ", mode.flags().size(),
                     " explicit flags"));
  }

  const Rng root(seed);
  Rng request_rng = root.Split(0);
  Rng policy_rng = root.Split(1);
  const MessageStore store(root.Split(2).NextU64(), options.length_bits);

  const OnOffPolicy default_policy(model);
  const QueryPolicy& policy =
      options.policy != nullptr ? *options.policy : default_policy;
  const std::vector<Source> requests = SamplePath(
      model, options.initial.value_or(model.DefaultInitial()), horizon,
      request_rng);

  SessionTrace trace;
  trace.length_bits = options.length_bits;
  trace.steps.reserve(horizon);
  ClientState state;
  for (int i = 0; i < horizon; ++i) {
    const int64_t t = first + i;
    const Flag flag = mode.At(t);
    const Source request = requests[i];
    const PolicyStep step = NextQuery(policy, state, flag, request, policy_rng);
    const Answer answer = MakeAnswer(step.query, t, store);
    const bool ok = Decodes(answer, request, t, store);
    if (!ok) {
      return MakeError(ErrorKind::kDecodabilityViolation,
                       absl::StrCat("query ", QueryName(step.query),
                                    " does not carry W_", SourceName(request),
                                    ",", t));
    }
    trace.steps.push_back(
        StepRecord{t, flag, request, step.query, answer.length_symbols, ok});
    state = step.next;
  }
  return trace;
}

absl::StatusOr<std::vector<SessionTrace>> RunSessions(
    const MarkovModel& model, const PrivacyMode& mode, int horizon,
    uint64_t seed, int count, const SessionOptions& options, int threads) {
  if (count < 0) return absl::InvalidArgumentError("count must be >= 0");
  std::vector<SessionTrace> traces(count);
  std::vector<absl::Status> failures(std::max(threads, 1));
  const Rng root(seed);
  auto worker = [&](int id, int stride) {
    for (int i = id; i < count; i += stride) {
      auto trace = RunSession(model, mode, horizon,
                              root.Split(static_cast<uint64_t>(i)).state(),
                              options);
      if (!trace.ok()) {
        failures[id] = trace.status();
        return;
      }
      traces[i] = *std::move(trace);
    }
  };
  const int workers = std::clamp(threads, 1, std::max(count, 1));
  if (workers == 1) {
    worker(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (int id = 0; id < workers; ++id) pool.emplace_back(worker, id, workers);
  }
  for (const absl::Status& s : failures) {
    if (!s.ok()) return s;
  }
  return traces;
}

absl::StatusOr<RateEstimate> EmpiricalRate(
    const std::vector<SessionTrace>& traces, int64_t t) {
  int64_t n = 0;
  int64_t ab = 0;
  double total_length = 0.0;
  double total_bits = 0.0;
  for (const SessionTrace& trace : traces) {
    const StepRecord* record = trace.At(t);
    if (record == nullptr) continue;
    ++n;
    if (record->query == Query::kAB) ++ab;
    total_length += static_cast<double>(record->answer_length);
    total_bits += trace.length_bits;
  }
  if (n < 2) {
    return MakeError(ErrorKind::kOutOfRange,
                     absl::StrCat(n, " trace(s) cover t = ", t,
                                  "; at least 2 are required"));
  }
  const double p = static_cast<double>(ab) / static_cast<double>(n);
  const double se_p = std::sqrt(p * (1.0 - p) / static_cast<double>(n));
  return RateEstimate{.rate = total_bits / total_length,
                      .std_error = se_p / ((1.0 + p) * (1.0 + p)),
                      .ab_fraction = p,
                      .samples = n};
}

}  // namespace onoff
