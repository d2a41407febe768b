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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <string>
#include <tuple>
#include <vector>

#include "absl/status/statusor.h"
#include "onoff/analysis.h"
#include "onoff/audit.h"
#include "onoff/export.h"
#include "onoff/markov.h"
#include "onoff/policy.h"
#include "onoff/server_sim.h"

namespace py = pybind11;

namespace onoff {
namespace {

template <typename T>
T Unwrap(absl::StatusOr<T> value) {
  if (!value.ok()) throw py::value_error(value.status().ToString());
  return *std::move(value);
}

MarkovModel MakeModel(double alpha, double beta) {
  return Unwrap(MarkovModel::Create(alpha, beta));
}

PrivacyMode MakeMode(const std::string& mode) {
  return Unwrap(PrivacyMode::Parse(mode));
}

py::dict TableDict(double alpha, double beta, int offset) {
  const PolicyTable table = TableFor(MakeModel(alpha, beta), offset);
  py::dict rows;
  for (Source ref : kSources) {
    for (Source cur : kSources) {
      py::dict row;
      for (Query q : kQueries) {
        row[py::str(std::string(QueryName(q)))] = table.Row(ref, cur)[q];
      }
      rows[py::make_tuple(std::string(SourceName(ref)),
                          std::string(SourceName(cur)))] = row;
    }
  }
  return rows;
}

std::vector<std::tuple<int64_t, double, std::string>> RateCurveRows(
    double alpha, double beta, const std::string& mode, int64_t t_first,
    int64_t t_last) {
  const RateCurve curve =
      MakeRateCurve(MakeModel(alpha, beta), MakeMode(mode), t_first, t_last);
  std::vector<std::tuple<int64_t, double, std::string>> rows;
  for (const RatePoint& p : curve.points) rows.emplace_back(p.t, p.rate, p.regime);
  return rows;
}

std::string AuditJson(double alpha, double beta, const std::string& mode,
                      int horizon, const std::string& policy) {
  const MarkovModel model = MakeModel(alpha, beta);
  const NaivePolicy naive;
  const QueryPolicy* chosen = nullptr;
  if (policy == "naive") {
    chosen = &naive;
  } else if (policy != "onoff") {
    throw py::value_error("policy must be 'onoff' or 'naive'");
  }
  const HistoryDistribution dist =
      Unwrap(EnumerateJoint(model, MakeMode(mode), horizon,
                            model.DefaultInitial(), chosen));
  return LeakageReportToJson(dist, Leakage(dist), policy).dump();
}

std::vector<double> OracleRates(double alpha, double beta,
                                const std::string& mode, int horizon) {
  const HistoryDistribution dist =
      Unwrap(EnumerateJoint(MakeModel(alpha, beta), MakeMode(mode), horizon));
  std::vector<double> rates;
  for (int t = 0; t < horizon; ++t) rates.push_back(Unwrap(OracleRate(dist, t)));
  return rates;
}

using StepTuple =
    std::tuple<int64_t, std::string, std::string, std::string, int64_t, bool>;

std::vector<std::vector<StepTuple>> Simulate(double alpha, double beta,
                                             const std::string& mode,
                                             int horizon, int runs,
                                             uint64_t seed, int length_bits,
                                             int threads) {
  SessionOptions options;
  options.length_bits = length_bits;
  std::vector<SessionTrace> traces;
  {
    py::gil_scoped_release release;
    traces = Unwrap(RunSessions(MakeModel(alpha, beta), MakeMode(mode),
                                horizon, seed, runs, options, threads));
  }
  std::vector<std::vector<StepTuple>> out;
  for (const SessionTrace& trace : traces) {
    std::vector<StepTuple> steps;
    for (const StepRecord& r : trace.steps) {
      steps.emplace_back(r.time, std::string(FlagName(r.flag)),
                         std::string(SourceName(r.request)),
                         std::string(QueryName(r.query)), r.answer_length,
                         r.decoded_ok);
    }
    out.push_back(std::move(steps));
  }
  return out;
}

py::dict EmpiricalRates(double alpha, double beta, const std::string& mode,
                        int horizon, int runs, uint64_t seed,
                        const std::vector<int64_t>& times, int threads) {
  std::vector<SessionTrace> traces;
  {
    py::gil_scoped_release release;
    traces = Unwrap(RunSessions(MakeModel(alpha, beta), MakeMode(mode),
                                horizon, seed, runs, {}, threads));
  }
  py::dict out;
  for (int64_t t : times) {
    const RateEstimate e = Unwrap(EmpiricalRate(traces, t));
    out[py::int_(t)] = py::make_tuple(e.rate, e.std_error);
  }
  return out;
}

}  // namespace
}  // namespace onoff

PYBIND11_MODULE(_core, m) {
  using namespace onoff;
  m.doc() = "ON-OFF privacy core";

  m.def("stationary",
        [](double alpha, double beta) {
          const SourceDistribution d = Unwrap(MakeModel(alpha, beta).Stationary());
          return std::make_tuple(d.prob(Source::kA), d.prob(Source::kB));
        },
        py::arg("alpha"), py::arg("beta"));
  m.def("t_step_prob",
        [](double alpha, double beta, const std::string& from,
           const std::string& to, int t) {
          return MakeModel(alpha, beta).TStepProb(
              Unwrap(ParseSource(from)), Unwrap(ParseSource(to)), t);
        },
        py::arg("alpha"), py::arg("beta"), py::arg("from_source"),
        py::arg("to_source"), py::arg("t"));
  m.def("table_for", &TableDict, py::arg("alpha"), py::arg("beta"),
        py::arg("offset"));
  m.def("theoretical_rate",
        [](double alpha, double beta, int64_t t, const std::string& mode) {
          return TheoreticalRate(MakeModel(alpha, beta), MakeMode(mode), t);
        },
        py::arg("alpha"), py::arg("beta"), py::arg("t"),
        py::arg("mode") = "step");
  m.def("rate_curve", &RateCurveRows, py::arg("alpha"), py::arg("beta"),
        py::arg("mode") = "step", py::arg("t_first") = 0,
        py::arg("t_last") = 20);
  m.def("converse_min_length",
        [](double alpha, double beta, int t, double delta) {
          return Unwrap(ConverseMinLength(MakeModel(alpha, beta), t, delta));
        },
        py::arg("alpha"), py::arg("beta"), py::arg("t"),
        py::arg("delta") = 0.5);
  m.def("audit_json", &AuditJson, py::arg("alpha"), py::arg("beta"),
        py::arg("mode") = "step", py::arg("horizon") = 6,
        py::arg("policy") = "onoff");
  m.def("oracle_rates", &OracleRates, py::arg("alpha"), py::arg("beta"),
        py::arg("mode") = "step", py::arg("horizon") = 6);
  m.def("simulate", &Simulate, py::arg("alpha"), py::arg("beta"),
        py::arg("mode") = "step", py::arg("horizon") = 6, py::arg("runs") = 1,
        py::arg("seed") = 0, py::arg("length_bits") = kDefaultMessageBits,
        py::arg("threads") = 1);
  m.def("empirical_rates", &EmpiricalRates, py::arg("alpha"), py::arg("beta"),
        py::arg("mode") = "step", py::arg("horizon") = 7,
        py::arg("runs") = 10000, py::arg("seed") = 0,
        py::arg("times") = std::vector<int64_t>{1, 2, 3, 4, 5},
        py::arg("threads") = 1);
}
