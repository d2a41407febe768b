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

#include "onoff/export.h"

#include <string>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"

namespace onoff {

nlohmann::json PolicyTableToJson(const PolicyTable& table) {
  nlohmann::json rows = nlohmann::json::object();
  for (Source ref : kSources) {
    for (Source cur : kSources) {
      nlohmann::json row = nlohmann::json::object();
      for (Query q : kQueries) {
        row[std::string(QueryName(q))] = table.Row(ref, cur)[q];
      }
      rows[absl::StrCat(SourceName(ref), ",", SourceName(cur))] = row;
    }
  }
  return {{"alpha", table.alpha()},
          {"beta", table.beta()},
          {"offset_parity", std::string(RegimeLabel(table.regime()))},
          {"rows", rows}};
}

namespace {

std::string CsvRow(const StepRecord& r) {
  return absl::StrCat(r.time, ",", FlagName(r.flag), ",", SourceName(r.request),
                      ",", QueryName(r.query), ",", r.answer_length);
}

}  // namespace

void WriteTraceCsv(std::ostream& out, const SessionTrace& trace) {
  out << "time,flag,request,query,answer_len\n";
  for (const StepRecord& r : trace.steps) out << CsvRow(r) << '\n';
}

void WriteTracesCsv(std::ostream& out,
                    const std::vector<SessionTrace>& traces) {
  out << "session,time,flag,request,query,answer_len\n";
  for (size_t i = 0; i < traces.size(); ++i) {
    for (const StepRecord& r : traces[i].steps) {
      out << i << ',' << CsvRow(r) << '\n';
    }
  }
}

void WriteTracesJsonl(std::ostream& out,
                      const std::vector<SessionTrace>& traces) {
  for (size_t i = 0; i < traces.size(); ++i) {
    for (const StepRecord& r : traces[i].steps) {
      const nlohmann::json line = {
          {"session", i},
          {"time", r.time},
          {"flag", std::string(FlagName(r.flag))},
          {"request", std::string(SourceName(r.request))},
          {"query", std::string(QueryName(r.query))},
          {"answer_len", r.answer_length}};
      out << line.dump() << '\n';
    }
  }
}

void WriteRateCurveCsv(std::ostream& out, const RateCurve& curve) {
  out << "t,rate,regime\n";
  for (const RatePoint& p : curve.points) {
    out << absl::StrFormat("%d,%.17g,%s\n", p.t, p.rate, p.regime);
  }
}

nlohmann::json LeakageReportToJson(const HistoryDistribution& dist,
                                   const LeakageReport& report,
                                   absl::string_view policy_name) {
  nlohmann::json mode = nlohmann::json::array();
  for (int t = 0; t < dist.horizon; ++t) {
    mode.push_back(dist.mode.At(t) == Flag::kOn ? "Y" : "N");
  }
  nlohmann::json per_t = nlohmann::json::object();
  nlohmann::json decomposition = nlohmann::json::object();
  nlohmann::json rates = nlohmann::json::object();
  for (const LeakageTerms& terms : report.per_t) {
    const std::string key = absl::StrCat(terms.t);
    per_t[key] = terms.full;
    decomposition[key] = {{"reference", terms.reference_term},
                          {"remainder", terms.remainder_term}};
    if (auto rate = OracleRate(dist, static_cast<int>(terms.t)); rate.ok()) {
      rates[key] = *rate;
    }
  }
  return {{"model",
           {{"alpha", dist.model.alpha()}, {"beta", dist.model.beta()}}},
          {"mode", mode},
          {"policy", std::string(policy_name)},
          {"per_t", per_t},
          {"decomposition", decomposition},
          {"rates", rates},
          {"max_leakage", report.max_leakage},
          {"passed", report.passed()}};
}

}  // namespace onoff
