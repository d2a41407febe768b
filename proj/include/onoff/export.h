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

#ifndef ONOFF_EXPORT_H_
#define ONOFF_EXPORT_H_

#include <ostream>
#include <vector>

#include "absl/strings/string_view.h"
#include "json.hpp"
#include "onoff/analysis.h"
#include "onoff/audit.h"
#include "onoff/policy.h"
#include "onoff/server_sim.h"

namespace onoff {

// {"alpha", "beta", "offset_parity": "even"|"odd"|"lt1"|"indep",
//  "rows": {"A,A": {"A", "B", "AB"}, ...}}
nlohmann::json PolicyTableToJson(const PolicyTable& table);

// Header `time,flag,request,query,answer_len`.
void WriteTraceCsv(std::ostream& out, const SessionTrace& trace);

// Same columns prefixed by a `session` index.
void WriteTracesCsv(std::ostream& out, const std::vector<SessionTrace>& traces);

// One JSON object per step, keyed like the CSV columns plus "session".
void WriteTracesJsonl(std::ostream& out,
                      const std::vector<SessionTrace>& traces);

// Header `t,rate,regime`.
void WriteRateCurveCsv(std::ostream& out, const RateCurve& curve);

// {"model": {"alpha", "beta"}, "mode": ["Y"|"N", ...], "policy",
//  "per_t": {"<t>": bits}, "decomposition": {"<t>": {"reference",
//  "remainder"}}, "rates": {"<t>": oracle rate}, "max_leakage", "passed"}
nlohmann::json LeakageReportToJson(const HistoryDistribution& dist,
                                   const LeakageReport& report,
                                   absl::string_view policy_name);

}  // namespace onoff

#endif  // ONOFF_EXPORT_H_
