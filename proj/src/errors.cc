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

#include "onoff/errors.h"

#include <array>
#include <string>

#include "absl/strings/cord.h"
#include "absl/strings/str_cat.h"

namespace onoff {
namespace {

constexpr absl::string_view kPayloadUrl = "type.onoff/ErrorKind";

constexpr std::array<ErrorKind, 5> kAllKinds = {
    ErrorKind::kNonErgodic, ErrorKind::kInconsistentHistory,
    ErrorKind::kDecodabilityViolation, ErrorKind::kOutOfRange,
    ErrorKind::kHorizonTooLarge};

absl::StatusCode CodeFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kNonErgodic:
      return absl::StatusCode::kFailedPrecondition;
    case ErrorKind::kInconsistentHistory:
    case ErrorKind::kHorizonTooLarge:
      return absl::StatusCode::kInvalidArgument;
    case ErrorKind::kDecodabilityViolation:
      return absl::StatusCode::kInternal;
    case ErrorKind::kOutOfRange:
      return absl::StatusCode::kOutOfRange;
  }
  return absl::StatusCode::kUnknown;
}

}  // namespace

absl::string_view ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kNonErgodic:
      return "NonErgodic";
    case ErrorKind::kInconsistentHistory:
      return "InconsistentHistory";
    case ErrorKind::kDecodabilityViolation:
      return "DecodabilityViolation";
    case ErrorKind::kOutOfRange:
      return "OutOfRange";
    case ErrorKind::kHorizonTooLarge:
      return "HorizonTooLarge";
  }
  return "Unknown";
}

absl::Status MakeError(ErrorKind kind, absl::string_view message) {
  absl::Status status(CodeFor(kind),
                      absl::StrCat(ErrorKindName(kind), ": ", message));
  status.SetPayload(kPayloadUrl, absl::Cord(ErrorKindName(kind)));
  return status;
}

std::optional<ErrorKind> GetErrorKind(const absl::Status& status) {
  auto payload = status.GetPayload(kPayloadUrl);
  if (!payload.has_value()) return std::nullopt;
  const std::string name(*payload);
  for (ErrorKind kind : kAllKinds) {
    if (name == ErrorKindName(kind)) return kind;
  }
  return std::nullopt;
}

}  // namespace onoff
