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

#ifndef ONOFF_ERRORS_H_
#define ONOFF_ERRORS_H_

#include <optional>

#include "absl/strings/string_view.h"
#include "absl/status/status.h"

namespace onoff {

// Domain failure kinds. Each is carried as a payload on an absl::Status whose
// canonical code matches the kind's nature.
enum class ErrorKind {
  kNonErgodic,             // FailedPrecondition
  kInconsistentHistory,    // InvalidArgument
  kDecodabilityViolation,  // Internal
  kOutOfRange,             // OutOfRange
  kHorizonTooLarge,        // InvalidArgument
};

absl::string_view ErrorKindName(ErrorKind kind);

absl::Status MakeError(ErrorKind kind, absl::string_view message);

std::optional<ErrorKind> GetErrorKind(const absl::Status& status);

inline bool HasErrorKind(const absl::Status& status, ErrorKind kind) {
  return GetErrorKind(status) == kind;
}

}  // namespace onoff

#endif  // ONOFF_ERRORS_H_
