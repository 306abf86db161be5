// Copyright 2026 The CGoT Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cgot/types.hpp"

#include "cgot/error.hpp"
#include "cgot/text.hpp"

namespace cgot {

std::string_view to_string(Mode mode) {
  return mode == Mode::GoT ? "got" : "cgot";
}

std::optional<Mode> parse_mode(std::string_view text) {
  const std::string lowered = to_lower(text);
  if (lowered == "got") return Mode::GoT;
  if (lowered == "cgot") return Mode::CGoT;
  return std::nullopt;
}

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::UnknownNode: return "UnknownNode";
    case ErrorCode::NotColocated: return "NotColocated";
    case ErrorCode::AlreadyCombined: return "AlreadyCombined";
    case ErrorCode::UnknownComposite: return "UnknownComposite";
    case ErrorCode::BackendUnavailable: return "BackendUnavailable";
    case ErrorCode::EventRejected: return "EventRejected";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::IncomparableRuns: return "IncomparableRuns";
  }
  return "Unknown";
}

}  // namespace cgot
