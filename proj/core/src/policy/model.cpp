// Copyright 2026 the umax authors.
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

#include "umax/policy/model.hpp"

namespace umax::policy {

std::string_view action_name(Action a) {
  switch (a) {
    case Action::Read: return "read";
    case Action::Append: return "append";
    case Action::Write: return "write";
    case Action::Delete: return "delete";
  }
  return "read";
}

std::optional<Action> action_from_name(std::string_view name) {
  if (name == "read") return Action::Read;
  if (name == "append") return Action::Append;
  if (name == "write") return Action::Write;
  if (name == "delete") return Action::Delete;
  return std::nullopt;
}

std::string_view deny_reason_name(DenyReason r) {
  switch (r) {
    case DenyReason::NoMatchingRule: return "no-matching-rule";
    case DenyReason::Prohibited: return "prohibited";
    case DenyReason::ConstraintFailed: return "constraint-failed";
  }
  return "no-matching-rule";
}

}  // namespace umax::policy
