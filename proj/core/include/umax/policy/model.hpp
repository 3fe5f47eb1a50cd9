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

#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "umax/util/time.hpp"

namespace umax::policy {

// The usage-control profile: four actions, three target matchers, three
// party matchers, two constraint kinds. Actions map 1:1 onto RS scopes.
enum class Action { Read, Append, Write, Delete };

std::string_view action_name(Action a);
std::optional<Action> action_from_name(std::string_view name);

// -- target matchers ---------------------------------------------------------

struct MatchResource {
  std::string resource;
  bool operator==(const MatchResource&) const = default;
};
struct MatchResourceType {
  std::string resource_type;
  bool operator==(const MatchResourceType&) const = default;
};
struct MatchResourcePrefix {
  std::string resource_prefix;  // ends with "/"
  bool operator==(const MatchResourcePrefix&) const = default;
};
using TargetMatcher = std::variant<MatchResource, MatchResourceType, MatchResourcePrefix>;

// -- party matchers -----------------------------------------------------------

struct MatchAnyone {
  bool operator==(const MatchAnyone&) const = default;
};
struct MatchWebId {
  std::string webid;
  bool operator==(const MatchWebId&) const = default;
};
struct MatchClaim {
  std::string claim_type;
  std::string expected_value;
  std::vector<std::string> accepted_formats;  // format URIs, non-empty
  std::string trusted_issuer;
  bool operator==(const MatchClaim&) const = default;
};
using PartyMatcher = std::variant<MatchAnyone, MatchWebId, MatchClaim>;

// -- constraints --------------------------------------------------------------

struct TimeWindow {
  Instant not_before;
  Instant not_after;  // exclusive; not_before < not_after
  bool operator==(const TimeWindow&) const = default;
};
struct PurposeConstraint {
  std::string purpose;
  bool operator==(const PurposeConstraint&) const = default;
};
using Constraint = std::variant<TimeWindow, PurposeConstraint>;

struct Rule {
  TargetMatcher target;
  Action action;
  PartyMatcher assignee;
  std::vector<Constraint> constraints;  // empty = unconditional
  bool operator==(const Rule&) const = default;
};

struct PolicyDocument {
  std::string uid;  // absolute IRI
  std::vector<Rule> permissions;
  std::vector<Rule> prohibitions;
  bool operator==(const PolicyDocument&) const = default;
};

struct AccessRequest {
  std::string resource_id;  // absolute IRI
  std::optional<std::string> resource_type;
  Action action;
  std::optional<std::string> purpose;
};

// Authentication material after verification, normalized for matching.
struct VerifiedClaim {
  std::string claim_type;
  std::string value;
  std::string issuer;
  std::string format;
  bool operator==(const VerifiedClaim&) const = default;
};

// A satisfied constraint of a granting rule, returned with the grant.
struct UsageRequirement {
  Constraint detail;
  bool operator==(const UsageRequirement&) const = default;
};

// What the requesting party still has to prove. claim_type is the
// "<type>:<value>" descriptor disclosed to clients.
struct ClaimRequirement {
  std::string claim_type;
  std::vector<std::string> accepted_formats;
  std::optional<std::string> hint;
  bool operator==(const ClaimRequirement&) const = default;
};

// -- decisions ----------------------------------------------------------------

struct Grant {
  Action granted_action;
  std::vector<UsageRequirement> usage_requirements;
  bool operator==(const Grant&) const = default;
};

enum class DenyReason { NoMatchingRule, Prohibited, ConstraintFailed };
std::string_view deny_reason_name(DenyReason r);

struct Deny {
  DenyReason reason;
  bool operator==(const Deny&) const = default;
};

struct NeedClaims {
  std::vector<ClaimRequirement> required;  // non-empty
  bool operator==(const NeedClaims&) const = default;
};

using Decision = std::variant<Grant, Deny, NeedClaims>;

}  // namespace umax::policy
