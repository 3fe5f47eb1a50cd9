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

#include "umax/policy/engine.hpp"

#include <algorithm>

namespace umax::policy {

bool target_matches(const TargetMatcher& target, const AccessRequest& request) {
  return std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, MatchResource>) {
          return request.resource_id == m.resource;
        } else if constexpr (std::is_same_v<T, MatchResourceType>) {
          return request.resource_type.has_value() && *request.resource_type == m.resource_type;
        } else {
          return request.resource_id.starts_with(m.resource_prefix);
        }
      },
      target);
}

bool assignee_matches(const PartyMatcher& assignee, const std::vector<VerifiedClaim>& claims) {
  return std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, MatchAnyone>) {
          return true;
        } else if constexpr (std::is_same_v<T, MatchWebId>) {
          return std::any_of(claims.begin(), claims.end(), [&](const VerifiedClaim& c) {
            return c.claim_type == "webid" && c.value == m.webid;
          });
        } else {
          return std::any_of(claims.begin(), claims.end(), [&](const VerifiedClaim& c) {
            return c.claim_type == m.claim_type && c.value == m.expected_value &&
                   c.issuer == m.trusted_issuer &&
                   std::find(m.accepted_formats.begin(), m.accepted_formats.end(), c.format) !=
                       m.accepted_formats.end();
          });
        }
      },
      assignee);
}

bool constraint_holds(const Constraint& constraint, const AccessRequest& request, Instant now) {
  return std::visit(
      [&](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, TimeWindow>) {
          return c.not_before <= now && now < c.not_after;
        } else {
          return request.purpose.has_value() && *request.purpose == c.purpose;
        }
      },
      constraint);
}

namespace {
bool constraints_hold(const Rule& rule, const AccessRequest& request, Instant now) {
  return std::all_of(rule.constraints.begin(), rule.constraints.end(),
                     [&](const Constraint& c) { return constraint_holds(c, request, now); });
}

template <typename T>
void push_unique(std::vector<T>& out, const T& value) {
  if (std::find(out.begin(), out.end(), value) == out.end()) {
    out.push_back(value);
  }
}

ClaimRequirement requirement_for(const MatchClaim& matcher) {
  return ClaimRequirement{matcher.claim_type + ":" + matcher.expected_value,
                          matcher.accepted_formats, std::nullopt};
}
}  // namespace

Decision evaluate(const AccessRequest& request, const std::vector<VerifiedClaim>& claims,
                  const std::vector<PolicyDocument>& policies, Instant now) {
  std::vector<const Rule*> matched_permissions;
  std::vector<const Rule*> matched_prohibitions;
  for (const PolicyDocument& policy : policies) {
    for (const Rule& rule : policy.permissions) {
      if (rule.action == request.action && target_matches(rule.target, request)) {
        matched_permissions.push_back(&rule);
      }
    }
    for (const Rule& rule : policy.prohibitions) {
      if (rule.action == request.action && target_matches(rule.target, request)) {
        matched_prohibitions.push_back(&rule);
      }
    }
  }

  for (const Rule* rule : matched_prohibitions) {
    if (assignee_matches(rule->assignee, claims) && constraints_hold(*rule, request, now)) {
      return Deny{DenyReason::Prohibited};
    }
  }

  std::vector<UsageRequirement> usage;
  bool granted = false;
  for (const Rule* rule : matched_permissions) {
    if (assignee_matches(rule->assignee, claims) && constraints_hold(*rule, request, now)) {
      granted = true;
      for (const Constraint& c : rule->constraints) {
        push_unique(usage, UsageRequirement{c});
      }
    }
  }
  if (granted) {
    return Grant{request.action, std::move(usage)};
  }

  // NeedClaims only when pushing claims could still repair the rule: the
  // assignee is a claim matcher and every present constraint already holds.
  std::vector<ClaimRequirement> required;
  for (const Rule* rule : matched_permissions) {
    if (const auto* matcher = std::get_if<MatchClaim>(&rule->assignee)) {
      if (constraints_hold(*rule, request, now)) {
        push_unique(required, requirement_for(*matcher));
      }
    }
  }
  if (!required.empty()) {
    return NeedClaims{std::move(required)};
  }

  if (matched_permissions.empty() && matched_prohibitions.empty()) {
    return Deny{DenyReason::NoMatchingRule};
  }
  return Deny{DenyReason::ConstraintFailed};
}

bool is_public(const std::string& resource_id, const std::optional<std::string>& resource_type,
               Action action, const std::vector<PolicyDocument>& policies, Instant now) {
  AccessRequest request{resource_id, resource_type, action, std::nullopt};
  return std::holds_alternative<Grant>(evaluate(request, {}, policies, now));
}

}  // namespace umax::policy
