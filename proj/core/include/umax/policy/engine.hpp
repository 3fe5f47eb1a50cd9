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

#include <vector>

#include "umax/policy/model.hpp"

namespace umax::policy {

/**
 * Pure decision core.
 *
 * Resolution is order-independent over the policy set and fail-closed:
 *   1. collect permission and prohibition rules matching target + action;
 *   2. any applicable prohibition (assignee matches, constraints hold at
 *      `now`) -> Deny(prohibited);
 *   3. any applicable permission -> Grant carrying one usage requirement per
 *      satisfied constraint of every granting rule (deduplicated);
 *   4. permissions that fail only on an unmet claim matcher (constraints
 *      hold) -> NeedClaims listing each unmet requirement;
 *   5. otherwise Deny: no-matching-rule when nothing matched target+action,
 *      constraint-failed when something matched but could not be satisfied.
 *
 * `now` is always the caller's clock; this function never reads time itself.
 */
Decision evaluate(const AccessRequest& request, const std::vector<VerifiedClaim>& claims,
                  const std::vector<PolicyDocument>& policies, Instant now);

// True iff an anonymous request (no claims, no purpose) would be granted.
bool is_public(const std::string& resource_id, const std::optional<std::string>& resource_type,
               Action action, const std::vector<PolicyDocument>& policies, Instant now);

// Building blocks, exposed for tests.
bool target_matches(const TargetMatcher& target, const AccessRequest& request);
bool assignee_matches(const PartyMatcher& assignee, const std::vector<VerifiedClaim>& claims);
bool constraint_holds(const Constraint& constraint, const AccessRequest& request, Instant now);

}  // namespace umax::policy
