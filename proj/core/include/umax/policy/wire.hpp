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

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

#include "umax/policy/model.hpp"

namespace umax::policy {

// profile-json: one document per file, top-level keys uid / permission /
// prohibition only. The profile is closed; unknown keys are rejected.
//
// Throws Error with malformed_document, unknown_action, invalid_matcher or
// invalid_window.
PolicyDocument parse_policy(const std::string& document);
PolicyDocument parse_policy(const nlohmann::json& document);

nlohmann::json policy_to_json(const PolicyDocument& policy);

// Loads every *.policy.json in the directory, sorted by filename.
std::vector<PolicyDocument> load_policy_dir(const std::filesystem::path& dir);

// Wire forms shared with the AS responses.
nlohmann::json constraint_to_json(const Constraint& constraint);
Constraint constraint_from_json(const nlohmann::json& value);

nlohmann::json usage_requirement_to_json(const UsageRequirement& requirement);
UsageRequirement usage_requirement_from_json(const nlohmann::json& value);

nlohmann::json claim_requirement_to_json(const ClaimRequirement& requirement);
ClaimRequirement claim_requirement_from_json(const nlohmann::json& value);

}  // namespace umax::policy
