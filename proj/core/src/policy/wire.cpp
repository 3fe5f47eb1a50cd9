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

#include "umax/policy/wire.hpp"

#include <algorithm>
#include <fstream>

#include "umax/http/url.hpp"
#include "umax/util/error.hpp"

namespace umax::policy {

namespace {
using nlohmann::json;

[[noreturn]] void malformed(const std::string& why) {
  throw Error(Errc::malformed_document, why);
}

void require_keys(const json& object, std::initializer_list<const char*> allowed,
                  const std::string& where) {
  for (const auto& [key, value] : object.items()) {
    if (std::find_if(allowed.begin(), allowed.end(),
                     [&](const char* k) { return key == k; }) == allowed.end()) {
      malformed("unknown key '" + key + "' in " + where);
    }
  }
}

std::string require_string(const json& object, const char* key, const std::string& where) {
  if (!object.contains(key) || !object.at(key).is_string() ||
      object.at(key).get<std::string>().empty()) {
    malformed(where + " requires non-empty string '" + std::string(key) + "'");
  }
  return object.at(key).get<std::string>();
}

TargetMatcher parse_target(const json& value) {
  if (!value.is_object()) {
    throw Error(Errc::invalid_matcher, "target must be an object");
  }
  require_keys(value, {"resource", "resourceType", "resourcePrefix"}, "target");
  if (value.size() != 1) {
    throw Error(Errc::invalid_matcher, "target must carry exactly one matcher variant");
  }
  if (value.contains("resource")) {
    return MatchResource{require_string(value, "resource", "target")};
  }
  if (value.contains("resourceType")) {
    return MatchResourceType{require_string(value, "resourceType", "target")};
  }
  std::string prefix = require_string(value, "resourcePrefix", "target");
  if (!prefix.ends_with("/")) {
    throw Error(Errc::invalid_matcher, "resourcePrefix must end with '/'");
  }
  return MatchResourcePrefix{prefix};
}

PartyMatcher parse_assignee(const json& value) {
  if (!value.is_object()) {
    throw Error(Errc::invalid_matcher, "assignee must be an object");
  }
  require_keys(value, {"anyone", "webid", "claim"}, "assignee");
  if (value.size() != 1) {
    throw Error(Errc::invalid_matcher, "assignee must carry exactly one matcher variant");
  }
  if (value.contains("anyone")) {
    if (!value.at("anyone").is_boolean() || !value.at("anyone").get<bool>()) {
      throw Error(Errc::invalid_matcher, "assignee.anyone must be true");
    }
    return MatchAnyone{};
  }
  if (value.contains("webid")) {
    return MatchWebId{require_string(value, "webid", "assignee")};
  }
  const json& claim = value.at("claim");
  if (!claim.is_object()) {
    throw Error(Errc::invalid_matcher, "assignee.claim must be an object");
  }
  require_keys(claim, {"type", "value", "formats", "issuer"}, "assignee.claim");
  MatchClaim m;
  m.claim_type = require_string(claim, "type", "assignee.claim");
  m.expected_value = require_string(claim, "value", "assignee.claim");
  m.trusted_issuer = require_string(claim, "issuer", "assignee.claim");
  if (!claim.contains("formats") || !claim.at("formats").is_array() ||
      claim.at("formats").empty()) {
    throw Error(Errc::invalid_matcher, "assignee.claim.formats must be a non-empty array");
  }
  for (const auto& f : claim.at("formats")) {
    if (!f.is_string() || f.get<std::string>().empty()) {
      throw Error(Errc::invalid_matcher, "assignee.claim.formats entries must be strings");
    }
    m.accepted_formats.push_back(f.get<std::string>());
  }
  return m;
}

Constraint parse_constraint(const json& value) {
  if (!value.is_object() || value.size() != 1) {
    malformed("constraint entries must carry exactly one of 'window' or 'purpose'");
  }
  require_keys(value, {"window", "purpose"}, "constraint");
  if (value.contains("purpose")) {
    return PurposeConstraint{require_string(value, "purpose", "constraint")};
  }
  const json& window = value.at("window");
  if (!window.is_object()) {
    malformed("constraint.window must be an object");
  }
  require_keys(window, {"notBefore", "notAfter"}, "constraint.window");
  TimeWindow w;
  w.not_before = parse_rfc3339(require_string(window, "notBefore", "constraint.window"));
  w.not_after = parse_rfc3339(require_string(window, "notAfter", "constraint.window"));
  if (!(w.not_before < w.not_after)) {
    throw Error(Errc::invalid_window, "notBefore must precede notAfter");
  }
  return w;
}

Rule parse_rule(const json& value, const std::string& where) {
  if (!value.is_object()) {
    malformed(where + " entries must be objects");
  }
  require_keys(value, {"target", "action", "assignee", "constraint"}, where);
  if (!value.contains("target") || !value.contains("action") || !value.contains("assignee")) {
    malformed(where + " entries require target, action and assignee");
  }
  Rule rule;
  rule.target = parse_target(value.at("target"));
  std::string action = require_string(value, "action", where);
  auto parsed = action_from_name(action);
  if (!parsed) {
    throw Error(Errc::unknown_action, "'" + action + "' is not in the action vocabulary");
  }
  rule.action = *parsed;
  rule.assignee = parse_assignee(value.at("assignee"));
  if (value.contains("constraint")) {
    if (!value.at("constraint").is_array()) {
      malformed(where + ".constraint must be an array");
    }
    for (const auto& c : value.at("constraint")) {
      rule.constraints.push_back(parse_constraint(c));
    }
  }
  return rule;
}
}  // namespace

PolicyDocument parse_policy(const nlohmann::json& document) {
  if (!document.is_object()) {
    malformed("policy document must be a JSON object");
  }
  require_keys(document, {"uid", "permission", "prohibition"}, "policy document");
  PolicyDocument policy;
  policy.uid = require_string(document, "uid", "policy document");
  if (!http::is_absolute_iri(policy.uid)) {
    malformed("uid must be an absolute IRI");
  }
  for (const char* section : {"permission", "prohibition"}) {
    if (!document.contains(section)) {
      continue;
    }
    if (!document.at(section).is_array()) {
      malformed(std::string(section) + " must be an array");
    }
    for (const auto& entry : document.at(section)) {
      Rule rule = parse_rule(entry, section);
      (section == std::string("permission") ? policy.permissions : policy.prohibitions)
          .push_back(std::move(rule));
    }
  }
  if (policy.permissions.empty() && policy.prohibitions.empty()) {
    malformed("policy document carries no rules");
  }
  return policy;
}

PolicyDocument parse_policy(const std::string& document) {
  json parsed = json::parse(document, nullptr, false);
  if (parsed.is_discarded()) {
    malformed("document is not valid JSON");
  }
  return parse_policy(parsed);
}

namespace {
json target_to_json(const TargetMatcher& target) {
  return std::visit(
      [](const auto& m) -> json {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, MatchResource>) {
          return {{"resource", m.resource}};
        } else if constexpr (std::is_same_v<T, MatchResourceType>) {
          return {{"resourceType", m.resource_type}};
        } else {
          return {{"resourcePrefix", m.resource_prefix}};
        }
      },
      target);
}

json assignee_to_json(const PartyMatcher& assignee) {
  return std::visit(
      [](const auto& m) -> json {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, MatchAnyone>) {
          return {{"anyone", true}};
        } else if constexpr (std::is_same_v<T, MatchWebId>) {
          return {{"webid", m.webid}};
        } else {
          return {{"claim",
                   {{"type", m.claim_type},
                    {"value", m.expected_value},
                    {"formats", m.accepted_formats},
                    {"issuer", m.trusted_issuer}}}};
        }
      },
      assignee);
}

json rule_to_json(const Rule& rule) {
  json out = {{"target", target_to_json(rule.target)},
              {"action", std::string(action_name(rule.action))},
              {"assignee", assignee_to_json(rule.assignee)}};
  if (!rule.constraints.empty()) {
    json constraints = json::array();
    for (const auto& c : rule.constraints) {
      constraints.push_back(constraint_to_json(c));
    }
    out["constraint"] = constraints;
  }
  return out;
}
}  // namespace

nlohmann::json policy_to_json(const PolicyDocument& policy) {
  json out = {{"uid", policy.uid}};
  if (!policy.permissions.empty()) {
    json rules = json::array();
    for (const auto& r : policy.permissions) {
      rules.push_back(rule_to_json(r));
    }
    out["permission"] = rules;
  }
  if (!policy.prohibitions.empty()) {
    json rules = json::array();
    for (const auto& r : policy.prohibitions) {
      rules.push_back(rule_to_json(r));
    }
    out["prohibition"] = rules;
  }
  return out;
}

std::vector<PolicyDocument> load_policy_dir(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw Error(Errc::config_error, "policies directory not found: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().filename().string().ends_with(".policy.json")) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<PolicyDocument> policies;
  for (const auto& file : files) {
    std::ifstream in(file);
    if (!in) {
      throw Error(Errc::io_error, "cannot read " + file.string());
    }
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    try {
      policies.push_back(parse_policy(text));
    } catch (const Error& e) {
      throw Error(e.code(), file.filename().string() + ": " + e.detail());
    }
  }
  return policies;
}

nlohmann::json constraint_to_json(const Constraint& constraint) {
  return std::visit(
      [](const auto& c) -> json {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, TimeWindow>) {
          return {{"window",
                   {{"notBefore", format_rfc3339(c.not_before)},
                    {"notAfter", format_rfc3339(c.not_after)}}}};
        } else {
          return {{"purpose", c.purpose}};
        }
      },
      constraint);
}

Constraint constraint_from_json(const nlohmann::json& value) {
  return parse_constraint(value);
}

nlohmann::json usage_requirement_to_json(const UsageRequirement& requirement) {
  const bool temporal = std::holds_alternative<TimeWindow>(requirement.detail);
  return {{"kind", temporal ? "temporal" : "purpose"},
          {"detail", constraint_to_json(requirement.detail)}};
}

UsageRequirement usage_requirement_from_json(const nlohmann::json& value) {
  if (!value.is_object() || !value.contains("kind") || !value.contains("detail")) {
    malformed("usage requirement needs kind and detail");
  }
  UsageRequirement req{constraint_from_json(value.at("detail"))};
  std::string kind = value.at("kind").get<std::string>();
  const bool temporal = std::holds_alternative<TimeWindow>(req.detail);
  if ((temporal && kind != "temporal") || (!temporal && kind != "purpose")) {
    malformed("usage requirement kind does not match its detail");
  }
  return req;
}

nlohmann::json claim_requirement_to_json(const ClaimRequirement& requirement) {
  json out = {{"claim_type", requirement.claim_type},
              {"claim_token_format", requirement.accepted_formats}};
  if (requirement.hint) {
    out["name"] = *requirement.hint;
  }
  return out;
}

ClaimRequirement claim_requirement_from_json(const nlohmann::json& value) {
  ClaimRequirement req;
  req.claim_type = value.at("claim_type").get<std::string>();
  req.accepted_formats = value.at("claim_token_format").get<std::vector<std::string>>();
  if (value.contains("name")) {
    req.hint = value.at("name").get<std::string>();
  }
  return req;
}

}  // namespace umax::policy
