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

#include "umax/client/client.hpp"

#include <algorithm>
#include <fstream>

#include "umax/http/url.hpp"
#include "umax/security/access_token.hpp"
#include "umax/util/error.hpp"
#include "umax/util/log.hpp"

namespace umax::client {

using nlohmann::json;

namespace {
constexpr const char* kGrantType = "urn:ietf:params:oauth:grant-type:uma-ticket";

std::vector<GrantedPermission> permissions_from_json(const json& value) {
  std::vector<GrantedPermission> out;
  for (const auto& entry : value) {
    out.push_back(GrantedPermission{entry.at("resource_id").get<std::string>(),
                                    entry.at("resource_scopes").get<std::vector<std::string>>()});
  }
  return out;
}

json permissions_to_json(const std::vector<GrantedPermission>& permissions) {
  json out = json::array();
  for (const auto& p : permissions) {
    out.push_back({{"resource_id", p.resource_id}, {"resource_scopes", p.scopes}});
  }
  return out;
}

std::vector<RequiredClaim> required_from_json(const json& value) {
  std::vector<RequiredClaim> out;
  for (const auto& entry : value) {
    RequiredClaim claim;
    claim.claim_type = entry.value("claim_type", "");
    if (entry.contains("claim_token_format")) {
      claim.formats = entry.at("claim_token_format").get<std::vector<std::string>>();
    }
    if (entry.contains("name")) {
      claim.name = entry.at("name").get<std::string>();
    }
    out.push_back(std::move(claim));
  }
  return out;
}
}  // namespace

std::string_view outcome_name(Outcome outcome) {
  switch (outcome) {
    case Outcome::Ok: return "ok";
    case Outcome::Denied: return "authorization-denied";
    case Outcome::ClaimsUnavailable: return "claims-unavailable";
    case Outcome::RoundsExhausted: return "rounds-exhausted";
    case Outcome::AsUnreachable: return "as-unreachable";
    case Outcome::ChallengeMalformed: return "challenge-malformed";
    case Outcome::ProtocolError: return "protocol-error";
  }
  return "protocol-error";
}

ClaimsProvider no_claims() {
  return [](const std::vector<RequiredClaim>&) { return std::vector<PushableClaim>{}; };
}

ClaimsProvider on_demand_claims(std::vector<PushableClaim> tokens) {
  return [tokens = std::move(tokens)](const std::vector<RequiredClaim>& required) {
    std::vector<PushableClaim> out;
    if (required.empty()) {
      return out;  // nothing demanded yet
    }
    for (const auto& token : tokens) {
      bool wanted = std::any_of(required.begin(), required.end(), [&](const RequiredClaim& r) {
        return r.formats.empty() ||
               std::find(r.formats.begin(), r.formats.end(), token.format) != r.formats.end();
      });
      if (wanted) {
        out.push_back(token);
      }
    }
    return out;
  };
}

ClaimsProvider eager_claims(std::vector<PushableClaim> tokens) {
  return [tokens = std::move(tokens)](const std::vector<RequiredClaim>&) { return tokens; };
}

nlohmann::json AuditRecord::to_json() const {
  return {{"obtained_at", format_rfc3339(obtained_at)},
          {"as_issuer", as_issuer},
          {"rs_origin", rs_origin},
          {"access_token", access_token},
          {"permissions", permissions_to_json(permissions)},
          {"usage_requirements", usage_requirements},
          {"ticket_trail", ticket_trail}};
}

AuditRecord AuditRecord::from_json(const nlohmann::json& value) {
  try {
    AuditRecord record;
    record.obtained_at = parse_rfc3339(value.at("obtained_at").get<std::string>());
    record.as_issuer = value.at("as_issuer").get<std::string>();
    record.rs_origin = value.at("rs_origin").get<std::string>();
    record.access_token = value.at("access_token").get<std::string>();
    record.permissions = permissions_from_json(value.at("permissions"));
    record.usage_requirements = value.at("usage_requirements");
    record.ticket_trail = value.at("ticket_trail").get<std::vector<std::string>>();
    return record;
  } catch (const std::exception& e) {
    throw Error(Errc::malformed_record, e.what());
  }
}

AuditStore::AuditStore(std::filesystem::path dir, std::string identity)
    : dir_(std::move(dir)), identity_(std::move(identity)) {}

std::filesystem::path AuditStore::file() const {
  return dir_ / (identity_ + ".audit.jsonl");
}

void AuditStore::append(const AuditRecord& record) {
  std::filesystem::create_directories(dir_);
  std::ofstream out(file(), std::ios::app);
  if (!out) {
    throw Error(Errc::io_error, "cannot append to " + file().string());
  }
  out << record.to_json().dump() << "\n";
  out.flush();
}

std::vector<AuditRecord> AuditStore::list() const {
  std::vector<AuditRecord> records;
  std::ifstream in(file());
  if (!in) {
    return records;
  }
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) {
      continue;
    }
    json parsed = json::parse(line, nullptr, false);
    if (parsed.is_discarded()) {
      throw Error(Errc::malformed_record, "unparseable audit line");
    }
    records.push_back(AuditRecord::from_json(parsed));
  }
  return records;
}

AuditVerification verify_audit(const AuditRecord& record,
                               const security::KeySetDocument& as_keys) {
  AuditVerification report;
  security::AccessTokenClaims claims;
  try {
    claims = security::verify_token_signature(record.access_token, as_keys);
  } catch (const Error& e) {
    if (e.code() == Errc::bad_signature) {
      report.signature_valid = false;
      return report;
    }
    throw Error(Errc::malformed_record, e.detail());
  }
  report.signature_valid = true;
  report.issued_at = claims.issued_at;
  report.expires_at = claims.expires_at;
  json embedded_permissions = json::array();
  for (const auto& p : claims.permissions) {
    embedded_permissions.push_back({{"resource_id", p.resource_id}, {"resource_scopes", p.scopes}});
  }
  report.permissions = embedded_permissions;
  report.usage_requirements = claims.usage;
  report.consistent = embedded_permissions == permissions_to_json(record.permissions) &&
                      claims.usage == record.usage_requirements;
  return report;
}

Client::Client(ClientConfig config, ClockRef clock, http::AgentRef agent)
    : config_(std::move(config)), clock_(std::move(clock)), agent_(std::move(agent)) {}

std::optional<Client::Challenge> Client::parse_challenge(const http::Response& response) {
  std::string header = response.header("WWW-Authenticate");
  if (header.rfind("UMA ", 0) != 0) {
    return std::nullopt;
  }
  auto find_param = [&](const std::string& name) -> std::optional<std::string> {
    std::string needle = name + "=\"";
    auto pos = header.find(needle);
    if (pos == std::string::npos) {
      return std::nullopt;
    }
    pos += needle.size();
    auto end = header.find('"', pos);
    if (end == std::string::npos) {
      return std::nullopt;
    }
    return header.substr(pos, end - pos);
  };
  auto as_uri = find_param("as_uri");
  if (!as_uri) {
    return std::nullopt;
  }
  return Challenge{*as_uri, find_param("ticket")};
}

std::string Client::token_endpoint(const std::string& as_uri) {
  if (auto it = discovery_cache_.find(as_uri); it != discovery_cache_.end()) {
    return it->second;
  }
  auto response =
      agent_->send({"GET", as_uri + "/.well-known/uma2-configuration", {}, "", ""});
  if (response.status != 200) {
    throw Error(Errc::as_unreachable, "no discovery document at " + as_uri);
  }
  json doc = json::parse(response.body, nullptr, false);
  if (doc.is_discarded() || !doc.contains("token_endpoint")) {
    throw Error(Errc::as_unreachable, "malformed discovery document");
  }
  std::string endpoint = doc.at("token_endpoint").get<std::string>();
  discovery_cache_[as_uri] = endpoint;
  return endpoint;
}

void Client::persist(const AuditRecord& record) {
  if (config_.audit_dir) {
    AuditStore(*config_.audit_dir, config_.audit_identity).append(record);
  }
}

AccessResult Client::negotiate(const std::string& as_uri, const std::string& first_ticket,
                               const ClaimsProvider& provider, const std::string& rs_origin) {
  std::string endpoint;
  try {
    endpoint = token_endpoint(as_uri);
  } catch (const Error& e) {
    return {Outcome::AsUnreachable, {}, std::nullopt, e.detail()};
  }

  std::vector<PushableClaim> sent;
  for (const auto& token : provider({})) {
    if (std::find(sent.begin(), sent.end(), token) == sent.end()) {
      sent.push_back(token);
    }
  }

  std::string ticket = first_ticket;
  std::vector<std::string> trail{ticket};
  int need_info_seen = 0;

  while (true) {
    http::FormFields fields{{"grant_type", kGrantType}, {"ticket", ticket}};
    for (const auto& token : sent) {
      fields.emplace_back("claim_token", token.raw);
      fields.emplace_back("claim_token_format", token.format);
    }
    auto response = agent_->send(
        {"POST", endpoint, {}, http::form_encode(fields), "application/x-www-form-urlencoded"});
    if (response.transport_failed()) {
      return {Outcome::AsUnreachable, response, std::nullopt, response.transport_error};
    }

    json body = json::parse(response.body, nullptr, false);
    if (response.status == 200 && !body.is_discarded()) {
      AuditRecord record;
      record.obtained_at = clock_->now();
      record.as_issuer = as_uri;
      record.rs_origin = rs_origin;
      record.access_token = body.at("access_token").get<std::string>();
      record.permissions = permissions_from_json(body.value("permissions", json::array()));
      record.usage_requirements = body.value("usage_requirements", json::array());
      record.ticket_trail = trail;
      persist(record);
      return {Outcome::Ok, response, record, ""};
    }
    if (body.is_discarded() || !body.contains("error")) {
      return {Outcome::ProtocolError, response, std::nullopt, "unparseable token response"};
    }
    std::string error = body.at("error").get<std::string>();

    if (error == "need_info") {
      ++need_info_seen;
      if (!body.contains("ticket")) {
        return {Outcome::ProtocolError, response, std::nullopt, "need_info without a ticket"};
      }
      ticket = body.at("ticket").get<std::string>();
      trail.push_back(ticket);
      if (need_info_seen >= config_.max_rounds) {
        return {Outcome::RoundsExhausted, response, std::nullopt,
                "negotiation still incomplete after " + std::to_string(need_info_seen) +
                    " rounds"};
      }
      auto offered = provider(required_from_json(body.value("required_claims", json::array())));
      // Progress requires strictly more claim tokens than last round;
      // identical inputs are never re-sent.
      std::size_t before = sent.size();
      for (const auto& token : offered) {
        if (std::find(sent.begin(), sent.end(), token) == sent.end()) {
          sent.push_back(token);
        }
      }
      if (sent.size() == before) {
        return {Outcome::ClaimsUnavailable, response, std::nullopt,
                "provider could not satisfy the requested claims"};
      }
      continue;
    }
    if (error == "request_denied") {
      return {Outcome::Denied, response, std::nullopt, "request_denied"};
    }
    if (error == "too_many_rounds") {
      return {Outcome::RoundsExhausted, response, std::nullopt, "too_many_rounds"};
    }
    return {Outcome::ProtocolError, response, std::nullopt, error};
  }
}

AccessResult Client::access(const std::string& url, const std::string& method,
                            const std::string& body, const std::string& content_type,
                            const ClaimsProvider& provider,
                            const std::vector<std::pair<std::string, std::string>>& headers) {
  auto bare = agent_->send({method, url, headers, body, content_type});
  if (bare.transport_failed()) {
    return {Outcome::ProtocolError, bare, std::nullopt, bare.transport_error};
  }
  if (bare.status != 401) {
    // Public path (or any direct outcome): no negotiation, no audit record.
    return {Outcome::Ok, bare, std::nullopt, ""};
  }
  auto challenge = parse_challenge(bare);
  if (!challenge) {
    return {Outcome::ChallengeMalformed, bare, std::nullopt, "no UMA challenge on 401"};
  }
  if (!challenge->ticket) {
    return {Outcome::ChallengeMalformed, bare, std::nullopt, "challenge carried no ticket"};
  }

  std::string rs_origin = http::Url::parse(url).origin;
  AccessResult negotiated = negotiate(challenge->as_uri, *challenge->ticket, provider, rs_origin);
  if (negotiated.outcome != Outcome::Ok) {
    return negotiated;
  }

  auto with_token = headers;
  with_token.emplace_back("Authorization", "Bearer " + negotiated.record->access_token);
  auto final_response = agent_->send({method, url, with_token, body, content_type});
  return {Outcome::Ok, final_response, negotiated.record, ""};
}

AccessResult Client::request_direct(const std::string& as_uri, const nlohmann::json& descriptors,
                                    const std::vector<PushableClaim>& tokens) {
  std::string endpoint;
  try {
    endpoint = token_endpoint(as_uri);
  } catch (const Error& e) {
    return {Outcome::AsUnreachable, {}, std::nullopt, e.detail()};
  }
  http::FormFields fields{{"grant_type", kGrantType}, {"permissions", descriptors.dump()}};
  for (const auto& token : tokens) {
    fields.emplace_back("claim_token", token.raw);
    fields.emplace_back("claim_token_format", token.format);
  }
  auto response = agent_->send(
      {"POST", endpoint, {}, http::form_encode(fields), "application/x-www-form-urlencoded"});
  if (response.transport_failed()) {
    return {Outcome::AsUnreachable, response, std::nullopt, response.transport_error};
  }
  json body = json::parse(response.body, nullptr, false);
  if (response.status == 200 && !body.is_discarded()) {
    AuditRecord record;
    record.obtained_at = clock_->now();
    record.as_issuer = as_uri;
    record.access_token = body.at("access_token").get<std::string>();
    record.permissions = permissions_from_json(body.value("permissions", json::array()));
    record.usage_requirements = body.value("usage_requirements", json::array());
    if (!record.permissions.empty()) {
      record.rs_origin = http::Url::parse(record.permissions.front().resource_id).origin;
    }
    persist(record);
    return {Outcome::Ok, response, record, ""};
  }
  std::string error =
      body.is_discarded() ? "unparseable token response" : body.value("error", "unknown");
  if (error == "request_denied" || error == "need_info") {
    return {Outcome::Denied, response, std::nullopt, error};
  }
  if (error == "too_many_rounds") {
    return {Outcome::RoundsExhausted, response, std::nullopt, error};
  }
  return {Outcome::ProtocolError, response, std::nullopt, error};
}

}  // namespace umax::client
