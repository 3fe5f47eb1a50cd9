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
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "umax/http/agent.hpp"
#include "umax/security/keys.hpp"
#include "umax/util/time.hpp"

namespace umax::client {

// Wire-level view of one entry of a need_info response.
struct RequiredClaim {
  std::string claim_type;
  std::vector<std::string> formats;
  std::optional<std::string> name;
};

// A claim token the client can push; the client never inspects its contents.
struct PushableClaim {
  std::string format;
  std::string raw;

  bool operator==(const PushableClaim&) const = default;
};

// Supplies claim tokens during negotiation. Called once with an empty
// requirement list before the first token request, then once per need_info
// with every outstanding requirement. Returning nothing new ends the
// negotiation (claims-unavailable).
using ClaimsProvider =
    std::function<std::vector<PushableClaim>(const std::vector<RequiredClaim>&)>;

ClaimsProvider no_claims();
// Holds tokens back until the AS asks, then pushes every held token whose
// format matches some requirement.
ClaimsProvider on_demand_claims(std::vector<PushableClaim> tokens);
// Pushes every token with the first request.
ClaimsProvider eager_claims(std::vector<PushableClaim> tokens);

struct GrantedPermission {
  std::string resource_id;
  std::vector<std::string> scopes;

  bool operator==(const GrantedPermission&) const = default;
};

// The retained proof of authorization: everything needed to show, later,
// that access was granted and under which usage conditions.
struct AuditRecord {
  Instant obtained_at{};
  std::string as_issuer;
  std::string rs_origin;
  std::string access_token;  // opaque to the client
  std::vector<GrantedPermission> permissions;
  nlohmann::json usage_requirements = nlohmann::json::array();
  std::vector<std::string> ticket_trail;

  nlohmann::json to_json() const;
  static AuditRecord from_json(const nlohmann::json& value);  // throws malformed_record
};

enum class Outcome {
  Ok,                 // final response received (public or authorized)
  Denied,             // AS answered request_denied
  ClaimsUnavailable,  // provider could not add anything new
  RoundsExhausted,    // need_info bound hit
  AsUnreachable,
  ChallengeMalformed,
  ProtocolError,
};

std::string_view outcome_name(Outcome outcome);

struct AccessResult {
  Outcome outcome = Outcome::ProtocolError;
  http::Response response;  // last relevant response
  std::optional<AuditRecord> record;
  std::string detail;
};

// Append-only JSONL store, one file per client identity. Records are never
// rewritten.
class AuditStore {
 public:
  AuditStore(std::filesystem::path dir, std::string identity = "default");

  void append(const AuditRecord& record);
  std::vector<AuditRecord> list() const;
  std::filesystem::path file() const;

 private:
  std::filesystem::path dir_;
  std::string identity_;
};

struct AuditVerification {
  bool signature_valid = false;
  bool consistent = false;  // record copies match the token-embedded ones
  Instant issued_at{};
  Instant expires_at{};
  nlohmann::json permissions = nlohmann::json::array();
  nlohmann::json usage_requirements = nlohmann::json::array();
};

// Historical proof check: the signature is verified against the supplied AS
// key set WITHOUT a current-validity check; an expired token remains valid
// evidence. Throws Error(malformed_record) when the record is unreadable.
AuditVerification verify_audit(const AuditRecord& record,
                               const security::KeySetDocument& as_keys);

struct ClientConfig {
  int max_rounds = 5;
  std::optional<std::filesystem::path> audit_dir;
  std::string audit_identity = "default";
};

// Drives UMA negotiation against RS and AS.
class Client {
 public:
  Client(ClientConfig config, ClockRef clock, http::AgentRef agent);

  // Full flow: bare request, challenge parsing, claim negotiation, bearer
  // retry. Public resources return without any AS traffic or audit record.
  AccessResult access(const std::string& url, const std::string& method = "GET",
                      const std::string& body = "", const std::string& content_type = "",
                      const ClaimsProvider& provider = no_claims(),
                      const std::vector<std::pair<std::string, std::string>>& headers = {});

  // Ticketless shortcut: one token-endpoint call with a permissions
  // descriptor. Descriptors carry resource_id or resource_type,
  // resource_scopes and an optional purpose (JSON, as sent on the wire).
  AccessResult request_direct(const std::string& as_uri, const nlohmann::json& descriptors,
                              const std::vector<PushableClaim>& tokens);

 private:
  struct Challenge {
    std::string as_uri;
    std::optional<std::string> ticket;
  };

  static std::optional<Challenge> parse_challenge(const http::Response& response);
  std::string token_endpoint(const std::string& as_uri);
  AccessResult negotiate(const std::string& as_uri, const std::string& first_ticket,
                         const ClaimsProvider& provider, const std::string& rs_origin);
  void persist(const AuditRecord& record);

  ClientConfig config_;
  ClockRef clock_;
  http::AgentRef agent_;
  std::map<std::string, std::string> discovery_cache_;  // as origin -> token endpoint
};

}  // namespace umax::client
