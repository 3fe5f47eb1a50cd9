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

#include <httplib.h>
#include <json.hpp>

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "umax/as/stores.hpp"
#include "umax/claims/claims.hpp"
#include "umax/http/agent.hpp"
#include "umax/policy/model.hpp"
#include "umax/security/http_signature.hpp"
#include "umax/security/keys.hpp"
#include "umax/util/time.hpp"

namespace umax::as {

inline constexpr const char* kUmaTicketGrantType =
    "urn:ietf:params:oauth:grant-type:uma-ticket";
inline constexpr const char* kDiscoveryPath = "/.well-known/uma2-configuration";
inline constexpr const char* kJwksPath = "/.well-known/jwks.json";
inline constexpr const char* kTokenPath = "/token";
inline constexpr const char* kPermissionPath = "/perm";
inline constexpr const char* kRegistrationPath = "/rreg/";
inline constexpr const char* kIntrospectionPath = "/introspect";

// Where an allowlisted RS's keys come from: inline, or fetched from its
// well-known JWKS URI on first use (and refreshed on key-id misses).
struct RsKeySource {
  std::optional<security::KeySetDocument> inline_keys;
  std::optional<std::string> jwks_uri;
};

struct AsConfig {
  std::string origin;
  security::SigningKeyPair signing_key;
  std::map<std::string, RsKeySource> rs_allowlist;  // origin -> keys
  claims::TrustList trusted_issuers;
  std::chrono::seconds ticket_ttl{300};
  std::chrono::seconds token_ttl{600};
  int max_rounds = 5;
};

// The UMA authorization server: discovery, resource registration, permission
// tickets with the public 200 hint, the token endpoint (ticketed and
// ticketless, with dynamic claim negotiation) and token introspection.
class AuthorizationServer {
 public:
  AuthorizationServer(AsConfig config, std::vector<policy::PolicyDocument> policies,
                      ClockRef clock, http::AgentRef agent);

  void install_routes(httplib::Server& server);

  // Atomically replaces the policy set; in-flight evaluations keep their
  // snapshot.
  void set_policies(std::vector<policy::PolicyDocument> policies);

  void rotate_key(security::SigningKeyPair next,
                  std::chrono::seconds overlap = security::kDefaultRotationOverlap);

  const std::string& origin() const { return config_.origin; }
  nlohmann::json discovery_document() const { return discovery_; }
  security::KeySetDocument key_set() const;

 private:
  using PolicySnapshot = std::shared_ptr<const std::vector<policy::PolicyDocument>>;

  PolicySnapshot policies() const;
  security::KeyAllowlist allowlist_snapshot();
  void refresh_allowlist(bool force);
  std::optional<std::string> authenticate_rs(const httplib::Request& req,
                                             httplib::Response& res);

  void handle_discovery(const httplib::Request& req, httplib::Response& res);
  void handle_jwks(const httplib::Request& req, httplib::Response& res);
  void handle_register(const httplib::Request& req, httplib::Response& res);
  void handle_list_registrations(const httplib::Request& req, httplib::Response& res);
  void handle_get_registration(const httplib::Request& req, httplib::Response& res);
  void handle_update_registration(const httplib::Request& req, httplib::Response& res);
  void handle_delete_registration(const httplib::Request& req, httplib::Response& res);
  void handle_permission(const httplib::Request& req, httplib::Response& res);
  void handle_token(const httplib::Request& req, httplib::Response& res);
  void handle_introspect(const httplib::Request& req, httplib::Response& res);

  std::vector<TicketItem> resolve_descriptors(const nlohmann::json& descriptors);

  AsConfig config_;
  nlohmann::json discovery_;
  ClockRef clock_;
  http::AgentRef agent_;

  mutable std::mutex policies_mutex_;
  PolicySnapshot policies_;

  mutable std::mutex key_mutex_;
  security::KeyRing key_ring_;

  mutable std::mutex allowlist_mutex_;
  std::map<std::string, security::KeySetDocument> resolved_allowlist_;

  RegistrationStore registrations_;
  TicketStore tickets_;
};

}  // namespace umax::as
