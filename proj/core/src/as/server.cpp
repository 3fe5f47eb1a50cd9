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

#include "umax/as/server.hpp"

#include <algorithm>

#include "umax/policy/engine.hpp"
#include "umax/policy/wire.hpp"
#include "umax/security/access_token.hpp"
#include "umax/security/encoding.hpp"
#include "umax/util/error.hpp"
#include "umax/util/log.hpp"

namespace umax::as {

using nlohmann::json;

namespace {

// OAuth-style token endpoint failure. need_info and request_denied ride on
// 403, protocol shape problems on 400.
struct TokenError {
  int status;
  std::string error;
  std::string description;
};

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& error,
                const std::string& description = "") {
  json body = {{"error", error}};
  if (!description.empty()) {
    body["error_description"] = description;
  }
  send_json(res, status, body);
}

std::string reconstruct_target_uri(const httplib::Request& req) {
  return "http://" + req.get_header_value("Host") + req.target;
}

// Scope lists arrive as JSON arrays of action names.
std::vector<std::string> parse_scope_list(const json& value, const char* error_code) {
  if (!value.is_array() || value.empty()) {
    throw TokenError{400, error_code, "resource_scopes must be a non-empty array"};
  }
  std::vector<std::string> scopes;
  for (const auto& s : value) {
    if (!s.is_string() || !policy::action_from_name(s.get<std::string>())) {
      throw TokenError{400, "invalid_scope",
                       "scope must be one of read, append, write, delete"};
    }
    if (std::find(scopes.begin(), scopes.end(), s.get<std::string>()) == scopes.end()) {
      scopes.push_back(s.get<std::string>());
    }
  }
  return scopes;
}

bool subset_of(const std::vector<std::string>& wanted, const std::vector<std::string>& have) {
  return std::all_of(wanted.begin(), wanted.end(), [&](const std::string& s) {
    return std::find(have.begin(), have.end(), s) != have.end();
  });
}

json registration_to_json(const Registration& reg) {
  json out = {{"resource_id", reg.resource_id}, {"resource_scopes", reg.scopes}};
  if (reg.name) {
    out["name"] = *reg.name;
  }
  if (reg.resource_type) {
    out["type"] = *reg.resource_type;
  }
  return out;
}

}  // namespace

AuthorizationServer::AuthorizationServer(AsConfig config,
                                         std::vector<policy::PolicyDocument> policies,
                                         ClockRef clock, http::AgentRef agent)
    : config_(std::move(config)),
      clock_(std::move(clock)),
      agent_(std::move(agent)),
      policies_(std::make_shared<const std::vector<policy::PolicyDocument>>(std::move(policies))),
      key_ring_(config_.signing_key) {
  discovery_ = {
      {"issuer", config_.origin},
      {"token_endpoint", config_.origin + kTokenPath},
      {"permission_endpoint", config_.origin + kPermissionPath},
      {"resource_registration_endpoint", config_.origin + kRegistrationPath},
      {"introspection_endpoint", config_.origin + kIntrospectionPath},
      {"jwks_uri", config_.origin + kJwksPath},
  };
  for (const auto& [origin, source] : config_.rs_allowlist) {
    if (source.inline_keys) {
      resolved_allowlist_[origin] = *source.inline_keys;
    }
  }
}

void AuthorizationServer::install_routes(httplib::Server& server) {
  server.Get(kDiscoveryPath, [this](const auto& req, auto& res) { handle_discovery(req, res); });
  server.Get(kJwksPath, [this](const auto& req, auto& res) { handle_jwks(req, res); });
  server.Post("/rreg/", [this](const auto& req, auto& res) { handle_register(req, res); });
  server.Get("/rreg/", [this](const auto& req, auto& res) { handle_list_registrations(req, res); });
  server.Get(R"(/rreg/([^/]+))",
             [this](const auto& req, auto& res) { handle_get_registration(req, res); });
  server.Put(R"(/rreg/([^/]+))",
             [this](const auto& req, auto& res) { handle_update_registration(req, res); });
  server.Delete(R"(/rreg/([^/]+))",
                [this](const auto& req, auto& res) { handle_delete_registration(req, res); });
  server.Post(kPermissionPath, [this](const auto& req, auto& res) { handle_permission(req, res); });
  server.Post(kTokenPath, [this](const auto& req, auto& res) { handle_token(req, res); });
  server.Post(kIntrospectionPath,
              [this](const auto& req, auto& res) { handle_introspect(req, res); });
}

void AuthorizationServer::set_policies(std::vector<policy::PolicyDocument> policies) {
  auto snapshot =
      std::make_shared<const std::vector<policy::PolicyDocument>>(std::move(policies));
  std::lock_guard lock(policies_mutex_);
  policies_ = std::move(snapshot);
}

AuthorizationServer::PolicySnapshot AuthorizationServer::policies() const {
  std::lock_guard lock(policies_mutex_);
  return policies_;
}

void AuthorizationServer::rotate_key(security::SigningKeyPair next,
                                     std::chrono::seconds overlap) {
  std::lock_guard lock(key_mutex_);
  key_ring_.rotate(std::move(next), overlap, clock_->now());
}

security::KeySetDocument AuthorizationServer::key_set() const {
  std::lock_guard lock(key_mutex_);
  return key_ring_.key_set(clock_->now());
}

security::KeyAllowlist AuthorizationServer::allowlist_snapshot() {
  std::lock_guard lock(allowlist_mutex_);
  return {resolved_allowlist_.begin(), resolved_allowlist_.end()};
}

void AuthorizationServer::refresh_allowlist(bool force) {
  for (const auto& [origin, source] : config_.rs_allowlist) {
    if (!source.jwks_uri) {
      continue;
    }
    {
      std::lock_guard lock(allowlist_mutex_);
      if (!force && resolved_allowlist_.contains(origin)) {
        continue;
      }
    }
    auto response = agent_->send({"GET", *source.jwks_uri, {}, "", ""});
    if (response.status != 200) {
      util::log().warn("as: could not fetch RS key set from {}", *source.jwks_uri);
      continue;
    }
    try {
      auto keys = security::KeySetDocument::from_json(json::parse(response.body));
      std::lock_guard lock(allowlist_mutex_);
      resolved_allowlist_[origin] = std::move(keys);
    } catch (const std::exception& e) {
      util::log().warn("as: bad key set from {}: {}", *source.jwks_uri, e.what());
    }
  }
}

std::optional<std::string> AuthorizationServer::authenticate_rs(const httplib::Request& req,
                                                                httplib::Response& res) {
  security::SignedInbound inbound{
      req.method,
      reconstruct_target_uri(req),
      req.get_header_value("Content-Digest"),
      req.get_header_value("Signature-Input"),
      req.get_header_value("Signature"),
      req.body,
  };
  for (bool retried : {false, true}) {
    try {
      return security::verify_http_message(inbound, allowlist_snapshot(), clock_->now());
    } catch (const Error& e) {
      if (e.code() == Errc::unknown_key && !retried) {
        refresh_allowlist(true);
        continue;
      }
      util::log().info("as: rejected RS request {} {}: {}", req.method, req.target, e.what());
      send_error(res, 401, std::string(errc_name(e.code())), e.detail());
      return std::nullopt;
    }
  }
  return std::nullopt;
}

void AuthorizationServer::handle_discovery(const httplib::Request&, httplib::Response& res) {
  send_json(res, 200, discovery_);
}

void AuthorizationServer::handle_jwks(const httplib::Request&, httplib::Response& res) {
  send_json(res, 200, key_set().to_json());
}

void AuthorizationServer::handle_register(const httplib::Request& req, httplib::Response& res) {
  auto rs = authenticate_rs(req, res);
  if (!rs) {
    return;
  }
  json body = json::parse(req.body, nullptr, false);
  if (body.is_discarded() || !body.is_object() || !body.contains("resource_id") ||
      !body.at("resource_id").is_string()) {
    send_error(res, 400, "invalid_request", "body must carry resource_id");
    return;
  }
  Registration reg;
  reg.rs_origin = *rs;  // authenticated origin, never the body
  reg.resource_id = body.at("resource_id").get<std::string>();
  if (body.contains("name") && body.at("name").is_string()) {
    reg.name = body.at("name").get<std::string>();
  }
  if (body.contains("type") && body.at("type").is_string()) {
    reg.resource_type = body.at("type").get<std::string>();
  }
  try {
    reg.scopes = parse_scope_list(body.value("resource_scopes", json::array()), "invalid_request");
  } catch (const TokenError& e) {
    send_error(res, e.status, e.error, e.description);
    return;
  }
  auto result = registrations_.create(std::move(reg));
  if (!result.created) {
    send_json(res, 409, json{{"error", "duplicate"}, {"_id", result.id}});
    return;
  }
  send_json(res, 201, json{{"_id", result.id}});
}

void AuthorizationServer::handle_list_registrations(const httplib::Request& req,
                                                    httplib::Response& res) {
  auto rs = authenticate_rs(req, res);
  if (!rs) {
    return;
  }
  send_json(res, 200, json(registrations_.ids_for(*rs)));
}

void AuthorizationServer::handle_get_registration(const httplib::Request& req,
                                                  httplib::Response& res) {
  auto rs = authenticate_rs(req, res);
  if (!rs) {
    return;
  }
  auto reg = registrations_.get(req.matches[1]);
  if (!reg || reg->rs_origin != *rs) {
    send_error(res, 404, "not_found");
    return;
  }
  send_json(res, 200, registration_to_json(*reg));
}

void AuthorizationServer::handle_update_registration(const httplib::Request& req,
                                                     httplib::Response& res) {
  auto rs = authenticate_rs(req, res);
  if (!rs) {
    return;
  }
  std::string id = req.matches[1];
  auto existing = registrations_.get(id);
  if (!existing || existing->rs_origin != *rs) {
    send_error(res, 404, "not_found");
    return;
  }
  json body = json::parse(req.body, nullptr, false);
  if (body.is_discarded() || !body.is_object()) {
    send_error(res, 400, "invalid_request", "body must be a JSON object");
    return;
  }
  Registration updated = *existing;
  if (body.contains("name")) {
    updated.name = body.at("name").get<std::string>();
  }
  if (body.contains("type")) {
    updated.resource_type = body.at("type").get<std::string>();
  }
  if (body.contains("resource_scopes")) {
    try {
      updated.scopes = parse_scope_list(body.at("resource_scopes"), "invalid_request");
    } catch (const TokenError& e) {
      send_error(res, e.status, e.error, e.description);
      return;
    }
  }
  registrations_.update(id, updated);
  send_json(res, 200, json{{"_id", id}});
}

void AuthorizationServer::handle_delete_registration(const httplib::Request& req,
                                                     httplib::Response& res) {
  auto rs = authenticate_rs(req, res);
  if (!rs) {
    return;
  }
  std::string id = req.matches[1];
  auto existing = registrations_.get(id);
  if (!existing || existing->rs_origin != *rs) {
    send_error(res, 404, "not_found");
    return;
  }
  registrations_.remove(id);
  // live tickets referencing the registration can no longer be honored
  tickets_.invalidate_registration(id);
  res.status = 204;
}

void AuthorizationServer::handle_permission(const httplib::Request& req, httplib::Response& res) {
  auto rs = authenticate_rs(req, res);
  if (!rs) {
    return;
  }
  json body = json::parse(req.body, nullptr, false);
  if (body.is_discarded() || !body.is_object() || !body.contains("resource_id") ||
      !body.at("resource_id").is_string()) {
    send_error(res, 400, "invalid_request", "body must carry resource_id and resource_scopes");
    return;
  }
  auto reg = registrations_.find_by_resource(body.at("resource_id").get<std::string>());
  if (!reg || reg->rs_origin != *rs) {
    send_error(res, 400, "invalid_resource_id");
    return;
  }
  std::vector<std::string> scopes;
  try {
    scopes = parse_scope_list(body.value("resource_scopes", json::array()), "invalid_scope");
  } catch (const TokenError& e) {
    send_error(res, e.status, e.error, e.description);
    return;
  }
  if (!subset_of(scopes, reg->scopes)) {
    send_error(res, 400, "invalid_scope", "scope not registered for this resource");
    return;
  }

  auto snapshot = policies();
  Instant now = clock_->now();
  bool all_public = std::all_of(scopes.begin(), scopes.end(), [&](const std::string& s) {
    return policy::is_public(reg->resource_id, reg->resource_type,
                             *policy::action_from_name(s), *snapshot, now);
  });
  if (all_public) {
    // Public hint: no ticket, the RS may serve the request itself.
    send_json(res, 200, json{{"public_scopes", scopes}});
    return;
  }
  std::string ticket = tickets_.issue({TicketItem{reg->id, scopes, std::nullopt}}, 0, now,
                                      config_.ticket_ttl);
  send_json(res, 201, json{{"ticket", ticket}});
}

std::vector<TicketItem> AuthorizationServer::resolve_descriptors(const json& descriptors) {
  if (!descriptors.is_array() || descriptors.empty()) {
    throw TokenError{400, "invalid_request", "permissions must be a non-empty array"};
  }
  std::vector<TicketItem> items;
  for (const auto& d : descriptors) {
    if (!d.is_object() ||
        (d.contains("resource_id") == d.contains("resource_type"))) {
      throw TokenError{400, "invalid_request",
                       "each descriptor carries exactly one of resource_id or resource_type"};
    }
    auto scopes = parse_scope_list(d.value("resource_scopes", json::array()), "invalid_request");
    std::optional<std::string> purpose;
    if (d.contains("purpose") && d.at("purpose").is_string()) {
      purpose = d.at("purpose").get<std::string>();
    }
    if (d.contains("resource_id")) {
      auto reg = registrations_.find_by_resource(d.at("resource_id").get<std::string>());
      if (!reg) {
        throw TokenError{400, "invalid_resource_id",
                         "no registration for the requested resource"};
      }
      if (!subset_of(scopes, reg->scopes)) {
        throw TokenError{400, "invalid_scope", "scope not registered for this resource"};
      }
      items.push_back(TicketItem{reg->id, scopes, purpose});
    } else {
      auto regs = registrations_.find_by_type(d.at("resource_type").get<std::string>());
      if (regs.empty()) {
        throw TokenError{400, "invalid_resource_id",
                         "no registration of the requested resource type"};
      }
      bool any = false;
      for (const auto& reg : regs) {
        if (subset_of(scopes, reg.scopes)) {
          items.push_back(TicketItem{reg.id, scopes, purpose});
          any = true;
        }
      }
      if (!any) {
        throw TokenError{400, "invalid_scope",
                         "no registration of that type supports the requested scopes"};
      }
    }
  }
  return items;
}

void AuthorizationServer::handle_token(const httplib::Request& req, httplib::Response& res) {
  auto fields = http::form_decode(req.body);
  auto field = [&](const std::string& name) -> std::optional<std::string> {
    for (const auto& [key, value] : fields) {
      if (key == name) {
        return value;
      }
    }
    return std::nullopt;
  };

  try {
    if (field("grant_type").value_or("") != kUmaTicketGrantType) {
      throw TokenError{400, "unsupported_grant_type",
                       std::string("grant_type must be ") + kUmaTicketGrantType};
    }

    Instant now = clock_->now();
    auto ticket_value = field("ticket");
    auto permissions_field = field("permissions");
    if (ticket_value && permissions_field) {
      throw TokenError{400, "invalid_request", "ticket and permissions are mutually exclusive"};
    }

    std::vector<TicketItem> items;
    int round = 0;
    if (ticket_value) {
      auto ticket = tickets_.consume(*ticket_value, now);
      if (!ticket) {
        throw TokenError{400, "invalid_grant", "unknown, expired or already-used ticket"};
      }
      items = std::move(ticket->items);
      round = ticket->round;
    } else if (permissions_field) {
      // Ticketless mode: a knowledgeable client describes the permissions it
      // wants; an internal ticket is synthesized and the flow proceeds
      // identically.
      json descriptors = json::parse(*permissions_field, nullptr, false);
      if (descriptors.is_discarded()) {
        throw TokenError{400, "invalid_request", "permissions is not valid JSON"};
      }
      items = resolve_descriptors(descriptors);
    } else {
      throw TokenError{400, "invalid_request", "either ticket or permissions is required"};
    }

    // Verify pushed claim tokens; claim_token[i] pairs with
    // claim_token_format[i].
    std::vector<std::string> raw_tokens;
    std::vector<std::string> formats;
    for (const auto& [key, value] : fields) {
      if (key == "claim_token") {
        raw_tokens.push_back(value);
      } else if (key == "claim_token_format") {
        formats.push_back(value);
      }
    }
    if (raw_tokens.size() != formats.size()) {
      throw TokenError{400, "invalid_request",
                       "claim_token and claim_token_format counts differ"};
    }
    std::vector<policy::VerifiedClaim> verified;
    for (std::size_t i = 0; i < raw_tokens.size(); ++i) {
      try {
        auto claims = claims::verify_claim_token({formats[i], raw_tokens[i]},
                                                 config_.trusted_issuers, now);
        verified.insert(verified.end(), claims.begin(), claims.end());
      } catch (const Error& e) {
        throw TokenError{400, "invalid_claim_token", std::string(errc_name(e.code()))};
      }
    }

    // Evaluate every (registration, scope) pair against the policy snapshot.
    auto snapshot = policies();
    std::vector<security::TokenPermission> granted;
    std::vector<policy::UsageRequirement> usage;
    std::vector<policy::ClaimRequirement> required;
    std::vector<std::string> audiences;
    bool denied = false;
    for (const auto& item : items) {
      auto reg = registrations_.get(item.registration_id);
      if (!reg) {
        throw TokenError{400, "invalid_grant", "a requested registration no longer exists"};
      }
      security::TokenPermission perm{reg->resource_id, {}};
      for (const auto& scope : item.scopes) {
        policy::AccessRequest request{reg->resource_id, reg->resource_type,
                                      *policy::action_from_name(scope), item.purpose};
        policy::Decision decision = policy::evaluate(request, verified, *snapshot, now);
        if (const auto* grant = std::get_if<policy::Grant>(&decision)) {
          perm.scopes.push_back(scope);
          for (const auto& u : grant->usage_requirements) {
            if (std::find(usage.begin(), usage.end(), u) == usage.end()) {
              usage.push_back(u);
            }
          }
        } else if (const auto* need = std::get_if<policy::NeedClaims>(&decision)) {
          for (const auto& r : need->required) {
            if (std::find(required.begin(), required.end(), r) == required.end()) {
              required.push_back(r);
            }
          }
        } else {
          denied = true;
          util::log().info("as: deny {} {} reason={}", scope, reg->resource_id,
                           deny_reason_name(std::get<policy::Deny>(decision).reason));
        }
      }
      if (!perm.scopes.empty()) {
        granted.push_back(std::move(perm));
        if (std::find(audiences.begin(), audiences.end(), reg->rs_origin) == audiences.end()) {
          audiences.push_back(reg->rs_origin);
        }
      }
    }

    if (!denied && required.empty()) {
      // Every pair granted: mint the access grant.
      std::string subject = "anonymous";
      for (const auto& claim : verified) {
        if (claim.claim_type == "webid") {
          subject = claim.value;
          break;
        }
      }
      security::AccessTokenClaims claims;
      claims.issuer = config_.origin;
      claims.subject = subject;
      claims.audiences = audiences;
      claims.issued_at = now;
      claims.expires_at = now + config_.token_ttl;
      claims.token_id = security::random_token(16);
      claims.permissions = granted;
      json usage_json = json::array();
      for (const auto& u : usage) {
        usage_json.push_back(policy::usage_requirement_to_json(u));
      }
      claims.usage = usage_json;

      std::string token;
      {
        std::lock_guard lock(key_mutex_);
        token = security::mint_token(claims, key_ring_.active());
      }
      json permissions_json = json::array();
      for (const auto& p : granted) {
        permissions_json.push_back(
            {{"resource_id", p.resource_id}, {"resource_scopes", p.scopes}});
      }
      send_json(res, 200,
                json{{"access_token", token},
                     {"token_type", "Bearer"},
                     {"expires_in", config_.token_ttl.count()},
                     {"permissions", permissions_json},
                     {"usage_requirements", usage_json}});
      return;
    }

    if (!required.empty()) {
      // Negotiation continues: rotate the ticket and demand the missing
      // claims, within the round bound.
      if (round + 1 > config_.max_rounds) {
        throw TokenError{403, "too_many_rounds", "negotiation bound exceeded"};
      }
      std::string rotated = tickets_.issue(items, round + 1, now, config_.ticket_ttl);
      json required_json = json::array();
      for (const auto& r : required) {
        required_json.push_back(policy::claim_requirement_to_json(r));
      }
      send_json(res, 403,
                json{{"error", "need_info"},
                     {"ticket", rotated},
                     {"required_claims", required_json}});
      return;
    }

    // Denied; the precise reason stays in the AS log.
    throw TokenError{403, "request_denied", ""};
  } catch (const TokenError& e) {
    send_error(res, e.status, e.error, e.description);
  } catch (const std::exception& e) {
    send_error(res, 400, "invalid_request", e.what());
  }
}

void AuthorizationServer::handle_introspect(const httplib::Request& req, httplib::Response& res) {
  auto rs = authenticate_rs(req, res);
  if (!rs) {
    return;
  }
  auto fields = http::form_decode(req.body);
  std::string token;
  for (const auto& [key, value] : fields) {
    if (key == "token") {
      token = value;
      break;
    }
  }
  Instant now = clock_->now();
  try {
    auto claims = security::verify_token_signature(token, key_set());
    if (claims.issuer != config_.origin || now >= claims.expires_at) {
      send_json(res, 200, json{{"active", false}});
      return;
    }
    json permissions_json = json::array();
    for (const auto& p : claims.permissions) {
      permissions_json.push_back({{"resource_id", p.resource_id}, {"resource_scopes", p.scopes}});
    }
    send_json(res, 200,
              json{{"active", true},
                   {"permissions", permissions_json},
                   {"iat", instant_to_unix(claims.issued_at)},
                   {"exp", instant_to_unix(claims.expires_at)}});
  } catch (const Error&) {
    send_json(res, 200, json{{"active", false}});
  }
}

}  // namespace umax::as
