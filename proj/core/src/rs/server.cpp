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

#include "umax/rs/server.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>

#include "umax/security/access_token.hpp"
#include "umax/security/compact_token.hpp"
#include "umax/security/http_signature.hpp"
#include "umax/util/error.hpp"
#include "umax/util/log.hpp"

namespace umax::rs {

using nlohmann::json;

namespace {
constexpr const char* kResourceTypeHeader = "X-Resource-Type";

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

// A granted entry covers the request when it names the resource exactly or
// is a container covering it by prefix.
bool entry_covers(const std::string& granted_iri, const std::string& request_iri) {
  return granted_iri == request_iri ||
         (granted_iri.ends_with("/") && request_iri.starts_with(granted_iri));
}

std::string sanitize_slug(const std::string& slug) {
  std::string out;
  for (char c : slug) {
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.') {
      out.push_back(c);
    }
  }
  return out;
}
}  // namespace

ResourceServer::ResourceServer(RsConfig config, ClockRef clock, http::AgentRef agent)
    : config_(std::move(config)),
      clock_(std::move(clock)),
      agent_(std::move(agent)),
      store_(config_.root) {}

std::string ResourceServer::scope_for_method(const std::string& method) {
  if (method == "GET" || method == "HEAD") return "read";
  if (method == "POST") return "append";
  if (method == "PUT" || method == "PATCH") return "write";
  if (method == "DELETE") return "delete";
  return "";
}

security::KeySetDocument ResourceServer::key_set() const {
  return security::key_set_for(config_.signing_key);
}

http::Response ResourceServer::signed_call(const std::string& method, const std::string& url,
                                           const std::string& body,
                                           const std::string& content_type) {
  http::Request request{method, url, {}, body, content_type};
  security::sign_http_message(request, config_.signing_key, clock_->now());
  return agent_->send(request);
}

void ResourceServer::startup() {
  auto discovery = agent_->send({"GET", config_.as_uri + "/.well-known/uma2-configuration",
                                 {}, "", ""});
  if (discovery.status != 200) {
    throw Error(Errc::as_unreachable, "no discovery document at " + config_.as_uri);
  }
  json doc = json::parse(discovery.body, nullptr, false);
  if (doc.is_discarded() || !doc.contains("permission_endpoint") ||
      !doc.contains("resource_registration_endpoint") || !doc.contains("jwks_uri")) {
    throw Error(Errc::as_unreachable, "malformed discovery document");
  }
  as_.permission = doc.at("permission_endpoint").get<std::string>();
  as_.registration = doc.at("resource_registration_endpoint").get<std::string>();
  as_.jwks_uri = doc.at("jwks_uri").get<std::string>();

  auto jwks = agent_->send({"GET", as_.jwks_uri, {}, "", ""});
  if (jwks.status != 200) {
    throw Error(Errc::as_unreachable, "cannot fetch AS key set");
  }
  {
    std::lock_guard lock(keys_mutex_);
    as_keys_ = security::KeySetDocument::from_json(json::parse(jwks.body));
  }

  store_.load();
  for (const auto& resource : store_.list()) {
    auto id = register_resource(resource);
    if (!id) {
      throw Error(Errc::as_unreachable, "could not register " + resource.path);
    }
    std::lock_guard lock(registry_mutex_);
    registry_[resource.path] = *id;
  }
  util::log().info("rs: {} resources registered at {}", store_.list().size(), config_.as_uri);
}

std::optional<std::string> ResourceServer::register_resource(const StoredResource& resource) {
  json body = {{"resource_id", resource_iri(resource.path)},
               {"resource_scopes", {"read", "append", "write", "delete"}}};
  if (resource.resource_type) {
    body["type"] = *resource.resource_type;
  }
  auto response = signed_call("POST", as_.registration, body.dump(), "application/json");
  if (response.status != 201 && response.status != 409) {
    return std::nullopt;
  }
  json parsed = json::parse(response.body, nullptr, false);
  if (parsed.is_discarded() || !parsed.contains("_id")) {
    return std::nullopt;
  }
  return parsed.at("_id").get<std::string>();
}

bool ResourceServer::deregister_resource(const std::string& path) {
  std::string id;
  {
    std::lock_guard lock(registry_mutex_);
    auto it = registry_.find(path);
    if (it == registry_.end()) {
      return true;  // nothing registered
    }
    id = it->second;
  }
  auto response = signed_call("DELETE", as_.registration + id, "", "");
  if (response.status != 204 && response.status != 404) {
    return false;
  }
  std::lock_guard lock(registry_mutex_);
  registry_.erase(path);
  return true;
}

security::KeySetDocument ResourceServer::as_keys() const {
  std::lock_guard lock(keys_mutex_);
  return as_keys_;
}

void ResourceServer::refresh_as_keys() {
  auto response = agent_->send({"GET", as_.jwks_uri, {}, "", ""});
  if (response.status != 200) {
    return;
  }
  try {
    auto keys = security::KeySetDocument::from_json(json::parse(response.body));
    std::lock_guard lock(keys_mutex_);
    as_keys_ = std::move(keys);
  } catch (const std::exception& e) {
    util::log().warn("rs: bad AS key set: {}", e.what());
  }
}

void ResourceServer::install_routes(httplib::Server& server) {
  server.Get("/.well-known/jwks.json", [this](const httplib::Request&, httplib::Response& res) {
    send_json(res, 200, key_set().to_json());
  });
  auto handler = [this](const httplib::Request& req, httplib::Response& res) {
    handle(req, res);
  };
  server.Get(R"(/.*)", handler);
  server.Post(R"(/.*)", handler);
  server.Put(R"(/.*)", handler);
  server.Patch(R"(/.*)", handler);
  server.Delete(R"(/.*)", handler);
}

void ResourceServer::respond_challenge(httplib::Response& res,
                                       const std::optional<std::string>& ticket) {
  std::string challenge =
      "UMA realm=\"" + config_.origin + "\", as_uri=\"" + config_.as_uri + "\"";
  if (ticket) {
    challenge += ", ticket=\"" + *ticket + "\"";
  }
  res.status = 401;
  res.set_header("WWW-Authenticate", challenge);
  send_json(res, 401, json{{"error", "unauthorized"}});
}

void ResourceServer::handle(const httplib::Request& req, httplib::Response& res) {
  auto path = ResourceStore::normalize_path(req.path);
  if (!path) {
    send_json(res, 400, json{{"error", "invalid_path"}});
    return;
  }
  std::string scope = scope_for_method(req.method);
  if (scope.empty()) {
    send_json(res, 405, json{{"error", "method_not_allowed"}});
    return;
  }

  std::string auth = req.get_header_value("Authorization");
  if (auth.rfind("Bearer ", 0) == 0) {
    std::string token = auth.substr(7);
    try {
      auto cached = as_keys();
      auto kid = security::peek_key_id(token);
      if (kid && cached.find(*kid) == nullptr) {
        refresh_as_keys();
        cached = as_keys();
      }
      auto claims = security::verify_token(token, cached, clock_->now());
      bool for_us = std::find(claims.audiences.begin(), claims.audiences.end(),
                              config_.origin) != claims.audiences.end();
      if (for_us) {
        std::string iri = resource_iri(*path);
        bool covered = false;
        for (const auto& perm : claims.permissions) {
          if (entry_covers(perm.resource_id, iri) &&
              std::find(perm.scopes.begin(), perm.scopes.end(), scope) != perm.scopes.end()) {
            covered = true;
            break;
          }
        }
        if (covered) {
          execute(req, res, *path, true);
        } else {
          // Valid token without the needed permission: no fresh ticket,
          // clients restart the negotiation tokenlessly.
          send_json(res, 403, json{{"error", "insufficient_permissions"}});
        }
        return;
      }
      // Token for another audience: fall through to the challenge path.
    } catch (const Error&) {
      // Invalid or expired token: same treatment as no token at all.
    }
  }

  // Tokenless path: ask the AS for a permission ticket; a 200 is the public
  // hint and lets us serve without any client-side AS round-trip.
  if (!store_.exists(*path)) {
    // Unknown paths are indistinguishable from protected ones, except that
    // no ticket can exist for them.
    respond_challenge(res, std::nullopt);
    return;
  }
  json body = {{"resource_id", resource_iri(*path)},
               {"resource_scopes", json::array({scope})}};
  auto response = signed_call("POST", as_.permission, body.dump(), "application/json");
  if (response.status == 200) {
    execute(req, res, *path, false);
    return;
  }
  if (response.status == 201) {
    json parsed = json::parse(response.body, nullptr, false);
    if (!parsed.is_discarded() && parsed.contains("ticket")) {
      respond_challenge(res, parsed.at("ticket").get<std::string>());
      return;
    }
  }
  if (response.status == 400) {
    respond_challenge(res, std::nullopt);  // registry out of sync; conceal
    return;
  }
  send_json(res, 502, json{{"error", "as_unreachable"}});
}

void ResourceServer::execute(const httplib::Request& req, httplib::Response& res,
                             const std::string& path, bool covered_by_token) {
  (void)covered_by_token;
  if (req.method == "GET" || req.method == "HEAD") {
    auto resource = store_.get(path);
    if (!resource) {
      send_json(res, 404, json{{"error", "not_found"}});
      return;
    }
    if (resource->container) {
      json contains = json::array();
      for (const auto& child : store_.children(path)) {
        contains.push_back(resource_iri(child));
      }
      send_json(res, 200, json{{"contains", contains}});
    } else {
      res.status = 200;
      res.set_content(resource->body, resource->content_type);
    }
    return;
  }

  if (req.method == "POST") {
    auto container = store_.get(path);
    if (!container) {
      send_json(res, 404, json{{"error", "not_found"}});
      return;
    }
    if (!container->container) {
      send_json(res, 405, json{{"error", "not_a_container"}});
      return;
    }
    std::string name = sanitize_slug(req.get_header_value("Slug"));
    if (name.empty()) {
      name = security::random_token(6);
    }
    std::string child_path = path + name;
    std::lock_guard lock(write_mutex_);
    while (store_.exists(child_path)) {
      child_path = path + name + "-" + security::random_token(4);
    }
    std::optional<std::string> resource_type;
    if (req.has_header(kResourceTypeHeader)) {
      resource_type = req.get_header_value(kResourceTypeHeader);
    }
    store_.put(child_path, req.body, req.get_header_value("Content-Type"), resource_type);
    auto id = register_resource(*store_.get(child_path));
    if (!id) {
      store_.remove(child_path);
      send_json(res, 502, json{{"error", "as_unreachable"}});
      return;
    }
    {
      std::lock_guard reg_lock(registry_mutex_);
      registry_[child_path] = *id;
    }
    res.status = 201;
    res.set_header("Location", resource_iri(child_path));
    send_json(res, 201, json{{"created", resource_iri(child_path)}});
    return;
  }

  if (req.method == "PUT" || req.method == "PATCH") {
    if (path.ends_with("/")) {
      send_json(res, 405, json{{"error", "container_not_writable"}});
      return;
    }
    std::lock_guard lock(write_mutex_);
    bool exists = store_.exists(path);
    if (!exists) {
      if (req.method == "PATCH") {
        send_json(res, 404, json{{"error", "not_found"}});
        return;
      }
      auto slash = path.rfind('/');
      std::string parent = path.substr(0, slash + 1);
      auto parent_resource = store_.get(parent);
      if (!parent_resource || !parent_resource->container) {
        send_json(res, 404, json{{"error", "no_such_container"}});
        return;
      }
    }
    std::optional<std::string> resource_type;
    if (req.has_header(kResourceTypeHeader)) {
      resource_type = req.get_header_value(kResourceTypeHeader);
    }
    store_.put(path, req.body, req.get_header_value("Content-Type"), resource_type);
    if (!exists) {
      auto id = register_resource(*store_.get(path));
      if (!id) {
        store_.remove(path);
        send_json(res, 502, json{{"error", "as_unreachable"}});
        return;
      }
      std::lock_guard reg_lock(registry_mutex_);
      registry_[path] = *id;
      res.status = 201;
      res.set_header("Location", resource_iri(path));
      return;
    }
    res.status = 204;
    return;
  }

  if (req.method == "DELETE") {
    auto resource = store_.get(path);
    if (!resource) {
      send_json(res, 404, json{{"error", "not_found"}});
      return;
    }
    if (resource->container) {
      send_json(res, 405, json{{"error", "container_not_deletable"}});
      return;
    }
    std::lock_guard lock(write_mutex_);
    if (!deregister_resource(path)) {
      send_json(res, 502, json{{"error", "as_unreachable"}});
      return;
    }
    store_.remove(path);
    res.status = 204;
    return;
  }

  send_json(res, 405, json{{"error", "method_not_allowed"}});
}

}  // namespace umax::rs
