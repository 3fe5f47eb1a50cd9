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

#include <map>
#include <mutex>
#include <optional>
#include <string>

#include "umax/http/agent.hpp"
#include "umax/rs/store.hpp"
#include "umax/security/keys.hpp"
#include "umax/util/time.hpp"

namespace umax::rs {

struct RsConfig {
  std::string origin;
  std::string as_uri;
  security::SigningKeyPair signing_key;
  std::filesystem::path root;
};

// UMA-gated resource server. It holds no policy knowledge whatsoever: every
// decision arrives as a permission ticket, a public 200 hint, or the
// permissions embedded in a locally validated bearer token.
class ResourceServer {
 public:
  ResourceServer(RsConfig config, ClockRef clock, http::AgentRef agent);

  // Discovery, AS key fetch, store load and resource registration. Fails
  // loudly (Error(as_unreachable)) when the AS cannot be reached.
  void startup();

  void install_routes(httplib::Server& server);

  const std::string& origin() const { return config_.origin; }
  security::KeySetDocument key_set() const;
  std::string resource_iri(const std::string& path) const { return config_.origin + path; }

 private:
  struct AsEndpoints {
    std::string permission;
    std::string registration;
    std::string jwks_uri;
  };

  static std::string scope_for_method(const std::string& method);

  http::Response signed_call(const std::string& method, const std::string& url,
                             const std::string& body, const std::string& content_type);
  // Returns the registration id, or nullopt when the AS call failed.
  std::optional<std::string> register_resource(const StoredResource& resource);
  bool deregister_resource(const std::string& path);

  security::KeySetDocument as_keys() const;
  void refresh_as_keys();

  void handle(const httplib::Request& req, httplib::Response& res);
  void respond_challenge(httplib::Response& res, const std::optional<std::string>& ticket);
  void execute(const httplib::Request& req, httplib::Response& res, const std::string& path,
               bool covered_by_token);

  RsConfig config_;
  ClockRef clock_;
  http::AgentRef agent_;
  ResourceStore store_;
  AsEndpoints as_;

  mutable std::mutex keys_mutex_;
  security::KeySetDocument as_keys_;

  // path -> AS registration id; mutated together with the store
  mutable std::mutex registry_mutex_;
  std::map<std::string, std::string> registry_;

  // serializes mutations (store + registry + AS registration)
  std::mutex write_mutex_;
};

}  // namespace umax::rs
