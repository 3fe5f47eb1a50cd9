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

#include <string>
#include <vector>

#include "umax/security/keys.hpp"
#include "umax/util/time.hpp"

namespace umax::security {

// One (resource, scopes) entry embedded in an access token. Scopes are the
// wire strings; only the AS maps them onto policy actions.
struct TokenPermission {
  std::string resource_id;
  std::vector<std::string> scopes;

  bool operator==(const TokenPermission&) const = default;
};

struct AccessTokenClaims {
  std::string issuer;
  std::string subject;                  // verified webid or "anonymous"
  std::vector<std::string> audiences;   // RS origins
  Instant issued_at{};
  Instant expires_at{};
  std::string token_id;                 // jti
  std::vector<TokenPermission> permissions;
  nlohmann::json usage = nlohmann::json::array();  // opaque here; the AS owns the shape

  bool operator==(const AccessTokenClaims&) const = default;
};

std::string mint_token(const AccessTokenClaims& claims, const SigningKeyPair& key);

// Valid for issued_at <= clock < expires_at (exp exclusive, no skew).
AccessTokenClaims verify_token(const std::string& token, const KeySetDocument& keys,
                               Instant clock);

// Signature and shape only; no validity-window check. Used by introspection
// and by audit verification, where an expired token is still a valid proof.
AccessTokenClaims verify_token_signature(const std::string& token, const KeySetDocument& keys);

}  // namespace umax::security
