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

#include "umax/security/access_token.hpp"

#include "umax/security/compact_token.hpp"
#include "umax/util/error.hpp"

namespace umax::security {

namespace {
nlohmann::json permissions_to_json(const std::vector<TokenPermission>& permissions) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& p : permissions) {
    out.push_back({{"resource_id", p.resource_id}, {"resource_scopes", p.scopes}});
  }
  return out;
}

std::vector<TokenPermission> permissions_from_json(const nlohmann::json& value) {
  if (!value.is_array()) {
    throw Error(Errc::malformed_token, "permissions claim must be an array");
  }
  std::vector<TokenPermission> out;
  for (const auto& entry : value) {
    TokenPermission p;
    p.resource_id = entry.at("resource_id").get<std::string>();
    p.scopes = entry.at("resource_scopes").get<std::vector<std::string>>();
    out.push_back(std::move(p));
  }
  return out;
}
}  // namespace

std::string mint_token(const AccessTokenClaims& claims, const SigningKeyPair& key) {
  if (!(claims.issued_at < claims.expires_at)) {
    throw Error(Errc::config_error, "token iat must precede exp");
  }
  nlohmann::json payload = {
      {"iss", claims.issuer},
      {"sub", claims.subject},
      {"iat", instant_to_unix(claims.issued_at)},
      {"exp", instant_to_unix(claims.expires_at)},
      {"jti", claims.token_id},
      {"permissions", permissions_to_json(claims.permissions)},
      {"usage", claims.usage},
  };
  if (claims.audiences.size() == 1) {
    payload["aud"] = claims.audiences.front();
  } else {
    payload["aud"] = claims.audiences;
  }
  return sign_compact(payload, key, "at+jwt");
}

AccessTokenClaims verify_token_signature(const std::string& token, const KeySetDocument& keys) {
  nlohmann::json payload = verify_compact(token, keys);
  try {
    AccessTokenClaims claims;
    claims.issuer = payload.at("iss").get<std::string>();
    claims.subject = payload.at("sub").get<std::string>();
    const auto& aud = payload.at("aud");
    if (aud.is_string()) {
      claims.audiences = {aud.get<std::string>()};
    } else {
      claims.audiences = aud.get<std::vector<std::string>>();
    }
    claims.issued_at = instant_from_unix(payload.at("iat").get<std::int64_t>());
    claims.expires_at = instant_from_unix(payload.at("exp").get<std::int64_t>());
    claims.token_id = payload.at("jti").get<std::string>();
    claims.permissions = permissions_from_json(payload.at("permissions"));
    claims.usage = payload.value("usage", nlohmann::json::array());
    return claims;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::malformed_token, e.what());
  }
}

AccessTokenClaims verify_token(const std::string& token, const KeySetDocument& keys,
                               Instant clock) {
  AccessTokenClaims claims = verify_token_signature(token, keys);
  if (clock < claims.issued_at) {
    throw Error(Errc::token_not_yet_valid);
  }
  if (clock >= claims.expires_at) {
    throw Error(Errc::token_expired);
  }
  return claims;
}

}  // namespace umax::security
