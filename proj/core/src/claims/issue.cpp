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

#include "umax/claims/issue.hpp"

#include <json.hpp>

#include "umax/security/compact_token.hpp"

namespace umax::claims {

ClaimToken issue_oidc_token(const security::SigningKeyPair& key, const std::string& issuer,
                            const std::string& webid, Instant issued_at,
                            std::chrono::seconds ttl) {
  nlohmann::json payload = {
      {"iss", issuer},
      {"sub", webid},
      {"webid", webid},
      {"iat", instant_to_unix(issued_at)},
      {"exp", instant_to_unix(issued_at + ttl)},
  };
  return ClaimToken{kOidcIdTokenFormat, security::sign_compact(payload, key, "JWT")};
}

ClaimToken issue_vc_token(const security::SigningKeyPair& key, const std::string& issuer,
                          const std::map<std::string, std::string>& claim_map, Instant issued_at,
                          std::chrono::seconds ttl) {
  nlohmann::json payload = {
      {"iss", issuer},
      {"iat", instant_to_unix(issued_at)},
      {"exp", instant_to_unix(issued_at + ttl)},
      {"claims", claim_map},
  };
  return ClaimToken{kVcJwtFormat, security::sign_compact(payload, key, "vc+jwt")};
}

}  // namespace umax::claims
