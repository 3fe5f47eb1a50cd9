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

#include <map>
#include <string>

#include "umax/claims/claims.hpp"
#include "umax/security/keys.hpp"
#include "umax/util/time.hpp"

namespace umax::claims {

// Desk-scale identity-provider side of the claim formats: mints the tokens
// verify_claim_token accepts. Used by the scenario harness, the tests and
// the mint-claim CLI.

ClaimToken issue_oidc_token(const security::SigningKeyPair& key, const std::string& issuer,
                            const std::string& webid, Instant issued_at,
                            std::chrono::seconds ttl = std::chrono::seconds{3600});

ClaimToken issue_vc_token(const security::SigningKeyPair& key, const std::string& issuer,
                          const std::map<std::string, std::string>& claim_map, Instant issued_at,
                          std::chrono::seconds ttl = std::chrono::seconds{3600});

}  // namespace umax::claims
