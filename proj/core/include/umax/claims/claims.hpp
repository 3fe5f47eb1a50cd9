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

#include <string>
#include <vector>

#include "umax/policy/model.hpp"
#include "umax/security/keys.hpp"
#include "umax/util/time.hpp"

namespace umax::claims {

// Supported claim token formats. Everything format-specific stays inside
// this module; callers treat format URIs as opaque strings.
inline constexpr const char* kOidcIdTokenFormat =
    "https://openid.net/specs/openid-connect-core-1_0.html#IDToken";
inline constexpr const char* kVcJwtFormat = "urn:uma-suite:vc+jwt";

std::vector<std::string> supported_formats();

// Pushed authentication material, still unverified.
struct ClaimToken {
  std::string format;  // format URI
  std::string raw;     // compact signed token

  bool operator==(const ClaimToken&) const = default;
};

struct TrustedIssuer {
  std::string issuer;
  security::KeySetDocument keys;
};

class TrustList {
 public:
  TrustList() = default;
  explicit TrustList(std::vector<TrustedIssuer> issuers);

  void add(TrustedIssuer issuer);
  const TrustedIssuer* find(const std::string& issuer) const;
  bool empty() const { return issuers_.empty(); }

 private:
  std::vector<TrustedIssuer> issuers_;
};

// Token validity is checked against [iat - skew, exp + skew].
inline constexpr std::chrono::seconds kClaimClockSkew{30};

// Verifies one pushed claim token and normalizes it into claims the policy
// engine can match on. Throws unsupported_format, unknown_issuer,
// bad_signature, token_expired, token_not_yet_valid, missing_subject,
// malformed_token.
std::vector<policy::VerifiedClaim> verify_claim_token(const ClaimToken& token,
                                                      const TrustList& trust, Instant clock);

}  // namespace umax::claims
