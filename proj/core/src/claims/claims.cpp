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

#include "umax/claims/claims.hpp"

#include <json.hpp>

#include "umax/security/compact_token.hpp"
#include "umax/util/error.hpp"

namespace umax::claims {

using nlohmann::json;

std::vector<std::string> supported_formats() {
  return {kOidcIdTokenFormat, kVcJwtFormat};
}

TrustList::TrustList(std::vector<TrustedIssuer> issuers) : issuers_(std::move(issuers)) {}

void TrustList::add(TrustedIssuer issuer) {
  issuers_.push_back(std::move(issuer));
}

const TrustedIssuer* TrustList::find(const std::string& issuer) const {
  for (const auto& entry : issuers_) {
    if (entry.issuer == issuer) {
      return &entry;
    }
  }
  return nullptr;
}

namespace {
struct VerifiedEnvelope {
  json payload;
  std::string issuer;
};

// Issuer lookup, signature and validity window; shared by both formats.
VerifiedEnvelope open_envelope(const ClaimToken& token, const TrustList& trust, Instant clock) {
  json payload;
  std::string issuer;
  {
    // Peek at iss before signature verification to pick the key set; the
    // claim only counts once the signature verifies against that issuer.
    json unverified = [&] {
      auto dot1 = token.raw.find('.');
      auto dot2 = token.raw.find('.', dot1 == std::string::npos ? dot1 : dot1 + 1);
      if (dot1 == std::string::npos || dot2 == std::string::npos) {
        throw Error(Errc::malformed_token, "claim token is not a compact signed token");
      }
      auto raw = security::base64url_decode(token.raw.substr(dot1 + 1, dot2 - dot1 - 1));
      json parsed = json::parse(std::string(raw.begin(), raw.end()), nullptr, false);
      if (parsed.is_discarded() || !parsed.is_object()) {
        throw Error(Errc::malformed_token, "claim token payload is not a JSON object");
      }
      return parsed;
    }();
    if (!unverified.contains("iss") || !unverified.at("iss").is_string()) {
      throw Error(Errc::malformed_token, "claim token lacks iss");
    }
    issuer = unverified.at("iss").get<std::string>();
  }

  const TrustedIssuer* trusted = trust.find(issuer);
  if (trusted == nullptr) {
    throw Error(Errc::unknown_issuer, "issuer '" + issuer + "' is not trusted");
  }
  payload = security::verify_compact(token.raw, trusted->keys);

  if (!payload.contains("iat") || !payload.contains("exp")) {
    throw Error(Errc::malformed_token, "claim token lacks iat/exp");
  }
  Instant iat = instant_from_unix(payload.at("iat").get<std::int64_t>());
  Instant exp = instant_from_unix(payload.at("exp").get<std::int64_t>());
  if (clock < iat - kClaimClockSkew) {
    throw Error(Errc::token_not_yet_valid);
  }
  if (clock > exp + kClaimClockSkew) {
    throw Error(Errc::token_expired);
  }
  return VerifiedEnvelope{std::move(payload), std::move(issuer)};
}

std::vector<policy::VerifiedClaim> verify_oidc(const ClaimToken& token, const TrustList& trust,
                                               Instant clock) {
  VerifiedEnvelope env = open_envelope(token, trust, clock);
  std::string subject;
  if (env.payload.contains("webid") && env.payload.at("webid").is_string()) {
    subject = env.payload.at("webid").get<std::string>();
  } else if (env.payload.contains("sub") && env.payload.at("sub").is_string()) {
    subject = env.payload.at("sub").get<std::string>();
  }
  if (subject.empty()) {
    throw Error(Errc::missing_subject, "ID token carries neither webid nor sub");
  }
  return {policy::VerifiedClaim{"webid", subject, env.issuer, token.format}};
}

std::vector<policy::VerifiedClaim> verify_vc(const ClaimToken& token, const TrustList& trust,
                                             Instant clock) {
  VerifiedEnvelope env = open_envelope(token, trust, clock);
  if (!env.payload.contains("claims") || !env.payload.at("claims").is_object()) {
    throw Error(Errc::malformed_token, "VC token lacks a claims map");
  }
  std::vector<policy::VerifiedClaim> out;
  for (const auto& [key, value] : env.payload.at("claims").items()) {
    if (!value.is_string()) {
      throw Error(Errc::malformed_token, "VC claims map values must be strings");
    }
    out.push_back(policy::VerifiedClaim{key, value.get<std::string>(), env.issuer, token.format});
  }
  return out;
}
}  // namespace

std::vector<policy::VerifiedClaim> verify_claim_token(const ClaimToken& token,
                                                      const TrustList& trust, Instant clock) {
  if (token.format == kOidcIdTokenFormat) {
    return verify_oidc(token, trust, clock);
  }
  if (token.format == kVcJwtFormat) {
    return verify_vc(token, trust, clock);
  }
  throw Error(Errc::unsupported_format, "unsupported claim token format '" + token.format + "'");
}

}  // namespace umax::claims
