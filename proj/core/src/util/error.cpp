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

#include "umax/util/error.hpp"

namespace umax {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::malformed_document: return "malformed-document";
    case Errc::unknown_action: return "unknown-action";
    case Errc::invalid_matcher: return "invalid-matcher";
    case Errc::invalid_window: return "invalid-window";
    case Errc::unsupported_format: return "unsupported-format";
    case Errc::unknown_issuer: return "unknown-issuer";
    case Errc::missing_subject: return "missing-subject";
    case Errc::bad_signature: return "bad-signature";
    case Errc::token_expired: return "token-expired";
    case Errc::token_not_yet_valid: return "token-not-yet-valid";
    case Errc::malformed_token: return "malformed-token";
    case Errc::no_signature: return "no-signature";
    case Errc::unknown_key: return "unknown-key";
    case Errc::stale_signature: return "stale-signature";
    case Errc::digest_mismatch: return "digest-mismatch";
    case Errc::challenge_malformed: return "challenge-malformed";
    case Errc::claims_unavailable: return "claims-unavailable";
    case Errc::rounds_exhausted: return "rounds-exhausted";
    case Errc::authorization_denied: return "authorization-denied";
    case Errc::as_unreachable: return "as-unreachable";
    case Errc::malformed_record: return "malformed-record";
    case Errc::script_invalid: return "script-invalid";
    case Errc::io_error: return "io-error";
    case Errc::config_error: return "config-error";
    case Errc::protocol_error: return "protocol-error";
  }
  return "unknown-error";
}

namespace {
std::string describe(Errc code, const std::string& detail) {
  std::string s{errc_name(code)};
  if (!detail.empty()) {
    s += ": ";
    s += detail;
  }
  return s;
}
}  // namespace

Error::Error(Errc code, const std::string& detail)
    : std::runtime_error(describe(code, detail)), code_(code), detail_(detail) {}

Error::Error(Errc code) : Error(code, "") {}

}  // namespace umax
