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

#include "umax/http/agent.hpp"
#include "umax/security/keys.hpp"
#include "umax/util/time.hpp"

namespace umax::security {

// HTTP message signing between RS and AS. The signature profile is fixed:
// covered components are @method, @target-uri and content-digest, with
// created and keyid parameters; the algorithm is Ed25519. Verifiers reject
// signatures whose created timestamp is more than 120 s away from their
// clock.
inline constexpr std::chrono::seconds kSignatureFreshness{120};

// Adds Content-Digest, Signature-Input and Signature headers.
void sign_http_message(http::Request& request, const SigningKeyPair& key, Instant created);

// The verifier's view of an inbound request.
struct SignedInbound {
  std::string method;
  std::string target_uri;  // as reconstructed by the receiving server
  std::string content_digest;
  std::string signature_input;
  std::string signature;
  std::string body;
};

using KeyAllowlist = std::map<std::string, KeySetDocument>;  // origin -> keys

// Returns the allowlisted origin whose key produced the signature. Throws
// no_signature / digest_mismatch / stale_signature / unknown_key /
// bad_signature.
std::string verify_http_message(const SignedInbound& inbound, const KeyAllowlist& allowlist,
                                Instant clock);

}  // namespace umax::security
