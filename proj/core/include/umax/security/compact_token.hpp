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

#include <optional>
#include <string>

#include "umax/security/keys.hpp"

namespace umax::security {

// Compact EdDSA-signed token: base64url(header).base64url(payload).base64url(sig).
// Every signed token in the suite (access tokens and claim tokens) uses this
// envelope; time semantics live with the callers.
std::string sign_compact(const nlohmann::json& payload, const SigningKeyPair& key,
                         const std::string& type);

// Signature check only. Throws malformed_token / bad_signature.
nlohmann::json verify_compact(const std::string& token, const KeySetDocument& keys);

// Header kid without any verification, for key-set refresh decisions.
std::optional<std::string> peek_key_id(const std::string& token);

}  // namespace umax::security
