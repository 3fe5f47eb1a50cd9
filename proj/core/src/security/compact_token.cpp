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

#include "umax/security/compact_token.hpp"

#include "umax/util/error.hpp"

namespace umax::security {

namespace {
Bytes to_bytes(const std::string& s) {
  return Bytes(s.begin(), s.end());
}

struct Parts {
  std::string header_b64;
  std::string payload_b64;
  std::string signature_b64;
};

Parts split_token(const std::string& token) {
  auto first = token.find('.');
  auto second = token.find('.', first == std::string::npos ? first : first + 1);
  if (first == std::string::npos || second == std::string::npos ||
      token.find('.', second + 1) != std::string::npos) {
    throw Error(Errc::malformed_token, "compact token must have exactly three segments");
  }
  return Parts{token.substr(0, first), token.substr(first + 1, second - first - 1),
               token.substr(second + 1)};
}

nlohmann::json decode_json_segment(const std::string& b64) {
  Bytes raw = base64url_decode(b64);
  nlohmann::json parsed =
      nlohmann::json::parse(std::string(raw.begin(), raw.end()), nullptr, false);
  if (parsed.is_discarded()) {
    throw Error(Errc::malformed_token, "token segment is not valid JSON");
  }
  return parsed;
}
}  // namespace

std::string sign_compact(const nlohmann::json& payload, const SigningKeyPair& key,
                         const std::string& type) {
  nlohmann::json header = {{"alg", "EdDSA"}, {"typ", type}, {"kid", key.key_id()}};
  std::string input =
      base64url_encode(to_bytes(header.dump())) + "." + base64url_encode(to_bytes(payload.dump()));
  return input + "." + base64url_encode(key.sign(input));
}

nlohmann::json verify_compact(const std::string& token, const KeySetDocument& keys) {
  Parts parts = split_token(token);
  nlohmann::json header = decode_json_segment(parts.header_b64);
  if (header.value("alg", "") != "EdDSA") {
    throw Error(Errc::malformed_token, "unsupported token algorithm");
  }
  Bytes signature = base64url_decode(parts.signature_b64);
  std::string input = parts.header_b64 + "." + parts.payload_b64;

  bool verified = false;
  if (header.contains("kid") && header.at("kid").is_string()) {
    const PublicKey* pk = keys.find(header.at("kid").get<std::string>());
    verified = pk != nullptr && pk->verify(input, signature);
  } else {
    for (const auto& pk : keys.keys) {
      if (pk.verify(input, signature)) {
        verified = true;
        break;
      }
    }
  }
  if (!verified) {
    throw Error(Errc::bad_signature, "token signature did not verify against the key set");
  }
  return decode_json_segment(parts.payload_b64);
}

std::optional<std::string> peek_key_id(const std::string& token) {
  try {
    Parts parts = split_token(token);
    nlohmann::json header = decode_json_segment(parts.header_b64);
    if (header.contains("kid") && header.at("kid").is_string()) {
      return header.at("kid").get<std::string>();
    }
  } catch (const Error&) {
  }
  return std::nullopt;
}

}  // namespace umax::security
