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

#include "umax/security/http_signature.hpp"

#include <cstdlib>

#include "umax/util/error.hpp"

namespace umax::security {

namespace {
constexpr const char* kCoveredComponents = R"(("@method" "@target-uri" "content-digest"))";

std::string digest_header(const std::string& body) {
  return "sha-256=:" + base64_encode(sha256(body)) + ":";
}

std::string signature_params(Instant created, const std::string& key_id) {
  return std::string(kCoveredComponents) + ";created=" +
         std::to_string(instant_to_unix(created)) + ";keyid=\"" + key_id + "\";alg=\"ed25519\"";
}

std::string signature_base(const std::string& method, const std::string& target_uri,
                           const std::string& digest, const std::string& params) {
  std::string base;
  base += "\"@method\": " + method + "\n";
  base += "\"@target-uri\": " + target_uri + "\n";
  base += "\"content-digest\": " + digest + "\n";
  base += "\"@signature-params\": " + params;
  return base;
}

// Extracts ;name=value (value bare or quoted) from the params string.
std::string param_value(const std::string& params, const std::string& name) {
  std::string needle = ";" + name + "=";
  auto pos = params.find(needle);
  if (pos == std::string::npos) {
    return {};
  }
  pos += needle.size();
  if (pos < params.size() && params[pos] == '"') {
    auto end = params.find('"', pos + 1);
    if (end == std::string::npos) {
      return {};
    }
    return params.substr(pos + 1, end - pos - 1);
  }
  auto end = params.find(';', pos);
  return params.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
}

// "sig1=..." -> "..."; empty when the label is missing.
std::string strip_label(const std::string& header) {
  if (header.rfind("sig1=", 0) != 0) {
    return {};
  }
  return header.substr(5);
}
}  // namespace

void sign_http_message(http::Request& request, const SigningKeyPair& key, Instant created) {
  std::string digest = digest_header(request.body);
  std::string params = signature_params(created, key.key_id());
  std::string base = signature_base(request.method, request.url, digest, params);
  Bytes sig = key.sign(base);

  request.headers.emplace_back("Content-Digest", digest);
  request.headers.emplace_back("Signature-Input", "sig1=" + params);
  request.headers.emplace_back("Signature", "sig1=:" + base64_encode(sig) + ":");
}

std::string verify_http_message(const SignedInbound& inbound, const KeyAllowlist& allowlist,
                                Instant clock) {
  if (inbound.signature.empty() || inbound.signature_input.empty()) {
    throw Error(Errc::no_signature, "request carries no message signature");
  }
  std::string params = strip_label(inbound.signature_input);
  if (params.empty() || params.rfind(kCoveredComponents, 0) != 0) {
    throw Error(Errc::no_signature, "unsupported signature input profile");
  }

  if (inbound.content_digest.empty() || inbound.content_digest != digest_header(inbound.body)) {
    throw Error(Errc::digest_mismatch, "content-digest does not match the request body");
  }

  std::string created_text = param_value(params, "created");
  if (created_text.empty()) {
    throw Error(Errc::no_signature, "signature lacks a created parameter");
  }
  Instant created = instant_from_unix(std::strtoll(created_text.c_str(), nullptr, 10));
  auto age = clock > created ? clock - created : created - clock;
  if (age > kSignatureFreshness) {
    throw Error(Errc::stale_signature, "signature created outside the freshness window");
  }

  std::string key_id = param_value(params, "keyid");
  if (key_id.empty()) {
    throw Error(Errc::no_signature, "signature lacks a keyid parameter");
  }

  std::string sig_value = strip_label(inbound.signature);
  if (sig_value.size() < 2 || sig_value.front() != ':' || sig_value.back() != ':') {
    throw Error(Errc::no_signature, "malformed signature header");
  }
  Bytes signature;
  try {
    signature = base64_decode(sig_value.substr(1, sig_value.size() - 2));
  } catch (const Error&) {
    throw Error(Errc::bad_signature, "signature is not valid base64");
  }

  std::string base =
      signature_base(inbound.method, inbound.target_uri, inbound.content_digest, params);

  bool key_known = false;
  for (const auto& [origin, keys] : allowlist) {
    const PublicKey* pk = keys.find(key_id);
    if (pk == nullptr) {
      continue;
    }
    key_known = true;
    if (pk->verify(base, signature)) {
      return origin;
    }
  }
  if (!key_known) {
    throw Error(Errc::unknown_key, "keyid '" + key_id + "' is not allowlisted");
  }
  throw Error(Errc::bad_signature, "message signature did not verify");
}

}  // namespace umax::security
