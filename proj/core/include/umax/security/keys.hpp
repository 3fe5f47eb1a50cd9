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

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "umax/security/encoding.hpp"
#include "umax/util/time.hpp"

namespace umax::security {

// Ed25519 key pair. The private side never leaves this process: only the
// JWKS projection (public_jwk / KeySetDocument) is serializable for others.
class SigningKeyPair {
 public:
  // Empty key pair; must be assigned from generate/load before use.
  SigningKeyPair() = default;

  static SigningKeyPair generate(const std::string& key_id);

  // Private JWK (kty OKP, crv Ed25519, fields d and x).
  static SigningKeyPair from_private_jwk(const nlohmann::json& jwk);
  static SigningKeyPair load_file(const std::filesystem::path& path);

  nlohmann::json private_jwk() const;
  nlohmann::json public_jwk() const;
  void save_file(const std::filesystem::path& path) const;

  const std::string& key_id() const { return key_id_; }
  const Bytes& public_key() const { return public_key_; }

  Bytes sign(const std::string& message) const;

 private:
  std::string key_id_;
  Bytes seed_;        // 32-byte Ed25519 seed
  Bytes secret_key_;  // expanded 64-byte secret
  Bytes public_key_;  // 32 bytes
};

struct PublicKey {
  std::string key_id;
  Bytes key;  // 32-byte Ed25519 public key

  bool verify(const std::string& message, const Bytes& signature) const;
};

// A party's published key set; serializes as a standard JWKS document and
// never carries private material.
struct KeySetDocument {
  std::vector<PublicKey> keys;

  static KeySetDocument from_json(const nlohmann::json& jwks);
  nlohmann::json to_json() const;

  const PublicKey* find(const std::string& key_id) const;
  bool empty() const { return keys.empty(); }
};

KeySetDocument key_set_for(const SigningKeyPair& key);

// Active signing key plus retired public keys still served during their
// rotation overlap window.
class KeyRing {
 public:
  explicit KeyRing(SigningKeyPair active);

  const SigningKeyPair& active() const { return active_; }

  // Replaces the active key; the old public key stays in the served set
  // until now + overlap.
  void rotate(SigningKeyPair next, std::chrono::seconds overlap, Instant now);

  KeySetDocument key_set(Instant now) const;

 private:
  struct Retired {
    PublicKey key;
    Instant until;
  };

  SigningKeyPair active_;
  std::vector<Retired> retired_;
};

inline constexpr std::chrono::seconds kDefaultRotationOverlap{3600};

}  // namespace umax::security
