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

#include "umax/security/keys.hpp"

#include <sodium.h>

#include <fstream>

#include "umax/util/error.hpp"

namespace umax::security {

SigningKeyPair SigningKeyPair::generate(const std::string& key_id) {
  SigningKeyPair kp;
  kp.key_id_ = key_id;
  kp.seed_.resize(crypto_sign_SEEDBYTES);
  randombytes_buf(kp.seed_.data(), kp.seed_.size());
  kp.secret_key_.resize(crypto_sign_SECRETKEYBYTES);
  kp.public_key_.resize(crypto_sign_PUBLICKEYBYTES);
  crypto_sign_seed_keypair(kp.public_key_.data(), kp.secret_key_.data(), kp.seed_.data());
  return kp;
}

SigningKeyPair SigningKeyPair::from_private_jwk(const nlohmann::json& jwk) {
  if (!jwk.is_object() || jwk.value("kty", "") != "OKP" || jwk.value("crv", "") != "Ed25519" ||
      !jwk.contains("d") || !jwk.contains("kid")) {
    throw Error(Errc::config_error, "expected an Ed25519 private JWK with kid, d");
  }
  SigningKeyPair kp;
  kp.key_id_ = jwk.at("kid").get<std::string>();
  kp.seed_ = base64url_decode(jwk.at("d").get<std::string>());
  if (kp.seed_.size() != crypto_sign_SEEDBYTES) {
    throw Error(Errc::config_error, "Ed25519 seed must be 32 bytes");
  }
  kp.secret_key_.resize(crypto_sign_SECRETKEYBYTES);
  kp.public_key_.resize(crypto_sign_PUBLICKEYBYTES);
  crypto_sign_seed_keypair(kp.public_key_.data(), kp.secret_key_.data(), kp.seed_.data());
  return kp;
}

SigningKeyPair SigningKeyPair::load_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(Errc::io_error, "cannot read key file " + path.string());
  }
  nlohmann::json jwk;
  try {
    in >> jwk;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::config_error, "key file " + path.string() + ": " + e.what());
  }
  return from_private_jwk(jwk);
}

nlohmann::json SigningKeyPair::private_jwk() const {
  return {
      {"kty", "OKP"}, {"crv", "Ed25519"},          {"alg", "EdDSA"},
      {"kid", key_id_}, {"d", base64url_encode(seed_)}, {"x", base64url_encode(public_key_)},
  };
}

nlohmann::json SigningKeyPair::public_jwk() const {
  return {
      {"kty", "OKP"},   {"crv", "Ed25519"},
      {"alg", "EdDSA"}, {"kid", key_id_},
      {"x", base64url_encode(public_key_)},
  };
}

void SigningKeyPair::save_file(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) {
    throw Error(Errc::io_error, "cannot write key file " + path.string());
  }
  out << private_jwk().dump(2) << "\n";
}

Bytes SigningKeyPair::sign(const std::string& message) const {
  Bytes sig(crypto_sign_BYTES);
  crypto_sign_detached(sig.data(), nullptr,
                       reinterpret_cast<const unsigned char*>(message.data()), message.size(),
                       secret_key_.data());
  return sig;
}

bool PublicKey::verify(const std::string& message, const Bytes& signature) const {
  if (signature.size() != crypto_sign_BYTES || key.size() != crypto_sign_PUBLICKEYBYTES) {
    return false;
  }
  return crypto_sign_verify_detached(signature.data(),
                                     reinterpret_cast<const unsigned char*>(message.data()),
                                     message.size(), key.data()) == 0;
}

KeySetDocument KeySetDocument::from_json(const nlohmann::json& jwks) {
  if (!jwks.is_object() || !jwks.contains("keys") || !jwks.at("keys").is_array()) {
    throw Error(Errc::config_error, "expected a JWKS document with a keys array");
  }
  KeySetDocument doc;
  for (const auto& jwk : jwks.at("keys")) {
    if (jwk.value("kty", "") != "OKP" || jwk.value("crv", "") != "Ed25519") {
      continue;  // other key types are not part of this suite
    }
    PublicKey pk;
    pk.key_id = jwk.value("kid", "");
    pk.key = base64url_decode(jwk.at("x").get<std::string>());
    doc.keys.push_back(std::move(pk));
  }
  return doc;
}

nlohmann::json KeySetDocument::to_json() const {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& pk : keys) {
    out.push_back({{"kty", "OKP"},
                   {"crv", "Ed25519"},
                   {"alg", "EdDSA"},
                   {"kid", pk.key_id},
                   {"x", base64url_encode(pk.key)}});
  }
  return {{"keys", out}};
}

const PublicKey* KeySetDocument::find(const std::string& key_id) const {
  for (const auto& pk : keys) {
    if (pk.key_id == key_id) {
      return &pk;
    }
  }
  return nullptr;
}

KeySetDocument key_set_for(const SigningKeyPair& key) {
  KeySetDocument doc;
  doc.keys.push_back(PublicKey{key.key_id(), key.public_key()});
  return doc;
}

KeyRing::KeyRing(SigningKeyPair active) : active_(std::move(active)) {}

void KeyRing::rotate(SigningKeyPair next, std::chrono::seconds overlap, Instant now) {
  retired_.push_back(Retired{PublicKey{active_.key_id(), active_.public_key()}, now + overlap});
  active_ = std::move(next);
}

KeySetDocument KeyRing::key_set(Instant now) const {
  KeySetDocument doc = key_set_for(active_);
  for (const auto& r : retired_) {
    if (now < r.until) {
      doc.keys.push_back(r.key);
    }
  }
  return doc;
}

}  // namespace umax::security
