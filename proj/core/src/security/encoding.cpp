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

#include "umax/security/encoding.hpp"

#include <sodium.h>

#include <mutex>
#include <stdexcept>

#include "umax/util/error.hpp"

namespace umax::security {

namespace {
void ensure_sodium() {
  static std::once_flag once;
  std::call_once(once, [] {
    if (sodium_init() < 0) {
      throw std::runtime_error("libsodium initialization failed");
    }
  });
}

std::string encode_variant(const Bytes& data, int variant) {
  ensure_sodium();
  std::string out(sodium_base64_encoded_len(data.size(), variant), '\0');
  sodium_bin2base64(out.data(), out.size(), data.data(), data.size(), variant);
  out.resize(out.find('\0') == std::string::npos ? out.size() : out.find('\0'));
  return out;
}

Bytes decode_variant(const std::string& text, int variant) {
  ensure_sodium();
  Bytes out(text.size() + 4);
  std::size_t actual = 0;
  if (sodium_base642bin(out.data(), out.size(), text.data(), text.size(), nullptr, &actual,
                        nullptr, variant) != 0) {
    throw Error(Errc::malformed_token, "invalid base64 input");
  }
  out.resize(actual);
  return out;
}
}  // namespace

std::string base64url_encode(const Bytes& data) {
  return encode_variant(data, sodium_base64_VARIANT_URLSAFE_NO_PADDING);
}

Bytes base64url_decode(const std::string& text) {
  return decode_variant(text, sodium_base64_VARIANT_URLSAFE_NO_PADDING);
}

std::string base64_encode(const Bytes& data) {
  return encode_variant(data, sodium_base64_VARIANT_ORIGINAL);
}

Bytes base64_decode(const std::string& text) {
  return decode_variant(text, sodium_base64_VARIANT_ORIGINAL);
}

Bytes sha256(const std::string& data) {
  ensure_sodium();
  Bytes out(crypto_hash_sha256_BYTES);
  crypto_hash_sha256(out.data(), reinterpret_cast<const unsigned char*>(data.data()),
                     data.size());
  return out;
}

std::string random_token(std::size_t bytes) {
  ensure_sodium();
  Bytes buf(bytes);
  randombytes_buf(buf.data(), buf.size());
  return base64url_encode(buf);
}

}  // namespace umax::security
