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

#include <cstdint>
#include <string>
#include <vector>

namespace umax::security {

using Bytes = std::vector<std::uint8_t>;

std::string base64url_encode(const Bytes& data);
// Throws Error(malformed_token) on invalid input.
Bytes base64url_decode(const std::string& text);

std::string base64_encode(const Bytes& data);
Bytes base64_decode(const std::string& text);

Bytes sha256(const std::string& data);

// Cryptographically random, base64url-encoded. 32 bytes by default (256 bits).
std::string random_token(std::size_t bytes = 32);

}  // namespace umax::security
