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

#include <stdexcept>
#include <string>
#include <string_view>

namespace umax {

// Failure vocabulary shared by every component. Codes are stable strings on
// the wire and in logs (kebab-case, see errc_name).
enum class Errc {
  // policy document parsing
  malformed_document,
  unknown_action,
  invalid_matcher,
  invalid_window,
  // claim token verification
  unsupported_format,
  unknown_issuer,
  missing_subject,
  // tokens and message signatures
  bad_signature,
  token_expired,
  token_not_yet_valid,
  malformed_token,
  no_signature,
  unknown_key,
  stale_signature,
  digest_mismatch,
  // client
  challenge_malformed,
  claims_unavailable,
  rounds_exhausted,
  authorization_denied,
  as_unreachable,
  malformed_record,
  // scenario harness
  script_invalid,
  // generic
  io_error,
  config_error,
  protocol_error,
};

std::string_view errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& detail);
  explicit Error(Errc code);

  Errc code() const { return code_; }
  const std::string& detail() const { return detail_; }

 private:
  Errc code_;
  std::string detail_;
};

}  // namespace umax
