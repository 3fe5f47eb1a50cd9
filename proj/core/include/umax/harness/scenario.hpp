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

#include <optional>
#include <string>
#include <vector>

#include "umax/client/client.hpp"

namespace umax::harness {

// One network exchange as seen by the transcript recorder. `step` is the
// 1-based index of the script step that caused it (0 for harness setup,
// e.g. RS startup registration).
struct Exchange {
  int step = 0;
  std::string caller;  // "client", "rs", "as"
  std::string callee;  // "as", "rs", or a raw origin
  std::string method;
  std::string path;
  int status = 0;
};

std::string to_string(const Exchange& exchange);

struct StepOutcome {
  int step = 0;
  std::string kind;  // clientAccess | directRequest
  int final_status = 0;
  client::Outcome outcome = client::Outcome::ProtocolError;
  std::optional<client::AuditRecord> record;
};

struct ScenarioResult {
  bool ok = true;
  std::vector<std::string> failures;
  std::vector<Exchange> transcript;
  std::vector<StepOutcome> client_steps;

  const StepOutcome* last_client_step() const {
    return client_steps.empty() ? nullptr : &client_steps.back();
  }
};

/**
 * Deterministic in-process wiring of AS + RS + client.
 *
 * The script is a JSON document:
 *   {
 *     "startClock": "2025-01-01T00:00:00Z",          // optional
 *     "resources": [{"path", "content"?, "contentType"?, "resourceType"?,
 *                    "container"?}],
 *     "policies":  [ <policy documents> ],
 *     "steps":     [ {"advanceClock": seconds}
 *                  | {"setPolicy": [ <policy documents> ]}
 *                  | {"clientAccess": {"url", "method"?, "body"?,
 *                       "contentType"?, "slug"?, "claims"?: [<claim spec>],
 *                       "eager"?: bool}}
 *                  | {"directRequest": {"as"?: "{{AS}}", "permissions":
 *                       [<descriptor>], "claims"?: [<claim spec>]}}
 *                  | {"assertStatus": int}
 *                  | {"assertRoundTrips": {"client_to_as"?, "rs_to_as"?,
 *                       "client_to_rs"?}} ]
 *   }
 *
 * {{AS}} and {{RS}} placeholders are substituted with the bound origins
 * before parsing. Claim specs ({"format": "vc"|"oidc", "issuer", ...}) are
 * minted against harness-generated issuer keys; every named issuer is
 * trusted by the AS.
 *
 * One logical clock is shared by all parties and advances only via
 * advanceClock. Every network exchange appears in the transcript exactly
 * once. Throws Error(script_invalid) on malformed scripts.
 */
ScenarioResult run_scenario(const std::string& script_text);

}  // namespace umax::harness
