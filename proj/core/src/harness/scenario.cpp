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

#include "umax/harness/scenario.hpp"

#include <json.hpp>

#include <atomic>
#include <fstream>
#include <map>
#include <mutex>

#include "umax/as/server.hpp"
#include "umax/claims/issue.hpp"
#include "umax/http/server_runner.hpp"
#include "umax/http/url.hpp"
#include "umax/policy/wire.hpp"
#include "umax/rs/server.hpp"
#include "umax/security/encoding.hpp"
#include "umax/util/error.hpp"

namespace umax::harness {

using nlohmann::json;

std::string to_string(const Exchange& e) {
  return "step=" + std::to_string(e.step) + " " + e.caller + "->" + e.callee + " " + e.method +
         " " + e.path + " " + std::to_string(e.status);
}

namespace {

void replace_all(std::string& text, const std::string& from, const std::string& to) {
  std::size_t pos = 0;
  while ((pos = text.find(from, pos)) != std::string::npos) {
    text.replace(pos, from.size(), to);
    pos += to.size();
  }
}

[[noreturn]] void invalid(const std::string& why) {
  throw Error(Errc::script_invalid, why);
}

// Issuer keys are generated on demand; every issuer named in the script is
// trusted by the AS.
class IssuerDirectory {
 public:
  const security::SigningKeyPair& key_for(const std::string& issuer) {
    auto it = keys_.find(issuer);
    if (it == keys_.end()) {
      it = keys_.emplace(issuer, security::SigningKeyPair::generate(
                                     "idp-" + std::to_string(keys_.size() + 1))).first;
    }
    return it->second;
  }

  claims::TrustList trust_list() const {
    claims::TrustList trust;
    for (const auto& [issuer, key] : keys_) {
      trust.add(claims::TrustedIssuer{issuer, security::key_set_for(key)});
    }
    return trust;
  }

 private:
  std::map<std::string, security::SigningKeyPair> keys_;
};

client::PushableClaim mint_claim(const json& spec, IssuerDirectory& issuers, Instant now) {
  std::string format = spec.value("format", "");
  std::string issuer = spec.value("issuer", "");
  if (issuer.empty()) {
    invalid("claim spec needs an issuer");
  }
  auto ttl = std::chrono::seconds{spec.value("ttlSeconds", 3600)};
  const auto& key = issuers.key_for(issuer);
  claims::ClaimToken token;
  if (format == "oidc") {
    if (!spec.contains("webid")) {
      invalid("oidc claim spec needs a webid");
    }
    token = claims::issue_oidc_token(key, issuer, spec.at("webid").get<std::string>(), now, ttl);
  } else if (format == "vc") {
    if (!spec.contains("claims") || !spec.at("claims").is_object()) {
      invalid("vc claim spec needs a claims map");
    }
    std::map<std::string, std::string> claim_map;
    for (const auto& [k, v] : spec.at("claims").items()) {
      claim_map[k] = v.get<std::string>();
    }
    token = claims::issue_vc_token(key, issuer, claim_map, now, ttl);
  } else {
    invalid("claim spec format must be 'oidc' or 'vc'");
  }
  return client::PushableClaim{token.format, token.raw};
}

// Pre-scan so the AS trusts every issuer before any step runs.
void collect_issuers(const json& script, IssuerDirectory& issuers) {
  if (!script.contains("steps")) {
    return;
  }
  for (const auto& step : script.at("steps")) {
    for (const char* kind : {"clientAccess", "directRequest"}) {
      if (step.contains(kind) && step.at(kind).contains("claims")) {
        for (const auto& spec : step.at(kind).at("claims")) {
          if (spec.contains("issuer")) {
            issuers.key_for(spec.at("issuer").get<std::string>());
          }
        }
      }
    }
  }
}

struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& tag) {
    path = std::filesystem::temp_directory_path() /
           ("umax-" + tag + "-" + security::random_token(6));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
};

// Stops listener threads before the servers they route into are destroyed,
// on every exit path.
struct StopOnExit {
  http::ServerRunner& runner;
  ~StopOnExit() { runner.stop(); }
};

void seed_resources(const std::filesystem::path& root, const json& resources) {
  json meta = json::object();
  for (const auto& r : resources) {
    std::string path = r.value("path", "");
    if (path.empty() || path.front() != '/') {
      invalid("resource path must be rooted");
    }
    bool container = r.value("container", path.ends_with("/"));
    json entry = json::object();
    if (container) {
      if (!path.ends_with("/")) {
        invalid("container paths must end with '/'");
      }
      std::filesystem::create_directories(root / path.substr(1));
    } else {
      auto file = root / path.substr(1);
      std::filesystem::create_directories(file.parent_path());
      std::ofstream out(file, std::ios::binary);
      out << r.value("content", "");
      entry["contentType"] = r.value("contentType", rs::content_type_for_extension(path));
    }
    if (r.contains("resourceType")) {
      entry["resourceType"] = r.at("resourceType").get<std::string>();
    }
    if (!entry.empty()) {
      meta[path] = entry;
    }
  }
  std::ofstream out(root / ".rsmeta.json");
  out << meta.dump(2);
}

std::vector<policy::PolicyDocument> parse_policies(const json& documents) {
  std::vector<policy::PolicyDocument> policies;
  for (const auto& doc : documents) {
    try {
      policies.push_back(policy::parse_policy(doc));
    } catch (const Error& e) {
      invalid("bad policy document: " + std::string(e.what()));
    }
  }
  return policies;
}

}  // namespace

ScenarioResult run_scenario(const std::string& script_text) {
  // Bind both servers first so {{AS}}/{{RS}} can be substituted before the
  // script is parsed.
  http::ServerRunner as_runner;
  http::ServerRunner rs_runner;
  as_runner.bind();
  rs_runner.bind();

  std::string substituted = script_text;
  replace_all(substituted, "{{AS}}", as_runner.origin());
  replace_all(substituted, "{{RS}}", rs_runner.origin());

  json script = json::parse(substituted, nullptr, false);
  if (script.is_discarded() || !script.is_object()) {
    invalid("script is not a JSON object");
  }

  auto clock = std::make_shared<ManualClock>(
      parse_rfc3339(script.value("startClock", "2025-01-01T00:00:00Z")));

  // Transcript recording, tagged with the running step index.
  ScenarioResult result;
  std::mutex transcript_mutex;
  std::atomic<int> current_step{0};
  std::map<std::string, std::string> party_of_origin{{as_runner.origin(), "as"},
                                                     {rs_runner.origin(), "rs"}};
  auto recorder = [&](const std::string& party) {
    return [&, party](const http::Exchange& e) {
      http::Url url = http::Url::parse(e.url);
      auto it = party_of_origin.find(url.origin);
      std::lock_guard lock(transcript_mutex);
      result.transcript.push_back(Exchange{current_step.load(), party,
                                           it == party_of_origin.end() ? url.origin : it->second,
                                           e.method, url.target, e.status});
    };
  };

  IssuerDirectory issuers;
  collect_issuers(script, issuers);

  TempDir rs_root("rs");
  if (script.contains("resources")) {
    seed_resources(rs_root.path, script.at("resources"));
  }

  as::AsConfig as_config;
  as_config.origin = as_runner.origin();
  as_config.signing_key = security::SigningKeyPair::generate("as-key-1");
  auto rs_key = security::SigningKeyPair::generate("rs-key-1");
  as_config.rs_allowlist[rs_runner.origin()] =
      as::RsKeySource{security::key_set_for(rs_key), std::nullopt};
  as_config.trusted_issuers = issuers.trust_list();

  as::AuthorizationServer as_server(
      std::move(as_config),
      script.contains("policies") ? parse_policies(script.at("policies"))
                                  : std::vector<policy::PolicyDocument>{},
      clock, std::make_shared<http::Agent>("as", recorder("as")));
  as_server.install_routes(as_runner.server());
  as_runner.start();
  StopOnExit stop_as{as_runner};

  rs::RsConfig rs_config{rs_runner.origin(), as_runner.origin(), rs_key, rs_root.path};
  rs::ResourceServer rs_server(std::move(rs_config), clock,
                               std::make_shared<http::Agent>("rs", recorder("rs")));
  rs_server.install_routes(rs_runner.server());
  rs_runner.start();
  StopOnExit stop_rs{rs_runner};
  rs_server.startup();

  TempDir audit_dir("audit");
  client::ClientConfig client_config;
  client_config.audit_dir = audit_dir.path;
  client::Client uma_client(client_config, clock,
                            std::make_shared<http::Agent>("client", recorder("client")));

  if (!script.contains("steps") || !script.at("steps").is_array()) {
    invalid("script carries no steps");
  }

  auto fail = [&](const std::string& message) {
    result.ok = false;
    result.failures.push_back("step " + std::to_string(current_step.load()) + ": " + message);
  };

  int index = 0;
  for (const auto& step : script.at("steps")) {
    current_step.store(++index);
    if (!step.is_object() || step.size() != 1) {
      invalid("each step carries exactly one directive");
    }

    if (step.contains("advanceClock")) {
      clock->advance(step.at("advanceClock").get<std::int64_t>());

    } else if (step.contains("setPolicy")) {
      as_server.set_policies(parse_policies(step.at("setPolicy")));

    } else if (step.contains("clientAccess")) {
      const json& spec = step.at("clientAccess");
      std::vector<client::PushableClaim> tokens;
      for (const auto& claim_spec : spec.value("claims", json::array())) {
        tokens.push_back(mint_claim(claim_spec, issuers, clock->now()));
      }
      auto provider = spec.value("eager", false) ? client::eager_claims(tokens)
                                                 : client::on_demand_claims(tokens);
      std::vector<std::pair<std::string, std::string>> headers;
      if (spec.contains("slug")) {
        headers.emplace_back("Slug", spec.at("slug").get<std::string>());
      }
      if (spec.contains("resourceType")) {
        headers.emplace_back("X-Resource-Type", spec.at("resourceType").get<std::string>());
      }
      auto access = uma_client.access(spec.at("url").get<std::string>(),
                                      spec.value("method", "GET"), spec.value("body", ""),
                                      spec.value("contentType", "text/plain"), provider, headers);
      result.client_steps.push_back(StepOutcome{index, "clientAccess", access.response.status,
                                                access.outcome, access.record});

    } else if (step.contains("directRequest")) {
      const json& spec = step.at("directRequest");
      std::vector<client::PushableClaim> tokens;
      for (const auto& claim_spec : spec.value("claims", json::array())) {
        tokens.push_back(mint_claim(claim_spec, issuers, clock->now()));
      }
      if (!spec.contains("permissions")) {
        invalid("directRequest needs a permissions array");
      }
      auto direct = uma_client.request_direct(spec.value("as", as_runner.origin()),
                                              spec.at("permissions"), tokens);
      result.client_steps.push_back(StepOutcome{index, "directRequest", direct.response.status,
                                                direct.outcome, direct.record});

    } else if (step.contains("assertStatus")) {
      const StepOutcome* last = result.last_client_step();
      int expected = step.at("assertStatus").get<int>();
      if (last == nullptr) {
        fail("assertStatus before any client step");
      } else if (last->final_status != expected) {
        fail("expected status " + std::to_string(expected) + ", got " +
             std::to_string(last->final_status) + " (" +
             std::string(client::outcome_name(last->outcome)) + ")");
      }

    } else if (step.contains("assertRoundTrips")) {
      const StepOutcome* last = result.last_client_step();
      if (last == nullptr) {
        fail("assertRoundTrips before any client step");
        continue;
      }
      auto count = [&](const std::string& caller, const std::string& callee) {
        std::lock_guard lock(transcript_mutex);
        int n = 0;
        for (const auto& e : result.transcript) {
          if (e.step == last->step && e.caller == caller && e.callee == callee) {
            ++n;
          }
        }
        return n;
      };
      const json& expectations = step.at("assertRoundTrips");
      struct Edge {
        const char* key;
        const char* caller;
        const char* callee;
      };
      for (const Edge& edge : {Edge{"client_to_as", "client", "as"},
                               Edge{"rs_to_as", "rs", "as"},
                               Edge{"client_to_rs", "client", "rs"}}) {
        if (expectations.contains(edge.key)) {
          int expected = expectations.at(edge.key).get<int>();
          int actual = count(edge.caller, edge.callee);
          if (actual != expected) {
            fail(std::string(edge.key) + ": expected " + std::to_string(expected) + ", got " +
                 std::to_string(actual));
          }
        }
      }

    } else {
      invalid("unknown step directive");
    }
  }

  // Listener threads must stop before the servers they route into go away.
  rs_runner.stop();
  as_runner.stop();
  return result;
}

}  // namespace umax::harness
