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

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <thread>

#include "umax/as/server.hpp"
#include "umax/claims/issue.hpp"
#include "umax/client/client.hpp"
#include "umax/harness/scenario.hpp"
#include "umax/http/server_runner.hpp"
#include "umax/policy/wire.hpp"
#include "umax/rs/server.hpp"
#include "umax/util/error.hpp"
#include "umax/util/log.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;       // verification/assertion failures
constexpr int kExitDenied = 2;        // authorization denied
constexpr int kExitExhausted = 3;     // negotiation exhausted
constexpr int kExitTransport = 4;     // transport or configuration error

std::atomic<bool> g_stop{false};

void handle_signal(int) { g_stop.store(true); }

void wait_for_signal() {
  std::signal(SIGINT, handle_signal);
  std::signal(SIGTERM, handle_signal);
  while (!g_stop.load()) {
    std::this_thread::sleep_for(std::chrono::milliseconds(100));
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw umax::Error(umax::Errc::io_error, "cannot read " + path);
  }
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

std::string trim(std::string text) {
  while (!text.empty() && (text.back() == '\n' || text.back() == '\r' || text.back() == ' ')) {
    text.pop_back();
  }
  return text;
}

json read_json(const std::string& path) {
  json parsed = json::parse(read_file(path), nullptr, false);
  if (parsed.is_discarded()) {
    throw umax::Error(umax::Errc::config_error, path + " is not valid JSON");
  }
  return parsed;
}

std::pair<std::string, int> parse_bind(const std::string& bind) {
  auto colon = bind.rfind(':');
  if (colon == std::string::npos) {
    throw umax::Error(umax::Errc::config_error, "--bind must be host:port");
  }
  return {bind.substr(0, colon), std::stoi(bind.substr(colon + 1))};
}

// Key sources in config files: inline "jwks", a "jwks_file" path, or a
// "jwks_uri" fetched on demand.
umax::security::KeySetDocument load_key_set(const json& entry) {
  if (entry.contains("jwks")) {
    return umax::security::KeySetDocument::from_json(entry.at("jwks"));
  }
  if (entry.contains("jwks_file")) {
    return umax::security::KeySetDocument::from_json(
        read_json(entry.at("jwks_file").get<std::string>()));
  }
  throw umax::Error(umax::Errc::config_error, "expected jwks or jwks_file");
}

std::map<std::string, umax::as::RsKeySource> load_allowlist(const std::string& path) {
  json doc = read_json(path);
  std::map<std::string, umax::as::RsKeySource> allowlist;
  for (const auto& entry : doc.value("resource_servers", json::array())) {
    std::string origin = entry.at("origin").get<std::string>();
    umax::as::RsKeySource source;
    if (entry.contains("jwks_uri")) {
      source.jwks_uri = entry.at("jwks_uri").get<std::string>();
    } else {
      source.inline_keys = load_key_set(entry);
    }
    allowlist.emplace(std::move(origin), std::move(source));
  }
  if (allowlist.empty()) {
    throw umax::Error(umax::Errc::config_error, path + " lists no resource_servers");
  }
  return allowlist;
}

umax::claims::TrustList load_trust(const std::string& path, umax::http::Agent& agent) {
  json doc = read_json(path);
  umax::claims::TrustList trust;
  for (const auto& entry : doc.value("issuers", json::array())) {
    std::string issuer = entry.at("issuer").get<std::string>();
    umax::security::KeySetDocument keys;
    if (entry.contains("jwks_uri")) {
      auto response = agent.send({"GET", entry.at("jwks_uri").get<std::string>(), {}, "", ""});
      if (response.status != 200) {
        throw umax::Error(umax::Errc::config_error,
                          "cannot fetch key set for issuer " + issuer);
      }
      keys = umax::security::KeySetDocument::from_json(json::parse(response.body));
    } else {
      keys = load_key_set(entry);
    }
    trust.add(umax::claims::TrustedIssuer{std::move(issuer), std::move(keys)});
  }
  return trust;
}

std::vector<umax::client::PushableClaim> load_claims(const std::vector<std::string>& specs) {
  std::vector<umax::client::PushableClaim> claims;
  for (const auto& spec : specs) {
    auto colon = spec.find(':');
    if (colon == std::string::npos) {
      throw umax::Error(umax::Errc::config_error, "--claim must be <file>:<format-uri>");
    }
    claims.push_back(umax::client::PushableClaim{spec.substr(colon + 1),
                                                 trim(read_file(spec.substr(0, colon)))});
  }
  return claims;
}

int exit_code_for(const umax::client::AccessResult& result) {
  using umax::client::Outcome;
  switch (result.outcome) {
    case Outcome::Ok: {
      int status = result.response.status;
      if (status >= 200 && status < 400) return kExitOk;
      if (status == 401 || status == 403 || status == 404) return kExitDenied;
      return kExitTransport;
    }
    case Outcome::Denied:
    case Outcome::ClaimsUnavailable:
      return kExitDenied;
    case Outcome::RoundsExhausted:
      return kExitExhausted;
    default:
      return kExitTransport;
  }
}

void print_result(const umax::client::AccessResult& result) {
  std::cout << "outcome: " << umax::client::outcome_name(result.outcome);
  if (!result.detail.empty()) {
    std::cout << " (" << result.detail << ")";
  }
  std::cout << "\nstatus: " << result.response.status << "\n";
  if (!result.response.body.empty()) {
    std::cout << result.response.body << "\n";
  }
  if (result.record) {
    std::cout << "audit: grant from " << result.record->as_issuer << " with "
              << result.record->permissions.size() << " permission entries\n";
  }
}

int run_serve_as(const std::string& bind, const std::string& origin_override,
                 const std::string& policies_dir, const std::string& key_file,
                 const std::string& allowlist_file, const std::string& trust_file,
                 int ticket_ttl, int token_ttl, int max_rounds) {
  auto [host, port] = parse_bind(bind);
  umax::http::ServerRunner runner(host);
  runner.bind(port);

  auto agent = std::make_shared<umax::http::Agent>("as");
  umax::as::AsConfig config;
  config.origin = origin_override.empty() ? runner.origin() : origin_override;
  config.signing_key = umax::security::SigningKeyPair::load_file(key_file);
  config.rs_allowlist = load_allowlist(allowlist_file);
  if (!trust_file.empty()) {
    config.trusted_issuers = load_trust(trust_file, *agent);
  }
  config.ticket_ttl = std::chrono::seconds{ticket_ttl};
  config.token_ttl = std::chrono::seconds{token_ttl};
  config.max_rounds = max_rounds;

  auto policies = umax::policy::load_policy_dir(policies_dir);
  umax::as::AuthorizationServer server(std::move(config), std::move(policies),
                                       umax::system_clock(), agent);
  server.install_routes(runner.server());
  runner.start();
  std::printf("umax-as listening on %s\n", runner.origin().c_str());
  std::fflush(stdout);
  wait_for_signal();
  runner.stop();
  return kExitOk;
}

int run_serve_rs(const std::string& bind, const std::string& origin_override,
                 const std::string& as_uri, const std::string& root,
                 const std::string& key_file) {
  auto [host, port] = parse_bind(bind);
  umax::http::ServerRunner runner(host);
  runner.bind(port);

  umax::rs::RsConfig config;
  config.origin = origin_override.empty() ? runner.origin() : origin_override;
  config.as_uri = as_uri;
  config.signing_key = umax::security::SigningKeyPair::load_file(key_file);
  config.root = root;

  umax::rs::ResourceServer server(std::move(config), umax::system_clock(),
                                  std::make_shared<umax::http::Agent>("rs"));
  server.install_routes(runner.server());
  runner.start();
  server.startup();  // discovery + registration; throws when the AS is down
  std::printf("umax-rs listening on %s\n", runner.origin().c_str());
  std::fflush(stdout);
  wait_for_signal();
  runner.stop();
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  std::signal(SIGPIPE, SIG_IGN);
  CLI::App app{"UMA authorization suite"};
  app.require_subcommand(1);

  // keygen
  auto* keygen = app.add_subcommand("keygen", "Generate an Ed25519 signing key");
  std::string kg_kid = "key-1", kg_out, kg_jwks_out;
  keygen->add_option("--kid", kg_kid, "Key id");
  keygen->add_option("--out", kg_out, "Private JWK output file")->required();
  keygen->add_option("--jwks-out", kg_jwks_out, "Also write the public JWKS document");

  // mint-claim
  auto* mint = app.add_subcommand("mint-claim", "Mint a claim token (test IdP)");
  std::string mc_key, mc_issuer, mc_format = "vc", mc_webid, mc_out;
  std::vector<std::string> mc_claims;
  int mc_ttl = 3600;
  mint->add_option("--key", mc_key, "Issuer private JWK file")->required();
  mint->add_option("--issuer", mc_issuer, "Issuer IRI")->required();
  mint->add_option("--format", mc_format, "oidc or vc");
  mint->add_option("--webid", mc_webid, "WebID for oidc tokens");
  mint->add_option("--claim", mc_claims, "key=value entries for vc tokens");
  mint->add_option("--ttl", mc_ttl, "Validity in seconds");
  mint->add_option("--out", mc_out, "Output file (stdout when omitted)");

  // serve-as
  auto* serve_as = app.add_subcommand("serve-as", "Run the authorization server");
  std::string as_bind = "127.0.0.1:4000", as_origin, as_policies, as_key, as_allowlist,
              as_trust;
  int as_ticket_ttl = 300, as_token_ttl = 600, as_max_rounds = 5;
  serve_as->add_option("--bind", as_bind, "host:port");
  serve_as->add_option("--origin", as_origin, "Public origin (defaults to the bind address)");
  serve_as->add_option("--policies", as_policies, "Policies directory (*.policy.json)")
      ->required();
  serve_as->add_option("--key", as_key, "Private JWK file")->required();
  serve_as->add_option("--rs-allowlist", as_allowlist, "Allowlisted RS key sets")->required();
  serve_as->add_option("--trust", as_trust, "Trusted claim issuers");
  serve_as->add_option("--ticket-ttl", as_ticket_ttl, "Permission ticket TTL (s)");
  serve_as->add_option("--token-ttl", as_token_ttl, "Access token TTL (s)");
  serve_as->add_option("--max-rounds", as_max_rounds, "Negotiation round bound");

  // serve-rs
  auto* serve_rs = app.add_subcommand("serve-rs", "Run the resource server");
  std::string rs_bind = "127.0.0.1:4010", rs_origin, rs_as, rs_root, rs_key;
  serve_rs->add_option("--bind", rs_bind, "host:port");
  serve_rs->add_option("--origin", rs_origin, "Public origin (defaults to the bind address)");
  serve_rs->add_option("--as", rs_as, "Authorization server URI")->required();
  serve_rs->add_option("--root", rs_root, "Resource root directory")->required();
  serve_rs->add_option("--key", rs_key, "Private JWK file")->required();

  // access
  auto* access = app.add_subcommand("access", "Access a resource, negotiating when challenged");
  std::string ac_url, ac_method = "GET", ac_body, ac_content_type = "text/plain", ac_audit;
  std::vector<std::string> ac_claims;
  int ac_max_rounds = 5;
  bool ac_eager = false;
  access->add_option("url", ac_url, "Resource URL")->required();
  access->add_option("--method", ac_method, "HTTP method");
  access->add_option("--body", ac_body, "Request body");
  access->add_option("--content-type", ac_content_type, "Body content type");
  access->add_option("--claim", ac_claims, "<file>:<format-uri>, repeatable");
  access->add_option("--audit-dir", ac_audit, "Audit record directory");
  access->add_option("--max-rounds", ac_max_rounds, "Client negotiation bound");
  access->add_flag("--eager", ac_eager, "Push claims with the first token request");

  // request (ticketless)
  auto* request = app.add_subcommand("request", "Request a grant directly from the AS");
  std::string rq_as, rq_resource, rq_resource_type, rq_purpose, rq_audit;
  std::vector<std::string> rq_scopes, rq_claims;
  request->add_option("--as", rq_as, "Authorization server URI")->required();
  request->add_option("--resource", rq_resource, "Resource IRI");
  request->add_option("--resource-type", rq_resource_type, "Resource type IRI");
  request->add_option("--scope", rq_scopes, "Requested scopes")->required();
  request->add_option("--purpose", rq_purpose, "Request purpose IRI");
  request->add_option("--claim", rq_claims, "<file>:<format-uri>, repeatable");
  request->add_option("--audit-dir", rq_audit, "Audit record directory");

  // audit
  auto* audit = app.add_subcommand("audit", "Inspect and verify retained grants");
  audit->require_subcommand(1);
  auto* audit_list = audit->add_subcommand("list", "List retained audit records");
  std::string al_dir = ".";
  audit_list->add_option("--audit-dir", al_dir, "Audit record directory");
  auto* audit_verify = audit->add_subcommand("verify", "Verify retained audit records");
  std::string av_file, av_jwks;
  audit_verify->add_option("record-file", av_file, "Audit record file (JSONL)")->required();
  audit_verify->add_option("--as-jwks", av_jwks, "AS key set captured when the grant was obtained")
      ->required();

  // scenario
  auto* scenario = app.add_subcommand("scenario", "Run a scripted end-to-end flow in-process");
  std::string sc_file;
  scenario->add_option("script-file", sc_file, "Scenario script (JSON)")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*keygen) {
      auto key = umax::security::SigningKeyPair::generate(kg_kid);
      key.save_file(kg_out);
      if (!kg_jwks_out.empty()) {
        std::ofstream out(kg_jwks_out);
        out << umax::security::key_set_for(key).to_json().dump(2) << "\n";
      }
      std::cout << "wrote " << kg_out << "\n";
      return kExitOk;
    }

    if (*mint) {
      auto key = umax::security::SigningKeyPair::load_file(mc_key);
      auto now = umax::system_clock()->now();
      umax::claims::ClaimToken token;
      if (mc_format == "oidc") {
        if (mc_webid.empty()) {
          throw umax::Error(umax::Errc::config_error, "--webid is required for oidc");
        }
        token = umax::claims::issue_oidc_token(key, mc_issuer, mc_webid, now,
                                               std::chrono::seconds{mc_ttl});
      } else if (mc_format == "vc") {
        std::map<std::string, std::string> claim_map;
        for (const auto& entry : mc_claims) {
          auto eq = entry.find('=');
          if (eq == std::string::npos) {
            throw umax::Error(umax::Errc::config_error, "--claim must be key=value");
          }
          claim_map[entry.substr(0, eq)] = entry.substr(eq + 1);
        }
        token = umax::claims::issue_vc_token(key, mc_issuer, claim_map, now,
                                             std::chrono::seconds{mc_ttl});
      } else {
        throw umax::Error(umax::Errc::config_error, "--format must be oidc or vc");
      }
      if (mc_out.empty()) {
        std::cout << token.raw << "\n";
      } else {
        std::ofstream out(mc_out);
        out << token.raw;
        std::cout << "wrote " << mc_out << " (" << token.format << ")\n";
      }
      return kExitOk;
    }

    if (*serve_as) {
      return run_serve_as(as_bind, as_origin, as_policies, as_key, as_allowlist, as_trust,
                          as_ticket_ttl, as_token_ttl, as_max_rounds);
    }

    if (*serve_rs) {
      return run_serve_rs(rs_bind, rs_origin, rs_as, rs_root, rs_key);
    }

    if (*access) {
      umax::client::ClientConfig config;
      config.max_rounds = ac_max_rounds;
      if (!ac_audit.empty()) {
        config.audit_dir = ac_audit;
      }
      umax::client::Client client(config, umax::system_clock(),
                                  std::make_shared<umax::http::Agent>("client"));
      auto tokens = load_claims(ac_claims);
      auto provider = ac_eager ? umax::client::eager_claims(tokens)
                               : umax::client::on_demand_claims(tokens);
      auto result = client.access(ac_url, ac_method, ac_body, ac_content_type, provider);
      print_result(result);
      return exit_code_for(result);
    }

    if (*request) {
      if (rq_resource.empty() == rq_resource_type.empty()) {
        throw umax::Error(umax::Errc::config_error,
                          "exactly one of --resource or --resource-type is required");
      }
      json descriptor = {{"resource_scopes", rq_scopes}};
      if (!rq_resource.empty()) {
        descriptor["resource_id"] = rq_resource;
      } else {
        descriptor["resource_type"] = rq_resource_type;
      }
      if (!rq_purpose.empty()) {
        descriptor["purpose"] = rq_purpose;
      }
      umax::client::ClientConfig config;
      if (!rq_audit.empty()) {
        config.audit_dir = rq_audit;
      }
      umax::client::Client client(config, umax::system_clock(),
                                  std::make_shared<umax::http::Agent>("client"));
      auto result = client.request_direct(rq_as, json::array({descriptor}),
                                          load_claims(rq_claims));
      print_result(result);
      return exit_code_for(result);
    }

    if (*audit_list) {
      umax::client::AuditStore store(al_dir);
      auto records = store.list();
      for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        std::cout << i << "  " << umax::format_rfc3339(r.obtained_at) << "  " << r.as_issuer
                  << "  " << r.permissions.size() << " permission entries, "
                  << r.ticket_trail.size() << " tickets\n";
      }
      std::cout << records.size() << " record(s) in " << store.file().string() << "\n";
      return kExitOk;
    }

    if (*audit_verify) {
      auto keys = umax::security::KeySetDocument::from_json(read_json(av_jwks));
      std::ifstream in(av_file);
      if (!in) {
        throw umax::Error(umax::Errc::io_error, "cannot read " + av_file);
      }
      std::string line;
      int index = 0;
      bool all_ok = true;
      while (std::getline(in, line)) {
        if (line.empty()) {
          continue;
        }
        auto record = umax::client::AuditRecord::from_json(json::parse(line));
        auto report = umax::client::verify_audit(record, keys);
        bool ok = report.signature_valid && report.consistent;
        all_ok = all_ok && ok;
        std::cout << (ok ? "VALID  " : "INVALID") << " record " << index << ": signature="
                  << (report.signature_valid ? "ok" : "bad")
                  << " consistent=" << (report.consistent ? "yes" : "no");
        if (report.signature_valid) {
          std::cout << " window=[" << umax::format_rfc3339(report.issued_at) << ", "
                    << umax::format_rfc3339(report.expires_at) << ")";
        }
        std::cout << "\n";
        ++index;
      }
      return all_ok ? kExitOk : kExitFailure;
    }

    if (*scenario) {
      auto result = umax::harness::run_scenario(read_file(sc_file));
      for (const auto& exchange : result.transcript) {
        std::cout << umax::harness::to_string(exchange) << "\n";
      }
      for (const auto& failure : result.failures) {
        std::cout << "FAIL " << failure << "\n";
      }
      std::cout << (result.ok ? "scenario passed" : "scenario failed") << "\n";
      return result.ok ? kExitOk : kExitFailure;
    }
  } catch (const umax::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitTransport;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitTransport;
  }
  return kExitOk;
}
