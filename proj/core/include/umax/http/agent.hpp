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

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

namespace umax::http {

struct Request {
  std::string method;
  std::string url;  // absolute
  std::vector<std::pair<std::string, std::string>> headers;
  std::string body;
  std::string content_type;
};

struct Response {
  int status = 0;  // 0 = transport failure
  std::multimap<std::string, std::string> headers;
  std::string body;
  std::string transport_error;

  bool transport_failed() const { return status == 0; }
  std::string header(const std::string& name) const;
};

// One recorded outbound exchange; `party` names the originator.
struct Exchange {
  std::string party;
  std::string method;
  std::string url;
  int status = 0;
};

using ExchangeRecorder = std::function<void(const Exchange&)>;

// Outbound HTTP for one protocol party. Every component performs its
// network I/O through an Agent so the scenario harness can transcribe all
// traffic without touching component logic.
class Agent {
 public:
  explicit Agent(std::string party, ExchangeRecorder recorder = nullptr);

  Response send(const Request& request);

  const std::string& party() const { return party_; }

 private:
  std::string party_;
  ExchangeRecorder recorder_;
};

using AgentRef = std::shared_ptr<Agent>;

// application/x-www-form-urlencoded helpers (ordered pairs, repeated keys
// allowed).
using FormFields = std::vector<std::pair<std::string, std::string>>;
std::string form_encode(const FormFields& fields);
FormFields form_decode(const std::string& body);
std::string url_encode_component(const std::string& value);

}  // namespace umax::http
