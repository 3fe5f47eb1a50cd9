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

#include "umax/http/agent.hpp"

#include <httplib.h>

#include <cctype>

#include "umax/http/url.hpp"
#include "umax/util/log.hpp"

namespace umax::http {

std::string Response::header(const std::string& name) const {
  auto it = headers.find(name);
  return it == headers.end() ? std::string{} : it->second;
}

Agent::Agent(std::string party, ExchangeRecorder recorder)
    : party_(std::move(party)), recorder_(std::move(recorder)) {}

Response Agent::send(const Request& request) {
  Response out;
  try {
    Url url = Url::parse(request.url);
    httplib::Client cli(url.origin);
    cli.set_connection_timeout(5, 0);
    cli.set_read_timeout(10, 0);

    httplib::Request req;
    req.method = request.method;
    req.path = url.target;
    for (const auto& [name, value] : request.headers) {
      req.set_header(name, value);
    }
    if (!request.body.empty() || request.method == "POST" || request.method == "PUT" ||
        request.method == "PATCH") {
      req.body = request.body;
      if (!request.content_type.empty()) {
        req.set_header("Content-Type", request.content_type);
      }
    }

    auto result = cli.send(req);
    if (result) {
      out.status = result->status;
      for (const auto& [name, value] : result->headers) {
        out.headers.emplace(name, value);
      }
      out.body = result->body;
    } else {
      out.transport_error = httplib::to_string(result.error());
    }
  } catch (const std::exception& e) {
    out.transport_error = e.what();
  }

  if (recorder_) {
    recorder_(Exchange{party_, request.method, request.url, out.status});
  }
  if (out.transport_failed()) {
    util::log().debug("{} {} {} failed: {}", party_, request.method, request.url,
                      out.transport_error);
  }
  return out;
}

std::string url_encode_component(const std::string& value) {
  static const char* hex = "0123456789ABCDEF";
  std::string out;
  out.reserve(value.size());
  for (unsigned char c : value) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('%');
      out.push_back(hex[c >> 4]);
      out.push_back(hex[c & 0x0F]);
    }
  }
  return out;
}

std::string form_encode(const FormFields& fields) {
  std::string out;
  for (const auto& [key, value] : fields) {
    if (!out.empty()) {
      out.push_back('&');
    }
    out += url_encode_component(key);
    out.push_back('=');
    out += url_encode_component(value);
  }
  return out;
}

namespace {
int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

std::string url_decode_component(const std::string& value) {
  std::string out;
  out.reserve(value.size());
  for (std::size_t i = 0; i < value.size(); ++i) {
    char c = value[i];
    if (c == '+') {
      out.push_back(' ');
    } else if (c == '%' && i + 2 < value.size() && hex_value(value[i + 1]) >= 0 &&
               hex_value(value[i + 2]) >= 0) {
      out.push_back(static_cast<char>(hex_value(value[i + 1]) * 16 + hex_value(value[i + 2])));
      i += 2;
    } else {
      out.push_back(c);
    }
  }
  return out;
}
}  // namespace

FormFields form_decode(const std::string& body) {
  FormFields fields;
  std::size_t pos = 0;
  while (pos <= body.size()) {
    auto amp = body.find('&', pos);
    if (amp == std::string::npos) amp = body.size();
    if (amp > pos) {
      std::string pair = body.substr(pos, amp - pos);
      auto eq = pair.find('=');
      if (eq == std::string::npos) {
        fields.emplace_back(url_decode_component(pair), "");
      } else {
        fields.emplace_back(url_decode_component(pair.substr(0, eq)),
                            url_decode_component(pair.substr(eq + 1)));
      }
    }
    pos = amp + 1;
  }
  return fields;
}

}  // namespace umax::http
