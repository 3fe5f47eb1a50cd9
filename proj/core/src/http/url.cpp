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

#include "umax/http/url.hpp"

#include <cctype>

#include "umax/util/error.hpp"

namespace umax::http {

Url Url::parse(const std::string& text) {
  std::string::size_type scheme_end;
  if (text.rfind("http://", 0) == 0) {
    scheme_end = 7;
  } else if (text.rfind("https://", 0) == 0) {
    scheme_end = 8;
  } else {
    throw Error(Errc::config_error, "not an absolute http(s) URL: '" + text + "'");
  }
  auto path_start = text.find('/', scheme_end);
  if (path_start == std::string::npos) {
    return Url{text, "/"};
  }
  if (path_start == scheme_end) {
    throw Error(Errc::config_error, "empty host in URL: '" + text + "'");
  }
  return Url{text.substr(0, path_start), text.substr(path_start)};
}

bool is_absolute_iri(const std::string& iri) {
  if (iri.empty() || !std::isalpha(static_cast<unsigned char>(iri[0]))) {
    return false;
  }
  for (std::size_t i = 1; i < iri.size(); ++i) {
    char c = iri[i];
    if (c == ':') {
      return i + 1 < iri.size();
    }
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '+' && c != '-' && c != '.') {
      return false;
    }
  }
  return false;
}

}  // namespace umax::http
