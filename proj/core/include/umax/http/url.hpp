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

#include <string>

namespace umax::http {

// Minimal split of an absolute http(s) URL into origin and target.
struct Url {
  std::string origin;  // scheme://host[:port]
  std::string target;  // path[?query], "/" when absent

  std::string full() const { return origin + target; }

  // Throws Error(config_error) unless `text` is an absolute http(s) URL.
  static Url parse(const std::string& text);
};

// True when `iri` has a scheme (any URI scheme, not just http).
bool is_absolute_iri(const std::string& iri);

}  // namespace umax::http
