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

#include "umax/util/time.hpp"

#include <cstdio>
#include <ctime>

#include "umax/util/error.hpp"

namespace umax {

Instant instant_from_unix(std::int64_t seconds) {
  return Instant{std::chrono::seconds{seconds}};
}

std::int64_t instant_to_unix(Instant t) {
  return t.time_since_epoch().count();
}

Instant parse_rfc3339(const std::string& text) {
  int year = 0, month = 0, day = 0, hour = 0, minute = 0, second = 0;
  char zone = 0, trailing = 0;
  int n = std::sscanf(text.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d%c%c", &year, &month, &day,
                      &hour, &minute, &second, &zone, &trailing);
  if (n != 7 || zone != 'Z' || text.size() != 20) {
    throw Error(Errc::malformed_document, "expected RFC 3339 UTC instant, got '" + text + "'");
  }
  if (month < 1 || month > 12 || day < 1 || day > 31 || hour > 23 || minute > 59 || second > 60) {
    throw Error(Errc::malformed_document, "out-of-range instant '" + text + "'");
  }
  std::tm tm{};
  tm.tm_year = year - 1900;
  tm.tm_mon = month - 1;
  tm.tm_mday = day;
  tm.tm_hour = hour;
  tm.tm_min = minute;
  tm.tm_sec = second;
  time_t epoch = timegm(&tm);
  if (epoch == static_cast<time_t>(-1)) {
    throw Error(Errc::malformed_document, "unrepresentable instant '" + text + "'");
  }
  return instant_from_unix(static_cast<std::int64_t>(epoch));
}

std::string format_rfc3339(Instant t) {
  time_t epoch = static_cast<time_t>(instant_to_unix(t));
  std::tm tm{};
  gmtime_r(&epoch, &tm);
  char buf[80];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", tm.tm_year + 1900,
                tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec);
  return buf;
}

Instant SystemClock::now() const {
  return std::chrono::time_point_cast<std::chrono::seconds>(std::chrono::system_clock::now());
}

ClockRef system_clock() {
  static const auto instance = std::make_shared<SystemClock>();
  return instance;
}

}  // namespace umax
