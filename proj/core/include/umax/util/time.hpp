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

#include <atomic>
#include <chrono>
#include <cstdint>
#include <memory>
#include <string>

namespace umax {

// All protocol timestamps are UTC with second precision.
using Instant = std::chrono::time_point<std::chrono::system_clock, std::chrono::seconds>;

Instant instant_from_unix(std::int64_t seconds);
std::int64_t instant_to_unix(Instant t);

// Strict RFC 3339 "YYYY-MM-DDTHH:MM:SSZ". Throws Error(malformed_document)
// on anything else.
Instant parse_rfc3339(const std::string& text);
std::string format_rfc3339(Instant t);

// Time source handed to every component so tests and the scenario harness
// can drive one logical clock across parties.
class Clock {
 public:
  virtual ~Clock() = default;
  virtual Instant now() const = 0;
};

class SystemClock final : public Clock {
 public:
  Instant now() const override;
};

class ManualClock final : public Clock {
 public:
  explicit ManualClock(Instant start) : unix_seconds_(instant_to_unix(start)) {}

  Instant now() const override { return instant_from_unix(unix_seconds_.load()); }
  void set(Instant t) { unix_seconds_.store(instant_to_unix(t)); }
  void advance(std::int64_t seconds) { unix_seconds_.fetch_add(seconds); }

 private:
  std::atomic<std::int64_t> unix_seconds_;
};

using ClockRef = std::shared_ptr<const Clock>;

ClockRef system_clock();

}  // namespace umax
