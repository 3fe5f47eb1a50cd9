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

#include <chrono>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "umax/util/time.hpp"

namespace umax::as {

// A resource set registered by an RS. rs_origin always comes from the
// authenticated signer, never from a request body.
struct Registration {
  std::string id;  // AS-assigned, 256-bit random
  std::string rs_origin;
  std::string resource_id;  // the resource's IRI at the RS
  std::optional<std::string> name;
  std::optional<std::string> resource_type;
  std::vector<std::string> scopes;  // non-empty subset of the action vocabulary
};

// check-and-insert is atomic: concurrent duplicate registrations resolve to
// exactly one success.
class RegistrationStore {
 public:
  struct CreateResult {
    bool created = false;
    std::string id;  // fresh on success, the existing id on duplicates
  };

  CreateResult create(Registration registration);
  std::optional<Registration> get(const std::string& id) const;
  // Replaces name/type/scopes; false when id is unknown.
  bool update(const std::string& id, const Registration& updated);
  std::optional<Registration> remove(const std::string& id);

  std::optional<Registration> find_by_resource(const std::string& resource_id) const;
  std::vector<Registration> find_by_type(const std::string& resource_type) const;
  std::vector<std::string> ids_for(const std::string& rs_origin) const;

 private:
  mutable std::mutex mutex_;
  std::map<std::string, Registration> by_id_;
  std::map<std::pair<std::string, std::string>, std::string> by_rs_resource_;
};

// One negotiation step: the registration, the requested scopes and — for
// ticketless sessions — the request purpose, which must survive rotation.
struct TicketItem {
  std::string registration_id;
  std::vector<std::string> scopes;
  std::optional<std::string> purpose;
};

struct Ticket {
  std::string value;
  Instant issued_at{};
  std::chrono::seconds ttl{};
  std::vector<TicketItem> items;
  int round = 0;
};

// Single-use store: consume() removes the ticket no matter the outcome, and
// at most one concurrent caller can win a given value.
class TicketStore {
 public:
  std::string issue(std::vector<TicketItem> items, int round, Instant now,
                    std::chrono::seconds ttl);
  std::optional<Ticket> consume(const std::string& value, Instant now);
  void invalidate_registration(const std::string& registration_id);

 private:
  mutable std::mutex mutex_;
  std::map<std::string, Ticket> live_;
};

}  // namespace umax::as
