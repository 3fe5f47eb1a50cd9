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

#include "umax/as/stores.hpp"

#include <algorithm>

#include "umax/security/encoding.hpp"

namespace umax::as {

RegistrationStore::CreateResult RegistrationStore::create(Registration registration) {
  std::lock_guard lock(mutex_);
  auto key = std::make_pair(registration.rs_origin, registration.resource_id);
  if (auto it = by_rs_resource_.find(key); it != by_rs_resource_.end()) {
    return CreateResult{false, it->second};
  }
  std::string id;
  do {
    id = security::random_token();
  } while (by_id_.contains(id));
  registration.id = id;
  by_rs_resource_.emplace(std::move(key), id);
  by_id_.emplace(id, std::move(registration));
  return CreateResult{true, id};
}

std::optional<Registration> RegistrationStore::get(const std::string& id) const {
  std::lock_guard lock(mutex_);
  auto it = by_id_.find(id);
  if (it == by_id_.end()) {
    return std::nullopt;
  }
  return it->second;
}

bool RegistrationStore::update(const std::string& id, const Registration& updated) {
  std::lock_guard lock(mutex_);
  auto it = by_id_.find(id);
  if (it == by_id_.end()) {
    return false;
  }
  it->second.name = updated.name;
  it->second.resource_type = updated.resource_type;
  it->second.scopes = updated.scopes;
  return true;
}

std::optional<Registration> RegistrationStore::remove(const std::string& id) {
  std::lock_guard lock(mutex_);
  auto it = by_id_.find(id);
  if (it == by_id_.end()) {
    return std::nullopt;
  }
  Registration removed = it->second;
  by_rs_resource_.erase(std::make_pair(removed.rs_origin, removed.resource_id));
  by_id_.erase(it);
  return removed;
}

std::optional<Registration> RegistrationStore::find_by_resource(
    const std::string& resource_id) const {
  std::lock_guard lock(mutex_);
  for (const auto& [id, reg] : by_id_) {
    if (reg.resource_id == resource_id) {
      return reg;
    }
  }
  return std::nullopt;
}

std::vector<Registration> RegistrationStore::find_by_type(
    const std::string& resource_type) const {
  std::lock_guard lock(mutex_);
  std::vector<Registration> out;
  for (const auto& [id, reg] : by_id_) {
    if (reg.resource_type == resource_type) {
      out.push_back(reg);
    }
  }
  return out;
}

std::vector<std::string> RegistrationStore::ids_for(const std::string& rs_origin) const {
  std::lock_guard lock(mutex_);
  std::vector<std::string> out;
  for (const auto& [key, id] : by_rs_resource_) {
    if (key.first == rs_origin) {
      out.push_back(id);
    }
  }
  return out;
}

std::string TicketStore::issue(std::vector<TicketItem> items, int round, Instant now,
                               std::chrono::seconds ttl) {
  std::lock_guard lock(mutex_);
  // opportunistic purge of expired tickets
  std::erase_if(live_, [&](const auto& entry) {
    return now >= entry.second.issued_at + entry.second.ttl;
  });
  std::string value;
  do {
    value = security::random_token();
  } while (live_.contains(value));
  live_.emplace(value, Ticket{value, now, ttl, std::move(items), round});
  return value;
}

std::optional<Ticket> TicketStore::consume(const std::string& value, Instant now) {
  std::lock_guard lock(mutex_);
  auto it = live_.find(value);
  if (it == live_.end()) {
    return std::nullopt;
  }
  Ticket ticket = std::move(it->second);
  live_.erase(it);
  if (now >= ticket.issued_at + ticket.ttl) {
    return std::nullopt;
  }
  return ticket;
}

void TicketStore::invalidate_registration(const std::string& registration_id) {
  std::lock_guard lock(mutex_);
  std::erase_if(live_, [&](const auto& entry) {
    return std::any_of(entry.second.items.begin(), entry.second.items.end(),
                       [&](const TicketItem& item) {
                         return item.registration_id == registration_id;
                       });
  });
}

}  // namespace umax::as
