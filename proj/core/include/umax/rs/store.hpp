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

#include <filesystem>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

namespace umax::rs {

// A stored resource; containers are directory-like paths ending in "/".
struct StoredResource {
  std::string path;  // normalized, rooted
  std::string content_type;
  std::string body;
  std::optional<std::string> resource_type;
  bool container = false;
};

// Disk-backed flat resource store. Bodies live as files under the root
// directory; content and resource types in a sidecar meta document.
// Concurrent readers are fine; callers serialize writes.
class ResourceStore {
 public:
  explicit ResourceStore(std::filesystem::path root);

  void load();

  bool exists(const std::string& path) const;
  std::optional<StoredResource> get(const std::string& path) const;
  std::vector<std::string> children(const std::string& container_path) const;
  // Sorted; containers included.
  std::vector<StoredResource> list() const;

  // Creates or replaces a non-container resource and persists it.
  void put(const std::string& path, std::string body, std::string content_type,
           std::optional<std::string> resource_type);
  bool remove(const std::string& path);

  // Rejects dot-segments, duplicate slashes and unrooted paths.
  static std::optional<std::string> normalize_path(const std::string& raw);

 private:
  std::filesystem::path file_for(const std::string& path) const;
  void save_meta_locked();

  std::filesystem::path root_;
  mutable std::shared_mutex mutex_;
  std::map<std::string, StoredResource> resources_;
};

std::string content_type_for_extension(const std::string& path);

}  // namespace umax::rs
