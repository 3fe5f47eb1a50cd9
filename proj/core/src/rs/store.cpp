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

#include "umax/rs/store.hpp"

#include <json.hpp>

#include <fstream>
#include <mutex>

#include "umax/util/error.hpp"

namespace umax::rs {

namespace {
constexpr const char* kMetaFile = ".rsmeta.json";

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(Errc::io_error, "cannot read " + path.string());
  }
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(Errc::io_error, "cannot write " + path.string());
  }
  out.write(body.data(), static_cast<std::streamsize>(body.size()));
}
}  // namespace

std::string content_type_for_extension(const std::string& path) {
  auto dot = path.rfind('.');
  std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
  if (ext == "json") return "application/json";
  if (ext == "png") return "image/png";
  if (ext == "jpg" || ext == "jpeg") return "image/jpeg";
  if (ext == "html") return "text/html";
  if (ext == "txt") return "text/plain";
  if (ext == "ttl") return "text/turtle";
  return "application/octet-stream";
}

ResourceStore::ResourceStore(std::filesystem::path root) : root_(std::move(root)) {}

std::optional<std::string> ResourceStore::normalize_path(const std::string& raw) {
  if (raw.empty() || raw.front() != '/') {
    return std::nullopt;
  }
  if (raw.find("//") != std::string::npos || raw.find('\\') != std::string::npos) {
    return std::nullopt;
  }
  // reject dot segments
  std::size_t pos = 0;
  while (pos < raw.size()) {
    auto next = raw.find('/', pos + 1);
    std::string segment = raw.substr(pos + 1, (next == std::string::npos ? raw.size() : next) -
                                                  pos - 1);
    if (segment == "." || segment == "..") {
      return std::nullopt;
    }
    if (next == std::string::npos) {
      break;
    }
    pos = next;
  }
  return raw;
}

std::filesystem::path ResourceStore::file_for(const std::string& path) const {
  return root_ / std::filesystem::path(path.substr(1));
}

void ResourceStore::load() {
  std::unique_lock lock(mutex_);
  resources_.clear();

  nlohmann::json meta = nlohmann::json::object();
  auto meta_path = root_ / kMetaFile;
  if (std::filesystem::exists(meta_path)) {
    meta = nlohmann::json::parse(read_file(meta_path), nullptr, false);
    if (meta.is_discarded() || !meta.is_object()) {
      throw Error(Errc::config_error, "corrupt meta document " + meta_path.string());
    }
  }
  auto meta_for = [&](const std::string& path) {
    std::optional<std::string> content_type;
    std::optional<std::string> resource_type;
    if (meta.contains(path)) {
      const auto& entry = meta.at(path);
      if (entry.contains("contentType")) {
        content_type = entry.at("contentType").get<std::string>();
      }
      if (entry.contains("resourceType")) {
        resource_type = entry.at("resourceType").get<std::string>();
      }
    }
    return std::make_pair(content_type, resource_type);
  };

  StoredResource root;
  root.path = "/";
  root.container = true;
  root.resource_type = meta_for("/").second;
  resources_.emplace("/", std::move(root));

  for (const auto& entry : std::filesystem::recursive_directory_iterator(root_)) {
    auto rel = std::filesystem::relative(entry.path(), root_).generic_string();
    if (rel == kMetaFile) {
      continue;
    }
    StoredResource resource;
    if (entry.is_directory()) {
      resource.path = "/" + rel + "/";
      resource.container = true;
    } else if (entry.is_regular_file()) {
      resource.path = "/" + rel;
      resource.body = read_file(entry.path());
    } else {
      continue;
    }
    auto [content_type, resource_type] = meta_for(resource.path);
    resource.resource_type = resource_type;
    if (!resource.container) {
      resource.content_type = content_type.value_or(content_type_for_extension(resource.path));
    }
    resources_.emplace(resource.path, std::move(resource));
  }
}

bool ResourceStore::exists(const std::string& path) const {
  std::shared_lock lock(mutex_);
  return resources_.contains(path);
}

std::optional<StoredResource> ResourceStore::get(const std::string& path) const {
  std::shared_lock lock(mutex_);
  auto it = resources_.find(path);
  if (it == resources_.end()) {
    return std::nullopt;
  }
  return it->second;
}

std::vector<std::string> ResourceStore::children(const std::string& container_path) const {
  std::shared_lock lock(mutex_);
  std::vector<std::string> out;
  for (const auto& [path, resource] : resources_) {
    if (path == container_path || !path.starts_with(container_path)) {
      continue;
    }
    // direct children only
    auto rest = path.substr(container_path.size());
    auto slash = rest.find('/');
    if (slash == std::string::npos || slash == rest.size() - 1) {
      out.push_back(path);
    }
  }
  return out;
}

std::vector<StoredResource> ResourceStore::list() const {
  std::shared_lock lock(mutex_);
  std::vector<StoredResource> out;
  out.reserve(resources_.size());
  for (const auto& [path, resource] : resources_) {
    out.push_back(resource);
  }
  return out;
}

void ResourceStore::put(const std::string& path, std::string body, std::string content_type,
                        std::optional<std::string> resource_type) {
  std::unique_lock lock(mutex_);
  StoredResource resource;
  resource.path = path;
  resource.body = std::move(body);
  resource.content_type =
      content_type.empty() ? content_type_for_extension(path) : std::move(content_type);
  if (auto it = resources_.find(path); it != resources_.end() && !resource_type) {
    resource.resource_type = it->second.resource_type;  // keep type on replace
  } else {
    resource.resource_type = std::move(resource_type);
  }
  write_file(file_for(path), resource.body);
  resources_[path] = std::move(resource);
  save_meta_locked();
}

bool ResourceStore::remove(const std::string& path) {
  std::unique_lock lock(mutex_);
  auto it = resources_.find(path);
  if (it == resources_.end() || it->second.container) {
    return false;
  }
  std::error_code ec;
  std::filesystem::remove(file_for(path), ec);
  resources_.erase(it);
  save_meta_locked();
  return true;
}

void ResourceStore::save_meta_locked() {
  nlohmann::json meta = nlohmann::json::object();
  for (const auto& [path, resource] : resources_) {
    nlohmann::json entry = nlohmann::json::object();
    if (!resource.container) {
      entry["contentType"] = resource.content_type;
    }
    if (resource.resource_type) {
      entry["resourceType"] = *resource.resource_type;
    }
    if (!entry.empty()) {
      meta[path] = entry;
    }
  }
  write_file(root_ / kMetaFile, meta.dump(2));
}

}  // namespace umax::rs
