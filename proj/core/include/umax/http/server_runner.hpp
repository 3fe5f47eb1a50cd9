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

#include <httplib.h>

#include <memory>
#include <string>
#include <thread>

namespace umax::http {

// Owns an httplib server plus its listener thread. bind() first (port 0
// picks an ephemeral port), install routes, then start().
class ServerRunner {
 public:
  explicit ServerRunner(std::string host = "127.0.0.1");
  ~ServerRunner();

  ServerRunner(const ServerRunner&) = delete;
  ServerRunner& operator=(const ServerRunner&) = delete;

  // Returns the bound port. Throws Error(config_error) when the bind fails.
  int bind(int port = 0);
  void start();
  void stop();

  httplib::Server& server() { return *server_; }
  const std::string& origin() const { return origin_; }
  int port() const { return port_; }

 private:
  std::string host_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  std::string origin_;
  int port_ = 0;
  bool started_ = false;
};

}  // namespace umax::http
