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

#include "umax/http/server_runner.hpp"

#include <chrono>

#include "umax/util/error.hpp"

namespace umax::http {

ServerRunner::ServerRunner(std::string host)
    : host_(std::move(host)), server_(std::make_unique<httplib::Server>()) {}

ServerRunner::~ServerRunner() { stop(); }

int ServerRunner::bind(int port) {
  if (port == 0) {
    port_ = server_->bind_to_any_port(host_);
    if (port_ < 0) {
      throw Error(Errc::config_error, "could not bind an ephemeral port on " + host_);
    }
  } else {
    if (!server_->bind_to_port(host_, port)) {
      throw Error(Errc::config_error,
                  "could not bind " + host_ + ":" + std::to_string(port));
    }
    port_ = port;
  }
  origin_ = "http://" + host_ + ":" + std::to_string(port_);
  return port_;
}

void ServerRunner::start() {
  if (started_) {
    return;
  }
  started_ = true;
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  while (!server_->is_running()) {
    std::this_thread::sleep_for(std::chrono::milliseconds(1));
  }
}

void ServerRunner::stop() {
  if (started_) {
    server_->stop();
    thread_.join();
    started_ = false;
  }
}

}  // namespace umax::http
