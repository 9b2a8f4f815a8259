// Copyright 2026 The SwarmTouch Authors
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

#ifndef SWARMTOUCH__SERVER__SERVER_HPP_
#define SWARMTOUCH__SERVER__SERVER_HPP_

#include "swarmtouch/sim/config.hpp"

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

namespace swarmtouch::server
{

struct ServerOptions
{
  std::string address{"127.0.0.1"};
  unsigned short port{8080};  // 0 picks a free port
  std::filesystem::path static_dir{"web"};
  std::optional<std::filesystem::path> record_dir;
  double speed{1.0};
};

/// "host:port" -> (host, port). Throws ConfigError.
std::pair<std::string, unsigned short> parse_bind(std::string_view bind);

/// WebSocket endpoint /ws plus static files at /. One thread runs the
/// simulation in real time, one runs the network; they meet only at the
/// command queue and the snapshot broadcast.
class SteerServer
{
public:
  SteerServer(const sim::ScenarioConfig & config, ServerOptions options);
  ~SteerServer();

  SteerServer(const SteerServer &) = delete;
  SteerServer & operator=(const SteerServer &) = delete;

  /// Binds and launches the threads. Throws on bind failure.
  void start();
  /// Stops both threads and flushes any recording. Idempotent.
  void stop();
  /// Blocks until stop() is called from elsewhere.
  void wait();
  unsigned short port() const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace swarmtouch::server

#endif  // SWARMTOUCH__SERVER__SERVER_HPP_
