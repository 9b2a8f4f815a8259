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

#ifndef SWARMTOUCH__SERVER__SESSION_HPP_
#define SWARMTOUCH__SERVER__SESSION_HPP_

#include "swarmtouch/server/protocol.hpp"
#include "swarmtouch/sim/config.hpp"
#include "swarmtouch/sim/world.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <vector>

namespace swarmtouch::server
{

/// Everything the live server does except networking: owns the world, applies
/// commands, records, and builds snapshots. Not thread-safe; one owner.
class LiveSession
{
public:
  LiveSession(const sim::ScenarioConfig & config, std::optional<std::filesystem::path> record_dir = std::nullopt);
  ~LiveSession();

  LiveSession(const LiveSession &) = delete;
  LiveSession & operator=(const LiveSession &) = delete;

  /// Applies a parsed command. Returns an error frame when it is rejected.
  std::optional<nlohmann::json> apply(const Command & c);
  /// Parses then applies.
  std::optional<nlohmann::json> apply_text(std::string_view text);

  /// Advances one tick unless paused. Returns whether the world moved.
  bool tick();

  /// Snapshot of the current tick carrying the events gathered since the
  /// previous snapshot.
  nlohmann::json snapshot();
  nlohmann::json status() const;

  bool paused() const { return paused_; }
  double speed() const { return speed_; }
  const sim::World & world() const { return *world_; }
  std::uint64_t rows_recorded() const { return rows_recorded_; }
  void flush();

private:
  void record_events(const std::vector<sim::Event> & events);
  void note(std::string type, nlohmann::json data);

  sim::ScenarioConfig config_;
  sim::LiveHand * live_hand_{nullptr};
  std::unique_ptr<sim::World> world_;
  bool paused_{false};
  double speed_{1.0};
  std::vector<sim::Event> pending_;

  std::optional<std::filesystem::path> record_dir_;
  std::ofstream trace_out_;
  std::ofstream events_out_;
  std::unique_ptr<sim::TraceWriter> writer_;
  std::uint64_t rows_recorded_{0};
  bool record_failed_{false};
};

nlohmann::json snapshot_json(
  const sim::World & world, const std::vector<sim::Event> & events, std::optional<Vec3> hand_target = std::nullopt);

}  // namespace swarmtouch::server

#endif  // SWARMTOUCH__SERVER__SESSION_HPP_
