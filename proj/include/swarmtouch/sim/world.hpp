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

#ifndef SWARMTOUCH__SIM__WORLD_HPP_
#define SWARMTOUCH__SIM__WORLD_HPP_

#include "swarmtouch/apf.hpp"
#include "swarmtouch/haptics.hpp"
#include "swarmtouch/impedance.hpp"
#include "swarmtouch/sim/config.hpp"
#include "swarmtouch/sim/hand.hpp"
#include "swarmtouch/sim/plant.hpp"
#include "swarmtouch/sim/trace.hpp"
#include "swarmtouch/topology.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

namespace swarmtouch::sim
{

/// Shaped reference used while following: `target` is the impedance target for
/// this tick, `reference`/`reference_velocity` the limit-aware path toward it.
struct TrackerState
{
  Vec3 target{Vec3::Zero()};
  Vec3 reference{Vec3::Zero()};
  Vec3 reference_velocity{Vec3::Zero()};
  bool primed{false};
};

struct DroneRuntime
{
  DroneState state{};
  ControllerPhase phase{ControllerPhase::Idle};
  double phase_elapsed_s{0.0};
  Vec3 hold{Vec3::Zero()};  // hover point while idle
  TrackerState tracker{};
  double stall_elapsed_s{0.0};
  bool stall_reported{false};
  bool proximity{false};
};

struct ActivePattern
{
  haptics::PatternSchedule schedule;
  std::uint64_t start_tick{0};
};

struct WorldState
{
  std::uint64_t tick{0};
  double dt{0.01};
  HandState hand{};
  std::vector<DroneRuntime> drones;
  std::vector<impedance::LinkState3> links;  // one per graph edge
  bool engaged{false};
  std::uint64_t seed{0};
  std::optional<ActivePattern> pattern;
  std::vector<Event> events;  // pending, drained by the owner

  /// tick * dt, so n ticks always advance the clock by exactly n * dt.
  double clock() const { return static_cast<double>(tick) * dt; }
};

struct ControllerSettings
{
  ControlMode mode{ControlMode::Impedance};
  apf::ApfParams apf{};
  PlantParams plant{};
  TrackingParams tracking{};
  PhaseParams phases{};
};

/// Applies Idle->Approach (engaged), Approach->Attach (inside attach radius),
/// Attach->Follow (after the dwell) and any->Idle (disengaged). Link states of
/// edges touching a drone are zeroed when it enters Follow or Idle.
void phase_transition(WorldState & w, const topology::LinkGraph & graph, const PhaseParams & p);

/// Commanded velocity for every drone. Advances the link states and trackers of
/// following drones; appends proximity and stall events.
std::vector<Vec3> controller_tick(
  WorldState & w, const topology::LinkGraph & graph, const std::vector<impedance::DiscreteLink> & links,
  const ControllerSettings & s);

class World
{
public:
  World(const ScenarioConfig & config, std::unique_ptr<HandSource> hand);

  const WorldState & state() const { return state_; }
  const topology::LinkGraph & graph() const { return graph_; }
  const ScenarioConfig & config() const { return config_; }
  const impedance::ImpedanceParams & impedance_params() const { return config_.impedance; }
  HandSource & hand_source() { return *hand_; }
  const std::vector<Vec3> & last_commands() const { return last_commands_; }

  /// phase_transition, controller_tick, plant_step, hand advance, tick++.
  void step();

  // Commands; each is logged as a "command" event stamped with the current
  // tick so a recording can be replayed.
  void engage();
  void disengage();
  void set_topology(topology::TopologyKind kind);
  void set_impedance(const impedance::ImpedanceParams & p);
  void trigger_pattern(std::string_view label);

  /// Re-applies a command event read back from a recording.
  void apply_recorded(const Event & e);

  std::vector<Event> drain_events();
  std::vector<TraceRow> rows() const;

private:
  void emit(std::string type, nlohmann::json data);
  void rebuild_links();

  ScenarioConfig config_;
  ControllerSettings settings_;
  topology::LinkGraph graph_;
  std::vector<impedance::DiscreteLink> discrete_;
  std::unique_ptr<HandSource> hand_;
  NoiseSource noise_;
  WorldState state_;
  std::vector<Vec3> last_commands_;
  bool auto_engaged_{false};
};

/// Default start: on the ground one metre behind each slot (-y).
std::vector<Vec3> default_initial_positions(const topology::LinkGraph & graph, const Vec3 & hand);

}  // namespace swarmtouch::sim

#endif  // SWARMTOUCH__SIM__WORLD_HPP_
