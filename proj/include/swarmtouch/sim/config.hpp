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

#ifndef SWARMTOUCH__SIM__CONFIG_HPP_
#define SWARMTOUCH__SIM__CONFIG_HPP_

#include "swarmtouch/apf.hpp"
#include "swarmtouch/bench/trajectory.hpp"
#include "swarmtouch/impedance.hpp"
#include "swarmtouch/sim/hand.hpp"
#include "swarmtouch/sim/plant.hpp"
#include "swarmtouch/topology.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace swarmtouch::sim
{

enum class ControlMode { Impedance, PotentialField };

std::string to_string(ControlMode m);
ControlMode parse_control_mode(const std::string & s);

enum class ControllerPhase { Idle, Approach, Attach, Follow };

std::string to_string(ControllerPhase p);
ControllerPhase parse_phase(const std::string & s);

/// Shapes the per-tick impedance target into a reference the plant can follow
/// without overshoot, then tracks it with feedforward plus proportional feedback.
struct TrackingParams
{
  double gain{3.0};            // 1/s, feedback on the shaped reference
  double shaping_gain{5.0};    // 1/s, closing rate of the shaped reference
  double accel_fraction{0.75}; // of plant a_max
  double speed_fraction{0.9};  // of plant v_max
};

struct PhaseParams
{
  double attach_radius{0.05};    // m
  double attach_dwell_s{0.5};
  double stall_speed{1e-3};      // m/s, below this an approach counts as stalled
  double stall_time_s{2.0};
  ControllerPhase initial{ControllerPhase::Idle};  // Idle or Follow
  std::optional<double> engage_at_s{0.0};          // empty: wait for a command
};

struct EdgeOverride
{
  topology::NodeId a{topology::kHand};
  topology::NodeId b{0};
  impedance::ImpedanceParams params{};
};

struct HandConfig
{
  std::string source{"static"};  // static | square | step | trace | live
  Vec3 position{0.0, 0.0, 1.0};  // static, live, step origin
  Vec3 step_to{0.5, 0.0, 1.0};
  double step_at_s{1.0};
  bench::SquareParams square{};
  std::string trace_path;        // CSV written by run / serve --record
  double smoothing_s{0.1};       // live only
};

struct ScenarioConfig
{
  std::uint64_t seed{1};
  double dt{0.01};
  std::optional<double> duration_s;  // defaults to the square length, else 10 s
  ControlMode controller{ControlMode::Impedance};
  topology::TopologyConfig topology{};
  impedance::ImpedanceParams impedance{impedance::critically_damped(1.9, 20.88)};
  std::vector<EdgeOverride> edge_overrides;
  apf::ApfParams apf{};
  PlantParams plant{};
  TrackingParams tracking{};
  PhaseParams phases{};
  std::vector<Vec3> initial_positions;  // empty: on the ground below-behind each slot
  HandConfig hand{};
  double snapshot_hz{30.0};

  std::uint64_t tick_count() const;
};

/// Parses and validates. Unknown keys anywhere are rejected with ConfigError.
ScenarioConfig scenario_from_json(const nlohmann::json & j);
ScenarioConfig load_scenario(const std::filesystem::path & path);
nlohmann::json to_json(const ScenarioConfig & c);

/// Impedance block: {"M", "K", "K_v", "D"?}. Without D the link is made
/// critically damped; with D it must already be.
impedance::ImpedanceParams impedance_from_json(const nlohmann::json & j);
nlohmann::json to_json(const impedance::ImpedanceParams & p);

/// Graph for the config: topology plus per-edge overrides, validated.
topology::LinkGraph build_graph(const ScenarioConfig & c);

std::unique_ptr<HandSource> make_hand_source(const ScenarioConfig & c);

/// Reads a trace CSV's hand column, one sample per tick, with `initial` as tick 0.
std::vector<Vec3> hand_samples_from_trace(const std::filesystem::path & csv, const Vec3 & initial);

Vec3 vec3_from_json(const nlohmann::json & j);
nlohmann::json to_json(const Vec3 & v);

}  // namespace swarmtouch::sim

#endif  // SWARMTOUCH__SIM__CONFIG_HPP_
