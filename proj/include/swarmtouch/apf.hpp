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

#ifndef SWARMTOUCH__APF_HPP_
#define SWARMTOUCH__APF_HPP_

#include "swarmtouch/common.hpp"

#include <nlohmann/json.hpp>

#include <span>

namespace swarmtouch::apf
{

/// Obstacles closer than this saturate the repulsion and flag a proximity violation.
inline constexpr double kProximityEpsilon = 1e-6;

struct ApfParams
{
  double k_att{0.8};    // 1/s
  double k_rep{0.02};   // m^3/s
  double radius{0.5};   // m, sensing sphere around the drone
  double v_max{0.47};   // m/s, clamp on the summed command
  /// Multiply repulsion by (1 - d^2/r^2) so it vanishes continuously at the shell.
  bool smooth_shell{false};
};

void validate(const ApfParams & p);

enum class ObstacleKind { Drone, Hand };

struct Obstacle
{
  Vec3 position{Vec3::Zero()};
  ObstacleKind kind{ObstacleKind::Drone};
};

struct Repulsion
{
  Vec3 force{Vec3::Zero()};
  bool proximity_violation{false};
};

struct Command
{
  Vec3 velocity{Vec3::Zero()};
  bool proximity_violation{false};
};

/// k_att * (goal - pos)
Vec3 attractive_force(const Vec3 & pos, const Vec3 & goal, double k_att);

/// Sum of k_rep * u / d^2 over obstacles with d < radius, u pointing from the
/// obstacle to the drone. Obstacles at d >= radius contribute nothing.
Repulsion repulsive_force(const Vec3 & pos, std::span<const Obstacle> obstacles, const ApfParams & p);

/// Attraction plus repulsion, rescaled to v_max when longer.
Command apf_command(
  const Vec3 & pos, const Vec3 & goal, std::span<const Obstacle> obstacles, const ApfParams & p);

nlohmann::json to_json(const ApfParams & p);
ApfParams apf_params_from_json(const nlohmann::json & j);

}  // namespace swarmtouch::apf

#endif  // SWARMTOUCH__APF_HPP_
