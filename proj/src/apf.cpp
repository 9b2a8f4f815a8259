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

#include "swarmtouch/apf.hpp"

#include <cmath>
#include <set>
#include <string>

namespace swarmtouch::apf
{

void validate(const ApfParams & p)
{
  if (!(p.k_att > 0.0) || !(p.k_rep > 0.0) || !(p.radius > 0.0) || !(p.v_max > 0.0)) {
    throw ConfigError("APF gains, radius and v_max must all be positive");
  }
}

Vec3 attractive_force(const Vec3 & pos, const Vec3 & goal, double k_att) { return k_att * (goal - pos); }

Repulsion repulsive_force(const Vec3 & pos, std::span<const Obstacle> obstacles, const ApfParams & p)
{
  Repulsion out;
  for (const auto & obs : obstacles) {
    const Vec3 away = pos - obs.position;
    double d = away.norm();
    if (d >= p.radius) {
      continue;
    }
    Vec3 unit = d > 0.0 ? Vec3(away / d) : Vec3::UnitZ();
    if (d < kProximityEpsilon) {
      out.proximity_violation = true;
      d = kProximityEpsilon;
    }
    double magnitude = p.k_rep / (d * d);
    if (p.smooth_shell) {
      magnitude *= 1.0 - (d * d) / (p.radius * p.radius);
    }
    out.force += magnitude * unit;
  }
  return out;
}

Command apf_command(
  const Vec3 & pos, const Vec3 & goal, std::span<const Obstacle> obstacles, const ApfParams & p)
{
  const auto rep = repulsive_force(pos, obstacles, p);
  Command cmd;
  cmd.velocity = clamp_norm(attractive_force(pos, goal, p.k_att) + rep.force, p.v_max);
  cmd.proximity_violation = rep.proximity_violation;
  return cmd;
}

nlohmann::json to_json(const ApfParams & p)
{
  return {
    {"k_att", p.k_att}, {"k_rep", p.k_rep}, {"radius", p.radius}, {"v_max", p.v_max},
    {"smooth_shell", p.smooth_shell}};
}

ApfParams apf_params_from_json(const nlohmann::json & j)
{
  static const std::set<std::string> known{"k_att", "k_rep", "radius", "v_max", "smooth_shell"};
  for (const auto & [key, _] : j.items()) {
    if (!known.count(key)) {
      throw ConfigError("unknown apf field '" + key + "'");
    }
  }
  ApfParams p;
  p.k_att = j.value("k_att", p.k_att);
  p.k_rep = j.value("k_rep", p.k_rep);
  p.radius = j.value("radius", p.radius);
  p.v_max = j.value("v_max", p.v_max);
  p.smooth_shell = j.value("smooth_shell", p.smooth_shell);
  validate(p);
  return p;
}

}  // namespace swarmtouch::apf
