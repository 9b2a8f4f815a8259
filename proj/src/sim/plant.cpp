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

#include "swarmtouch/sim/plant.hpp"

#include <cmath>
#include <set>
#include <string>

namespace swarmtouch::sim
{

void validate(const PlantParams & p)
{
  if (!(p.tau > 0.0) || !(p.v_max > 0.0) || !(p.a_max > 0.0) || !(p.noise_sigma >= 0.0)) {
    throw ConfigError("plant needs tau, v_max, a_max > 0 and noise_sigma >= 0");
  }
}

DroneState plant_step(const DroneState & d, const Vec3 & cmd, const PlantParams & p, double dt, NoiseSource & noise)
{
  if (!(dt > 0.0)) {
    throw DomainError("plant_step requires dt > 0");
  }
  const Vec3 wanted = clamp_norm(cmd, p.v_max);
  const double blend = 1.0 - std::exp(-dt / p.tau);
  const Vec3 dv = clamp_norm((wanted - d.velocity) * blend, p.a_max * dt);

  DroneState out;
  out.velocity = d.velocity + dv;
  const Vec3 jitter = noise.draw() * p.noise_sigma;
  out.position = d.position + out.velocity * dt + jitter;
  if (out.position.z() < 0.0) {
    out.position.z() = 0.0;
    out.velocity.z() = std::max(0.0, out.velocity.z());
  }
  return out;
}

nlohmann::json to_json(const PlantParams & p)
{
  return {{"tau", p.tau}, {"v_max", p.v_max}, {"a_max", p.a_max}, {"noise_sigma", p.noise_sigma}};
}

PlantParams plant_params_from_json(const nlohmann::json & j)
{
  static const std::set<std::string> known{"tau", "v_max", "a_max", "noise_sigma"};
  for (const auto & [key, _] : j.items()) {
    if (!known.count(key)) {
      throw ConfigError("unknown plant field '" + key + "'");
    }
  }
  PlantParams p;
  p.tau = j.value("tau", p.tau);
  p.v_max = j.value("v_max", p.v_max);
  p.a_max = j.value("a_max", p.a_max);
  p.noise_sigma = j.value("noise_sigma", p.noise_sigma);
  validate(p);
  return p;
}

}  // namespace swarmtouch::sim
