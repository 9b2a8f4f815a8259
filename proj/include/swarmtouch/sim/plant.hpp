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

#ifndef SWARMTOUCH__SIM__PLANT_HPP_
#define SWARMTOUCH__SIM__PLANT_HPP_

#include "swarmtouch/common.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <random>

namespace swarmtouch::sim
{

/// First-order velocity tracking with speed/acceleration limits and additive
/// Gaussian position noise. Stands in for the real vehicle's flight stack.
struct PlantParams
{
  double tau{0.3};            // s
  double v_max{1.0};          // m/s
  double a_max{2.0};          // m/s^2
  double noise_sigma{0.005};  // m per tick, per axis
};

void validate(const PlantParams & p);

struct DroneState
{
  Vec3 position{Vec3::Zero()};
  Vec3 velocity{Vec3::Zero()};
};

/// Seeded standard-normal stream. Every plant step draws exactly three
/// samples per drone so the stream stays aligned whatever sigma is.
class NoiseSource
{
public:
  explicit NoiseSource(std::uint64_t seed) : engine_(seed) {}
  Vec3 draw()
  {
    Vec3 v;
    for (int i = 0; i < 3; ++i) {
      v[i] = normal_(engine_);
    }
    return v;
  }

private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// velocity += clamp_{a_max dt}((clamp_{v_max}(cmd) - velocity) (1 - e^{-dt/tau}))
/// position += velocity dt + sigma * N(0, I); altitude floored at 0.
DroneState plant_step(const DroneState & d, const Vec3 & cmd, const PlantParams & p, double dt, NoiseSource & noise);

nlohmann::json to_json(const PlantParams & p);
PlantParams plant_params_from_json(const nlohmann::json & j);

}  // namespace swarmtouch::sim

#endif  // SWARMTOUCH__SIM__PLANT_HPP_
