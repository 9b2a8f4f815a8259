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

#ifndef SWARMTOUCH__BENCH__TRAJECTORY_HPP_
#define SWARMTOUCH__BENCH__TRAJECTORY_HPP_

#include "swarmtouch/common.hpp"

#include <nlohmann/json.hpp>

#include <cstddef>
#include <vector>

namespace swarmtouch::bench
{

struct SquareParams
{
  double side_m{1.2};
  double peak_speed{0.65};  // m/s
  double accel{0.5};        // m/s^2; infinity gives a constant-speed profile
  double dwell_s{3.5};      // pause at each corner after arriving
  int laps{2};
  Vec3 origin{0.0, 0.0, 1.0};
  double dt{0.01};
};

enum class Segment { Dwell, Accelerate, Cruise, Decelerate };

struct ReferenceTrajectory
{
  SquareParams params{};
  double dt{0.01};
  std::vector<double> t;
  std::vector<Vec3> position;
  std::vector<Vec3> velocity;  // analytic, not differenced
  std::vector<Segment> segment;
  /// True when the side was too short to reach peak_speed; the profile is then
  /// triangular and reached_peak is below the requested peak.
  bool triangular{false};
  double reached_peak{0.0};

  std::size_t size() const { return t.size(); }
  double duration() const { return t.empty() ? 0.0 : t.back(); }
  /// Sample index clamped to the last sample.
  const Vec3 & position_at(std::size_t tick) const;
  double max_speed() const;
  double mean_speed() const;
};

/// Counter-clockwise square in the horizontal plane through `origin`, corners
/// origin, +x, +x+y, +y. Each side is a trapezoidal speed profile followed by a
/// corner dwell; a lap ends where it started.
ReferenceTrajectory square_trajectory(const SquareParams & p);
ReferenceTrajectory square_trajectory(double side_m, double peak_speed, double dwell_s, int laps);

/// A trajectory read back from a CSV with columns t,x,y,z (velocity estimated
/// by central differences, segments left as Cruise where moving).
ReferenceTrajectory trajectory_from_samples(double dt, std::vector<Vec3> positions);

nlohmann::json to_json(const SquareParams & p);
SquareParams square_params_from_json(const nlohmann::json & j);

}  // namespace swarmtouch::bench

#endif  // SWARMTOUCH__BENCH__TRAJECTORY_HPP_
