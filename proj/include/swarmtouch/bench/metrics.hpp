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

#ifndef SWARMTOUCH__BENCH__METRICS_HPP_
#define SWARMTOUCH__BENCH__METRICS_HPP_

#include "swarmtouch/bench/trajectory.hpp"
#include "swarmtouch/sim/trace.hpp"

#include <nlohmann/json.hpp>

#include <cstddef>
#include <vector>

namespace swarmtouch::bench
{

struct MetricsReport
{
  double mean_abs_x{0.0};
  double mean_abs_y{0.0};
  double max_abs_x{0.0};
  double max_abs_y{0.0};
  double rmse{0.0};            // sqrt(mean(ex^2 + ey^2))
  double max_speed_xy{0.0};
  double mean_speed_xy{0.0};
  double lag_s{0.0};           // averaged over drones
  double cruise_max_error{0.0};  // planar error while the reference cruises at peak speed
  double min_separation{0.0};    // closest drone-drone or drone-hand approach, 3D
  std::size_t samples{0};
};

/// Time shift (s) maximising the Pearson correlation of `follower` against
/// `reference` over their overlap, refined between ticks by a parabola through
/// the peak. Positive when the follower trails. Searches |lag| <= max_lag_s.
double estimate_lag(
  const std::vector<double> & reference, const std::vector<double> & follower, double dt, double max_lag_s = 5.0);

/// Errors are drone - (ref + offset) with ref sampled at each row's tick.
/// Throws DomainError for an empty trace or an offsets/drone mismatch.
MetricsReport compute_metrics(
  const std::vector<sim::TraceRow> & rows, const ReferenceTrajectory & ref, const std::vector<Vec3> & offsets);

/// Element-wise mean of several reports.
MetricsReport average(const std::vector<MetricsReport> & reports);

nlohmann::json to_json(const MetricsReport & m);

}  // namespace swarmtouch::bench

#endif  // SWARMTOUCH__BENCH__METRICS_HPP_
