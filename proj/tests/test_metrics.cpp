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

#include "swarmtouch/bench/metrics.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

namespace
{

using swarmtouch::DomainError;
using swarmtouch::Vec3;
using namespace swarmtouch::bench;
using swarmtouch::sim::TraceRow;

const std::vector<Vec3> kOffsets{Vec3(0.3, 0, 0.4), Vec3(-0.15, 0.26, 0.4)};

/// Rows whose drones sit at ref(tick - delay) + offset + bias.
std::vector<TraceRow> synthetic_rows(const ReferenceTrajectory & ref, std::size_t delay_ticks, const Vec3 & bias)
{
  std::vector<TraceRow> rows;
  for (std::size_t k = 1; k < ref.size(); ++k) {
    const std::size_t src = k >= delay_ticks ? k - delay_ticks : 0;
    for (std::size_t d = 0; d < kOffsets.size(); ++d) {
      TraceRow r;
      r.tick = k;
      r.t = static_cast<double>(k) * ref.dt;
      r.hand = ref.position[k];
      r.drone_id = static_cast<int>(d);
      r.position = ref.position[src] + kOffsets[d] + bias;
      r.velocity = ref.velocity[src];
      rows.push_back(r);
    }
  }
  return rows;
}

}  // namespace

TEST(Metrics, PerfectTracking)
{
  const auto ref = square_trajectory(SquareParams{});
  const auto m = compute_metrics(synthetic_rows(ref, 0, Vec3::Zero()), ref, kOffsets);
  EXPECT_EQ(m.mean_abs_x, 0.0);
  EXPECT_EQ(m.mean_abs_y, 0.0);
  EXPECT_EQ(m.max_abs_x, 0.0);
  EXPECT_EQ(m.rmse, 0.0);
  EXPECT_NEAR(m.lag_s, 0.0, 1e-9);
  EXPECT_NEAR(m.max_speed_xy, ref.max_speed(), 1e-9);
  EXPECT_EQ(m.samples, (ref.size() - 1) * kOffsets.size());
}

TEST(Metrics, ConstantOffset)
{
  const auto ref = square_trajectory(SquareParams{});
  const auto m = compute_metrics(synthetic_rows(ref, 0, Vec3(0.1, 0, 0)), ref, kOffsets);
  EXPECT_NEAR(m.mean_abs_x, 0.1, 1e-12);
  EXPECT_NEAR(m.max_abs_x, 0.1, 1e-12);
  EXPECT_NEAR(m.mean_abs_y, 0.0, 1e-12);
  EXPECT_NEAR(m.rmse, 0.1, 1e-12);
  EXPECT_NEAR(m.lag_s, 0.0, 1e-9);
}

TEST(Metrics, PureDelayRecoversLag)
{
  const auto ref = square_trajectory(SquareParams{});
  const auto m = compute_metrics(synthetic_rows(ref, 100, Vec3::Zero()), ref, kOffsets);
  EXPECT_NEAR(m.lag_s, 1.0, ref.dt);
}

TEST(Metrics, LagEstimatorSubTickAndSign)
{
  const double dt = 0.01;
  std::vector<double> ref;
  std::vector<double> late;
  std::vector<double> early;
  for (int k = 0; k < 3000; ++k) {
    const double t = k * dt;
    ref.push_back(std::sin(0.7 * t) + 0.3 * std::sin(1.9 * t));
    late.push_back(std::sin(0.7 * (t - 0.234)) + 0.3 * std::sin(1.9 * (t - 0.234)));
    early.push_back(std::sin(0.7 * (t + 0.5)) + 0.3 * std::sin(1.9 * (t + 0.5)));
  }
  EXPECT_NEAR(estimate_lag(ref, late, dt), 0.234, 0.2 * dt);
  EXPECT_NEAR(estimate_lag(ref, early, dt), -0.5, 0.2 * dt);
}

TEST(Metrics, TranslationInvariant)
{
  SquareParams p;
  const auto ref = square_trajectory(p);
  p.origin = Vec3(5.0, -3.0, 2.0);
  const auto moved = square_trajectory(p);
  const auto a = compute_metrics(synthetic_rows(ref, 30, Vec3(0.02, -0.01, 0)), ref, kOffsets);
  const auto b = compute_metrics(synthetic_rows(moved, 30, Vec3(0.02, -0.01, 0)), moved, kOffsets);
  EXPECT_NEAR(a.mean_abs_x, b.mean_abs_x, 1e-9);
  EXPECT_NEAR(a.mean_abs_y, b.mean_abs_y, 1e-9);
  EXPECT_NEAR(a.rmse, b.rmse, 1e-9);
  EXPECT_NEAR(a.lag_s, b.lag_s, 1e-6);
}

TEST(Metrics, SeparationCountsHandAndDrones)
{
  const auto ref = square_trajectory(SquareParams{});
  const auto m = compute_metrics(synthetic_rows(ref, 0, Vec3::Zero()), ref, kOffsets);
  const double drone_drone = (kOffsets[0] - kOffsets[1]).norm();
  const double drone_hand = std::min(kOffsets[0].norm(), kOffsets[1].norm());
  EXPECT_NEAR(m.min_separation, std::min(drone_drone, drone_hand), 1e-12);
}

TEST(Metrics, AverageIsElementWise)
{
  MetricsReport a;
  a.mean_abs_x = 1.0;
  a.lag_s = 0.2;
  MetricsReport b;
  b.mean_abs_x = 3.0;
  b.lag_s = 0.4;
  const auto m = average({a, b});
  EXPECT_DOUBLE_EQ(m.mean_abs_x, 2.0);
  EXPECT_DOUBLE_EQ(m.lag_s, 0.3);
}

TEST(Metrics, Errors)
{
  const auto ref = square_trajectory(SquareParams{});
  EXPECT_THROW(compute_metrics({}, ref, kOffsets), DomainError);
  auto rows = synthetic_rows(ref, 0, Vec3::Zero());
  rows[0].drone_id = 9;
  EXPECT_THROW(compute_metrics(rows, ref, kOffsets), DomainError);
}
