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

#include <gtest/gtest.h>

#include <Eigen/Geometry>
#include <cmath>
#include <random>
#include <vector>

namespace
{

using swarmtouch::ConfigError;
using swarmtouch::Vec3;
using namespace swarmtouch::apf;

std::vector<Obstacle> drones_at(std::initializer_list<Vec3> points)
{
  std::vector<Obstacle> out;
  for (const auto & p : points) {
    out.push_back({p, ObstacleKind::Drone});
  }
  return out;
}

}  // namespace

TEST(Attraction, Definitional)
{
  EXPECT_EQ(attractive_force(Vec3(1, 2, 3), Vec3(1, 2, 3), 0.8), Vec3::Zero());
  EXPECT_EQ(attractive_force(Vec3::Zero(), Vec3(1, 0, 0), 1.0), Vec3(1, 0, 0));
}

TEST(Repulsion, OutsideSensingSphereIsZero)
{
  const ApfParams p;
  const auto obs = drones_at({Vec3(0.5, 0, 0), Vec3(0, 0, -0.8)});
  const auto r = repulsive_force(Vec3::Zero(), obs, p);
  EXPECT_EQ(r.force, Vec3::Zero());
  EXPECT_FALSE(r.proximity_violation);
}

TEST(Repulsion, InverseSquareAwayFromObstacle)
{
  const ApfParams p;
  const double d = 0.2;
  const auto obs = drones_at({Vec3(0, 0, -d)});
  const auto r = repulsive_force(Vec3::Zero(), obs, p);
  EXPECT_NEAR(r.force.z(), p.k_rep / (d * d), 1e-12);
  EXPECT_NEAR(r.force.head<2>().norm(), 0.0, 1e-15);
}

TEST(Repulsion, SymmetricObstaclesCancelLaterally)
{
  const ApfParams p;
  const auto obs = drones_at({Vec3(-0.2, 0.15, 0), Vec3(-0.2, -0.15, 0)});
  const auto r = repulsive_force(Vec3::Zero(), obs, p);
  EXPECT_GT(r.force.x(), 0.0);
  EXPECT_LT(std::abs(r.force.y()), 1e-12);
  EXPECT_LT(std::abs(r.force.z()), 1e-12);
}

TEST(Repulsion, SaturatesAndFlagsProximity)
{
  ApfParams p;
  std::vector<Obstacle> obs{{Vec3(0, 0, 0), ObstacleKind::Hand}};
  const auto r = repulsive_force(Vec3::Zero(), obs, p);
  EXPECT_TRUE(r.proximity_violation);
  EXPECT_TRUE(r.force.allFinite());
  EXPECT_LE(r.force.norm(), p.k_rep / (kProximityEpsilon * kProximityEpsilon) * (1 + 1e-12));
}

TEST(Repulsion, SmoothShellVanishesAtRadius)
{
  ApfParams p;
  p.smooth_shell = true;
  const auto near_shell = repulsive_force(Vec3::Zero(), drones_at({Vec3(p.radius - 1e-9, 0, 0)}), p);
  EXPECT_LT(near_shell.force.norm(), 1e-6);
  p.smooth_shell = false;
  const auto hard = repulsive_force(Vec3::Zero(), drones_at({Vec3(p.radius - 1e-9, 0, 0)}), p);
  EXPECT_NEAR(hard.force.norm(), p.k_rep / (p.radius * p.radius), 1e-6);
}

TEST(Command, AtGoalWithoutObstaclesIsZero)
{
  const auto c = apf_command(Vec3(1, 1, 1), Vec3(1, 1, 1), {}, ApfParams{});
  EXPECT_EQ(c.velocity, Vec3::Zero());
}

TEST(Command, FarGoalClampsToMaxSpeed)
{
  ApfParams p;
  p.k_att = 1.0;
  p.v_max = 0.47;
  const auto c = apf_command(Vec3::Zero(), Vec3(10, 3, 0), {}, p);
  EXPECT_NEAR(c.velocity.norm(), 0.47, 1e-12);
  EXPECT_NEAR(c.velocity.normalized().dot(Vec3(10, 3, 0).normalized()), 1.0, 1e-12);
}

TEST(Command, BalancedAttractionAndRepulsionCancel)
{
  ApfParams p;
  p.k_att = 1.0;
  p.v_max = 10.0;
  const double goal_distance = 0.3;
  const double d = std::sqrt(p.k_rep / (p.k_att * goal_distance));
  ASSERT_LT(d, p.radius);
  // Goal along +x, obstacle on the same side so repulsion pushes back along -x.
  const auto obs = drones_at({Vec3(d, 0, 0)});
  const auto c = apf_command(Vec3::Zero(), Vec3(goal_distance, 0, 0), obs, p);
  EXPECT_LT(c.velocity.norm(), 1e-12);
}

TEST(Command, RotationEquivariant)
{
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-0.4, 0.4);
  const ApfParams p;
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Matrix3d r =
      Eigen::AngleAxisd(u(rng) * 7.0, Vec3(u(rng), u(rng), u(rng) + 1.0).normalized()).toRotationMatrix();
    const Vec3 pos(u(rng), u(rng), u(rng));
    const Vec3 goal(u(rng), u(rng), u(rng));
    const auto obs = drones_at({Vec3(u(rng), u(rng), u(rng)), Vec3(u(rng), u(rng), u(rng))});
    std::vector<Obstacle> rotated;
    for (const auto & o : obs) {
      rotated.push_back({r * o.position, o.kind});
    }
    const auto a = apf_command(pos, goal, obs, p);
    const auto b = apf_command(r * pos, r * goal, rotated, p);
    EXPECT_LT((r * a.velocity - b.velocity).norm(), 1e-9);
  }
}

TEST(Params, ValidationAndJson)
{
  ApfParams p;
  p.radius = 0.0;
  EXPECT_THROW(validate(p), ConfigError);
  ApfParams q;
  q.k_att = 1.2;
  q.smooth_shell = true;
  const auto back = apf_params_from_json(to_json(q));
  EXPECT_DOUBLE_EQ(back.k_att, 1.2);
  EXPECT_TRUE(back.smooth_shell);
  EXPECT_THROW(apf_params_from_json({{"k_attract", 1.0}}), ConfigError);
}
