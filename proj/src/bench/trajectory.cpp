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

#include "swarmtouch/bench/trajectory.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <set>
#include <string>

namespace swarmtouch::bench
{
namespace
{

struct SideProfile
{
  double accel_time{0.0};
  double cruise_time{0.0};
  double accel_dist{0.0};
  double peak{0.0};
  double accel{0.0};
  double total() const { return 2.0 * accel_time + cruise_time; }
};

SideProfile plan_side(const SquareParams & p, bool & triangular)
{
  SideProfile s;
  s.accel = p.accel;
  triangular = false;
  if (std::isinf(p.accel)) {
    s.peak = p.peak_speed;
    s.cruise_time = p.side_m / p.peak_speed;
    return s;
  }
  const double ramp_dist = p.peak_speed * p.peak_speed / p.accel;  // both ramps
  if (ramp_dist > p.side_m) {
    triangular = true;
    s.peak = std::sqrt(p.side_m * p.accel);
  } else {
    s.peak = p.peak_speed;
  }
  s.accel_time = s.peak / p.accel;
  s.accel_dist = 0.5 * p.accel * s.accel_time * s.accel_time;
  s.cruise_time = triangular ? 0.0 : (p.side_m - 2.0 * s.accel_dist) / s.peak;
  return s;
}

// Distance along the side and speed at time tau into the move.
void along_side(const SideProfile & s, double side, double tau, double & dist, double & speed, Segment & seg)
{
  if (tau < s.accel_time) {
    dist = 0.5 * s.accel * tau * tau;
    speed = s.accel * tau;
    seg = Segment::Accelerate;
  } else if (tau < s.accel_time + s.cruise_time) {
    dist = s.accel_dist + s.peak * (tau - s.accel_time);
    speed = s.peak;
    seg = Segment::Cruise;
  } else {
    const double rem = std::max(0.0, s.total() - tau);
    dist = side - (s.accel_time > 0.0 ? 0.5 * s.accel * rem * rem : 0.0);
    speed = s.accel_time > 0.0 ? s.accel * rem : 0.0;
    seg = Segment::Decelerate;
  }
}

}  // namespace

const Vec3 & ReferenceTrajectory::position_at(std::size_t tick) const
{
  if (position.empty()) {
    throw DomainError("empty reference trajectory");
  }
  return position[std::min(tick, position.size() - 1)];
}

double ReferenceTrajectory::max_speed() const
{
  double m = 0.0;
  for (const auto & v : velocity) {
    m = std::max(m, v.head<2>().norm());
  }
  return m;
}

double ReferenceTrajectory::mean_speed() const
{
  if (velocity.size() < 2) {
    return velocity.empty() ? 0.0 : velocity.front().head<2>().norm();
  }
  // Time average over the n-1 sample intervals; the final sample only closes the run.
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < velocity.size(); ++i) {
    sum += velocity[i].head<2>().norm();
  }
  return sum / static_cast<double>(velocity.size() - 1);
}

ReferenceTrajectory square_trajectory(const SquareParams & p)
{
  if (!(p.side_m > 0.0) || !(p.peak_speed > 0.0) || !(p.accel > 0.0) || !(p.dwell_s >= 0.0) || p.laps < 1 ||
      !(p.dt > 0.0)) {
    throw DomainError("square trajectory needs side, peak speed, accel, dt > 0, dwell >= 0, laps >= 1");
  }
  ReferenceTrajectory out;
  out.params = p;
  out.dt = p.dt;
  const SideProfile side = plan_side(p, out.triangular);
  out.reached_peak = side.peak;

  const std::array<Vec3, 4> corners{
    p.origin, p.origin + Vec3(p.side_m, 0, 0), p.origin + Vec3(p.side_m, p.side_m, 0),
    p.origin + Vec3(0, p.side_m, 0)};
  const double leg = side.total() + p.dwell_s;
  const double total = leg * 4.0 * p.laps;
  const auto samples = static_cast<std::size_t>(std::llround(total / p.dt)) + 1;

  out.t.reserve(samples);
  out.position.reserve(samples);
  out.velocity.reserve(samples);
  out.segment.reserve(samples);
  for (std::size_t k = 0; k < samples; ++k) {
    const double t = static_cast<double>(k) * p.dt;
    out.t.push_back(t);
    const double clamped = std::min(t, total);
    auto leg_index = static_cast<std::size_t>(std::floor(clamped / leg));
    double into = clamped - static_cast<double>(leg_index) * leg;
    if (leg_index >= static_cast<std::size_t>(4 * p.laps)) {
      leg_index = static_cast<std::size_t>(4 * p.laps) - 1;
      into = leg;
    }
    const Vec3 & from = corners[leg_index % 4];
    const Vec3 & to = corners[(leg_index + 1) % 4];
    if (into >= side.total()) {
      out.position.push_back(to);
      out.velocity.push_back(Vec3::Zero());
      out.segment.push_back(Segment::Dwell);
      continue;
    }
    double dist = 0.0;
    double speed = 0.0;
    Segment seg = Segment::Cruise;
    along_side(side, p.side_m, into, dist, speed, seg);
    const Vec3 u = (to - from) / p.side_m;
    out.position.push_back(from + u * dist);
    out.velocity.push_back(u * speed);
    out.segment.push_back(seg);
  }
  return out;
}

ReferenceTrajectory square_trajectory(double side_m, double peak_speed, double dwell_s, int laps)
{
  SquareParams p;
  p.side_m = side_m;
  p.peak_speed = peak_speed;
  p.dwell_s = dwell_s;
  p.laps = laps;
  return square_trajectory(p);
}

ReferenceTrajectory trajectory_from_samples(double dt, std::vector<Vec3> positions)
{
  if (!(dt > 0.0) || positions.empty()) {
    throw DomainError("trajectory needs dt > 0 and at least one sample");
  }
  ReferenceTrajectory out;
  out.dt = dt;
  out.position = std::move(positions);
  const std::size_t n = out.position.size();
  for (std::size_t k = 0; k < n; ++k) {
    out.t.push_back(static_cast<double>(k) * dt);
    Vec3 v = Vec3::Zero();
    if (n > 1) {
      const std::size_t lo = k == 0 ? 0 : k - 1;
      const std::size_t hi = k + 1 < n ? k + 1 : n - 1;
      v = (out.position[hi] - out.position[lo]) / (static_cast<double>(hi - lo) * dt);
    }
    out.velocity.push_back(v);
    out.segment.push_back(v.norm() > 0.0 ? Segment::Cruise : Segment::Dwell);
  }
  out.reached_peak = out.max_speed();
  return out;
}

nlohmann::json to_json(const SquareParams & p)
{
  nlohmann::json j{
    {"side_m", p.side_m}, {"peak_speed", p.peak_speed}, {"dwell_s", p.dwell_s}, {"laps", p.laps},
    {"origin", {p.origin.x(), p.origin.y(), p.origin.z()}}, {"dt", p.dt}};
  if (std::isinf(p.accel)) {
    j["accel"] = nullptr;
  } else {
    j["accel"] = p.accel;
  }
  return j;
}

SquareParams square_params_from_json(const nlohmann::json & j)
{
  static const std::set<std::string> known{"side_m", "peak_speed", "accel", "dwell_s", "laps", "origin", "dt"};
  for (const auto & [key, _] : j.items()) {
    if (!known.count(key)) {
      throw ConfigError("unknown square trajectory field '" + key + "'");
    }
  }
  SquareParams p;
  p.side_m = j.value("side_m", p.side_m);
  p.peak_speed = j.value("peak_speed", p.peak_speed);
  if (j.contains("accel")) {
    p.accel = j["accel"].is_null() ? std::numeric_limits<double>::infinity() : j["accel"].get<double>();
  }
  p.dwell_s = j.value("dwell_s", p.dwell_s);
  p.laps = j.value("laps", p.laps);
  p.dt = j.value("dt", p.dt);
  if (j.contains("origin")) {
    const auto o = j["origin"].get<std::vector<double>>();
    if (o.size() != 3) {
      throw ConfigError("origin must have three components");
    }
    p.origin = Vec3(o[0], o[1], o[2]);
  }
  return p;
}

}  // namespace swarmtouch::bench
