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

#include "swarmtouch/haptics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace swarmtouch::haptics
{
namespace
{

constexpr std::array<SurfaceKind, 3> kSurfaces{SurfaceKind::Soft, SurfaceKind::Elastic, SurfaceKind::Rigid};
constexpr std::array<MotionDirection, 4> kDirections{
  MotionDirection::Forward, MotionDirection::Backward, MotionDirection::Right, MotionDirection::Left};

char surface_code(SurfaceKind s)
{
  switch (s) {
    case SurfaceKind::Soft:
      return 'S';
    case SurfaceKind::Elastic:
      return 'E';
    case SurfaceKind::Rigid:
      return 'R';
  }
  return '?';
}

char direction_code(MotionDirection d)
{
  switch (d) {
    case MotionDirection::Forward:
      return 'F';
    case MotionDirection::Backward:
      return 'B';
    case MotionDirection::Right:
      return 'R';
    case MotionDirection::Left:
      return 'L';
  }
  return '?';
}

}  // namespace

double carrier_frequency_hz(SurfaceKind s)
{
  switch (s) {
    case SurfaceKind::Soft:
      return 3.3;
    case SurfaceKind::Elastic:
      return 8.0;
    case SurfaceKind::Rigid:
      return 100.0;
  }
  return 0.0;
}

double PatternSchedule::duration_ms() const
{
  double end = 0.0;
  for (const auto & timeline : actuators) {
    for (const auto & ev : timeline) {
      end = std::max(end, ev.onset_ms + ev.duration_ms);
    }
  }
  return end;
}

PatternSchedule encode_pattern(SurfaceKind surface, MotionDirection dir, const PatternConfig & cfg)
{
  if (!(cfg.inter_onset_ms > 0.0) || !(cfg.burst_ms > 0.0)) {
    throw DomainError("pattern timing must be positive");
  }
  PatternSchedule s;
  s.label = encode_label(surface, dir);
  const double f = carrier_frequency_hz(surface);

  switch (dir) {
    case MotionDirection::Right:
    case MotionDirection::Left:
      for (std::size_t finger = 0; finger < kActuatorCount; ++finger) {
        const std::size_t slot = dir == MotionDirection::Right ? finger : kActuatorCount - 1 - finger;
        s.actuators[finger].push_back({static_cast<double>(slot) * cfg.inter_onset_ms, cfg.burst_ms, f, 1.0});
      }
      break;
    case MotionDirection::Forward:
    case MotionDirection::Backward: {
      const auto n = cfg.ramp_levels.size();
      const double step = cfg.burst_ms / static_cast<double>(n);
      for (auto & timeline : s.actuators) {
        for (std::size_t i = 0; i < n; ++i) {
          const double level =
            dir == MotionDirection::Forward ? cfg.ramp_levels[i] : cfg.ramp_levels[n - 1 - i];
          timeline.push_back({static_cast<double>(i) * step, step, f, level});
        }
      }
      break;
    }
  }
  return s;
}

std::optional<std::pair<SurfaceKind, MotionDirection>> classify_contact(
  const Vec3 & hand_velocity, SurfaceKind surface, double dead_band)
{
  const double vx = hand_velocity.x();
  const double vy = hand_velocity.y();
  if (std::hypot(vx, vy) <= dead_band) {
    return std::nullopt;
  }
  if (std::abs(vx) >= std::abs(vy)) {
    return std::make_pair(surface, vx > 0.0 ? MotionDirection::Right : MotionDirection::Left);
  }
  return std::make_pair(surface, vy > 0.0 ? MotionDirection::Forward : MotionDirection::Backward);
}

std::string encode_label(SurfaceKind surface, MotionDirection dir)
{
  return {surface_code(surface), direction_code(dir)};
}

std::pair<SurfaceKind, MotionDirection> decode_label(std::string_view label)
{
  for (auto s : kSurfaces) {
    for (auto d : kDirections) {
      if (label == encode_label(s, d)) {
        return {s, d};
      }
    }
  }
  throw std::invalid_argument("unknown pattern label '" + std::string(label) + "'");
}

std::vector<std::string> all_labels()
{
  std::vector<std::string> out;
  for (auto s : kSurfaces) {
    for (auto d : kDirections) {
      out.push_back(encode_label(s, d));
    }
  }
  return out;
}

std::string to_string(SurfaceKind s)
{
  switch (s) {
    case SurfaceKind::Soft:
      return "soft";
    case SurfaceKind::Elastic:
      return "elastic";
    case SurfaceKind::Rigid:
      return "rigid";
  }
  return "soft";
}

std::string to_string(MotionDirection d)
{
  switch (d) {
    case MotionDirection::Forward:
      return "forward";
    case MotionDirection::Backward:
      return "backward";
    case MotionDirection::Right:
      return "right";
    case MotionDirection::Left:
      return "left";
  }
  return "forward";
}

SurfaceKind parse_surface(std::string_view name)
{
  for (auto s : kSurfaces) {
    if (name == to_string(s)) {
      return s;
    }
  }
  throw std::invalid_argument("unknown surface '" + std::string(name) + "'");
}

std::optional<std::string> schedule_problem(const PatternSchedule & s)
{
  SurfaceKind surface;
  try {
    surface = decode_label(s.label).first;
  } catch (const std::invalid_argument & e) {
    return e.what();
  }
  const double f = carrier_frequency_hz(surface);
  for (std::size_t a = 0; a < kActuatorCount; ++a) {
    double busy_until = 0.0;
    for (const auto & ev : s.actuators[a]) {
      if (ev.frequency_hz != f) {
        return "actuator " + std::to_string(a) + " leaves the carrier frequency";
      }
      if (ev.onset_ms < 0.0 || ev.duration_ms < 0.0) {
        return "negative timing on actuator " + std::to_string(a);
      }
      if (ev.amplitude < 0.0 || ev.amplitude > 1.0) {
        return "amplitude out of [0, 1] on actuator " + std::to_string(a);
      }
      if (ev.onset_ms < busy_until) {
        return "overlapping events on actuator " + std::to_string(a);
      }
      busy_until = ev.onset_ms + ev.duration_ms;
    }
  }
  return std::nullopt;
}

nlohmann::json to_json(const PatternSchedule & s)
{
  nlohmann::json actuators = nlohmann::json::array();
  for (const auto & timeline : s.actuators) {
    nlohmann::json jt = nlohmann::json::array();
    for (const auto & ev : timeline) {
      jt.push_back(
        {{"onset_ms", ev.onset_ms},
         {"duration_ms", ev.duration_ms},
         {"frequency_hz", ev.frequency_hz},
         {"amplitude", ev.amplitude}});
    }
    actuators.push_back(std::move(jt));
  }
  return {{"label", s.label}, {"actuators", std::move(actuators)}};
}

PatternSchedule schedule_from_json(const nlohmann::json & j)
{
  PatternSchedule s;
  s.label = j.at("label").get<std::string>();
  const auto & acts = j.at("actuators");
  if (!acts.is_array() || acts.size() != kActuatorCount) {
    throw std::invalid_argument("pattern schedule needs exactly 3 actuator timelines");
  }
  for (std::size_t a = 0; a < kActuatorCount; ++a) {
    for (const auto & je : acts[a]) {
      s.actuators[a].push_back(
        {je.at("onset_ms").get<double>(), je.at("duration_ms").get<double>(),
         je.at("frequency_hz").get<double>(), je.at("amplitude").get<double>()});
    }
  }
  if (auto problem = schedule_problem(s)) {
    throw std::invalid_argument("invalid pattern schedule: " + *problem);
  }
  return s;
}

}  // namespace swarmtouch::haptics
