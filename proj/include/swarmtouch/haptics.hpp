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

#ifndef SWARMTOUCH__HAPTICS_HPP_
#define SWARMTOUCH__HAPTICS_HPP_

#include "swarmtouch/common.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace swarmtouch::haptics
{

/// Surface class, carried by the vibration carrier frequency.
enum class SurfaceKind { Soft, Elastic, Rigid };
/// Hand motion direction, carried by onset order (right/left) or amplitude ramp
/// (forward/backward) across the three fingertip actuators.
enum class MotionDirection { Forward, Backward, Right, Left };

inline constexpr std::size_t kActuatorCount = 3;

/// 3.3, 8 or 100 Hz.
double carrier_frequency_hz(SurfaceKind s);

struct PatternEvent
{
  double onset_ms{0.0};
  double duration_ms{0.0};
  double frequency_hz{0.0};
  double amplitude{1.0};  // duty level in [0, 1]

  bool operator==(const PatternEvent &) const = default;
};

using ActuatorTimeline = std::vector<PatternEvent>;

struct PatternSchedule
{
  std::string label;
  std::array<ActuatorTimeline, kActuatorCount> actuators{};

  /// End of the last event across all actuators.
  double duration_ms() const;
  bool operator==(const PatternSchedule &) const = default;
};

struct PatternConfig
{
  double inter_onset_ms{150.0};
  double burst_ms{300.0};
  std::array<double, 3> ramp_levels{0.4, 0.7, 1.0};
};

/// Right sweeps onsets across fingers 0->1->2, Left 2->1->0; Forward plays all
/// fingers together with a rising amplitude ramp, Backward with a falling one.
PatternSchedule encode_pattern(SurfaceKind surface, MotionDirection dir, const PatternConfig & cfg = {});

/// Dominant horizontal axis of the hand velocity: +x Right, -x Left,
/// +y Forward, -y Backward. Empty when the horizontal speed is within the
/// dead-band.
std::optional<std::pair<SurfaceKind, MotionDirection>> classify_contact(
  const Vec3 & hand_velocity, SurfaceKind surface, double dead_band = 0.02);

/// Two-letter code: surface initial (S/E/R) followed by direction (F/B/R/L).
std::string encode_label(SurfaceKind surface, MotionDirection dir);
/// Throws std::invalid_argument for anything outside the 12 codes.
std::pair<SurfaceKind, MotionDirection> decode_label(std::string_view label);

/// All 12 labels, surfaces outer, directions inner.
std::vector<std::string> all_labels();

std::string to_string(SurfaceKind s);
std::string to_string(MotionDirection d);
SurfaceKind parse_surface(std::string_view name);

/// Structural checks (three timelines, one carrier, no overlaps, label valid).
std::optional<std::string> schedule_problem(const PatternSchedule & s);

nlohmann::json to_json(const PatternSchedule & s);
PatternSchedule schedule_from_json(const nlohmann::json & j);

}  // namespace swarmtouch::haptics

#endif  // SWARMTOUCH__HAPTICS_HPP_
