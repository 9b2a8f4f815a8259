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

#ifndef SWARMTOUCH__SERVER__PROTOCOL_HPP_
#define SWARMTOUCH__SERVER__PROTOCOL_HPP_

#include "swarmtouch/common.hpp"
#include "swarmtouch/impedance.hpp"
#include "swarmtouch/topology.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

namespace swarmtouch::server
{

inline constexpr int kSchemaVersion = 1;
/// Parameter changes arriving over the wire must be critically damped this tightly.
inline constexpr double kWireDampingTolerance = 1e-6;

struct SetHandTarget
{
  Vec3 target{Vec3::Zero()};
};
struct SetTopology
{
  topology::TopologyKind kind{topology::TopologyKind::Star};
};
struct SetImpedance
{
  double mass{0.0};
  std::optional<double> damping;
  double stiffness{0.0};
  std::optional<double> hand_gain;
  bool recompute_damping{false};
};
struct TriggerPattern
{
  std::string label;
};
struct Engage
{
};
struct Disengage
{
};
struct Pause
{
};
struct Resume
{
};
struct SetSpeed
{
  double factor{1.0};
};

using Command = std::variant<
  SetHandTarget, SetTopology, SetImpedance, TriggerPattern, Engage, Disengage, Pause, Resume, SetSpeed>;

/// Carries the {error, detail} pair sent back to the client.
class ProtocolError : public std::runtime_error
{
public:
  ProtocolError(std::string error, std::string detail)
  : std::runtime_error(error + ": " + detail), error_(std::move(error)), detail_(std::move(detail))
  {
  }
  const std::string & error() const { return error_; }
  const std::string & detail() const { return detail_; }

private:
  std::string error_;
  std::string detail_;
};

/// Parses one text frame. Throws ProtocolError for malformed JSON, unknown
/// types, unknown or missing fields and out-of-range values.
Command parse_command(std::string_view text);
Command command_from_json(const nlohmann::json & j);
nlohmann::json to_json(const Command & c);

/// Full parameter set for a set_impedance command; K_v falls back to
/// `current_hand_gain`. Throws ProtocolError("not critically damped", ...).
impedance::ImpedanceParams resolve_impedance(const SetImpedance & c, double current_hand_gain);

nlohmann::json error_frame(const std::string & error, const std::string & detail);

}  // namespace swarmtouch::server

#endif  // SWARMTOUCH__SERVER__PROTOCOL_HPP_
