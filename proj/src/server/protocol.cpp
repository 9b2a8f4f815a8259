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

#include "swarmtouch/server/protocol.hpp"

#include "swarmtouch/haptics.hpp"

#include <cmath>
#include <map>
#include <set>
#include <vector>

namespace swarmtouch::server
{
namespace
{

using nlohmann::json;

void expect_fields(const json & j, const std::string & type, const std::set<std::string> & allowed)
{
  for (const auto & [key, _] : j.items()) {
    if (key != "type" && !allowed.count(key)) {
      throw ProtocolError("unknown field", "'" + key + "' is not accepted by " + type);
    }
  }
}

double number(const json & j, const char * key, const std::string & type)
{
  if (!j.contains(key)) {
    throw ProtocolError("missing field", type + " needs '" + key + "'");
  }
  if (!j[key].is_number()) {
    throw ProtocolError("invalid value", std::string("'") + key + "' must be a number");
  }
  const double v = j[key].get<double>();
  if (!std::isfinite(v)) {
    throw ProtocolError("invalid value", std::string("'") + key + "' must be finite");
  }
  return v;
}

}  // namespace

Command command_from_json(const json & j)
{
  if (!j.is_object()) {
    throw ProtocolError("malformed command", "expected a JSON object");
  }
  if (!j.contains("type") || !j["type"].is_string()) {
    throw ProtocolError("malformed command", "missing string field 'type'");
  }
  const auto type = j["type"].get<std::string>();
  if (type == "set_hand_target") {
    expect_fields(j, type, {"x", "y", "z"});
    return SetHandTarget{Vec3(number(j, "x", type), number(j, "y", type), number(j, "z", type))};
  }
  if (type == "set_topology") {
    expect_fields(j, type, {"kind"});
    if (!j.contains("kind") || !j["kind"].is_string()) {
      throw ProtocolError("missing field", "set_topology needs string 'kind'");
    }
    try {
      return SetTopology{topology::parse_kind(j["kind"].get<std::string>())};
    } catch (const ConfigError & ex) {
      throw ProtocolError("invalid value", ex.what());
    }
  }
  if (type == "set_impedance") {
    expect_fields(j, type, {"M", "D", "K", "K_v", "recompute_D"});
    SetImpedance c;
    c.mass = number(j, "M", type);
    c.stiffness = number(j, "K", type);
    if (j.contains("D")) {
      c.damping = number(j, "D", type);
    }
    if (j.contains("K_v")) {
      c.hand_gain = number(j, "K_v", type);
    }
    if (j.contains("recompute_D")) {
      if (!j["recompute_D"].is_boolean()) {
        throw ProtocolError("invalid value", "'recompute_D' must be a boolean");
      }
      c.recompute_damping = j["recompute_D"].get<bool>();
    }
    if (!c.damping && !c.recompute_damping) {
      throw ProtocolError("missing field", "set_impedance needs 'D' or \"recompute_D\": true");
    }
    return c;
  }
  if (type == "trigger_pattern") {
    expect_fields(j, type, {"label"});
    if (!j.contains("label") || !j["label"].is_string()) {
      throw ProtocolError("missing field", "trigger_pattern needs string 'label'");
    }
    const auto label = j["label"].get<std::string>();
    try {
      haptics::decode_label(label);
    } catch (const std::invalid_argument & ex) {
      throw ProtocolError("invalid value", ex.what());
    }
    return TriggerPattern{label};
  }
  if (type == "set_speed") {
    expect_fields(j, type, {"factor"});
    const double f = number(j, "factor", type);
    if (!(f > 0.0) || f > 100.0) {
      throw ProtocolError("invalid value", "speed factor must be in (0, 100]");
    }
    return SetSpeed{f};
  }
  static const std::map<std::string, Command> bare{
    {"engage", Engage{}}, {"disengage", Disengage{}}, {"pause", Pause{}}, {"resume", Resume{}}};
  const auto it = bare.find(type);
  if (it == bare.end()) {
    throw ProtocolError("unknown command", "'" + type + "'");
  }
  expect_fields(j, type, {});
  return it->second;
}

Command parse_command(std::string_view text)
{
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception & ex) {
    throw ProtocolError("malformed json", ex.what());
  }
  return command_from_json(j);
}

json to_json(const Command & c)
{
  struct Visitor
  {
    json operator()(const SetHandTarget & x) const
    {
      return {{"type", "set_hand_target"}, {"x", x.target.x()}, {"y", x.target.y()}, {"z", x.target.z()}};
    }
    json operator()(const SetTopology & x) const
    {
      return {{"type", "set_topology"}, {"kind", topology::to_string(x.kind)}};
    }
    json operator()(const SetImpedance & x) const
    {
      json j{{"type", "set_impedance"}, {"M", x.mass}, {"K", x.stiffness}};
      if (x.damping) {
        j["D"] = *x.damping;
      }
      if (x.hand_gain) {
        j["K_v"] = *x.hand_gain;
      }
      if (x.recompute_damping) {
        j["recompute_D"] = true;
      }
      return j;
    }
    json operator()(const TriggerPattern & x) const { return {{"type", "trigger_pattern"}, {"label", x.label}}; }
    json operator()(const Engage &) const { return {{"type", "engage"}}; }
    json operator()(const Disengage &) const { return {{"type", "disengage"}}; }
    json operator()(const Pause &) const { return {{"type", "pause"}}; }
    json operator()(const Resume &) const { return {{"type", "resume"}}; }
    json operator()(const SetSpeed & x) const { return {{"type", "set_speed"}, {"factor", x.factor}}; }
  };
  return std::visit(Visitor{}, c);
}

impedance::ImpedanceParams resolve_impedance(const SetImpedance & c, double current_hand_gain)
{
  const double kv = c.hand_gain.value_or(current_hand_gain);
  if (!(c.mass > 0.0) || !(c.stiffness > 0.0) || !(kv >= 0.0)) {
    throw ProtocolError("invalid value", "set_impedance needs M > 0, K > 0, K_v >= 0");
  }
  if (c.recompute_damping) {
    return impedance::critically_damped(c.mass, c.stiffness, kv);
  }
  impedance::ImpedanceParams p{c.mass, *c.damping, c.stiffness, kv};
  if (!(p.damping >= 0.0)) {
    throw ProtocolError("invalid value", "D must be non-negative");
  }
  if (!impedance::is_critically_damped(p, kWireDampingTolerance)) {
    throw ProtocolError(
      "not critically damped", "zeta = " + std::to_string(p.damping_ratio()) + "; send recompute_D: true to fix D");
  }
  return p;
}

json error_frame(const std::string & error, const std::string & detail)
{
  return {{"schema_version", kSchemaVersion}, {"error", error}, {"detail", detail}};
}

}  // namespace swarmtouch::server
