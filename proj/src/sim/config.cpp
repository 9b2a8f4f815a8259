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

#include "swarmtouch/sim/config.hpp"

#include "swarmtouch/sim/trace.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace swarmtouch::sim
{
namespace
{

using nlohmann::json;

void reject_unknown(const json & j, const std::set<std::string> & known, const std::string & where)
{
  if (!j.is_object()) {
    throw ConfigError(where + " must be an object");
  }
  for (const auto & [key, _] : j.items()) {
    if (!known.count(key)) {
      throw ConfigError("unknown " + where + " field '" + key + "'");
    }
  }
}

topology::NodeId node_from(const json & j)
{
  if (j.is_string() && j.get<std::string>() == "hand") {
    return topology::kHand;
  }
  if (j.is_number_integer() && j.get<long long>() >= 0) {
    return static_cast<topology::NodeId>(j.get<long long>());
  }
  throw ConfigError("edge endpoint must be \"hand\" or a drone index");
}

json node_to(topology::NodeId n)
{
  if (n == topology::kHand) {
    return "hand";
  }
  return n;
}

impedance::ImpedanceParams params_with_defaults(const json & j, const impedance::ImpedanceParams & base)
{
  impedance::ImpedanceParams p;
  const double m = j.value("M", base.mass);
  const double k = j.value("K", base.stiffness);
  const double kv = j.value("K_v", base.hand_gain);
  if (!(m > 0.0) || !(k > 0.0) || !(kv >= 0.0)) {
    throw ConfigError("impedance needs M > 0, K > 0, K_v >= 0");
  }
  if (j.contains("D")) {
    p = impedance::ImpedanceParams{m, j.at("D").get<double>(), k, kv};
    try {
      impedance::derive_constants(p);
    } catch (const impedance::NotCriticallyDamped & ex) {
      throw ConfigError(std::string("impedance link not critically damped: ") + ex.what());
    }
  } else {
    p = impedance::critically_damped(m, k, kv);
  }
  return p;
}

json hand_to_json(const HandConfig & h)
{
  json j{{"source", h.source}};
  if (h.source == "static" || h.source == "live" || h.source == "step") {
    j["position"] = to_json(h.position);
  }
  if (h.source == "step") {
    j["to"] = to_json(h.step_to);
    j["at_s"] = h.step_at_s;
  }
  if (h.source == "square") {
    auto sq = bench::to_json(h.square);
    sq.erase("dt");
    j["square"] = sq;
  }
  if (h.source == "trace") {
    j["path"] = h.trace_path;
    j["position"] = to_json(h.position);
  }
  if (h.source == "live") {
    j["smoothing_s"] = h.smoothing_s;
  }
  return j;
}

HandConfig hand_from_json(const json & j)
{
  reject_unknown(j, {"source", "position", "to", "at_s", "square", "path", "smoothing_s"}, "hand");
  HandConfig h;
  h.source = j.value("source", h.source);
  static const std::set<std::string> sources{"static", "square", "step", "trace", "live"};
  if (!sources.count(h.source)) {
    throw ConfigError("unknown hand source '" + h.source + "'");
  }
  if (j.contains("position")) {
    h.position = vec3_from_json(j["position"]);
  }
  if (j.contains("to")) {
    h.step_to = vec3_from_json(j["to"]);
  }
  h.step_at_s = j.value("at_s", h.step_at_s);
  if (j.contains("square")) {
    h.square = bench::square_params_from_json(j["square"]);
  }
  h.trace_path = j.value("path", h.trace_path);
  h.smoothing_s = j.value("smoothing_s", h.smoothing_s);
  if (h.source == "trace" && h.trace_path.empty()) {
    throw ConfigError("trace hand source needs a path");
  }
  if (!(h.smoothing_s >= 0.0) || !(h.step_at_s >= 0.0)) {
    throw ConfigError("hand smoothing_s and at_s must be non-negative");
  }
  return h;
}

}  // namespace

std::string to_string(ControlMode m)
{
  return m == ControlMode::Impedance ? "impedance" : "potential_field";
}

ControlMode parse_control_mode(const std::string & s)
{
  if (s == "impedance") {
    return ControlMode::Impedance;
  }
  if (s == "potential_field") {
    return ControlMode::PotentialField;
  }
  throw ConfigError("unknown controller '" + s + "'");
}

std::string to_string(ControllerPhase p)
{
  switch (p) {
    case ControllerPhase::Idle:
      return "idle";
    case ControllerPhase::Approach:
      return "approach";
    case ControllerPhase::Attach:
      return "attach";
    case ControllerPhase::Follow:
      return "follow";
  }
  return "idle";
}

ControllerPhase parse_phase(const std::string & s)
{
  static const std::map<std::string, ControllerPhase> names{
    {"idle", ControllerPhase::Idle},
    {"approach", ControllerPhase::Approach},
    {"attach", ControllerPhase::Attach},
    {"follow", ControllerPhase::Follow}};
  const auto it = names.find(s);
  if (it == names.end()) {
    throw ConfigError("unknown phase '" + s + "'");
  }
  return it->second;
}

Vec3 vec3_from_json(const json & j)
{
  if (!j.is_array() || j.size() != 3) {
    throw ConfigError("expected a 3-element array");
  }
  Vec3 v(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
  if (!all_finite(v)) {
    throw ConfigError("vector components must be finite");
  }
  return v;
}

json to_json(const Vec3 & v) { return json::array({v.x(), v.y(), v.z()}); }

json to_json(const impedance::ImpedanceParams & p)
{
  return {{"M", p.mass}, {"D", p.damping}, {"K", p.stiffness}, {"K_v", p.hand_gain}};
}

impedance::ImpedanceParams impedance_from_json(const json & j)
{
  reject_unknown(j, {"M", "D", "K", "K_v"}, "impedance");
  return params_with_defaults(j, impedance::critically_damped(1.9, 20.88));
}

std::uint64_t ScenarioConfig::tick_count() const
{
  double d = 10.0;
  if (duration_s) {
    d = *duration_s;
  } else if (hand.source == "square") {
    auto sq = hand.square;
    sq.dt = dt;
    d = bench::square_trajectory(sq).duration();
  }
  return static_cast<std::uint64_t>(std::llround(d / dt));
}

ScenarioConfig scenario_from_json(const json & j)
{
  reject_unknown(
    j,
    {"seed", "dt", "duration_s", "controller", "topology", "impedance", "apf", "plant", "tracking", "phases",
     "initial_positions", "hand", "snapshot_hz"},
    "scenario");
  ScenarioConfig c;
  try {
    c.seed = j.value("seed", c.seed);
    c.dt = j.value("dt", c.dt);
    if (j.contains("duration_s") && !j["duration_s"].is_null()) {
      c.duration_s = j["duration_s"].get<double>();
      if (!(*c.duration_s >= 0.0)) {
        throw ConfigError("duration_s must be non-negative");
      }
    }
    if (j.contains("controller")) {
      c.controller = parse_control_mode(j["controller"].get<std::string>());
    }
    if (j.contains("topology")) {
      c.topology = topology::topology_config_from_json(j["topology"]);
    }
    if (j.contains("impedance")) {
      const auto & ji = j["impedance"];
      reject_unknown(ji, {"M", "D", "K", "K_v", "edge_overrides"}, "impedance");
      json base = ji;
      base.erase("edge_overrides");
      c.impedance = impedance_from_json(base);
      for (const auto & jo : ji.value("edge_overrides", json::array())) {
        reject_unknown(jo, {"a", "b", "M", "D", "K", "K_v"}, "edge override");
        c.edge_overrides.push_back(
          EdgeOverride{node_from(jo.at("a")), node_from(jo.at("b")), params_with_defaults(jo, c.impedance)});
      }
    }
    if (j.contains("apf")) {
      c.apf = apf::apf_params_from_json(j["apf"]);
    }
    if (j.contains("plant")) {
      c.plant = plant_params_from_json(j["plant"]);
    }
    if (j.contains("tracking")) {
      const auto & jt = j["tracking"];
      reject_unknown(jt, {"gain", "shaping_gain", "accel_fraction", "speed_fraction"}, "tracking");
      c.tracking.gain = jt.value("gain", c.tracking.gain);
      c.tracking.shaping_gain = jt.value("shaping_gain", c.tracking.shaping_gain);
      c.tracking.accel_fraction = jt.value("accel_fraction", c.tracking.accel_fraction);
      c.tracking.speed_fraction = jt.value("speed_fraction", c.tracking.speed_fraction);
    }
    if (j.contains("phases")) {
      const auto & jp = j["phases"];
      reject_unknown(
        jp, {"attach_radius", "attach_dwell_s", "stall_speed", "stall_time_s", "initial", "engage_at_s"}, "phases");
      c.phases.attach_radius = jp.value("attach_radius", c.phases.attach_radius);
      c.phases.attach_dwell_s = jp.value("attach_dwell_s", c.phases.attach_dwell_s);
      c.phases.stall_speed = jp.value("stall_speed", c.phases.stall_speed);
      c.phases.stall_time_s = jp.value("stall_time_s", c.phases.stall_time_s);
      if (jp.contains("initial")) {
        c.phases.initial = parse_phase(jp["initial"].get<std::string>());
      }
      if (jp.contains("engage_at_s")) {
        if (jp["engage_at_s"].is_null()) {
          c.phases.engage_at_s.reset();
        } else {
          c.phases.engage_at_s = jp["engage_at_s"].get<double>();
        }
      }
    }
    if (j.contains("initial_positions")) {
      for (const auto & p : j["initial_positions"]) {
        c.initial_positions.push_back(vec3_from_json(p));
      }
    }
    if (j.contains("hand")) {
      c.hand = hand_from_json(j["hand"]);
    }
    c.snapshot_hz = j.value("snapshot_hz", c.snapshot_hz);
  } catch (const json::exception & ex) {
    throw ConfigError(std::string("scenario: ") + ex.what());
  } catch (const DomainError & ex) {
    throw ConfigError(std::string("scenario: ") + ex.what());
  }

  if (!(c.dt > 0.0)) {
    throw ConfigError("dt must be positive");
  }
  if (!(c.snapshot_hz > 0.0)) {
    throw ConfigError("snapshot_hz must be positive");
  }
  const auto & t = c.tracking;
  if (!(t.gain >= 0.0) || !(t.shaping_gain > 0.0) || !(t.accel_fraction > 0.0) || !(t.speed_fraction > 0.0) ||
      t.accel_fraction > 1.0 || t.speed_fraction > 1.0) {
    throw ConfigError("tracking gains must be positive and fractions in (0, 1]");
  }
  const auto & ph = c.phases;
  if (!(ph.attach_radius > 0.0) || !(ph.attach_dwell_s >= 0.0) || !(ph.stall_speed >= 0.0) ||
      !(ph.stall_time_s > 0.0)) {
    throw ConfigError("phase thresholds must be positive");
  }
  if (ph.initial != ControllerPhase::Idle && ph.initial != ControllerPhase::Follow) {
    throw ConfigError("phases.initial must be idle or follow");
  }
  if (!c.initial_positions.empty() && c.initial_positions.size() != c.topology.drones) {
    throw ConfigError("initial_positions must list one position per drone");
  }
  build_graph(c);  // surfaces bad overrides early
  return c;
}

ScenarioConfig load_scenario(const std::filesystem::path & path)
{
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config " + path.string());
  }
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception & ex) {
    throw ConfigError(path.string() + ": " + ex.what());
  }
  return scenario_from_json(j);
}

json to_json(const ScenarioConfig & c)
{
  json imp = to_json(c.impedance);
  json overrides = json::array();
  for (const auto & o : c.edge_overrides) {
    json jo = to_json(o.params);
    jo["a"] = node_to(o.a);
    jo["b"] = node_to(o.b);
    overrides.push_back(jo);
  }
  imp["edge_overrides"] = overrides;

  json phases{
    {"attach_radius", c.phases.attach_radius},
    {"attach_dwell_s", c.phases.attach_dwell_s},
    {"stall_speed", c.phases.stall_speed},
    {"stall_time_s", c.phases.stall_time_s},
    {"initial", to_string(c.phases.initial)}};
  phases["engage_at_s"] = c.phases.engage_at_s ? json(*c.phases.engage_at_s) : json(nullptr);

  json initial = json::array();
  for (const auto & p : c.initial_positions) {
    initial.push_back(to_json(p));
  }

  json j{
    {"seed", c.seed},
    {"dt", c.dt},
    {"controller", to_string(c.controller)},
    {"topology", topology::to_json(c.topology)},
    {"impedance", imp},
    {"apf", apf::to_json(c.apf)},
    {"plant", to_json(c.plant)},
    {"tracking",
     {{"gain", c.tracking.gain},
      {"shaping_gain", c.tracking.shaping_gain},
      {"accel_fraction", c.tracking.accel_fraction},
      {"speed_fraction", c.tracking.speed_fraction}}},
    {"phases", phases},
    {"initial_positions", initial},
    {"hand", hand_to_json(c.hand)},
    {"snapshot_hz", c.snapshot_hz}};
  j["duration_s"] = c.duration_s ? json(*c.duration_s) : json(nullptr);
  return j;
}

topology::LinkGraph build_graph(const ScenarioConfig & c)
{
  auto g = topology::build_topology(c.topology, c.impedance);
  for (const auto & o : c.edge_overrides) {
    try {
      topology::override_edge(g, o.a, o.b, o.params);
    } catch (const DomainError & ex) {
      throw ConfigError(std::string("edge override: ") + ex.what());
    }
  }
  return g;
}

std::vector<Vec3> hand_samples_from_trace(const std::filesystem::path & csv, const Vec3 & initial)
{
  std::ifstream in(csv);
  if (!in) {
    throw ConfigError("cannot open trace " + csv.string());
  }
  const auto rows = read_trace_csv(in);
  std::vector<Vec3> samples{initial};
  for (const auto & r : rows) {
    if (r.tick == samples.size()) {
      samples.push_back(r.hand);
    } else if (r.tick + 1 != samples.size()) {
      throw ConfigError("trace ticks are not contiguous at tick " + std::to_string(r.tick));
    }
  }
  return samples;
}

std::unique_ptr<HandSource> make_hand_source(const ScenarioConfig & c)
{
  const auto & h = c.hand;
  if (h.source == "static") {
    return std::make_unique<StaticHand>(h.position);
  }
  if (h.source == "step") {
    const auto at = static_cast<std::uint64_t>(std::llround(h.step_at_s / c.dt));
    return std::make_unique<StepHand>(h.position, h.step_to, at);
  }
  if (h.source == "square") {
    auto sq = h.square;
    sq.dt = c.dt;
    return std::make_unique<SampledHand>(bench::square_trajectory(sq).position, "square");
  }
  if (h.source == "trace") {
    return std::make_unique<SampledHand>(hand_samples_from_trace(h.trace_path, h.position), "trace");
  }
  if (h.source == "live") {
    return std::make_unique<LiveHand>(h.position, h.smoothing_s, c.dt);
  }
  throw ConfigError("unknown hand source '" + h.source + "'");
}

}  // namespace swarmtouch::sim
