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

#include "swarmtouch/sim/world.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace swarmtouch::sim
{
namespace
{

using topology::kHand;
using topology::NodeId;

void push_event(WorldState & w, std::string type, nlohmann::json data)
{
  w.events.push_back(Event{w.tick, w.clock(), std::move(type), std::move(data)});
}

void reset_incident_links(WorldState & w, const topology::LinkGraph & graph, NodeId drone)
{
  for (std::size_t e : graph.incident(drone)) {
    w.links[e] = impedance::LinkState3{};
  }
}

bool following(const WorldState & w, NodeId n)
{
  return n == kHand || w.drones[static_cast<std::size_t>(n)].phase == ControllerPhase::Follow;
}

std::vector<apf::Obstacle> obstacles_for(const WorldState & w, std::size_t self)
{
  std::vector<apf::Obstacle> obs;
  obs.reserve(w.drones.size());
  for (std::size_t j = 0; j < w.drones.size(); ++j) {
    if (j != self) {
      obs.push_back({w.drones[j].state.position, apf::ObstacleKind::Drone});
    }
  }
  obs.push_back({w.hand.position, apf::ObstacleKind::Hand});
  return obs;
}

// Share of the plant speed limit the feedforward may use; the rest is left
// for the position feedback.
constexpr double kFeedforwardHeadroom = 0.95;

// Moves the shaped reference toward `target` without exceeding the speed and
// acceleration the plant can deliver, then returns feedforward + feedback.
Vec3 governed_command(
  TrackerState & tr, const Vec3 & target_velocity, const DroneState & d, const ControllerSettings & s, double dt)
{
  const double v_cap = s.tracking.speed_fraction * s.plant.v_max;
  const double a_cap = s.tracking.accel_fraction * s.plant.a_max;

  const Vec3 tv = clamp_norm(target_velocity, v_cap);
  const Vec3 e = tr.target - tr.reference;
  const double en = e.norm();
  Vec3 v_goal = tv;
  if (en > 0.0) {
    const double closing = std::min(s.tracking.shaping_gain * en, std::sqrt(a_cap * en));
    v_goal += e / en * closing;
  }
  const Vec3 dv = clamp_norm(v_goal - tr.reference_velocity, a_cap * dt);
  Vec3 change = clamp_norm(tr.reference_velocity + dv, v_cap) - tr.reference_velocity;

  // The feedforward below inverts the plant's velocity lag exactly, which asks
  // for more than the plant's speed limit when accelerating near top speed.
  // Shrink the step until the command fits.
  const double lead = 1.0 / (1.0 - std::exp(-dt / s.plant.tau));
  const Vec3 u = lead * change;
  const Vec3 & v0 = tr.reference_velocity;
  const double v_fit = kFeedforwardHeadroom * s.plant.v_max;
  if ((v0 + u).norm() > v_fit) {
    const double qa = u.squaredNorm();
    const double qb = 2.0 * v0.dot(u);
    const double qc = v0.squaredNorm() - v_fit * v_fit;
    const double scale = qc < 0.0 ? (-qb + std::sqrt(qb * qb - 4.0 * qa * qc)) / (2.0 * qa) : 0.0;
    change *= std::clamp(scale, 0.0, 1.0);
  }
  const Vec3 next_v = v0 + change;
  const Vec3 feedback = s.tracking.gain * (tr.reference - d.position);
  tr.reference_velocity = next_v;
  tr.reference += next_v * dt;

  return next_v + (lead - 1.0) * change + feedback;
}

}  // namespace

void phase_transition(WorldState & w, const topology::LinkGraph & graph, const PhaseParams & p)
{
  for (std::size_t i = 0; i < w.drones.size(); ++i) {
    auto & d = w.drones[i];
    const auto id = static_cast<NodeId>(i);
    const ControllerPhase before = d.phase;
    if (!w.engaged) {
      if (d.phase != ControllerPhase::Idle) {
        d.phase = ControllerPhase::Idle;
        d.hold = d.state.position;
        reset_incident_links(w, graph, id);
      }
    } else {
      switch (d.phase) {
        case ControllerPhase::Idle:
          d.phase = ControllerPhase::Approach;
          d.stall_elapsed_s = 0.0;
          d.stall_reported = false;
          break;
        case ControllerPhase::Approach: {
          const Vec3 slot = topology::desired_position(graph, id, w.hand.position);
          if ((slot - d.state.position).norm() <= p.attach_radius) {
            d.phase = ControllerPhase::Attach;
          }
          break;
        }
        case ControllerPhase::Attach:
          if (d.phase_elapsed_s + 1e-9 >= p.attach_dwell_s) {
            d.phase = ControllerPhase::Follow;
            d.tracker.primed = false;
            reset_incident_links(w, graph, id);
          }
          break;
        case ControllerPhase::Follow:
          break;
      }
    }
    if (d.phase != before) {
      d.phase_elapsed_s = 0.0;
      push_event(w, "phase_change", {{"drone", i}, {"from", to_string(before)}, {"to", to_string(d.phase)}});
    }
  }
}

std::vector<Vec3> controller_tick(
  WorldState & w, const topology::LinkGraph & graph, const std::vector<impedance::DiscreteLink> & links,
  const ControllerSettings & s)
{
  const std::size_t n = w.drones.size();
  if (graph.drone_count != n || graph.offsets.size() != n || graph.edges.size() != links.size() ||
      w.links.size() != links.size()) {
    throw ConfigError("world, graph and link set sizes disagree");
  }
  const double dt = w.dt;
  const Vec3 & hand = w.hand.position;
  std::vector<Vec3> cmds(n, Vec3::Zero());

  std::vector<Vec3> previous_target(n);
  std::vector<bool> fresh(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    auto & d = w.drones[i];
    const Vec3 slot = hand + graph.offsets[i];
    if (d.phase == ControllerPhase::Follow && !d.tracker.primed) {
      d.tracker.target = slot;
      d.tracker.reference = d.state.position;
      d.tracker.reference_velocity = clamp_norm(d.state.velocity, s.tracking.speed_fraction * s.plant.v_max);
      d.tracker.primed = true;
      fresh[i] = true;
    }
    previous_target[i] = d.phase == ControllerPhase::Follow ? d.tracker.target : slot;
  }

  std::vector<Vec3> candidate_sum(n, Vec3::Zero());
  std::vector<int> candidates(n, 0);
  if (s.mode == ControlMode::Impedance) {
    for (std::size_t e = 0; e < graph.edges.size(); ++e) {
      const auto & edge = graph.edges[e];
      if (!following(w, edge.a) || !following(w, edge.b)) {
        continue;
      }
      if (edge.is_hand_link()) {
        const auto d = static_cast<std::size_t>(edge.a == kHand ? edge.b : edge.a);
        const Vec3 force = impedance::hand_force(edge.params.hand_gain, w.hand.velocity);
        w.links[e] = impedance::step_link(links[e], w.links[e], force);
        candidate_sum[d] += hand + graph.offsets[d] - w.links[e].displacement();
        ++candidates[d];
        continue;
      }
      const auto a = static_cast<std::size_t>(edge.a);
      const auto b = static_cast<std::size_t>(edge.b);
      const auto & da = w.drones[a].state;
      const auto & db = w.drones[b].state;
      const Vec3 stretch = (db.position - da.position) - (graph.offsets[b] - graph.offsets[a]);
      const Vec3 stretch_rate = db.velocity - da.velocity;
      const Vec3 force = edge.params.stiffness * stretch + edge.params.damping * stretch_rate;
      w.links[e] = impedance::step_link(links[e], w.links[e], force);
      const Vec3 dx = w.links[e].displacement();
      candidate_sum[b] += previous_target[a] + graph.offsets[b] - graph.offsets[a] - dx;
      candidate_sum[a] += previous_target[b] + graph.offsets[a] - graph.offsets[b] + dx;
      ++candidates[a];
      ++candidates[b];
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    auto & d = w.drones[i];
    const Vec3 slot = hand + graph.offsets[i];
    Vec3 cmd = Vec3::Zero();
    bool proximity = false;
    switch (d.phase) {
      case ControllerPhase::Idle:
        cmd = s.tracking.gain * (d.hold - d.state.position);
        break;
      case ControllerPhase::Attach:
        cmd = w.hand.velocity + s.tracking.gain * (slot - d.state.position);
        break;
      case ControllerPhase::Approach: {
        const auto obs = obstacles_for(w, i);
        const auto c = apf::apf_command(d.state.position, slot, obs, s.apf);
        cmd = c.velocity;
        proximity = c.proximity_violation;
        const bool away = (slot - d.state.position).norm() > s.phases.attach_radius;
        if (away && cmd.norm() < s.phases.stall_speed) {
          d.stall_elapsed_s += dt;
          if (d.stall_elapsed_s >= s.phases.stall_time_s && !d.stall_reported) {
            d.stall_reported = true;
            push_event(w, "apf_stall", {{"drone", i}, {"distance", (slot - d.state.position).norm()}});
          }
        } else {
          d.stall_elapsed_s = 0.0;
          d.stall_reported = false;
        }
        break;
      }
      case ControllerPhase::Follow:
        if (s.mode == ControlMode::PotentialField) {
          const auto obs = obstacles_for(w, i);
          const auto c = apf::apf_command(d.state.position, slot, obs, s.apf);
          cmd = c.velocity;
          proximity = c.proximity_violation;
        } else {
          const Vec3 target = candidates[i] > 0 ? Vec3(candidate_sum[i] / candidates[i]) : slot;
          const Vec3 target_velocity = fresh[i] ? Vec3::Zero() : Vec3((target - d.tracker.target) / dt);
          d.tracker.target = target;
          cmd = governed_command(d.tracker, target_velocity, d.state, s, dt);
        }
        break;
    }
    if (proximity && !d.proximity) {
      push_event(w, "proximity_violation", {{"drone", i}});
    }
    d.proximity = proximity;
    cmds[i] = clamp_norm(cmd, s.plant.v_max);
  }
  return cmds;
}

std::vector<Vec3> default_initial_positions(const topology::LinkGraph & graph, const Vec3 & hand)
{
  std::vector<Vec3> out;
  for (const auto & o : graph.offsets) {
    const Vec3 slot = hand + o;
    out.emplace_back(slot.x(), slot.y() - 1.0, 0.0);
  }
  return out;
}

World::World(const ScenarioConfig & config, std::unique_ptr<HandSource> hand)
: config_(config), graph_(build_graph(config)), hand_(std::move(hand)), noise_(config.seed)
{
  if (!hand_) {
    throw ConfigError("world needs a hand source");
  }
  validate(config_.plant);
  apf::validate(config_.apf);
  settings_ = ControllerSettings{config_.controller, config_.apf, config_.plant, config_.tracking, config_.phases};

  state_.dt = config_.dt;
  state_.seed = config_.seed;
  state_.hand.position = hand_->initial_position();
  state_.engaged = config_.phases.initial == ControllerPhase::Follow;
  rebuild_links();

  std::vector<Vec3> starts = config_.initial_positions;
  if (starts.empty()) {
    if (config_.phases.initial == ControllerPhase::Follow) {
      for (const auto & o : graph_.offsets) {
        starts.push_back(state_.hand.position + o);
      }
    } else {
      starts = default_initial_positions(graph_, state_.hand.position);
    }
  }
  for (const auto & p : starts) {
    DroneRuntime d;
    d.state.position = p;
    d.hold = p;
    d.phase = config_.phases.initial;
    state_.drones.push_back(d);
  }
  last_commands_.assign(state_.drones.size(), Vec3::Zero());
}

void World::rebuild_links()
{
  discrete_.clear();
  for (const auto & e : graph_.edges) {
    discrete_.push_back(impedance::discretize(e.params, config_.dt));
  }
  state_.links.assign(graph_.edges.size(), impedance::LinkState3{});
}

void World::emit(std::string type, nlohmann::json data) { push_event(state_, std::move(type), std::move(data)); }

void World::step()
{
  if (!state_.engaged && config_.phases.engage_at_s && !auto_engaged_ &&
      state_.clock() + 1e-12 >= *config_.phases.engage_at_s) {
    state_.engaged = true;
    auto_engaged_ = true;
  }
  phase_transition(state_, graph_, settings_.phases);
  last_commands_ = controller_tick(state_, graph_, discrete_, settings_);
  for (std::size_t i = 0; i < state_.drones.size(); ++i) {
    auto & d = state_.drones[i];
    d.state = plant_step(d.state, last_commands_[i], settings_.plant, state_.dt, noise_);
  }
  const Vec3 next_hand = hand_->position_at(state_.tick + 1);
  state_.hand.velocity = (next_hand - state_.hand.position) / state_.dt;
  state_.hand.position = next_hand;
  ++state_.tick;
  for (auto & d : state_.drones) {
    d.phase_elapsed_s += state_.dt;
  }
  if (state_.pattern) {
    const double elapsed_ms = static_cast<double>(state_.tick - state_.pattern->start_tick) * state_.dt * 1000.0;
    if (elapsed_ms + 1e-9 >= state_.pattern->schedule.duration_ms()) {
      emit("pattern_end", {{"label", state_.pattern->schedule.label}});
      state_.pattern.reset();
    }
  }
}

void World::engage()
{
  emit("command", {{"command", {{"type", "engage"}}}});
  state_.engaged = true;
  auto_engaged_ = true;
}

void World::disengage()
{
  emit("command", {{"command", {{"type", "disengage"}}}});
  state_.engaged = false;
  auto_engaged_ = true;
}

void World::set_topology(topology::TopologyKind kind)
{
  emit("command", {{"command", {{"type", "set_topology"}, {"kind", topology::to_string(kind)}}}});
  config_.topology.kind = kind;
  config_.edge_overrides.clear();
  graph_ = topology::build_topology(config_.topology, config_.impedance);
  rebuild_links();
  for (auto & d : state_.drones) {
    d.tracker.primed = false;
  }
}

void World::set_impedance(const impedance::ImpedanceParams & p)
{
  impedance::validate(p);
  impedance::derive_constants(p);
  nlohmann::json cmd = to_json(p);
  cmd["type"] = "set_impedance";
  emit("command", {{"command", cmd}});
  config_.impedance = p;
  config_.edge_overrides.clear();
  graph_ = topology::build_topology(config_.topology, config_.impedance);
  discrete_.clear();
  for (const auto & e : graph_.edges) {
    discrete_.push_back(impedance::discretize(e.params, config_.dt));
  }
}

void World::trigger_pattern(std::string_view label)
{
  const auto [surface, dir] = haptics::decode_label(label);
  auto schedule = haptics::encode_pattern(surface, dir);
  emit("command", {{"command", {{"type", "trigger_pattern"}, {"label", schedule.label}}}});
  if (state_.pattern) {
    emit("pattern_end", {{"label", state_.pattern->schedule.label}, {"interrupted", true}});
  }
  emit("pattern_start", {{"label", schedule.label}, {"schedule", haptics::to_json(schedule)}});
  state_.pattern = ActivePattern{std::move(schedule), state_.tick};
}

void World::apply_recorded(const Event & e)
{
  if (e.type != "command") {
    return;
  }
  const auto & c = e.data.at("command");
  const auto type = c.at("type").get<std::string>();
  if (type == "engage") {
    engage();
  } else if (type == "disengage") {
    disengage();
  } else if (type == "set_topology") {
    set_topology(topology::parse_kind(c.at("kind").get<std::string>()));
  } else if (type == "set_impedance") {
    set_impedance(impedance::ImpedanceParams{
      c.at("M").get<double>(), c.at("D").get<double>(), c.at("K").get<double>(), c.at("K_v").get<double>()});
  } else if (type == "trigger_pattern") {
    trigger_pattern(c.at("label").get<std::string>());
  } else {
    throw ConfigError("unknown recorded command '" + type + "'");
  }
}

std::vector<Event> World::drain_events() { return std::exchange(state_.events, {}); }

std::vector<TraceRow> World::rows() const
{
  std::vector<TraceRow> out;
  out.reserve(state_.drones.size());
  for (std::size_t i = 0; i < state_.drones.size(); ++i) {
    const auto & d = state_.drones[i];
    out.push_back(TraceRow{
      state_.tick, state_.clock(), state_.hand.position, static_cast<int>(i), d.phase, d.state.position,
      d.state.velocity, last_commands_[i]});
  }
  return out;
}

}  // namespace swarmtouch::sim
