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

#include "swarmtouch/server/session.hpp"

#include "swarmtouch/sim/scenario.hpp"

#include <variant>

namespace swarmtouch::server
{
namespace
{

nlohmann::json node_json(topology::NodeId n)
{
  if (n == topology::kHand) {
    return "hand";
  }
  return n;
}

}  // namespace

nlohmann::json snapshot_json(
  const sim::World & world, const std::vector<sim::Event> & events, std::optional<Vec3> hand_target)
{
  const auto & s = world.state();
  nlohmann::json drones = nlohmann::json::array();
  for (std::size_t i = 0; i < s.drones.size(); ++i) {
    const auto & d = s.drones[i];
    drones.push_back(
      {{"id", i},
       {"phase", sim::to_string(d.phase)},
       {"position", sim::to_json(d.state.position)},
       {"velocity", sim::to_json(d.state.velocity)}});
  }
  nlohmann::json edges = nlohmann::json::array();
  for (const auto & e : world.graph().edges) {
    edges.push_back({node_json(e.a), node_json(e.b)});
  }
  nlohmann::json offsets = nlohmann::json::array();
  for (const auto & o : world.graph().offsets) {
    offsets.push_back(sim::to_json(o));
  }
  nlohmann::json evs = nlohmann::json::array();
  for (const auto & e : events) {
    evs.push_back(sim::to_json(e));
  }
  nlohmann::json hand{{"position", sim::to_json(s.hand.position)}, {"velocity", sim::to_json(s.hand.velocity)}};
  if (hand_target) {
    hand["target"] = sim::to_json(*hand_target);
  }
  return {
    {"schema_version", kSchemaVersion},
    {"tick", s.tick},
    {"t", s.clock()},
    {"hand", hand},
    {"drones", drones},
    {"active_pattern", s.pattern ? nlohmann::json(s.pattern->schedule.label) : nlohmann::json(nullptr)},
    {"events", evs},
    {"topology", {{"kind", topology::to_string(world.graph().kind)}, {"edges", edges}, {"offsets", offsets}}}};
}

LiveSession::LiveSession(const sim::ScenarioConfig & config, std::optional<std::filesystem::path> record_dir)
: config_(config), record_dir_(std::move(record_dir))
{
  std::unique_ptr<sim::HandSource> hand;
  if (config_.hand.source == "live") {
    auto live = std::make_unique<sim::LiveHand>(config_.hand.position, config_.hand.smoothing_s, config_.dt);
    live_hand_ = live.get();
    hand = std::move(live);
  } else {
    hand = sim::make_hand_source(config_);
  }
  world_ = std::make_unique<sim::World>(config_, std::move(hand));

  if (record_dir_) {
    std::filesystem::create_directories(*record_dir_);
    std::ofstream cfg(*record_dir_ / sim::kConfigFile);
    cfg << sim::to_json(config_).dump(2) << '\n';
    trace_out_.open(*record_dir_ / sim::kTraceFile, std::ios::binary);
    events_out_.open(*record_dir_ / sim::kEventsFile, std::ios::binary);
    if (!cfg || !trace_out_ || !events_out_) {
      throw std::runtime_error("cannot create recording in " + record_dir_->string());
    }
    writer_ = std::make_unique<sim::TraceWriter>(trace_out_);
    writer_->header();
  }
}

LiveSession::~LiveSession() { flush(); }

void LiveSession::flush()
{
  if (trace_out_.is_open()) {
    trace_out_.flush();
  }
  if (events_out_.is_open()) {
    events_out_.flush();
  }
}

void LiveSession::note(std::string type, nlohmann::json data)
{
  const auto & s = world_->state();
  sim::Event e{s.tick, s.clock(), std::move(type), std::move(data)};
  record_events({e});
  pending_.push_back(std::move(e));
}

void LiveSession::record_events(const std::vector<sim::Event> & events)
{
  if (!events_out_.is_open()) {
    return;
  }
  sim::write_events_jsonl(events_out_, events);
  if (!events_out_ && !record_failed_) {
    record_failed_ = true;
    const auto & s = world_->state();
    pending_.push_back(sim::Event{s.tick, s.clock(), "record_error", {{"file", sim::kEventsFile}}});
  }
}

std::optional<nlohmann::json> LiveSession::apply_text(std::string_view text)
{
  try {
    return apply(parse_command(text));
  } catch (const ProtocolError & ex) {
    return error_frame(ex.error(), ex.detail());
  }
}

std::optional<nlohmann::json> LiveSession::apply(const Command & c)
{
  try {
    if (const auto * x = std::get_if<SetHandTarget>(&c)) {
      if (!live_hand_) {
        return error_frame("rejected", "hand source '" + config_.hand.source + "' is scripted");
      }
      live_hand_->set_target(x->target);
    } else if (const auto * x = std::get_if<SetTopology>(&c)) {
      world_->set_topology(x->kind);
    } else if (const auto * x = std::get_if<SetImpedance>(&c)) {
      world_->set_impedance(resolve_impedance(*x, world_->impedance_params().hand_gain));
    } else if (const auto * x = std::get_if<TriggerPattern>(&c)) {
      world_->trigger_pattern(x->label);
    } else if (std::holds_alternative<Engage>(c)) {
      world_->engage();
    } else if (std::holds_alternative<Disengage>(c)) {
      world_->disengage();
    } else if (std::holds_alternative<Pause>(c)) {
      if (!paused_) {
        paused_ = true;
        note("session", {{"paused", true}});
      }
    } else if (std::holds_alternative<Resume>(c)) {
      if (paused_) {
        paused_ = false;
        note("session", {{"paused", false}});
      }
    } else if (const auto * x = std::get_if<SetSpeed>(&c)) {
      speed_ = x->factor;
      note("session", {{"speed", speed_}});
    }
  } catch (const ProtocolError & ex) {
    return error_frame(ex.error(), ex.detail());
  } catch (const std::exception & ex) {
    return error_frame("rejected", ex.what());
  }
  auto events = world_->drain_events();
  record_events(events);
  pending_.insert(pending_.end(), events.begin(), events.end());
  return std::nullopt;
}

bool LiveSession::tick()
{
  if (paused_) {
    return false;
  }
  world_->step();
  auto events = world_->drain_events();
  record_events(events);
  pending_.insert(pending_.end(), events.begin(), events.end());
  if (writer_) {
    for (const auto & r : world_->rows()) {
      writer_->row(r);
      ++rows_recorded_;
    }
    if (!trace_out_ && !record_failed_) {
      record_failed_ = true;
      const auto & s = world_->state();
      pending_.push_back(sim::Event{s.tick, s.clock(), "record_error", {{"file", sim::kTraceFile}}});
    }
  }
  return true;
}

nlohmann::json LiveSession::snapshot()
{
  std::optional<Vec3> target;
  if (live_hand_) {
    target = live_hand_->target();
  }
  auto j = snapshot_json(*world_, pending_, target);
  pending_.clear();
  return j;
}

nlohmann::json LiveSession::status() const
{
  return {
    {"schema_version", kSchemaVersion},
    {"status", {{"paused", paused_}, {"speed", speed_}, {"tick", world_->state().tick}}}};
}

}  // namespace swarmtouch::server
