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

#include "swarmtouch/sim/scenario.hpp"
#include "swarmtouch/sim/world.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace
{

using swarmtouch::ConfigError;
using swarmtouch::Vec3;
using namespace swarmtouch::sim;
using nlohmann::json;

constexpr double kStepOvershootTolerance = 1e-6;
constexpr double kStationaryTolerance = 1e-3;

ScenarioConfig config(const json & j) { return scenario_from_json(j); }

ScenarioConfig following(const std::string & kind, double seconds)
{
  return config(
    {{"duration_s", seconds},
     {"topology", {{"kind", kind}}},
     {"plant", {{"noise_sigma", 0.0}}},
     {"phases", {{"initial", "follow"}}}});
}

Event command_event(std::uint64_t tick, json command)
{
  Event e;
  e.tick = tick;
  e.type = "command";
  e.data = {{"command", std::move(command)}};
  return e;
}

std::filesystem::path fresh_dir(const std::string & name)
{
  auto dir = std::filesystem::temp_directory_path() / ("swarmtouch_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

bool allowed(ControllerPhase from, ControllerPhase to)
{
  if (from == to || to == ControllerPhase::Idle) {
    return true;
  }
  return (from == ControllerPhase::Idle && to == ControllerPhase::Approach) ||
         (from == ControllerPhase::Approach && to == ControllerPhase::Attach) ||
         (from == ControllerPhase::Attach && to == ControllerPhase::Follow);
}

}  // namespace

TEST(Controller, EquilibriumCommandsZero)
{
  for (const char * kind : {"star", "ring", "tree"}) {
    const auto c = following(kind, 1.0);
    World world(c, make_hand_source(c));
    for (int k = 0; k < 100; ++k) {
      world.step();
      for (const auto & cmd : world.last_commands()) {
        ASSERT_LT(cmd.norm(), 1e-9) << kind << " tick " << k;
      }
    }
    for (const auto & l : world.state().links) {
      EXPECT_LT(l.displacement().norm(), 1e-12);
    }
  }
}

TEST(Controller, ApproachHeadsStraightForSlot)
{
  auto c = config(
    {{"topology", {{"kind", "star"}, {"drones", 1}}},
     {"plant", {{"noise_sigma", 0.0}}},
     {"initial_positions", {{0.3, 0.0, 2.4}}}});
  World world(c, make_hand_source(c));
  world.step();
  EXPECT_EQ(world.state().drones[0].phase, ControllerPhase::Approach);
  const Vec3 cmd = world.last_commands()[0];
  const double expected = std::min(c.apf.k_att * 1.0, c.apf.v_max);
  EXPECT_NEAR(cmd.norm(), expected, 1e-12);
  EXPECT_LT((cmd.normalized() - Vec3(0, 0, -1)).norm(), 1e-12);
}

TEST(Controller, SizeMismatchIsConfigError)
{
  const auto c = following("star", 1.0);
  World world(c, make_hand_source(c));
  auto state = world.state();
  state.drones.pop_back();
  std::vector<swarmtouch::impedance::DiscreteLink> links(
    world.graph().edges.size(), swarmtouch::impedance::discretize(c.impedance, c.dt));
  EXPECT_THROW(controller_tick(state, world.graph(), links, ControllerSettings{}), ConfigError);
}

TEST(Phases, AttachRadiusThreshold)
{
  const auto c = following("star", 1.0);
  World world(c, make_hand_source(c));
  const auto & g = world.graph();
  for (double dist : {0.06, 0.04}) {
    WorldState w = world.state();
    for (std::size_t i = 0; i < w.drones.size(); ++i) {
      w.drones[i].phase = ControllerPhase::Approach;
      w.drones[i].state.position = w.hand.position + g.offsets[i] + Vec3(dist, 0, 0);
    }
    phase_transition(w, g, c.phases);
    for (const auto & d : w.drones) {
      EXPECT_EQ(d.phase, dist > c.phases.attach_radius ? ControllerPhase::Approach : ControllerPhase::Attach);
    }
  }
}

TEST(Phases, FullLifecycleAndDisengage)
{
  auto c = config({{"duration_s", 20.0}, {"plant", {{"noise_sigma", 0.0}}}});
  World world(c, make_hand_source(c));
  std::vector<ControllerPhase> last(world.state().drones.size(), ControllerPhase::Idle);
  std::map<int, double> attach_time;
  bool all_follow = false;
  for (int k = 0; k < 2000 && !all_follow; ++k) {
    world.step();
    all_follow = true;
    for (std::size_t i = 0; i < last.size(); ++i) {
      const auto now = world.state().drones[i].phase;
      ASSERT_TRUE(allowed(last[i], now)) << to_string(last[i]) << " -> " << to_string(now);
      if (now == ControllerPhase::Attach && last[i] != ControllerPhase::Attach) {
        attach_time[static_cast<int>(i)] = world.state().clock();
      }
      if (now == ControllerPhase::Follow && last[i] == ControllerPhase::Attach) {
        EXPECT_NEAR(world.state().clock() - attach_time[static_cast<int>(i)], c.phases.attach_dwell_s, 2 * c.dt);
      }
      all_follow = all_follow && now == ControllerPhase::Follow;
      last[i] = now;
    }
  }
  ASSERT_TRUE(all_follow);

  for (int k = 0; k < 50; ++k) {
    world.step();
  }
  world.disengage();
  world.step();
  for (const auto & d : world.state().drones) {
    EXPECT_EQ(d.phase, ControllerPhase::Idle);
  }
  for (const auto & l : world.state().links) {
    EXPECT_EQ(l, swarmtouch::impedance::LinkState3{});
  }
  const auto events = world.drain_events();
  EXPECT_TRUE(std::any_of(events.begin(), events.end(), [](const Event & e) { return e.type == "phase_change"; }));
}

TEST(Phases, NoEngageWithoutTrigger)
{
  auto c = config({{"plant", {{"noise_sigma", 0.0}}}, {"phases", {{"engage_at_s", nullptr}}}});
  World world(c, make_hand_source(c));
  for (int k = 0; k < 300; ++k) {
    world.step();
  }
  for (const auto & d : world.state().drones) {
    EXPECT_EQ(d.phase, ControllerPhase::Idle);
    EXPECT_LT((d.state.position - d.hold).norm(), 1e-9);
  }
}

TEST(Scenario, ZeroTicksIsHeaderOnly)
{
  auto c = config(json::object());
  const auto trace = run_scenario(c, make_hand_source(c), 0);
  EXPECT_EQ(trace.csv(), std::string(kTraceHeader) + "\n");
  EXPECT_TRUE(trace.rows.empty());
  EXPECT_EQ(trace.initial.size(), c.topology.drones);
}

TEST(Scenario, ByteIdenticalForSameSeed)
{
  auto c = config({{"duration_s", 12.0}, {"seed", 42}});
  const auto a = run_scenario(c);
  const auto b = run_scenario(c);
  EXPECT_EQ(a.csv(), b.csv());
  EXPECT_EQ(a.events_jsonl(), b.events_jsonl());
  c.seed = 43;
  EXPECT_NE(run_scenario(c).csv(), a.csv());
}

TEST(Scenario, NoiseFreeIgnoresSeed)
{
  auto c = config({{"duration_s", 5.0}, {"plant", {{"noise_sigma", 0.0}}}});
  const auto a = run_scenario(c);
  c.seed = 1234;
  EXPECT_EQ(run_scenario(c).csv(), a.csv());
}

TEST(Scenario, ClockAdvancesExactly)
{
  auto c = config({{"dt", 0.01}});
  World world(c, make_hand_source(c));
  for (std::uint64_t n = 1; n <= 1000; ++n) {
    world.step();
    ASSERT_EQ(world.state().tick, n);
    ASSERT_EQ(world.state().clock(), static_cast<double>(n) * 0.01);
  }
}

TEST(Scenario, RowsAreDroneMajorPerTick)
{
  auto c = config({{"duration_s", 0.5}});
  const auto trace = run_scenario(c);
  ASSERT_EQ(trace.rows.size(), 50u * c.topology.drones);
  for (std::size_t i = 0; i < trace.rows.size(); ++i) {
    EXPECT_EQ(trace.rows[i].tick, i / c.topology.drones + 1);
    EXPECT_EQ(trace.rows[i].drone_id, static_cast<int>(i % c.topology.drones));
  }
}

TEST(Scenario, StepResponseHasNoOvershoot)
{
  for (const char * kind : {"star", "ring", "tree"}) {
    auto c = following(kind, 8.0);
    c.hand.source = "step";
    c.hand.position = Vec3(0, 0, 1);
    c.hand.step_to = Vec3(0.5, 0, 1);
    c.hand.step_at_s = 1.0;
    const auto trace = run_scenario(c);
    const auto g = build_graph(c);
    for (std::size_t d = 0; d < g.drone_count; ++d) {
      const double final_x = 0.5 + g.offsets[d].x();
      double prev = -1e9;
      double last = 0.0;
      for (const auto & r : trace.rows) {
        if (r.drone_id != static_cast<int>(d)) {
          continue;
        }
        ASSERT_LE(r.position.x(), final_x + kStepOvershootTolerance) << kind << " drone " << d << " t " << r.t;
        ASSERT_GE(r.position.x(), prev - kStepOvershootTolerance) << kind << " drone " << d << " t " << r.t;
        prev = r.position.x();
        last = r.position.x();
      }
      EXPECT_NEAR(last, final_x, 1e-4) << kind << " drone " << d;
    }
  }
}

TEST(Scenario, StaticHandSettlesOnSlots)
{
  for (const char * kind : {"star", "ring", "tree"}) {
    auto c = following(kind, 8.0);
    c.initial_positions = {Vec3(0.5, 0.2, 1.2), Vec3(-0.4, 0.5, 1.6), Vec3(0.0, -0.6, 1.0)};
    const auto trace = run_scenario(c);
    const auto g = build_graph(c);
    for (const auto & r : trace.rows) {
      if (r.t >= 5.0) {
        const double err = (r.position - (r.hand + g.offsets[r.drone_id])).norm();
        ASSERT_LT(err, kStationaryTolerance) << kind << " drone " << r.drone_id << " t " << r.t;
      }
    }
  }
}

TEST(Scenario, PhaseTransitionsFollowLifecycleUnderCommands)
{
  auto c = config({{"duration_s", 14.0}, {"phases", {{"engage_at_s", nullptr}}}});
  const CommandSchedule commands{
    command_event(10, {{"type", "engage"}}),
    command_event(700, {{"type", "disengage"}}),
    command_event(800, {{"type", "engage"}}),
    command_event(900, {{"type", "set_topology"}, {"kind", "ring"}})};
  const auto trace = run_scenario(c, make_hand_source(c), c.tick_count(), commands);
  std::vector<ControllerPhase> last(c.topology.drones, ControllerPhase::Idle);
  for (const auto & r : trace.rows) {
    ASSERT_TRUE(allowed(last[r.drone_id], r.phase)) << "tick " << r.tick;
    last[r.drone_id] = r.phase;
  }
}

TEST(Config, RejectsUnknownKeys)
{
  EXPECT_THROW(config({{"seeed", 1}}), ConfigError);
  EXPECT_THROW(config({{"plant", {{"tau", 0.3}, {"mass", 1}}}}), ConfigError);
  EXPECT_THROW(config({{"hand", {{"source", "joystick"}}}}), ConfigError);
  EXPECT_THROW(config({{"impedance", {{"M", 1.9}, {"D", 3.0}, {"K", 20.88}}}}), ConfigError);
  EXPECT_THROW(config({{"topology", {{"drones", 3}}}, {"initial_positions", {{0, 0, 0}}}}), ConfigError);
  EXPECT_THROW(config({{"dt", "fast"}}), ConfigError);
}

TEST(Config, JsonRoundTrip)
{
  auto c = config(
    {{"seed", 9},
     {"controller", "potential_field"},
     {"topology", {{"kind", "tree"}, {"drones", 4}}},
     {"impedance", {{"M", 2.0}, {"K", 8.0}, {"edge_overrides", {{{"a", "hand"}, {"b", 0}, {"K", 18.0}}}}}},
     {"hand", {{"source", "step"}, {"to", {1, 0, 1}}, {"at_s", 2.0}}}});
  const auto back = scenario_from_json(json::parse(to_json(c).dump()));
  EXPECT_EQ(to_json(back), to_json(c));
  EXPECT_EQ(back.controller, ControlMode::PotentialField);
  EXPECT_EQ(build_graph(back).edges[0].params.stiffness, 18.0);
  EXPECT_DOUBLE_EQ(build_graph(back).edges[0].params.damping, 2.0 * std::sqrt(2.0 * 18.0));
}

TEST(Trace, CsvRoundTripIsExact)
{
  auto c = config({{"duration_s", 3.0}});
  const auto trace = run_scenario(c);
  std::istringstream in(trace.csv());
  const auto rows = read_trace_csv(in);
  ASSERT_EQ(rows.size(), trace.rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].tick, trace.rows[i].tick);
    EXPECT_EQ(rows[i].t, trace.rows[i].t);
    EXPECT_EQ(rows[i].phase, trace.rows[i].phase);
    EXPECT_EQ(rows[i].position, trace.rows[i].position);
    EXPECT_EQ(rows[i].velocity, trace.rows[i].velocity);
    EXPECT_EQ(rows[i].command, trace.rows[i].command);
    EXPECT_EQ(rows[i].hand, trace.rows[i].hand);
  }
  std::istringstream bad("tick,t\n1,0.01\n");
  EXPECT_THROW(read_trace_csv(bad), ConfigError);
}

TEST(Trace, EventsRoundTrip)
{
  auto c = config({{"duration_s", 10.0}});
  const auto trace = run_scenario(c);
  ASSERT_FALSE(trace.events.empty());
  std::istringstream in(trace.events_jsonl());
  const auto events = read_events_jsonl(in);
  ASSERT_EQ(events.size(), trace.events.size());
  for (std::size_t i = 0; i < events.size(); ++i) {
    EXPECT_EQ(to_json(events[i]), to_json(trace.events[i]));
  }
}

TEST(Replay, RecordedRunReplaysIdentically)
{
  auto c = config({{"duration_s", 12.0}, {"seed", 5}, {"phases", {{"engage_at_s", nullptr}}}});
  const CommandSchedule commands{
    command_event(5, {{"type", "engage"}}),
    command_event(400, {{"type", "trigger_pattern"}, {"label", "ER"}}),
    command_event(600, {{"type", "set_impedance"}, {"M", 1.0}, {"D", 2.0 * std::sqrt(10.0)}, {"K", 10.0}, {"K_v", 3.0}}),
    command_event(800, {{"type", "set_topology"}, {"kind", "tree"}}),
    command_event(1000, {{"type", "disengage"}})};
  const auto trace = run_scenario(c, make_hand_source(c), c.tick_count(), commands);
  const auto dir = fresh_dir("replay");
  write_run_directory(dir, c, trace);
  const auto rec = load_recording(dir);
  EXPECT_EQ(rec.rows.size(), trace.rows.size());
  const auto again = replay(rec);
  EXPECT_EQ(again.csv(), trace.csv());
  std::filesystem::remove_all(dir);
}

TEST(Replay, SquareHandReplaysFromHandColumn)
{
  auto c = config({{"hand", {{"source", "square"}, {"square", {{"laps", 1}}}}}, {"seed", 8}});
  const auto trace = run_scenario(c);
  const auto dir = fresh_dir("replay_square");
  write_run_directory(dir, c, trace);
  EXPECT_EQ(replay(load_recording(dir)).csv(), trace.csv());
  std::filesystem::remove_all(dir);
}

TEST(Hand, LiveHandApproachesTarget)
{
  LiveHand hand(Vec3(0, 0, 1), 0.1, 0.01);
  hand.set_target(Vec3(1, 0, 1));
  Vec3 p = hand.initial_position();
  for (std::uint64_t k = 1; k <= 200; ++k) {
    const Vec3 next = hand.position_at(k);
    ASSERT_GE(next.x(), p.x());
    p = next;
  }
  EXPECT_NEAR(p.x(), 1.0, 1e-6);
}
