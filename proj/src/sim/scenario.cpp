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

#include <algorithm>
#include <fstream>

namespace swarmtouch::sim
{

Trace run_scenario(
  const ScenarioConfig & config, std::unique_ptr<HandSource> hand, std::uint64_t n_ticks,
  const CommandSchedule & commands)
{
  World world(config, std::move(hand));
  Trace trace;
  trace.dt = config.dt;
  trace.drone_count = world.state().drones.size();
  trace.initial = world.rows();
  trace.rows.reserve(static_cast<std::size_t>(n_ticks) * trace.drone_count);

  std::size_t next_command = 0;
  for (std::uint64_t k = 0; k < n_ticks; ++k) {
    while (next_command < commands.size() && commands[next_command].tick <= k) {
      world.apply_recorded(commands[next_command]);
      ++next_command;
    }
    world.step();
    auto events = world.drain_events();
    trace.events.insert(trace.events.end(), events.begin(), events.end());
    auto rows = world.rows();
    trace.rows.insert(trace.rows.end(), rows.begin(), rows.end());
  }
  auto tail = world.drain_events();
  trace.events.insert(trace.events.end(), tail.begin(), tail.end());
  return trace;
}

Trace run_scenario(const ScenarioConfig & config)
{
  return run_scenario(config, make_hand_source(config), config.tick_count());
}

void write_run_directory(const std::filesystem::path & dir, const ScenarioConfig & config, const Trace & trace)
{
  std::filesystem::create_directories(dir);
  std::ofstream cfg(dir / kConfigFile);
  cfg << to_json(config).dump(2) << '\n';
  std::ofstream csv(dir / kTraceFile, std::ios::binary);
  write_trace_csv(csv, trace.rows);
  std::ofstream ev(dir / kEventsFile, std::ios::binary);
  write_events_jsonl(ev, trace.events);
  if (!cfg || !csv || !ev) {
    throw std::runtime_error("failed writing run directory " + dir.string());
  }
}

Recording load_recording(const std::filesystem::path & dir)
{
  Recording rec;
  rec.config = load_scenario(dir / kConfigFile);
  std::ifstream csv(dir / kTraceFile);
  if (!csv) {
    throw ConfigError("missing " + (dir / kTraceFile).string());
  }
  rec.rows = read_trace_csv(csv);
  std::ifstream ev(dir / kEventsFile);
  if (ev) {
    rec.events = read_events_jsonl(ev);
  }
  return rec;
}

Trace replay(const Recording & rec)
{
  const Vec3 start = rec.config.hand.source == "trace" ? rec.config.hand.position
                                                        : make_hand_source(rec.config)->initial_position();
  std::vector<Vec3> hand{start};
  std::uint64_t last_tick = 0;
  for (const auto & r : rec.rows) {
    if (r.tick == hand.size()) {
      hand.push_back(r.hand);
    }
    last_tick = std::max(last_tick, r.tick);
  }
  if (hand.size() != last_tick + 1) {
    throw ConfigError("recorded trace skips ticks");
  }
  CommandSchedule commands;
  for (const auto & e : rec.events) {
    if (e.type == "command") {
      commands.push_back(e);
    }
  }
  return run_scenario(rec.config, std::make_unique<SampledHand>(std::move(hand), "trace"), last_tick, commands);
}

}  // namespace swarmtouch::sim
