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

#ifndef SWARMTOUCH__SIM__SCENARIO_HPP_
#define SWARMTOUCH__SIM__SCENARIO_HPP_

#include "swarmtouch/sim/config.hpp"
#include "swarmtouch/sim/hand.hpp"
#include "swarmtouch/sim/trace.hpp"

#include <cstdint>
#include <filesystem>
#include <memory>
#include <vector>

namespace swarmtouch::sim
{

/// Commands to re-apply, keyed by the tick at which they were issued.
using CommandSchedule = std::vector<Event>;

/// Steps a fresh world n_ticks times and records every tick.
Trace run_scenario(
  const ScenarioConfig & config, std::unique_ptr<HandSource> hand, std::uint64_t n_ticks,
  const CommandSchedule & commands = {});

/// Hand source from the config, length from the config.
Trace run_scenario(const ScenarioConfig & config);

/// Layout shared by `run --out` and `serve --record`:
///   config.json, trace.csv, events.jsonl
inline constexpr const char * kConfigFile = "config.json";
inline constexpr const char * kTraceFile = "trace.csv";
inline constexpr const char * kEventsFile = "events.jsonl";

void write_run_directory(const std::filesystem::path & dir, const ScenarioConfig & config, const Trace & trace);

struct Recording
{
  ScenarioConfig config;
  std::vector<TraceRow> rows;
  std::vector<Event> events;
};

Recording load_recording(const std::filesystem::path & dir);

/// Drives a fresh world with the recorded hand stream and commands. With the
/// same seed the drone rows come out identical to the recording.
Trace replay(const Recording & rec);

}  // namespace swarmtouch::sim

#endif  // SWARMTOUCH__SIM__SCENARIO_HPP_
