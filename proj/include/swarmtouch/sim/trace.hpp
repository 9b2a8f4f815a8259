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

#ifndef SWARMTOUCH__SIM__TRACE_HPP_
#define SWARMTOUCH__SIM__TRACE_HPP_

#include "swarmtouch/common.hpp"
#include "swarmtouch/sim/config.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace swarmtouch::sim
{

inline constexpr std::string_view kTraceHeader =
  "tick,t,hand_x,hand_y,hand_z,drone_id,phase,x,y,z,vx,vy,vz,cmd_vx,cmd_vy,cmd_vz";

struct TraceRow
{
  std::uint64_t tick{0};
  double t{0.0};
  Vec3 hand{Vec3::Zero()};
  int drone_id{0};
  ControllerPhase phase{ControllerPhase::Idle};
  Vec3 position{Vec3::Zero()};
  Vec3 velocity{Vec3::Zero()};
  Vec3 command{Vec3::Zero()};
};

struct Event
{
  std::uint64_t tick{0};
  double t{0.0};
  std::string type;
  nlohmann::json data = nlohmann::json::object();
};

nlohmann::json to_json(const Event & e);
Event event_from_json(const nlohmann::json & j);

/// Shortest representation that parses back to the same double.
std::string format_double(double v);

class TraceWriter
{
public:
  explicit TraceWriter(std::ostream & out) : out_(out) {}
  void header();
  void row(const TraceRow & r);

private:
  std::ostream & out_;
};

void write_trace_csv(std::ostream & out, const std::vector<TraceRow> & rows);
/// Throws ConfigError on a wrong header or malformed row.
std::vector<TraceRow> read_trace_csv(std::istream & in);

void write_events_jsonl(std::ostream & out, const std::vector<Event> & events);
std::vector<Event> read_events_jsonl(std::istream & in);

struct Trace
{
  double dt{0.01};
  std::size_t drone_count{0};
  std::vector<TraceRow> initial;  // tick 0, not part of the CSV
  std::vector<TraceRow> rows;     // ticks 1..n, drone-major within a tick
  std::vector<Event> events;

  std::string csv() const;
  std::string events_jsonl() const;
};

}  // namespace swarmtouch::sim

#endif  // SWARMTOUCH__SIM__TRACE_HPP_
