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

#include "swarmtouch/sim/trace.hpp"

#include <array>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <system_error>

namespace swarmtouch::sim
{
namespace
{

double parse_double(std::string_view s)
{
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ConfigError("bad number '" + std::string(s) + "' in trace");
  }
  return v;
}

template <typename Int>
Int parse_int(std::string_view s)
{
  Int v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ConfigError("bad integer '" + std::string(s) + "' in trace");
  }
  return v;
}

}  // namespace

std::string format_double(double v)
{
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc{}) {
    throw std::runtime_error("double formatting failed");
  }
  return {buf.data(), ptr};
}

nlohmann::json to_json(const Event & e)
{
  return {{"tick", e.tick}, {"t", e.t}, {"type", e.type}, {"data", e.data}};
}

Event event_from_json(const nlohmann::json & j)
{
  Event e;
  e.tick = j.at("tick").get<std::uint64_t>();
  e.t = j.at("t").get<double>();
  e.type = j.at("type").get<std::string>();
  e.data = j.value("data", nlohmann::json::object());
  return e;
}

void TraceWriter::header() { out_ << kTraceHeader << '\n'; }

void TraceWriter::row(const TraceRow & r)
{
  std::string line;
  line.reserve(256);
  line += std::to_string(r.tick);
  line += ',';
  line += format_double(r.t);
  for (int i = 0; i < 3; ++i) {
    line += ',';
    line += format_double(r.hand[i]);
  }
  line += ',';
  line += std::to_string(r.drone_id);
  line += ',';
  line += to_string(r.phase);
  for (const Vec3 * v : {&r.position, &r.velocity, &r.command}) {
    for (int i = 0; i < 3; ++i) {
      line += ',';
      line += format_double((*v)[i]);
    }
  }
  line += '\n';
  out_ << line;
}

void write_trace_csv(std::ostream & out, const std::vector<TraceRow> & rows)
{
  TraceWriter w(out);
  w.header();
  for (const auto & r : rows) {
    w.row(r);
  }
}

std::vector<TraceRow> read_trace_csv(std::istream & in)
{
  std::string line;
  if (!std::getline(in, line) || line != kTraceHeader) {
    throw ConfigError("trace CSV header mismatch");
  }
  std::vector<TraceRow> rows;
  std::vector<std::string_view> cells;
  while (std::getline(in, line)) {
    if (line.empty()) {
      continue;
    }
    cells.clear();
    std::string_view rest(line);
    while (true) {
      const auto comma = rest.find(',');
      cells.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) {
        break;
      }
      rest.remove_prefix(comma + 1);
    }
    if (cells.size() != 16) {
      throw ConfigError("trace row has " + std::to_string(cells.size()) + " cells, expected 16");
    }
    TraceRow r;
    r.tick = parse_int<std::uint64_t>(cells[0]);
    r.t = parse_double(cells[1]);
    r.hand = Vec3(parse_double(cells[2]), parse_double(cells[3]), parse_double(cells[4]));
    r.drone_id = parse_int<int>(cells[5]);
    r.phase = parse_phase(std::string(cells[6]));
    r.position = Vec3(parse_double(cells[7]), parse_double(cells[8]), parse_double(cells[9]));
    r.velocity = Vec3(parse_double(cells[10]), parse_double(cells[11]), parse_double(cells[12]));
    r.command = Vec3(parse_double(cells[13]), parse_double(cells[14]), parse_double(cells[15]));
    rows.push_back(r);
  }
  return rows;
}

void write_events_jsonl(std::ostream & out, const std::vector<Event> & events)
{
  for (const auto & e : events) {
    out << to_json(e).dump() << '\n';
  }
}

std::vector<Event> read_events_jsonl(std::istream & in)
{
  std::vector<Event> events;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) {
      continue;
    }
    try {
      events.push_back(event_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception & ex) {
      throw ConfigError(std::string("bad event line: ") + ex.what());
    }
  }
  return events;
}

std::string Trace::csv() const
{
  std::ostringstream out;
  write_trace_csv(out, rows);
  return out.str();
}

std::string Trace::events_jsonl() const
{
  std::ostringstream out;
  write_events_jsonl(out, events);
  return out.str();
}

}  // namespace swarmtouch::sim
