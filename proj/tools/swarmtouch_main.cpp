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

#include "swarmtouch/bench/comparison.hpp"
#include "swarmtouch/bench/metrics.hpp"
#include "swarmtouch/bench/trajectory.hpp"
#include "swarmtouch/haptics.hpp"
#include "swarmtouch/server/server.hpp"
#include "swarmtouch/sim/config.hpp"
#include "swarmtouch/sim/scenario.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

namespace
{

using namespace swarmtouch;

std::atomic<bool> g_interrupted{false};

void on_signal(int) { g_interrupted = true; }

// t,x,y,z with a header line.
bench::ReferenceTrajectory read_reference_csv(const std::string & path)
{
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open reference " + path);
  }
  std::string line;
  std::getline(in, line);
  if (line != "t,x,y,z") {
    throw ConfigError("reference CSV must start with the header t,x,y,z");
  }
  std::vector<Vec3> pos;
  std::vector<double> times;
  while (std::getline(in, line)) {
    if (line.empty()) {
      continue;
    }
    std::istringstream row(line);
    std::string cell;
    double v[4];
    for (double & x : v) {
      if (!std::getline(row, cell, ',')) {
        throw ConfigError("short reference row: " + line);
      }
      x = std::stod(cell);
    }
    times.push_back(v[0]);
    pos.emplace_back(v[1], v[2], v[3]);
  }
  if (pos.size() < 2) {
    throw ConfigError("reference needs at least two samples");
  }
  return bench::trajectory_from_samples(times[1] - times[0], std::move(pos));
}

void write_reference_csv(std::ostream & out, const bench::ReferenceTrajectory & ref)
{
  out << "t,x,y,z\n";
  for (std::size_t k = 0; k < ref.size(); ++k) {
    const auto & p = ref.position[k];
    out << sim::format_double(ref.t[k]) << ',' << sim::format_double(p.x()) << ',' << sim::format_double(p.y())
        << ',' << sim::format_double(p.z()) << '\n';
  }
}

int cmd_run(const std::string & config_path, const std::string & out_dir, long long ticks, long long seed)
{
  auto config = sim::load_scenario(config_path);
  if (seed >= 0) {
    config.seed = static_cast<std::uint64_t>(seed);
  }
  const std::uint64_t n = ticks >= 0 ? static_cast<std::uint64_t>(ticks) : config.tick_count();
  const auto trace = sim::run_scenario(config, sim::make_hand_source(config), n);
  if (out_dir.empty()) {
    std::cout << trace.csv();
  } else {
    sim::write_run_directory(out_dir, config, trace);
    std::cerr << "wrote " << trace.rows.size() << " rows and " << trace.events.size() << " events to " << out_dir
              << "\n";
  }
  return 0;
}

int cmd_replay(const std::string & dir, const std::string & out_dir)
{
  const auto rec = sim::load_recording(dir);
  const auto trace = sim::replay(rec);
  if (!out_dir.empty()) {
    sim::write_run_directory(out_dir, rec.config, trace);
  }
  std::ostringstream recorded;
  sim::write_trace_csv(recorded, rec.rows);
  const bool same = recorded.str() == trace.csv();
  std::cout << (same ? "replay identical" : "replay DIFFERS") << " (" << trace.rows.size() << " rows)\n";
  return same ? 0 : 1;
}

int cmd_bench_run(const std::string & config_path, const std::string & out, int repeats, long long seed, bool traces)
{
  bench::BenchConfig cfg = config_path.empty() ? bench::bench_config_from_json(nlohmann::json::object())
                                               : bench::load_bench_config(config_path);
  if (repeats > 0) {
    cfg.repeats = repeats;
  }
  if (seed >= 0) {
    cfg.seed = static_cast<std::uint64_t>(seed);
  }
  std::filesystem::create_directories(out);
  std::optional<std::filesystem::path> trace_dir;
  if (traces) {
    trace_dir = std::filesystem::path(out) / "traces";
  }
  const auto report = bench::run_comparison(cfg, trace_dir);
  std::ofstream(std::filesystem::path(out) / "report.json") << bench::to_json(report).dump(2) << '\n';
  std::ofstream(std::filesystem::path(out) / "report.csv") << bench::to_csv(report);
  auto square = cfg.scenario.hand.square;
  square.dt = cfg.scenario.dt;
  std::ofstream ref_out(std::filesystem::path(out) / "reference.csv");
  write_reference_csv(ref_out, bench::square_trajectory(square));
  std::cout << bench::render_table(report);
  return 0;
}

int cmd_bench_metrics(const std::string & trace_path, const std::string & ref_path, const std::string & config_path)
{
  std::ifstream in(trace_path);
  if (!in) {
    throw ConfigError("cannot open trace " + trace_path);
  }
  const auto rows = sim::read_trace_csv(in);
  const auto ref = read_reference_csv(ref_path);
  const auto config =
    config_path.empty() ? sim::scenario_from_json(nlohmann::json::object()) : sim::load_scenario(config_path);
  auto graph = sim::build_graph(config);
  int max_id = -1;
  for (const auto & r : rows) {
    max_id = std::max(max_id, r.drone_id);
  }
  if (static_cast<std::size_t>(max_id + 1) != graph.drone_count) {
    auto t = config.topology;
    t.drones = static_cast<std::size_t>(max_id + 1);
    graph = topology::build_topology(t, config.impedance);
  }
  const auto m = bench::compute_metrics(rows, ref, graph.offsets);
  std::cout << bench::to_json(m).dump(2) << '\n';
  return 0;
}

int cmd_pattern(
  const std::string & label, bool json, bool play, bool realtime, const std::string & classify,
  const std::string & surface, double inter_onset, double burst)
{
  haptics::PatternConfig cfg;
  cfg.inter_onset_ms = inter_onset;
  cfg.burst_ms = burst;
  if (!(cfg.inter_onset_ms > 0.0) || !(cfg.burst_ms > 0.0)) {
    throw ConfigError("inter-onset and burst must be positive");
  }

  std::vector<std::string> labels;
  if (!classify.empty()) {
    std::vector<double> v;
    std::istringstream s(classify);
    std::string cell;
    while (std::getline(s, cell, ',')) {
      v.push_back(std::stod(cell));
    }
    if (v.size() != 3) {
      throw ConfigError("--classify takes vx,vy,vz");
    }
    const auto hit = haptics::classify_contact(Vec3(v[0], v[1], v[2]), haptics::parse_surface(surface));
    if (!hit) {
      std::cout << "no pattern (hand speed inside the dead-band)\n";
      return 0;
    }
    labels.push_back(haptics::encode_label(hit->first, hit->second));
  } else if (!label.empty()) {
    labels.push_back(label);
  } else {
    labels = haptics::all_labels();
  }

  for (const auto & l : labels) {
    const auto [s, d] = haptics::decode_label(l);
    const auto schedule = haptics::encode_pattern(s, d, cfg);
    if (json) {
      std::cout << haptics::to_json(schedule).dump() << '\n';
      continue;
    }
    std::cout << l << "  " << haptics::to_string(s) << " / " << haptics::to_string(d) << "  "
              << haptics::carrier_frequency_hz(s) << " Hz, " << schedule.duration_ms() << " ms\n";
    if (!play) {
      for (std::size_t f = 0; f < haptics::kActuatorCount; ++f) {
        std::cout << "  finger " << f << ":";
        for (const auto & e : schedule.actuators[f]) {
          std::cout << " [" << e.onset_ms << "+" << e.duration_ms << " ms @" << e.amplitude << "]";
        }
        std::cout << '\n';
      }
      continue;
    }
    struct Edge
    {
      double at;
      std::size_t finger;
      bool on;
      double amplitude;
      double frequency;
    };
    std::vector<Edge> edges;
    for (std::size_t f = 0; f < haptics::kActuatorCount; ++f) {
      for (const auto & e : schedule.actuators[f]) {
        edges.push_back({e.onset_ms, f, true, e.amplitude, e.frequency_hz});
        edges.push_back({e.onset_ms + e.duration_ms, f, false, 0.0, e.frequency_hz});
      }
    }
    std::stable_sort(edges.begin(), edges.end(), [](const Edge & a, const Edge & b) {
      return a.at < b.at || (a.at == b.at && !a.on && b.on);
    });
    const auto start = std::chrono::steady_clock::now();
    for (const auto & e : edges) {
      if (realtime) {
        std::this_thread::sleep_until(start + std::chrono::duration<double, std::milli>(e.at));
      }
      char buf[128];
      if (e.on) {
        std::snprintf(
          buf, sizeof buf, "  %7.1f ms  finger %zu on   %g Hz  amp %.2f\n", e.at, e.finger, e.frequency, e.amplitude);
      } else {
        std::snprintf(buf, sizeof buf, "  %7.1f ms  finger %zu off\n", e.at, e.finger);
      }
      std::cout << buf << std::flush;
    }
  }
  return 0;
}

int cmd_serve(
  const std::string & config_path, const std::string & bind, const std::string & record, double speed,
  const std::string & static_dir)
{
  sim::ScenarioConfig config;
  if (config_path.empty()) {
    nlohmann::json j{{"hand", {{"source", "live"}}}, {"phases", {{"engage_at_s", nullptr}}}};
    config = sim::scenario_from_json(j);
  } else {
    config = sim::load_scenario(config_path);
  }
  server::ServerOptions opts;
  std::tie(opts.address, opts.port) = server::parse_bind(bind);
  opts.speed = speed;
  opts.static_dir = static_dir;
  if (!record.empty()) {
    opts.record_dir = record;
  }
  server::SteerServer srv(config, opts);
  srv.start();
  std::cerr << "serving on http://" << opts.address << ":" << srv.port() << "/  (websocket /ws)\n";
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  while (!g_interrupted) {
    std::this_thread::sleep_for(std::chrono::milliseconds(100));
  }
  srv.stop();
  std::cerr << "stopped\n";
  return 0;
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"swarmtouch: impedance-coupled drone swarm simulator, benchmark and live steering server"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::string replay_dir;
  long long ticks = -1;
  long long seed = -1;
  auto * run = app.add_subcommand("run", "Run a scenario and write its trace");
  run->add_option("--config", config_path, "Scenario JSON")->check(CLI::ExistingFile);
  run->add_option("--out", out_dir, "Directory for config.json, trace.csv, events.jsonl (default: CSV to stdout)");
  run->add_option("--ticks", ticks, "Number of ticks (default: from the config)");
  run->add_option("--seed", seed, "Override the noise seed");
  run->add_option("--replay", replay_dir, "Replay a recorded run directory instead")->check(CLI::ExistingDirectory);

  auto * bench_cmd = app.add_subcommand("bench", "Benchmark the four controller configurations");
  bench_cmd->require_subcommand(1);
  std::string bench_config;
  std::string bench_out = "bench_out";
  int repeats = 0;
  long long bench_seed = -1;
  bool no_traces = false;
  auto * bench_run = bench_cmd->add_subcommand("run", "Run the comparison and write report.json/report.csv");
  bench_run->add_option("--config", bench_config, "Bench JSON")->check(CLI::ExistingFile);
  bench_run->add_option("--out", bench_out, "Output directory");
  bench_run->add_option("--repeats", repeats, "Runs per configuration");
  bench_run->add_option("--seed", bench_seed, "First seed");
  bench_run->add_flag("--no-traces", no_traces, "Skip per-run trace CSVs");

  std::string trace_path;
  std::string ref_path;
  std::string metrics_config;
  auto * bench_metrics = bench_cmd->add_subcommand("metrics", "Metrics of one trace against a reference");
  bench_metrics->add_option("--trace", trace_path, "Trace CSV")->required()->check(CLI::ExistingFile);
  bench_metrics->add_option("--ref", ref_path, "Reference CSV (t,x,y,z)")->required()->check(CLI::ExistingFile);
  bench_metrics->add_option("--config", metrics_config, "Scenario JSON for formation offsets")
    ->check(CLI::ExistingFile);

  std::string ref_out;
  std::string ref_config;
  auto * bench_ref = bench_cmd->add_subcommand("reference", "Write the square reference as t,x,y,z CSV");
  bench_ref->add_option("--config", ref_config, "Bench JSON")->check(CLI::ExistingFile);
  bench_ref->add_option("--out", ref_out, "Output CSV (default stdout)");

  std::string label;
  bool as_json = false;
  bool play = false;
  bool realtime = false;
  std::string classify;
  std::string surface = "rigid";
  double inter_onset = 150.0;
  double burst = 300.0;
  auto * pattern = app.add_subcommand("pattern", "Print or play tactile patterns");
  pattern->add_option("label", label, "Two-letter code, e.g. RR (default: all 12)");
  pattern->add_flag("--json", as_json, "Print schedules as JSON");
  pattern->add_flag("--play", play, "Print actuator on/off lines in time order");
  pattern->add_flag("--realtime", realtime, "With --play, pace the lines in real time");
  pattern->add_option("--classify", classify, "Hand velocity vx,vy,vz to classify instead of a label");
  pattern->add_option("--surface", surface, "Surface for --classify: soft, elastic, rigid");
  pattern->add_option("--inter-onset", inter_onset, "Delay between finger onsets, ms");
  pattern->add_option("--burst", burst, "Burst length, ms");

  std::string serve_config;
  std::string bind = "127.0.0.1:8080";
  std::string record;
  double speed = 1.0;
  std::string static_dir = "web";
  auto * serve = app.add_subcommand("serve", "Live steering server (WebSocket /ws, static files /)");
  serve->add_option("--config", serve_config, "Scenario JSON")->check(CLI::ExistingFile);
  serve->add_option("--bind", bind, "host:port");
  serve->add_option("--record", record, "Record the session into this directory");
  serve->add_option("--speed", speed, "Simulation speed factor")->check(CLI::PositiveNumber);
  serve->add_option("--static", static_dir, "Directory served at /");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      if (!replay_dir.empty()) {
        return cmd_replay(replay_dir, out_dir);
      }
      if (config_path.empty()) {
        throw ConfigError("run needs --config or --replay");
      }
      return cmd_run(config_path, out_dir, ticks, seed);
    }
    if (bench_run->parsed()) {
      return cmd_bench_run(bench_config, bench_out, repeats, bench_seed, !no_traces);
    }
    if (bench_metrics->parsed()) {
      return cmd_bench_metrics(trace_path, ref_path, metrics_config);
    }
    if (bench_ref->parsed()) {
      const auto cfg = ref_config.empty() ? bench::bench_config_from_json(nlohmann::json::object())
                                          : bench::load_bench_config(ref_config);
      auto sq = cfg.scenario.hand.square;
      sq.dt = cfg.scenario.dt;
      const auto ref = bench::square_trajectory(sq);
      if (ref_out.empty()) {
        write_reference_csv(std::cout, ref);
      } else {
        std::ofstream f(ref_out);
        write_reference_csv(f, ref);
      }
      return 0;
    }
    if (pattern->parsed()) {
      return cmd_pattern(label, as_json, play, realtime, classify, surface, inter_onset, burst);
    }
    if (serve->parsed()) {
      return cmd_serve(serve_config, bind, record, speed, static_dir);
    }
  } catch (const std::exception & ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return 2;
  }
  return 0;
}
