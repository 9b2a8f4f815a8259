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

#include "swarmtouch/sim/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace swarmtouch::bench
{
namespace
{

struct FlightFigures
{
  double mean_x, mean_y, max_x, max_y, max_speed, mean_speed;
};

// Physical-flight results for side-by-side display only.
const std::map<std::string, FlightFigures> & flight_figures()
{
  static const std::map<std::string, FlightFigures> figures{
    {"impedance_ring", {0.13, 0.14, 0.35, 0.36, 0.69, 0.24}},
    {"impedance_tree", {0.14, 0.16, 0.35, 0.37, 0.70, 0.24}},
    {"impedance_star", {0.10, 0.11, 0.27, 0.29, 0.69, 0.22}},
    {"potential_field", {0.22, 0.22, 0.49, 0.45, 0.47, 0.20}}};
  return figures;
}

constexpr double kFlightReferenceMaxSpeed = 0.65;
constexpr double kFlightReferenceMeanSpeed = 0.18;
constexpr double kFlightRmseReductionTopologies = 0.206;
constexpr double kFlightRmseReductionField = 0.409;

struct RunOutput
{
  MetricsReport metrics;
  std::string csv;
};

}  // namespace

std::vector<Configuration> default_configurations()
{
  using sim::ControlMode;
  using topology::TopologyKind;
  return {
    {"impedance_ring", ControlMode::Impedance, TopologyKind::Ring},
    {"impedance_tree", ControlMode::Impedance, TopologyKind::Tree},
    {"impedance_star", ControlMode::Impedance, TopologyKind::Star},
    {"potential_field", ControlMode::PotentialField, TopologyKind::Star}};
}

Configuration configuration_by_name(const std::string & name)
{
  for (const auto & c : default_configurations()) {
    if (c.name == name) {
      return c;
    }
  }
  throw ConfigError("unknown bench configuration '" + name + "'");
}

BenchConfig bench_config_from_json(const nlohmann::json & j)
{
  static const std::set<std::string> known{"scenario", "repeats", "seed", "configurations", "parallel"};
  if (!j.is_object()) {
    throw ConfigError("bench config must be an object");
  }
  for (const auto & [key, _] : j.items()) {
    if (!known.count(key)) {
      throw ConfigError("unknown bench field '" + key + "'");
    }
  }
  BenchConfig b;
  nlohmann::json scenario = j.value("scenario", nlohmann::json::object());
  if (!scenario.contains("hand")) {
    scenario["hand"] = {{"source", "square"}};
  }
  b.scenario = sim::scenario_from_json(scenario);
  b.repeats = j.value("repeats", b.repeats);
  b.seed = j.value("seed", b.seed);
  b.parallel = j.value("parallel", b.parallel);
  if (j.contains("configurations")) {
    b.configurations.clear();
    for (const auto & name : j["configurations"]) {
      b.configurations.push_back(configuration_by_name(name.get<std::string>()));
    }
  }
  if (b.repeats < 1) {
    throw ConfigError("repeats must be >= 1");
  }
  if (b.scenario.hand.source != "square") {
    throw ConfigError("the benchmark follows the square reference; hand.source must be \"square\"");
  }
  return b;
}

BenchConfig load_bench_config(const std::filesystem::path & path)
{
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open bench config " + path.string());
  }
  try {
    return bench_config_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception & ex) {
    throw ConfigError(path.string() + ": " + ex.what());
  }
}

sim::ScenarioConfig run_scenario_for(const BenchConfig & bench, const Configuration & c, std::uint64_t seed)
{
  sim::ScenarioConfig s = bench.scenario;
  s.seed = seed;
  s.controller = c.mode;
  s.topology.kind = c.topology;
  s.edge_overrides.clear();
  s.hand.source = "square";
  s.hand.square.dt = s.dt;
  s.phases.initial = sim::ControllerPhase::Follow;
  s.initial_positions.clear();
  s.duration_s.reset();
  return s;
}

const ConfigurationResult * ComparisonReport::find(const std::string & name) const
{
  for (const auto & r : results) {
    if (r.configuration.name == name) {
      return &r;
    }
  }
  return nullptr;
}

std::optional<double> ComparisonReport::rmse_reduction(const std::string & other) const
{
  const auto * star = find("impedance_star");
  const auto * o = find(other);
  if (!star || !o || !(o->mean.rmse > 0.0)) {
    return std::nullopt;
  }
  return 1.0 - star->mean.rmse / o->mean.rmse;
}

std::optional<double> ComparisonReport::rmse_reduction_vs_other_topologies() const
{
  const auto * star = find("impedance_star");
  const auto * ring = find("impedance_ring");
  const auto * tree = find("impedance_tree");
  if (!star || !ring || !tree) {
    return std::nullopt;
  }
  const double other = 0.5 * (ring->mean.rmse + tree->mean.rmse);
  if (!(other > 0.0)) {
    return std::nullopt;
  }
  return 1.0 - star->mean.rmse / other;
}

ComparisonReport run_comparison(const BenchConfig & config, const std::optional<std::filesystem::path> & trace_dir)
{
  auto square = config.scenario.hand.square;
  square.dt = config.scenario.dt;
  const ReferenceTrajectory ref = square_trajectory(square);

  ComparisonReport report;
  report.reference_max_speed = ref.max_speed();
  report.reference_mean_speed = ref.mean_speed();
  report.reference_triangular = ref.triangular;

  struct Job
  {
    std::size_t config_index;
    std::uint64_t seed;
    std::future<RunOutput> result;
  };
  std::vector<Job> jobs;
  const auto launch = config.parallel ? std::launch::async : std::launch::deferred;
  for (std::size_t ci = 0; ci < config.configurations.size(); ++ci) {
    for (int r = 0; r < config.repeats; ++r) {
      const std::uint64_t seed = config.seed + static_cast<std::uint64_t>(r);
      const auto scenario = run_scenario_for(config, config.configurations[ci], seed);
      const bool keep_csv = trace_dir.has_value();
      jobs.push_back(Job{ci, seed, std::async(launch, [scenario, &ref, keep_csv] {
                           const auto trace = sim::run_scenario(scenario);
                           const auto graph = sim::build_graph(scenario);
                           RunOutput out{compute_metrics(trace.rows, ref, graph.offsets), {}};
                           if (keep_csv) {
                             out.csv = trace.csv();
                           }
                           return out;
                         })});
    }
  }

  for (std::size_t ci = 0; ci < config.configurations.size(); ++ci) {
    ConfigurationResult row;
    row.configuration = config.configurations[ci];
    for (auto & job : jobs) {
      if (job.config_index != ci) {
        continue;
      }
      RunOutput out;
      try {
        out = job.result.get();
      } catch (const std::exception & ex) {
        throw std::runtime_error(
          "bench run " + row.configuration.name + " seed " + std::to_string(job.seed) + " failed: " + ex.what());
      }
      if (trace_dir) {
        std::filesystem::create_directories(*trace_dir);
        const auto path = *trace_dir / (row.configuration.name + "_seed" + std::to_string(job.seed) + ".csv");
        std::ofstream f(path, std::ios::binary);
        f << out.csv;
        if (!f) {
          throw std::runtime_error("cannot write " + path.string());
        }
      }
      row.seeds.push_back(job.seed);
      row.runs.push_back(out.metrics);
    }
    row.mean = average(row.runs);
    report.results.push_back(std::move(row));
  }
  return report;
}

nlohmann::json to_json(const ComparisonReport & r)
{
  nlohmann::json rows = nlohmann::json::array();
  for (const auto & c : r.results) {
    nlohmann::json runs = nlohmann::json::array();
    for (std::size_t i = 0; i < c.runs.size(); ++i) {
      auto jr = to_json(c.runs[i]);
      jr["seed"] = c.seeds[i];
      runs.push_back(jr);
    }
    nlohmann::json row{
      {"configuration", c.configuration.name},
      {"controller", sim::to_string(c.configuration.mode)},
      {"topology", topology::to_string(c.configuration.topology)},
      {"mean", to_json(c.mean)},
      {"runs", runs}};
    const auto it = flight_figures().find(c.configuration.name);
    if (it != flight_figures().end()) {
      const auto & f = it->second;
      row["physical_flight"] = {
        {"mean_abs_error", {{"x", f.mean_x}, {"y", f.mean_y}}},
        {"max_abs_error", {{"x", f.max_x}, {"y", f.max_y}}},
        {"max_speed_xy", f.max_speed},
        {"mean_speed_xy", f.mean_speed}};
    }
    rows.push_back(row);
  }
  auto opt = [](const std::optional<double> & v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
  return {
    {"configurations", rows},
    {"reference",
     {{"max_speed_xy", r.reference_max_speed},
      {"mean_speed_xy", r.reference_mean_speed},
      {"triangular_profile", r.reference_triangular},
      {"physical_flight", {{"max_speed_xy", kFlightReferenceMaxSpeed}, {"mean_speed_xy", kFlightReferenceMeanSpeed}}}}},
    {"rmse_reduction",
     {{"star_vs_ring", opt(r.rmse_reduction("impedance_ring"))},
      {"star_vs_tree", opt(r.rmse_reduction("impedance_tree"))},
      {"star_vs_other_topologies", opt(r.rmse_reduction_vs_other_topologies())},
      {"star_vs_potential_field", opt(r.rmse_reduction("potential_field"))},
      {"physical_flight",
       {{"star_vs_other_topologies", kFlightRmseReductionTopologies},
        {"star_vs_potential_field", kFlightRmseReductionField}}}}}};
}

std::string to_csv(const ComparisonReport & r)
{
  std::ostringstream out;
  out << "configuration,mean_x,mean_y,max_x,max_y,rmse,max_speed_xy,mean_speed_xy,lag_s,cruise_max_error,"
         "min_separation\n";
  for (const auto & c : r.results) {
    const auto & m = c.mean;
    out << c.configuration.name << ',' << sim::format_double(m.mean_abs_x) << ','
        << sim::format_double(m.mean_abs_y) << ',' << sim::format_double(m.max_abs_x) << ','
        << sim::format_double(m.max_abs_y) << ',' << sim::format_double(m.rmse) << ','
        << sim::format_double(m.max_speed_xy) << ',' << sim::format_double(m.mean_speed_xy) << ','
        << sim::format_double(m.lag_s) << ',' << sim::format_double(m.cruise_max_error) << ','
        << sim::format_double(m.min_separation) << '\n';
  }
  return out.str();
}

std::string render_table(const ComparisonReport & r)
{
  std::ostringstream out;
  char line[256];
  std::snprintf(
    line, sizeof line, "%-16s %13s %13s %8s %15s %6s   %13s %13s %11s\n", "configuration", "mean |e| x/y",
    "max |e| x/y", "rmse", "speed max/mean", "lag", "flight mean", "flight max", "flight v");
  out << line;
  for (const auto & c : r.results) {
    const auto & m = c.mean;
    std::snprintf(
      line, sizeof line, "%-16s %6.3f/%6.3f %6.3f/%6.3f %8.4f %7.3f/%7.3f %6.2f", c.configuration.name.c_str(),
      m.mean_abs_x, m.mean_abs_y, m.max_abs_x, m.max_abs_y, m.rmse, m.max_speed_xy, m.mean_speed_xy, m.lag_s);
    out << line;
    const auto it = flight_figures().find(c.configuration.name);
    if (it != flight_figures().end()) {
      const auto & f = it->second;
      std::snprintf(
        line, sizeof line, "   %6.2f/%6.2f %6.2f/%6.2f %5.2f/%5.2f", f.mean_x, f.mean_y, f.max_x, f.max_y,
        f.max_speed, f.mean_speed);
      out << line;
    }
    out << '\n';
  }
  std::snprintf(
    line, sizeof line, "reference speed max/mean %.3f/%.3f m/s (flight %.2f/%.2f)%s\n", r.reference_max_speed,
    r.reference_mean_speed, kFlightReferenceMaxSpeed, kFlightReferenceMeanSpeed,
    r.reference_triangular ? " [triangular profile]" : "");
  out << line;
  auto pct = [](const std::optional<double> & v) { return v ? *v * 100.0 : std::nan(""); };
  std::snprintf(
    line, sizeof line, "rmse reduction of star: %.1f%% vs ring/tree, %.1f%% vs potential field (flight %.1f%%, %.1f%%)\n",
    pct(r.rmse_reduction_vs_other_topologies()), pct(r.rmse_reduction("potential_field")),
    kFlightRmseReductionTopologies * 100.0, kFlightRmseReductionField * 100.0);
  out << line;
  return out.str();
}

}  // namespace swarmtouch::bench
