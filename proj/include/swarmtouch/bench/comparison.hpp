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

#ifndef SWARMTOUCH__BENCH__COMPARISON_HPP_
#define SWARMTOUCH__BENCH__COMPARISON_HPP_

#include "swarmtouch/bench/metrics.hpp"
#include "swarmtouch/bench/trajectory.hpp"
#include "swarmtouch/sim/config.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace swarmtouch::bench
{

/// One controller/topology pairing exercised by the benchmark.
struct Configuration
{
  std::string name;
  sim::ControlMode mode{sim::ControlMode::Impedance};
  topology::TopologyKind topology{topology::TopologyKind::Star};
};

/// impedance_ring, impedance_tree, impedance_star, potential_field.
std::vector<Configuration> default_configurations();
Configuration configuration_by_name(const std::string & name);

struct BenchConfig
{
  sim::ScenarioConfig scenario{};  // hand source forced to the square, drones start following
  int repeats{3};
  std::uint64_t seed{1};           // repeat r uses seed + r
  std::vector<Configuration> configurations{default_configurations()};
  bool parallel{true};
};

/// {"scenario": {...}, "repeats": 3, "seed": 1, "configurations": [...], "parallel": true}
BenchConfig bench_config_from_json(const nlohmann::json & j);
BenchConfig load_bench_config(const std::filesystem::path & path);

/// Scenario for one run: the square reference, drones attached at their slots.
sim::ScenarioConfig run_scenario_for(const BenchConfig & bench, const Configuration & c, std::uint64_t seed);

struct ConfigurationResult
{
  Configuration configuration;
  std::vector<std::uint64_t> seeds;
  std::vector<MetricsReport> runs;
  MetricsReport mean;
};

struct ComparisonReport
{
  std::vector<ConfigurationResult> results;  // configuration order
  double reference_max_speed{0.0};
  double reference_mean_speed{0.0};
  bool reference_triangular{false};

  const ConfigurationResult * find(const std::string & name) const;
  /// 1 - RMSE(impedance_star) / RMSE(other); empty when either is missing.
  std::optional<double> rmse_reduction(const std::string & other) const;
  /// Same against the mean RMSE of the ring and tree configurations.
  std::optional<double> rmse_reduction_vs_other_topologies() const;
};

/// Runs every configuration `repeats` times. When `trace_dir` is set each run's
/// trace lands in <trace_dir>/<name>_seed<S>.csv. A failing run is rethrown
/// with the configuration and seed in the message.
ComparisonReport run_comparison(
  const BenchConfig & config, const std::optional<std::filesystem::path> & trace_dir = std::nullopt);

nlohmann::json to_json(const ComparisonReport & r);
std::string to_csv(const ComparisonReport & r);
/// Fixed-width table with the physical-flight reference figures alongside.
std::string render_table(const ComparisonReport & r);

}  // namespace swarmtouch::bench

#endif  // SWARMTOUCH__BENCH__COMPARISON_HPP_
