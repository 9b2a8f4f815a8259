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

// Acceptance suite: one PASS/FAIL line per criterion, tolerances fixed here.

#include "swarmtouch/bench/comparison.hpp"
#include "swarmtouch/haptics.hpp"
#include "swarmtouch/impedance.hpp"
#include "swarmtouch/server/session.hpp"
#include "swarmtouch/sim/scenario.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "oracles.hpp"

namespace
{

using namespace swarmtouch;
using swarmtouch::testing::rk4_substeps;

constexpr double kOmegaTarget = 3.3;
constexpr double kOmegaTolerance = 0.02;
constexpr double kZetaTolerance = 0.001;
constexpr double kRk4Tolerance = 1e-6;
constexpr double kSemigroupTolerance = 1e-9;
constexpr double kEnergyTolerance = 1e-9;
constexpr int kOracleSets = 100;
constexpr int kDisplacementTrials = 1000;
constexpr double kReferenceMax = 0.65;
constexpr double kReferenceMaxTolerance = 0.01;
constexpr double kReferenceMean = 0.18;
constexpr double kReferenceMeanTolerance = 0.02;
constexpr double kCruiseErrorBound = 0.15;
constexpr double kSeparationBound = 0.15;
constexpr int kBenchRepeats = 3;

struct Outcome
{
  bool pass{false};
  std::string detail;
};

std::string fmt(const char * f, double a, double b = 0.0, double c = 0.0, double d = 0.0)
{
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

impedance::ImpedanceParams random_critical(std::mt19937_64 & rng)
{
  std::uniform_real_distribution<double> mass(0.2, 5.0);
  std::uniform_real_distribution<double> stiffness(1.0, 60.0);
  return impedance::critically_damped(mass(rng), stiffness(rng));
}

Outcome critical_damping_check()
{
  impedance::ImpedanceParams p;
  p.mass = 1.9;
  p.damping = 12.6;
  p.stiffness = 20.88;
  const auto k = impedance::derive_constants(p);
  const bool ok = std::abs(k.omega_n - kOmegaTarget) <= kOmegaTolerance && std::abs(k.zeta - 1.0) <= kZetaTolerance;
  return {ok, fmt("omega_n=%.4f zeta=%.5f", k.omega_n, k.zeta)};
}

Outcome propagator_oracle()
{
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> state(-1.0, 1.0);
  std::uniform_real_distribution<double> force(-5.0, 5.0);
  std::uniform_real_distribution<double> split(0.0, 0.05);
  double worst_rk4 = 0.0;
  double worst_zero = 0.0;
  double worst_semigroup = 0.0;
  for (int set = 0; set < kOracleSets; ++set) {
    const auto p = random_critical(rng);
    const swarmtouch::testing::LinkOde ode{p.mass, p.damping, p.stiffness};
    for (double T : {0.001, 0.01, 0.05}) {
      const auto link = impedance::discretize(p, T);
      const impedance::LinkState s{state(rng), state(rng)};
      const double f = force(rng);
      const auto got = impedance::step_link(link, s, f);
      const Eigen::Vector2d want = swarmtouch::testing::rk4(ode, {s.dx, s.dv}, f, T, rk4_substeps(T));
      worst_rk4 = std::max({worst_rk4, std::abs(got.dx - want[0]), std::abs(got.dv - want[1])});
    }
    const auto zero = impedance::discretize(p, 0.0);
    worst_zero = std::max(
      {worst_zero, (zero.a_d - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff(), zero.b_d.cwiseAbs().maxCoeff()});
    const double t1 = split(rng);
    const double t2 = split(rng);
    const auto l1 = impedance::discretize(p, t1);
    const auto l2 = impedance::discretize(p, t2);
    const auto l12 = impedance::discretize(p, t1 + t2);
    worst_semigroup = std::max(
      {worst_semigroup, (l2.a_d * l1.a_d - l12.a_d).cwiseAbs().maxCoeff(),
       (l2.a_d * l1.b_d + l2.b_d - l12.b_d).cwiseAbs().maxCoeff()});
  }
  const bool ok = worst_rk4 <= kRk4Tolerance && worst_zero == 0.0 && worst_semigroup <= kSemigroupTolerance;
  return {ok, fmt("rk4 max dev %.2e, T=0 dev %.1e, semigroup dev %.2e", worst_rk4, worst_zero, worst_semigroup)};
}

Outcome overshoot_and_energy()
{
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> disp(-1.0, 1.0);
  int sign_changes = 0;
  int energy_rises = 0;
  int growths = 0;
  for (int trial = 0; trial < kDisplacementTrials; ++trial) {
    const auto p = trial % 2 == 0 ? impedance::critically_damped(1.9, 20.88) : random_critical(rng);
    const auto link = impedance::discretize(p, 0.01);
    impedance::LinkState s{disp(rng), 0.0};
    const double sign = std::copysign(1.0, s.dx);
    double v = impedance::link_energy(p, s);
    bool crossed = false;
    double magnitude = std::abs(s.dx);
    for (int k = 0; k < 1000; ++k) {
      s = impedance::step_link(link, s, 0.0);
      crossed = crossed || s.dx * sign < 0.0;
      if (std::abs(s.dx) > magnitude) {
        ++growths;
      }
      magnitude = std::abs(s.dx);
      const double next = impedance::link_energy(p, s);
      if (next > v + kEnergyTolerance) {
        ++energy_rises;
      }
      v = next;
    }
    sign_changes += crossed ? 1 : 0;
  }
  return {
    sign_changes == 0 && growths == 0 && energy_rises == 0,
    fmt("%g trials: %g sign changes, %g |dx| increases, %g energy increases", kDisplacementTrials, sign_changes,
        growths, energy_rises)};
}

const bench::ComparisonReport & default_report()
{
  static const bench::ComparisonReport report = [] {
    bench::BenchConfig b;
    b.repeats = kBenchRepeats;
    return bench::run_comparison(b);
  }();
  return report;
}

Outcome benchmark_ordering()
{
  const auto & r = default_report();
  const auto & ring = r.find("impedance_ring")->mean;
  const auto & tree = r.find("impedance_tree")->mean;
  const auto & star = r.find("impedance_star")->mean;
  const auto & pf = r.find("potential_field")->mean;
  const bool ok = star.mean_abs_x <= ring.mean_abs_x && star.mean_abs_y <= ring.mean_abs_y &&
                  star.mean_abs_x <= tree.mean_abs_x && star.mean_abs_y <= tree.mean_abs_y &&
                  std::max({ring.mean_abs_x, tree.mean_abs_x, star.mean_abs_x}) < pf.mean_abs_x &&
                  std::max({ring.mean_abs_y, tree.mean_abs_y, star.mean_abs_y}) < pf.mean_abs_y;
  std::ostringstream d;
  d << "mean |e| x/y: ring " << fmt("%.3f/%.3f", ring.mean_abs_x, ring.mean_abs_y) << ", tree "
    << fmt("%.3f/%.3f", tree.mean_abs_x, tree.mean_abs_y) << ", star "
    << fmt("%.3f/%.3f", star.mean_abs_x, star.mean_abs_y) << ", apf " << fmt("%.3f/%.3f", pf.mean_abs_x, pf.mean_abs_y);
  return {ok, d.str()};
}

Outcome velocity_ordering()
{
  const auto & r = default_report();
  const double pf = r.find("potential_field")->mean.max_speed_xy;
  bool ok = true;
  std::ostringstream d;
  for (const char * name : {"impedance_ring", "impedance_tree", "impedance_star"}) {
    const double v = r.find(name)->mean.max_speed_xy;
    ok = ok && v > pf;
    d << name << ' ' << fmt("%.3f", v) << ", ";
  }
  const auto ref = bench::square_trajectory(bench::SquareParams{});
  ok = ok && std::abs(ref.max_speed() - kReferenceMax) <= kReferenceMaxTolerance &&
       std::abs(ref.mean_speed() - kReferenceMean) <= kReferenceMeanTolerance;
  d << "apf " << fmt("%.3f", pf) << "; reference max/mean " << fmt("%.3f/%.3f", ref.max_speed(), ref.mean_speed());
  return {ok, d.str()};
}

Outcome safety_bound()
{
  bench::BenchConfig b;
  b.repeats = 1;
  b.scenario.plant.noise_sigma = 0.0;
  b.configurations = {bench::configuration_by_name("impedance_star")};
  const auto & m = bench::run_comparison(b).results.front().mean;
  return {
    m.cruise_max_error < kCruiseErrorBound && m.min_separation > kSeparationBound,
    fmt("cruise max error %.3f m, min separation %.3f m", m.cruise_max_error, m.min_separation)};
}

Outcome pattern_codec()
{
  bool ok = true;
  std::vector<haptics::PatternSchedule> schedules;
  for (const auto & label : haptics::all_labels()) {
    const auto [surface, dir] = haptics::decode_label(label);
    ok = ok && haptics::encode_label(surface, dir) == label;
    const auto s = haptics::encode_pattern(surface, dir);
    ok = ok && haptics::schedule_from_json(nlohmann::json::parse(haptics::to_json(s).dump())) == s;
    for (const auto & t : s.actuators) {
      for (const auto & ev : t) {
        ok = ok && ev.frequency_hz == haptics::carrier_frequency_hz(surface);
      }
    }
    auto bare = s;
    bare.label.clear();
    schedules.push_back(bare);
  }
  std::size_t distinct = 0;
  for (std::size_t i = 0; i < schedules.size(); ++i) {
    bool unique = true;
    for (std::size_t j = 0; j < schedules.size(); ++j) {
      unique = unique && (i == j || !(schedules[i] == schedules[j]));
    }
    distinct += unique ? 1 : 0;
  }
  ok = ok && schedules.size() == 12 && distinct == 12;
  ok = ok && haptics::carrier_frequency_hz(haptics::SurfaceKind::Soft) == 3.3 &&
       haptics::carrier_frequency_hz(haptics::SurfaceKind::Elastic) == 8.0 &&
       haptics::carrier_frequency_hz(haptics::SurfaceKind::Rigid) == 100.0;
  bool mirrored = true;
  for (auto surface : {haptics::SurfaceKind::Soft, haptics::SurfaceKind::Elastic, haptics::SurfaceKind::Rigid}) {
    const auto r = haptics::encode_pattern(surface, haptics::MotionDirection::Right);
    const auto l = haptics::encode_pattern(surface, haptics::MotionDirection::Left);
    for (std::size_t f = 0; f < haptics::kActuatorCount; ++f) {
      mirrored = mirrored && r.actuators[f] == l.actuators[haptics::kActuatorCount - 1 - f];
    }
  }
  return {ok && mirrored, fmt("%g labels, %g distinct schedules, mirrored=%g", schedules.size(), distinct, mirrored)};
}

Outcome determinism()
{
  auto c = sim::scenario_from_json({{"hand", {{"source", "square"}}}, {"seed", 11}});
  const bool same_run = sim::run_scenario(c).csv() == sim::run_scenario(c).csv();

  const auto dir = std::filesystem::temp_directory_path() / "swarmtouch_acceptance_replay";
  std::filesystem::remove_all(dir);
  auto live = sim::scenario_from_json(
    {{"seed", 4}, {"phases", {{"engage_at_s", nullptr}}}, {"hand", {{"source", "live"}, {"position", {0, 0, 1}}}}});
  {
    server::LiveSession s(live, dir);
    for (int k = 0; k < 1200; ++k) {
      if (k == 2) {
        s.apply_text(R"({"type":"engage"})");
      }
      if (k == 650) {
        s.apply_text(R"({"type":"set_hand_target","x":0.3,"y":-0.2,"z":1.1})");
      }
      if (k == 800) {
        s.apply_text(R"({"type":"set_topology","kind":"ring"})");
      }
      if (k == 900) {
        s.apply_text(R"({"type":"trigger_pattern","label":"RL"})");
      }
      s.tick();
    }
  }
  std::ifstream in(dir / sim::kTraceFile, std::ios::binary);
  std::ostringstream recorded;
  recorded << in.rdbuf();
  const bool same_replay = sim::replay(sim::load_recording(dir)).csv() == recorded.str();
  std::filesystem::remove_all(dir);
  return {
    same_run && same_replay, std::string("rerun ") + (same_run ? "identical" : "differs") + ", live replay " +
                               (same_replay ? "identical" : "differs")};
}

Outcome lag_property()
{
  bench::BenchConfig b;
  b.repeats = kBenchRepeats;
  b.configurations = {bench::configuration_by_name("impedance_star")};
  const double base = bench::run_comparison(b).results.front().mean.lag_s;
  const auto & p = b.scenario.impedance;
  b.scenario.impedance = impedance::critically_damped(p.mass, 4.0 * p.stiffness, p.hand_gain);
  const double doubled = bench::run_comparison(b).results.front().mean.lag_s;
  return {doubled < base, fmt("lag %.3f s at omega_n, %.3f s at 2 omega_n", base, doubled)};
}

}  // namespace

int main()
{
  const std::pair<const char *, std::function<Outcome()>> criteria[] = {
    {"critical-damping-parameters", critical_damping_check},
    {"propagator-oracle", propagator_oracle},
    {"no-overshoot-energy-decay", overshoot_and_energy},
    {"benchmark-error-ordering", benchmark_ordering},
    {"velocity-ordering", velocity_ordering},
    {"safety-bound", safety_bound},
    {"pattern-codec", pattern_codec},
    {"determinism", determinism},
    {"tracking-lag", lag_property},
  };
  int failures = 0;
  for (const auto & [name, check] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = check();
    } catch (const std::exception & ex) {
      o = {false, std::string("exception: ") + ex.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %-28s %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str(), secs);
    failures += o.pass ? 0 : 1;
  }
  std::fflush(stdout);
  return failures == 0 ? 0 : 1;
}
