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

#include "swarmtouch/bench/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace swarmtouch::bench
{
namespace
{

// Pearson correlation of reference[t] with follower[t + shift] over the overlap.
double correlation_at(const std::vector<double> & a, const std::vector<double> & b, long shift)
{
  const long n = static_cast<long>(std::min(a.size(), b.size()));
  const long lo = std::max(0L, -shift);
  const long hi = std::min(n, n - shift);
  const long count = hi - lo;
  if (count < 2) {
    return -std::numeric_limits<double>::infinity();
  }
  double ma = 0.0;
  double mb = 0.0;
  for (long t = lo; t < hi; ++t) {
    ma += a[static_cast<std::size_t>(t)];
    mb += b[static_cast<std::size_t>(t + shift)];
  }
  ma /= static_cast<double>(count);
  mb /= static_cast<double>(count);
  double sab = 0.0;
  double saa = 0.0;
  double sbb = 0.0;
  for (long t = lo; t < hi; ++t) {
    const double da = a[static_cast<std::size_t>(t)] - ma;
    const double db = b[static_cast<std::size_t>(t + shift)] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa <= 0.0 || sbb <= 0.0) {
    return 0.0;
  }
  return sab / std::sqrt(saa * sbb);
}

}  // namespace

double estimate_lag(
  const std::vector<double> & reference, const std::vector<double> & follower, double dt, double max_lag_s)
{
  if (!(dt > 0.0) || reference.empty() || follower.empty()) {
    throw DomainError("lag estimate needs dt > 0 and non-empty series");
  }
  const long n = static_cast<long>(std::min(reference.size(), follower.size()));
  const long reach = std::min(static_cast<long>(std::floor(max_lag_s / dt)), n / 2);
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(2 * reach + 1));
  for (long s = -reach; s <= reach; ++s) {
    values.push_back(correlation_at(reference, follower, s));
  }
  const auto best = static_cast<long>(std::max_element(values.begin(), values.end()) - values.begin());
  double frac = 0.0;
  if (best > 0 && best + 1 < static_cast<long>(values.size())) {
    const double y0 = values[static_cast<std::size_t>(best - 1)];
    const double y1 = values[static_cast<std::size_t>(best)];
    const double y2 = values[static_cast<std::size_t>(best + 1)];
    const double den = y0 - 2.0 * y1 + y2;
    if (den < 0.0) {
      frac = 0.5 * (y0 - y2) / den;
    }
  }
  return (static_cast<double>(best - reach) + frac) * dt;
}

MetricsReport compute_metrics(
  const std::vector<sim::TraceRow> & rows, const ReferenceTrajectory & ref, const std::vector<Vec3> & offsets)
{
  if (rows.empty()) {
    throw DomainError("cannot compute metrics of an empty trace");
  }
  if (ref.position.empty()) {
    throw DomainError("empty reference trajectory");
  }
  MetricsReport m;
  m.min_separation = std::numeric_limits<double>::infinity();
  double sum_sq = 0.0;
  std::map<int, std::vector<double>> drone_x;
  std::map<int, std::vector<double>> ref_x;
  std::map<std::uint64_t, std::vector<Vec3>> by_tick;

  for (const auto & r : rows) {
    if (r.drone_id < 0 || static_cast<std::size_t>(r.drone_id) >= offsets.size()) {
      throw DomainError("trace drone id " + std::to_string(r.drone_id) + " has no formation offset");
    }
    const auto tick = static_cast<std::size_t>(r.tick);
    const Vec3 & p_ref = ref.position_at(tick);
    const Vec3 err = r.position - (p_ref + offsets[static_cast<std::size_t>(r.drone_id)]);
    const double ex = std::abs(err.x());
    const double ey = std::abs(err.y());
    m.mean_abs_x += ex;
    m.mean_abs_y += ey;
    m.max_abs_x = std::max(m.max_abs_x, ex);
    m.max_abs_y = std::max(m.max_abs_y, ey);
    sum_sq += ex * ex + ey * ey;
    const double speed = r.velocity.head<2>().norm();
    m.max_speed_xy = std::max(m.max_speed_xy, speed);
    m.mean_speed_xy += speed;
    const std::size_t seg_index = std::min(tick, ref.segment.size() - 1);
    if (!ref.segment.empty() && ref.segment[seg_index] == Segment::Cruise) {
      m.cruise_max_error = std::max(m.cruise_max_error, err.head<2>().norm());
    }
    m.min_separation = std::min(m.min_separation, (r.position - r.hand).norm());
    by_tick[r.tick].push_back(r.position);
    drone_x[r.drone_id].push_back(r.position.x());
    ref_x[r.drone_id].push_back(p_ref.x());
  }
  const auto n = static_cast<double>(rows.size());
  m.samples = rows.size();
  m.mean_abs_x /= n;
  m.mean_abs_y /= n;
  m.mean_speed_xy /= n;
  m.rmse = std::sqrt(sum_sq / n);

  for (const auto & [tick, ps] : by_tick) {
    for (std::size_t i = 0; i < ps.size(); ++i) {
      for (std::size_t j = i + 1; j < ps.size(); ++j) {
        m.min_separation = std::min(m.min_separation, (ps[i] - ps[j]).norm());
      }
    }
  }

  const double dt = ref.dt > 0.0 ? ref.dt : 0.01;
  double lag_sum = 0.0;
  for (const auto & [id, xs] : drone_x) {
    lag_sum += estimate_lag(ref_x[id], xs, dt);
  }
  m.lag_s = lag_sum / static_cast<double>(drone_x.size());
  return m;
}

MetricsReport average(const std::vector<MetricsReport> & reports)
{
  MetricsReport m;
  if (reports.empty()) {
    return m;
  }
  for (const auto & r : reports) {
    m.mean_abs_x += r.mean_abs_x;
    m.mean_abs_y += r.mean_abs_y;
    m.max_abs_x += r.max_abs_x;
    m.max_abs_y += r.max_abs_y;
    m.rmse += r.rmse;
    m.max_speed_xy += r.max_speed_xy;
    m.mean_speed_xy += r.mean_speed_xy;
    m.lag_s += r.lag_s;
    m.cruise_max_error += r.cruise_max_error;
    m.min_separation += r.min_separation;
    m.samples += r.samples;
  }
  const auto k = static_cast<double>(reports.size());
  m.mean_abs_x /= k;
  m.mean_abs_y /= k;
  m.max_abs_x /= k;
  m.max_abs_y /= k;
  m.rmse /= k;
  m.max_speed_xy /= k;
  m.mean_speed_xy /= k;
  m.lag_s /= k;
  m.cruise_max_error /= k;
  m.min_separation /= k;
  m.samples /= reports.size();
  return m;
}

nlohmann::json to_json(const MetricsReport & m)
{
  return {
    {"mean_abs_error", {{"x", m.mean_abs_x}, {"y", m.mean_abs_y}}},
    {"max_abs_error", {{"x", m.max_abs_x}, {"y", m.max_abs_y}}},
    {"rmse", m.rmse},
    {"max_speed_xy", m.max_speed_xy},
    {"mean_speed_xy", m.mean_speed_xy},
    {"lag_s", m.lag_s},
    {"cruise_max_error", m.cruise_max_error},
    {"min_separation", m.min_separation},
    {"samples", m.samples}};
}

}  // namespace swarmtouch::bench
