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

#include "swarmtouch/topology.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <set>
#include <utility>

namespace swarmtouch::topology
{
namespace
{

nlohmann::json node_to_json(NodeId n)
{
  if (n == kHand) {
    return "hand";
  }
  return n;
}

NodeId node_from_json(const nlohmann::json & j)
{
  if (j.is_string() && j.get<std::string>() == "hand") {
    return kHand;
  }
  if (j.is_number_integer()) {
    return j.get<NodeId>();
  }
  throw ConfigError("edge endpoint must be \"hand\" or a drone index");
}

nlohmann::json params_to_json(const impedance::ImpedanceParams & p)
{
  return {{"M", p.mass}, {"D", p.damping}, {"K", p.stiffness}, {"K_v", p.hand_gain}};
}

impedance::ImpedanceParams params_from_json(const nlohmann::json & j)
{
  impedance::ImpedanceParams p;
  p.mass = j.at("M").get<double>();
  p.damping = j.at("D").get<double>();
  p.stiffness = j.at("K").get<double>();
  p.hand_gain = j.at("K_v").get<double>();
  return p;
}

}  // namespace

std::string to_string(TopologyKind kind)
{
  switch (kind) {
    case TopologyKind::Star:
      return "star";
    case TopologyKind::Ring:
      return "ring";
    case TopologyKind::Tree:
      return "tree";
  }
  return "star";
}

TopologyKind parse_kind(std::string_view name)
{
  if (name == "star") {
    return TopologyKind::Star;
  }
  if (name == "ring") {
    return TopologyKind::Ring;
  }
  if (name == "tree") {
    return TopologyKind::Tree;
  }
  throw ConfigError("unknown topology kind '" + std::string(name) + "'");
}

std::vector<std::size_t> LinkGraph::incident(NodeId node) const
{
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (edges[i].a == node || edges[i].b == node) {
      out.push_back(i);
    }
  }
  return out;
}

bool LinkGraph::has_hand_link(NodeId drone) const
{
  return std::any_of(edges.begin(), edges.end(), [drone](const Edge & e) {
    return (e.a == kHand && e.b == drone) || (e.b == kHand && e.a == drone);
  });
}

LinkGraph build_topology(
  TopologyKind kind, std::size_t drones, double spacing, double height,
  const impedance::ImpedanceParams & params)
{
  if (drones == 0) {
    throw DomainError("topology needs at least one drone");
  }
  if (!(spacing > 0.0) || !std::isfinite(spacing)) {
    throw DomainError("formation spacing must be positive");
  }
  if (!std::isfinite(height)) {
    throw DomainError("formation height must be finite");
  }
  LinkGraph g;
  g.kind = kind;
  g.drone_count = drones;
  g.spacing_m = spacing;
  g.height_m = height;

  const auto n = static_cast<NodeId>(drones);
  auto link = [&](NodeId a, NodeId b) { g.edges.push_back(Edge{a, b, params}); };
  switch (kind) {
    case TopologyKind::Star:
      for (NodeId i = 0; i < n; ++i) {
        link(kHand, i);
      }
      break;
    case TopologyKind::Ring:
      link(kHand, 0);
      if (n == 2) {
        link(0, 1);
      } else if (n > 2) {
        for (NodeId i = 0; i < n; ++i) {
          link(i, (i + 1) % n);
        }
      }
      break;
    case TopologyKind::Tree:
      link(kHand, 0);
      for (NodeId i = 1; i < n; ++i) {
        link(0, i);
      }
      break;
  }

  g.offsets.reserve(drones);
  for (std::size_t i = 0; i < drones; ++i) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(drones);
    g.offsets.emplace_back(spacing * std::cos(angle), spacing * std::sin(angle), height);
  }
  return g;
}

LinkGraph build_topology(const TopologyConfig & cfg, const impedance::ImpedanceParams & params)
{
  return build_topology(cfg.kind, cfg.drones, cfg.spacing_m, cfg.height_m, params);
}

Vec3 desired_position(const LinkGraph & graph, NodeId drone, const Vec3 & hand)
{
  if (drone < 0 || static_cast<std::size_t>(drone) >= graph.offsets.size()) {
    throw DomainError("unknown drone index " + std::to_string(drone));
  }
  return hand + graph.offsets[static_cast<std::size_t>(drone)];
}

bool is_connected(const LinkGraph & graph)
{
  const auto n = graph.drone_count;
  std::vector<bool> seen(n, false);
  std::queue<NodeId> frontier;
  frontier.push(kHand);
  std::size_t reached = 0;
  while (!frontier.empty()) {
    const NodeId cur = frontier.front();
    frontier.pop();
    for (const auto & e : graph.edges) {
      NodeId other;
      if (e.a == cur) {
        other = e.b;
      } else if (e.b == cur) {
        other = e.a;
      } else {
        continue;
      }
      if (other == kHand || other < 0 || static_cast<std::size_t>(other) >= n) {
        continue;
      }
      if (!seen[static_cast<std::size_t>(other)]) {
        seen[static_cast<std::size_t>(other)] = true;
        ++reached;
        frontier.push(other);
      }
    }
  }
  return reached == n;
}

std::optional<std::string> structural_problem(const LinkGraph & graph)
{
  std::set<std::pair<NodeId, NodeId>> seen;
  const auto n = static_cast<NodeId>(graph.drone_count);
  for (const auto & e : graph.edges) {
    if (e.a == e.b) {
      return "self-edge on node " + std::to_string(e.a);
    }
    for (NodeId v : {e.a, e.b}) {
      if (v != kHand && (v < 0 || v >= n)) {
        return "edge endpoint " + std::to_string(v) + " is not a drone";
      }
    }
    const auto key = std::minmax(e.a, e.b);
    if (!seen.insert(key).second) {
      return "duplicate edge " + std::to_string(key.first) + "-" + std::to_string(key.second);
    }
  }
  if (graph.offsets.size() != graph.drone_count) {
    return "offset count does not match drone count";
  }
  return std::nullopt;
}

void override_edge(LinkGraph & graph, NodeId a, NodeId b, const impedance::ImpedanceParams & params)
{
  for (auto & e : graph.edges) {
    if ((e.a == a && e.b == b) || (e.a == b && e.b == a)) {
      e.params = params;
      return;
    }
  }
  throw ConfigError(
    "no edge between " + (a == kHand ? std::string("hand") : std::to_string(a)) + " and " +
    (b == kHand ? std::string("hand") : std::to_string(b)));
}

nlohmann::json to_json(const LinkGraph & graph)
{
  nlohmann::json edges = nlohmann::json::array();
  for (const auto & e : graph.edges) {
    auto je = params_to_json(e.params);
    je["a"] = node_to_json(e.a);
    je["b"] = node_to_json(e.b);
    edges.push_back(std::move(je));
  }
  nlohmann::json offsets = nlohmann::json::array();
  for (const auto & o : graph.offsets) {
    offsets.push_back({o.x(), o.y(), o.z()});
  }
  return {
    {"kind", to_string(graph.kind)},
    {"drones", graph.drone_count},
    {"spacing_m", graph.spacing_m},
    {"height_m", graph.height_m},
    {"edges", std::move(edges)},
    {"offsets", std::move(offsets)}};
}

LinkGraph graph_from_json(const nlohmann::json & j)
{
  LinkGraph g;
  g.kind = parse_kind(j.at("kind").get<std::string>());
  g.drone_count = j.at("drones").get<std::size_t>();
  g.spacing_m = j.at("spacing_m").get<double>();
  g.height_m = j.at("height_m").get<double>();
  for (const auto & je : j.at("edges")) {
    g.edges.push_back(Edge{node_from_json(je.at("a")), node_from_json(je.at("b")), params_from_json(je)});
  }
  for (const auto & jo : j.at("offsets")) {
    g.offsets.emplace_back(jo.at(0).get<double>(), jo.at(1).get<double>(), jo.at(2).get<double>());
  }
  if (auto problem = structural_problem(g)) {
    throw ConfigError("invalid link graph: " + *problem);
  }
  return g;
}

nlohmann::json to_json(const TopologyConfig & cfg)
{
  return {
    {"kind", to_string(cfg.kind)},
    {"drones", cfg.drones},
    {"spacing_m", cfg.spacing_m},
    {"height_m", cfg.height_m}};
}

TopologyConfig topology_config_from_json(const nlohmann::json & j)
{
  static const std::set<std::string> known{"kind", "drones", "spacing_m", "height_m"};
  for (const auto & [key, _] : j.items()) {
    if (!known.count(key)) {
      throw ConfigError("unknown topology field '" + key + "'");
    }
  }
  TopologyConfig cfg;
  if (j.contains("kind")) {
    cfg.kind = parse_kind(j.at("kind").get<std::string>());
  }
  if (j.contains("drones")) {
    const auto n = j.at("drones").get<long long>();
    if (n < 1) {
      throw ConfigError("topology.drones must be >= 1");
    }
    cfg.drones = static_cast<std::size_t>(n);
  }
  cfg.spacing_m = j.value("spacing_m", cfg.spacing_m);
  cfg.height_m = j.value("height_m", cfg.height_m);
  if (!(cfg.spacing_m > 0.0)) {
    throw ConfigError("topology.spacing_m must be positive");
  }
  return cfg;
}

}  // namespace swarmtouch::topology
