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

#ifndef SWARMTOUCH__TOPOLOGY_HPP_
#define SWARMTOUCH__TOPOLOGY_HPP_

#include "swarmtouch/common.hpp"
#include "swarmtouch/impedance.hpp"

#include <nlohmann/json.hpp>

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace swarmtouch::topology
{

enum class TopologyKind { Star, Ring, Tree };

std::string to_string(TopologyKind kind);
/// Accepts "star" | "ring" | "tree".
TopologyKind parse_kind(std::string_view name);

/// Graph node: the hand anchor or a drone index.
using NodeId = int;
inline constexpr NodeId kHand = -1;

struct Edge
{
  NodeId a{kHand};
  NodeId b{0};
  impedance::ImpedanceParams params{};

  bool is_hand_link() const { return a == kHand || b == kHand; }
  bool operator==(const Edge &) const = default;
};

struct TopologyConfig
{
  TopologyKind kind{TopologyKind::Star};
  std::size_t drones{3};
  double spacing_m{0.3};
  double height_m{0.4};
};

struct LinkGraph
{
  TopologyKind kind{TopologyKind::Star};
  std::size_t drone_count{0};
  double spacing_m{0.3};
  double height_m{0.4};
  std::vector<Edge> edges;
  std::vector<Vec3> offsets;  // desired displacement of each drone from the hand

  /// Indices into `edges` touching `node`.
  std::vector<std::size_t> incident(NodeId node) const;
  bool has_hand_link(NodeId drone) const;
  bool operator==(const LinkGraph &) const = default;
};

/// Star: hand to every drone. Ring: hand to drone 0 plus the cycle
/// d0-d1-...-d(n-1)-d0. Tree: hand to drone 0, drone 0 to every other drone.
/// Drones sit evenly on a horizontal circle of radius `spacing` at `height`
/// above the hand. All edges share `params`.
LinkGraph build_topology(
  TopologyKind kind, std::size_t drones, double spacing, double height = 0.4,
  const impedance::ImpedanceParams & params = {});
LinkGraph build_topology(const TopologyConfig & cfg, const impedance::ImpedanceParams & params = {});

/// hand + offsets[drone]; DomainError for an unknown drone.
Vec3 desired_position(const LinkGraph & graph, NodeId drone, const Vec3 & hand);

/// Every drone reaches the hand through edges.
bool is_connected(const LinkGraph & graph);
/// Self-edges, duplicate edges, dangling endpoints.
std::optional<std::string> structural_problem(const LinkGraph & graph);

/// Replace the params of the edge joining `a` and `b` (either orientation).
void override_edge(LinkGraph & graph, NodeId a, NodeId b, const impedance::ImpedanceParams & params);

nlohmann::json to_json(const LinkGraph & graph);
LinkGraph graph_from_json(const nlohmann::json & j);

nlohmann::json to_json(const TopologyConfig & cfg);
TopologyConfig topology_config_from_json(const nlohmann::json & j);

}  // namespace swarmtouch::topology

#endif  // SWARMTOUCH__TOPOLOGY_HPP_
