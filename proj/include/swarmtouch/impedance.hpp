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

#ifndef SWARMTOUCH__IMPEDANCE_HPP_
#define SWARMTOUCH__IMPEDANCE_HPP_

#include "swarmtouch/common.hpp"

#include <Eigen/Core>

#include <array>

namespace swarmtouch::impedance
{

/// Tolerance on |zeta - 1| accepted by the repeated-root propagator.
/// Wide enough for parameters printed to three significant digits
/// (M=1.9, D=12.6, K=20.88 gives zeta = 1.00023).
inline constexpr double kCriticalDampingTolerance = 1e-3;

/// Default hand-velocity force scaling (N*s/m).
inline constexpr double kDefaultHandGain = 3.0;

/// Virtual mass-spring-damper link: M*ddx + D*dx' + K*dx = F_ext.
struct ImpedanceParams
{
  double mass{1.9};         // M, kg
  double damping{12.6};     // D, N*s/m
  double stiffness{20.88};  // K, N/m
  double hand_gain{kDefaultHandGain};  // K_v, N*s/m

  /// D / (2 sqrt(M K))
  double damping_ratio() const;
  /// sqrt(K / M)
  double natural_frequency() const;

  bool operator==(const ImpedanceParams &) const = default;
};

struct DerivedLinkConstants
{
  double a{};        // -D/M
  double b{};        // -K/M
  double c{};        // 1/M
  double lambda{};   // repeated eigenvalue of the system matrix
  double omega_n{};  // sqrt(K/M)
  double zeta{};     // D / (2 sqrt(M K))
};

struct DiscreteLink
{
  double timestep{};
  Eigen::Matrix2d a_d{Eigen::Matrix2d::Identity()};
  Eigen::Vector2d b_d{Eigen::Vector2d::Zero()};
  DerivedLinkConstants constants{};
};

/// Displacement state of one link along one axis. dx = x_current - x_desired.
struct LinkState
{
  double dx{0.0};
  double dv{0.0};

  bool operator==(const LinkState &) const = default;
};

/// One LinkState per Cartesian axis; the axes evolve independently.
struct LinkState3
{
  std::array<LinkState, 3> axis{};

  Vec3 displacement() const { return {axis[0].dx, axis[1].dx, axis[2].dx}; }
  Vec3 rate() const { return {axis[0].dv, axis[1].dv, axis[2].dv}; }
  bool operator==(const LinkState3 &) const = default;
};

/// Params with D = 2 sqrt(M K). Throws DomainError unless M > 0 and K > 0.
ImpedanceParams critically_damped(double mass, double stiffness, double hand_gain = kDefaultHandGain);

/// Validates `p` (M > 0, K > 0, D >= 0, K_v >= 0), throws DomainError otherwise.
void validate(const ImpedanceParams & p);

bool is_critically_damped(const ImpedanceParams & p, double tolerance = kCriticalDampingTolerance);

/// Throws NotCriticallyDamped when |zeta - 1| exceeds kCriticalDampingTolerance;
/// lambda is then the repeated root a/2.
DerivedLinkConstants derive_constants(const ImpedanceParams & p);

/// Exact zero-order-hold propagator for a critically damped link:
///
///   A_d = e^{lT} [[1 - lT, T], [bT, 1 + (a - l)T]]
///   B_d = (c / b) [e^{lT}(1 - lT) - 1, bT e^{lT}]^T
///
/// i.e. e^{AT} = e^{lT}(I + (A - lI)T) and B_d = A^-1 (e^{AT} - I) B.
DiscreteLink discretize(const ImpedanceParams & p, double timestep);

/// [dx, dv]_{k+1} = A_d [dx, dv]_k + B_d F, with F held over the step.
LinkState step_link(const DiscreteLink & link, const LinkState & s, double force);
LinkState3 step_link(const DiscreteLink & link, const LinkState3 & s, const Vec3 & force);

/// F_human = K_v * v_hand, per axis.
Vec3 hand_force(double hand_gain, const Vec3 & hand_velocity);

/// 0.5 K dx^2 + 0.5 M dv^2
double link_energy(const ImpedanceParams & p, const LinkState & s);

class NotCriticallyDamped : public DomainError
{
public:
  explicit NotCriticallyDamped(double zeta);
  double zeta() const { return zeta_; }

private:
  double zeta_;
};

}  // namespace swarmtouch::impedance

#endif  // SWARMTOUCH__IMPEDANCE_HPP_
