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

#include "swarmtouch/impedance.hpp"

#include <cmath>
#include <string>

namespace swarmtouch::impedance
{

double ImpedanceParams::damping_ratio() const
{
  return damping / (2.0 * std::sqrt(mass * stiffness));
}

double ImpedanceParams::natural_frequency() const { return std::sqrt(stiffness / mass); }

NotCriticallyDamped::NotCriticallyDamped(double zeta)
: DomainError("not critically damped (zeta = " + std::to_string(zeta) + ")"), zeta_(zeta)
{
}

void validate(const ImpedanceParams & p)
{
  if (!(p.mass > 0.0) || !std::isfinite(p.mass)) {
    throw DomainError("impedance mass must be positive");
  }
  if (!(p.stiffness > 0.0) || !std::isfinite(p.stiffness)) {
    throw DomainError("impedance stiffness must be positive");
  }
  if (!(p.damping >= 0.0) || !std::isfinite(p.damping)) {
    throw DomainError("impedance damping must be non-negative");
  }
  if (!(p.hand_gain >= 0.0) || !std::isfinite(p.hand_gain)) {
    throw DomainError("hand force gain K_v must be non-negative");
  }
}

ImpedanceParams critically_damped(double mass, double stiffness, double hand_gain)
{
  if (!(mass > 0.0) || !(stiffness > 0.0)) {
    throw DomainError("critically_damped requires M > 0 and K > 0");
  }
  ImpedanceParams p;
  p.mass = mass;
  p.stiffness = stiffness;
  p.damping = 2.0 * std::sqrt(mass * stiffness);
  p.hand_gain = hand_gain;
  validate(p);
  return p;
}

bool is_critically_damped(const ImpedanceParams & p, double tolerance)
{
  return std::abs(p.damping_ratio() - 1.0) <= tolerance;
}

DerivedLinkConstants derive_constants(const ImpedanceParams & p)
{
  validate(p);
  DerivedLinkConstants k;
  k.a = -p.damping / p.mass;
  k.b = -p.stiffness / p.mass;
  k.c = 1.0 / p.mass;
  k.omega_n = p.natural_frequency();
  k.zeta = p.damping_ratio();
  if (std::abs(k.zeta - 1.0) > kCriticalDampingTolerance) {
    throw NotCriticallyDamped(k.zeta);
  }
  k.lambda = 0.5 * k.a;
  return k;
}

DiscreteLink discretize(const ImpedanceParams & p, double timestep)
{
  if (!(timestep >= 0.0) || !std::isfinite(timestep)) {
    throw DomainError("discretize requires a finite timestep T >= 0");
  }
  DiscreteLink link;
  link.timestep = timestep;
  link.constants = derive_constants(p);
  const auto & k = link.constants;
  const double T = timestep;
  const double lT = k.lambda * T;
  const double e = std::exp(lT);

  link.a_d << 1.0 - lT, T,
              k.b * T, 1.0 + (k.a - k.lambda) * T;
  link.a_d *= e;

  link.b_d << e * (1.0 - lT) - 1.0, k.b * T * e;
  link.b_d *= k.c / k.b;
  return link;
}

LinkState step_link(const DiscreteLink & link, const LinkState & s, double force)
{
  const Eigen::Vector2d x{s.dx, s.dv};
  const Eigen::Vector2d next = link.a_d * x + link.b_d * force;
  return {next[0], next[1]};
}

LinkState3 step_link(const DiscreteLink & link, const LinkState3 & s, const Vec3 & force)
{
  LinkState3 out;
  for (int i = 0; i < 3; ++i) {
    out.axis[i] = step_link(link, s.axis[i], force[i]);
  }
  return out;
}

Vec3 hand_force(double hand_gain, const Vec3 & hand_velocity) { return hand_gain * hand_velocity; }

double link_energy(const ImpedanceParams & p, const LinkState & s)
{
  return 0.5 * p.stiffness * s.dx * s.dx + 0.5 * p.mass * s.dv * s.dv;
}

}  // namespace swarmtouch::impedance
