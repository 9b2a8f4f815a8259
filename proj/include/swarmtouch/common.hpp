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

#ifndef SWARMTOUCH__COMMON_HPP_
#define SWARMTOUCH__COMMON_HPP_

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace swarmtouch
{
using Vec3 = Eigen::Vector3d;

/// Raised when an argument lies outside the mathematical domain of an operation.
class DomainError : public std::domain_error
{
public:
  using std::domain_error::domain_error;
};

/// Raised for malformed or inconsistent scenario / bench configuration.
class ConfigError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

inline bool all_finite(const Vec3 & v) { return v.allFinite(); }

/// Rescale `v` to magnitude `limit` when it is longer than that.
inline Vec3 clamp_norm(const Vec3 & v, double limit)
{
  const double n = v.norm();
  if (n > limit && n > 0.0) {
    return v * (limit / n);
  }
  return v;
}

}  // namespace swarmtouch

#endif  // SWARMTOUCH__COMMON_HPP_
