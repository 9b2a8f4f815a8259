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

#include "swarmtouch/sim/hand.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace swarmtouch::sim
{

SampledHand::SampledHand(std::vector<Vec3> samples, std::string kind)
: samples_(std::move(samples)), kind_(std::move(kind))
{
  if (samples_.empty()) {
    throw ConfigError("sampled hand source needs at least one sample");
  }
}

Vec3 SampledHand::position_at(std::uint64_t tick)
{
  return samples_[std::min<std::uint64_t>(tick, samples_.size() - 1)];
}

LiveHand::LiveHand(const Vec3 & initial, double smoothing_s, double dt)
: initial_(initial), current_(initial), target_(initial)
{
  if (!(dt > 0.0) || !(smoothing_s >= 0.0)) {
    throw ConfigError("live hand needs dt > 0 and smoothing >= 0");
  }
  blend_ = smoothing_s > 0.0 ? 1.0 - std::exp(-dt / smoothing_s) : 1.0;
}

Vec3 LiveHand::position_at(std::uint64_t)
{
  current_ += (target_ - current_) * blend_;
  return current_;
}

}  // namespace swarmtouch::sim
