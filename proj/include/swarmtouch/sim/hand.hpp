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

#ifndef SWARMTOUCH__SIM__HAND_HPP_
#define SWARMTOUCH__SIM__HAND_HPP_

#include "swarmtouch/common.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace swarmtouch::sim
{

struct HandState
{
  Vec3 position{Vec3::Zero()};
  Vec3 velocity{Vec3::Zero()};  // backward difference of successive positions
};

/// Supplies the hand position for each tick. `position_at` is called once per
/// tick with strictly increasing ticks starting at 1.
class HandSource
{
public:
  virtual ~HandSource() = default;
  virtual Vec3 initial_position() const = 0;
  virtual Vec3 position_at(std::uint64_t tick) = 0;
  virtual std::string kind() const = 0;
};

class StaticHand : public HandSource
{
public:
  explicit StaticHand(const Vec3 & p) : p_(p) {}
  Vec3 initial_position() const override { return p_; }
  Vec3 position_at(std::uint64_t) override { return p_; }
  std::string kind() const override { return "static"; }

private:
  Vec3 p_;
};

/// Jumps from `from` to `to` at `at_tick` and stays there.
class StepHand : public HandSource
{
public:
  StepHand(const Vec3 & from, const Vec3 & to, std::uint64_t at_tick) : from_(from), to_(to), at_(at_tick) {}
  Vec3 initial_position() const override { return at_ == 0 ? to_ : from_; }
  Vec3 position_at(std::uint64_t tick) override { return tick >= at_ ? to_ : from_; }
  std::string kind() const override { return "step"; }

private:
  Vec3 from_;
  Vec3 to_;
  std::uint64_t at_;
};

/// Pre-sampled positions indexed by tick; holds the last sample afterwards.
class SampledHand : public HandSource
{
public:
  SampledHand(std::vector<Vec3> samples, std::string kind);
  Vec3 initial_position() const override { return samples_.front(); }
  Vec3 position_at(std::uint64_t tick) override;
  std::string kind() const override { return kind_; }

private:
  std::vector<Vec3> samples_;
  std::string kind_;
};

/// Steered by discrete target updates; the position follows the target
/// through a first-order lag so the hand velocity stays finite.
class LiveHand : public HandSource
{
public:
  LiveHand(const Vec3 & initial, double smoothing_s, double dt);
  Vec3 initial_position() const override { return initial_; }
  Vec3 position_at(std::uint64_t tick) override;
  std::string kind() const override { return "live"; }

  void set_target(const Vec3 & target) { target_ = target; }
  const Vec3 & target() const { return target_; }

private:
  Vec3 initial_;
  Vec3 current_;
  Vec3 target_;
  double blend_;
};

}  // namespace swarmtouch::sim

#endif  // SWARMTOUCH__SIM__HAND_HPP_
