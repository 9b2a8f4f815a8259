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

#include "swarmtouch/haptics.hpp"

#include <gtest/gtest.h>

#include <set>
#include <stdexcept>
#include <vector>

namespace
{

using swarmtouch::Vec3;
using namespace swarmtouch::haptics;

constexpr SurfaceKind kSurfaces[] = {SurfaceKind::Soft, SurfaceKind::Elastic, SurfaceKind::Rigid};
constexpr MotionDirection kDirections[] = {
  MotionDirection::Forward, MotionDirection::Backward, MotionDirection::Right, MotionDirection::Left};

std::vector<double> first_onsets(const PatternSchedule & s)
{
  std::vector<double> out;
  for (const auto & t : s.actuators) {
    out.push_back(t.front().onset_ms);
  }
  return out;
}

}  // namespace

TEST(Encode, RigidRightSweepsAt100Hz)
{
  PatternConfig cfg;
  cfg.inter_onset_ms = 150.0;
  cfg.burst_ms = 300.0;
  const auto s = encode_pattern(SurfaceKind::Rigid, MotionDirection::Right, cfg);
  EXPECT_EQ(s.label, "RR");
  EXPECT_EQ(first_onsets(s), (std::vector<double>{0.0, 150.0, 300.0}));
  for (const auto & t : s.actuators) {
    for (const auto & ev : t) {
      EXPECT_DOUBLE_EQ(ev.frequency_hz, 100.0);
    }
  }
  EXPECT_DOUBLE_EQ(s.duration_ms(), 600.0);
}

TEST(Encode, SoftLeftIsReversedAtLowCarrier)
{
  const auto s = encode_pattern(SurfaceKind::Soft, MotionDirection::Left);
  EXPECT_EQ(first_onsets(s), (std::vector<double>{300.0, 150.0, 0.0}));
  EXPECT_DOUBLE_EQ(s.actuators[0].front().frequency_hz, 3.3);
}

TEST(Encode, ForwardOnsetsSimultaneousWithRisingRamp)
{
  for (auto surface : kSurfaces) {
    const auto fwd = encode_pattern(surface, MotionDirection::Forward);
    const auto onsets = first_onsets(fwd);
    EXPECT_EQ(onsets[0], onsets[1]);
    EXPECT_EQ(onsets[1], onsets[2]);
    const auto & t = fwd.actuators[0];
    for (std::size_t i = 1; i < t.size(); ++i) {
      EXPECT_GT(t[i].amplitude, t[i - 1].amplitude);
    }
    const auto & back = encode_pattern(surface, MotionDirection::Backward).actuators[0];
    for (std::size_t i = 1; i < back.size(); ++i) {
      EXPECT_LT(back[i].amplitude, back[i - 1].amplitude);
    }
  }
}

TEST(Encode, EverySchedulePinnedToItsCarrier)
{
  for (auto surface : kSurfaces) {
    const double f = carrier_frequency_hz(surface);
    for (auto dir : kDirections) {
      const auto s = encode_pattern(surface, dir);
      EXPECT_FALSE(schedule_problem(s).has_value()) << s.label;
      for (const auto & t : s.actuators) {
        ASSERT_FALSE(t.empty());
        for (const auto & ev : t) {
          EXPECT_DOUBLE_EQ(ev.frequency_hz, f) << s.label;
        }
      }
    }
  }
  EXPECT_DOUBLE_EQ(carrier_frequency_hz(SurfaceKind::Soft), 3.3);
  EXPECT_DOUBLE_EQ(carrier_frequency_hz(SurfaceKind::Elastic), 8.0);
  EXPECT_DOUBLE_EQ(carrier_frequency_hz(SurfaceKind::Rigid), 100.0);
}

TEST(Encode, SchedulesPairwiseDistinct)
{
  std::vector<PatternSchedule> all;
  for (const auto & label : all_labels()) {
    const auto [s, d] = decode_label(label);
    auto sched = encode_pattern(s, d);
    sched.label.clear();
    all.push_back(sched);
  }
  ASSERT_EQ(all.size(), 12u);
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (std::size_t j = i + 1; j < all.size(); ++j) {
      EXPECT_NE(all[i], all[j]) << i << " vs " << j;
    }
  }
}

TEST(Encode, RightAndLeftAreFingerMirrors)
{
  for (auto surface : kSurfaces) {
    const auto r = encode_pattern(surface, MotionDirection::Right);
    const auto l = encode_pattern(surface, MotionDirection::Left);
    for (std::size_t f = 0; f < kActuatorCount; ++f) {
      EXPECT_EQ(r.actuators[f], l.actuators[kActuatorCount - 1 - f]);
    }
  }
}

TEST(Encode, RejectsNonPositiveTiming)
{
  PatternConfig cfg;
  cfg.burst_ms = 0.0;
  EXPECT_THROW(encode_pattern(SurfaceKind::Rigid, MotionDirection::Right, cfg), swarmtouch::DomainError);
}

TEST(Labels, Codec)
{
  EXPECT_EQ(decode_label("RR"), std::make_pair(SurfaceKind::Rigid, MotionDirection::Right));
  EXPECT_EQ(encode_label(SurfaceKind::Soft, MotionDirection::Forward), "SF");
  const auto labels = all_labels();
  EXPECT_EQ(std::set<std::string>(labels.begin(), labels.end()).size(), 12u);
  for (const auto & label : labels) {
    const auto [s, d] = decode_label(label);
    EXPECT_EQ(encode_label(s, d), label);
  }
  EXPECT_THROW(decode_label("XR"), std::invalid_argument);
  EXPECT_THROW(decode_label("R"), std::invalid_argument);
  EXPECT_THROW(decode_label("RRR"), std::invalid_argument);
}

TEST(Labels, ScheduleJsonRoundTrip)
{
  for (const auto & label : all_labels()) {
    const auto [s, d] = decode_label(label);
    const auto sched = encode_pattern(s, d);
    EXPECT_EQ(schedule_from_json(nlohmann::json::parse(to_json(sched).dump())), sched) << label;
  }
}

TEST(Classify, DominantHorizontalAxis)
{
  EXPECT_EQ(
    classify_contact(Vec3(0.3, 0.01, 0), SurfaceKind::Rigid),
    std::make_pair(SurfaceKind::Rigid, MotionDirection::Right));
  EXPECT_EQ(
    classify_contact(Vec3(0, -0.2, 0), SurfaceKind::Soft),
    std::make_pair(SurfaceKind::Soft, MotionDirection::Backward));
  EXPECT_EQ(
    classify_contact(Vec3(-0.5, 0.1, 2.0), SurfaceKind::Elastic),
    std::make_pair(SurfaceKind::Elastic, MotionDirection::Left));
  EXPECT_FALSE(classify_contact(Vec3(0.01, 0.01, 0), SurfaceKind::Rigid).has_value());
}
