// Copyright 2026 The cdmp Authors
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

#include <gtest/gtest.h>

#include <mutex>
#include <set>

#include "cdmp/experiments.hpp"
#include "support/oracles.hpp"

namespace cdmp {
namespace {

using testing::kPi;

TEST(Presets, NamesRoundTrip) {
  for (Preset p : {Preset::kSetup1, Preset::kSetup2, Preset::kSetup3, Preset::kCustom}) {
    EXPECT_EQ(parse_preset(preset_name(p)), p);
  }
  EXPECT_FALSE(parse_preset("setup4").has_value());
  EXPECT_FALSE(parse_preset("").has_value());
}

TEST(Presets, Defaults) {
  const auto s1 = ExperimentConfig::defaults(Preset::kSetup1);
  EXPECT_EQ(s1.trials, 100);
  EXPECT_EQ(s1.horizon, 3.0);
  EXPECT_EQ(s1.k_v, 10.0);
  EXPECT_EQ(s1.displacement, 0.1);
  EXPECT_EQ(s1.rotation, 0.5);
  const auto s2 = ExperimentConfig::defaults(Preset::kSetup2);
  EXPECT_EQ(s2.trials, 10);
  EXPECT_EQ(s2.pulse_starts.size(), 2u);
  EXPECT_EQ(s2.pulse_duration, 0.3);
  const auto s3 = ExperimentConfig::defaults(Preset::kSetup3);
  EXPECT_EQ(s3.trials, 10);
  EXPECT_EQ(s3.pulse_starts.size(), 2u);
  EXPECT_EQ(s3.dt, 1.0 / 250.0);
  const Gains g = s3.gains(2.0);
  EXPECT_EQ(g.k_p(), 25.0);
  EXPECT_EQ(g.alpha_e(), 10.0);
  EXPECT_EQ(g.k_c(), 1000.0);
  EXPECT_EQ(g.tau(), 2.0);
}

TEST(Presets, Setup3ModelTurnsMoreThanPi) {
  const DmpModel m = preset_model(Preset::kSetup3);
  const double turn = quat_diff(m.start_orientation(), m.goal_orientation()).norm();
  EXPECT_GT(turn, kPi);
  EXPECT_NEAR(turn, 1.5 * kPi, 1e-9);
}

TEST(Perturbations, DisplacementMagnitudes) {
  const auto c = ExperimentConfig::defaults(Preset::kSetup1);
  std::set<double> first_components;
  for (int k = 0; k < 100; ++k) {
    const auto p = trial_perturbations(c, k);
    ASSERT_EQ(p.size(), 1u);
    EXPECT_EQ(p[0].kind, Perturbation::Kind::kDisplaceRelease);
    EXPECT_EQ(p[0].t_start, 0.0);
    EXPECT_NEAR(p[0].delta_y.norm(), 0.1, 1e-15);
    EXPECT_NEAR(p[0].delta_angle_axis.norm(), 0.5, 1e-15);
    first_components.insert(p[0].delta_y[0]);
  }
  EXPECT_EQ(first_components.size(), 100u);
}

TEST(Perturbations, PulseWindowsAndMagnitudes) {
  for (Preset preset : {Preset::kSetup2, Preset::kSetup3}) {
    const auto c = ExperimentConfig::defaults(preset);
    const auto p = trial_perturbations(c, 3);
    ASSERT_EQ(p.size(), 2u);
    for (std::size_t i = 0; i < 2; ++i) {
      EXPECT_EQ(p[i].kind, Perturbation::Kind::kAccelPulse);
      EXPECT_EQ(p[i].t_start, c.pulse_starts[i]);
      EXPECT_NEAR(p[i].t_end - p[i].t_start, 0.3, 1e-12);
      EXPECT_NEAR(p[i].accel.head<3>().norm(), 5.0, 1e-12);
      EXPECT_NEAR(p[i].accel.tail<3>().norm(), 5.0, 1e-12);
    }
    EXPECT_LT(p[0].t_end, p[1].t_start);
  }
}

TEST(Perturbations, SeededAndSwitchable) {
  auto c = ExperimentConfig::defaults(Preset::kSetup2);
  const auto a = trial_perturbations(c, 4);
  const auto b = trial_perturbations(c, 4);
  EXPECT_EQ(a[0].accel, b[0].accel);
  EXPECT_NE(trial_perturbations(c, 5)[0].accel, a[0].accel);
  c.seed = 99;
  EXPECT_NE(trial_perturbations(c, 4)[0].accel, a[0].accel);
  c.perturb = false;
  EXPECT_TRUE(trial_perturbations(c, 4).empty());
}

TEST(Perturbations, CustomScheduleIsUsedVerbatim) {
  auto c = ExperimentConfig::defaults(Preset::kCustom);
  Vec6 a = Vec6::Constant(1.0);
  c.schedule = {Perturbation::displace_release(0.5, Vec3(0, 0, 0.01), Vec3::Zero()),
                Perturbation::accel_pulse(1.0, 1.5, a)};
  for (int k = 0; k < 3; ++k) {
    const auto p = trial_perturbations(c, k);
    ASSERT_EQ(p.size(), 2u);
    EXPECT_EQ(p[0].delta_y, Vec3(0, 0, 0.01));
    EXPECT_EQ(p[1].accel, a);
  }
}

TEST(Batch, ResultsDoNotDependOnTheThreadCount) {
  const DmpModel m = preset_model(Preset::kSetup2);
  auto c = ExperimentConfig::defaults(Preset::kSetup2);
  c.horizon = 6.0;
  c.trials = 6;
  const auto serial = run_batch(m, c, 1);
  const auto parallel = run_batch(m, c, 4);
  ASSERT_EQ(serial.size(), 6u);
  ASSERT_EQ(parallel.size(), 6u);
  for (std::size_t k = 0; k < serial.size(); ++k) {
    EXPECT_EQ(serial[k].trial, static_cast<int>(k));
    EXPECT_EQ(parallel[k].trial, static_cast<int>(k));
    EXPECT_EQ(serial[k].max_tau_ratio, parallel[k].max_tau_ratio);
    EXPECT_EQ(serial[k].final_max_norm, parallel[k].final_max_norm);
    EXPECT_EQ(serial[k].decay.slope, parallel[k].decay.slope);
  }
}

TEST(Batch, CallbackSeesEveryTrialOnce) {
  const DmpModel m = preset_model(Preset::kSetup1);
  auto c = ExperimentConfig::defaults(Preset::kSetup1);
  c.trials = 12;
  std::mutex mu;
  std::multiset<int> seen;
  const auto out = run_batch(m, c, 3, [&](const TrialResult& r) {
    std::lock_guard<std::mutex> lock(mu);
    seen.insert(r.summary.trial);
    EXPECT_EQ(r.log.records.size(), 751u);
  });
  EXPECT_EQ(seen.size(), 12u);
  for (int k = 0; k < 12; ++k) EXPECT_EQ(seen.count(k), 1u);
  for (const auto& s : out) {
    EXPECT_TRUE(s.converged) << s.trial;
    EXPECT_FALSE(s.aborted);
    EXPECT_LE(s.convergence_time, 3.0);
  }
}

TEST(Batch, EmptyBatch) {
  const DmpModel m = preset_model(Preset::kSetup1, 5);
  auto c = ExperimentConfig::defaults(Preset::kSetup1);
  c.trials = 0;
  EXPECT_TRUE(run_batch(m, c, 4).empty());
}

TEST(Summary, Setup3FlagsAndGoal) {
  const DmpModel m = preset_model(Preset::kSetup3);
  const auto c = ExperimentConfig::defaults(Preset::kSetup3);
  const TrialResult r = run_trial(m, c, 0);
  EXPECT_GT(r.summary.initial_dcg, kPi);
  EXPECT_LT(r.summary.initial_dcg, 2 * kPi);
  EXPECT_TRUE(r.summary.equator_crossed);
  EXPECT_GT(r.summary.min_successive_dot, 0.0);
  EXPECT_LT(r.summary.final_dcg, 1e-2);
  EXPECT_TRUE(r.summary.converged);
  EXPECT_GT(r.summary.max_tau_ratio, 1.5);
}

}  // namespace
}  // namespace cdmp
