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

// Scripted perturbation experiments.
//
//   setup1  DMP settled on its goal; the robot is displaced and released.
//   setup2  reach motion, two acceleration pulses during the movement.
//   setup3  handover motion rotating 1.5 pi, two acceleration pulses.
//   custom  model and perturbation schedule supplied by the caller.
//
// Trials draw random perturbation directions from a per-trial seed, so a
// batch is reproducible and independent of how trials are scheduled.
#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "cdmp/controller.hpp"
#include "cdmp/dmp.hpp"
#include "cdmp/learning.hpp"
#include "cdmp/sim.hpp"

namespace cdmp {

enum class Preset { kSetup1, kSetup2, kSetup3, kCustom };

inline std::optional<Preset> parse_preset(const std::string& s) {
  if (s == "setup1") return Preset::kSetup1;
  if (s == "setup2") return Preset::kSetup2;
  if (s == "setup3") return Preset::kSetup3;
  if (s == "custom") return Preset::kCustom;
  return std::nullopt;
}

inline std::string preset_name(Preset p) {
  switch (p) {
    case Preset::kSetup1: return "setup1";
    case Preset::kSetup2: return "setup2";
    case Preset::kSetup3: return "setup3";
    case Preset::kCustom: return "custom";
  }
  return "custom";
}

struct ExperimentConfig {
  Preset preset = Preset::kSetup1;
  double dt = kDefaultDt;
  double horizon = 3.0;
  int trials = 1;
  std::uint64_t seed = 1;
  bool perturb = true;

  double k_v = 10.0;
  double k_v_orientation = 10.0;
  double alpha_e = 10.0;
  double k_c = 1000.0;

  // setup1: displacement norm, rotation angle, and how many tau the DMP
  // had already been running (sets the initial phase).
  double displacement = 0.1;
  double rotation = 0.5;
  double settle_periods = 30.0;

  // setup2/3: pulse windows start at these times.
  std::vector<double> pulse_starts;
  double pulse_duration = 0.3;
  double pulse_linear = 5.0;
  double pulse_angular = 5.0;

  // custom: explicit schedule, applied identically in every trial.
  std::vector<Perturbation> schedule;

  static ExperimentConfig defaults(Preset p) {
    ExperimentConfig c;
    c.preset = p;
    switch (p) {
      case Preset::kSetup1:
        c.horizon = 3.0;
        c.trials = 100;
        break;
      case Preset::kSetup2:
        c.horizon = 30.0;
        c.trials = 10;
        c.pulse_starts = {0.8, 3.4};
        break;
      case Preset::kSetup3:
        c.horizon = 40.0;
        c.trials = 10;
        c.pulse_starts = {1.0, 3.6};
        break;
      case Preset::kCustom:
        c.horizon = 10.0;
        c.trials = 1;
        break;
    }
    return c;
  }

  Gains gains(double tau) const {
    return Gains(k_v, k_v_orientation, alpha_e, k_c, tau);
  }
};

/// Demonstration the preset trains its default model on.
inline Demonstration preset_demo(Preset p) {
  return synth_demo(SynthOptions::defaults(
      p == Preset::kSetup3 ? DemoKind::kHandoverGtPi : DemoKind::kReach));
}

inline DmpModel preset_model(Preset p, int n_basis = 25) {
  DmpParameters params;
  params.n_basis = n_basis;
  return train(preset_demo(p), params).fit.model;
}

inline Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Vec3 v;
  do {
    v = Vec3(n(rng), n(rng), n(rng));
  } while (v.norm() < 1e-9);
  return v.normalized();
}

inline std::mt19937_64 trial_rng(std::uint64_t seed, int trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial)};
  return std::mt19937_64(seq);
}

inline std::vector<Perturbation> trial_perturbations(const ExperimentConfig& c,
                                                     int trial) {
  if (!c.perturb) return {};
  auto rng = trial_rng(c.seed, trial);
  std::vector<Perturbation> out;
  switch (c.preset) {
    case Preset::kSetup1:
      out.push_back(Perturbation::displace_release(
          0.0, c.displacement * random_unit(rng), c.rotation * random_unit(rng)));
      break;
    case Preset::kSetup2:
    case Preset::kSetup3:
      for (double t0 : c.pulse_starts) {
        Vec6 a;
        a << c.pulse_linear * random_unit(rng), c.pulse_angular * random_unit(rng);
        out.push_back(Perturbation::accel_pulse(t0, t0 + c.pulse_duration, a));
      }
      break;
    case Preset::kCustom:
      out = c.schedule;
      break;
  }
  return out;
}

inline EpisodeStart trial_start(const ExperimentConfig& c, const DmpModel& m) {
  return c.preset == Preset::kSetup1 ? EpisodeStart::converged(m, c.settle_periods)
                                     : EpisodeStart::at_rest(m);
}

struct TrialSummary {
  int trial = 0;
  bool converged = false;
  bool aborted = false;
  std::string error;
  double convergence_time = 0.0;
  double final_max_norm = 0.0;
  DecayFit decay;
  double max_tau_ratio = 0.0;
  double initial_dcg = 0.0;
  double final_dcg = 0.0;
  bool equator_crossed = false;
  double min_successive_dot = 1.0;
};

struct TrialResult {
  TrialSummary summary;
  EpisodeLog log;
};

inline TrialSummary summarize(const EpisodeLog& log, int trial) {
  TrialSummary s;
  s.trial = trial;
  s.aborted = log.aborted;
  s.error = log.error;
  s.converged = converged(log);
  s.convergence_time = convergence_time(log);
  if (!log.records.empty()) {
    const auto n = log.records.back().xi.norms();
    s.final_max_norm = *std::max_element(n.begin(), n.end());
    s.initial_dcg = log.records.front().xi.d_cg.norm();
    s.final_dcg = log.records.back().xi.d_cg.norm();
  }
  s.decay = post_perturbation_decay(log);
  s.max_tau_ratio = max_tau_a(log) / log.tau;
  s.equator_crossed = equator_crossed(log);
  s.min_successive_dot = min_successive_dot(log);
  return s;
}

inline TrialResult run_trial(const DmpModel& m, const ExperimentConfig& c,
                             int trial) {
  EpisodeLog log = run_episode(m, c.gains(m.tau()), trial_perturbations(c, trial),
                               c.horizon, c.dt, trial_start(c, m));
  TrialSummary s = summarize(log, trial);
  return {std::move(s), std::move(log)};
}

/// Runs trials 0..c.trials-1 on up to `jobs` threads. `on_done` is invoked
/// from worker threads, once per trial, and must be thread-safe.
inline std::vector<TrialSummary> run_batch(
    const DmpModel& m, const ExperimentConfig& c, int jobs,
    const std::function<void(const TrialResult&)>& on_done = {}) {
  std::vector<TrialSummary> out(static_cast<std::size_t>(std::max(c.trials, 0)));
  std::atomic<int> next{0};
  const auto worker = [&] {
    for (int k = next++; k < c.trials; k = next++) {
      TrialResult r = run_trial(m, c, k);
      if (on_done) on_done(r);
      out[static_cast<std::size_t>(k)] = std::move(r.summary);
    }
  };
  const int n_threads = std::clamp(jobs, 1, std::max(c.trials, 1));
  std::vector<std::thread> pool;
  for (int i = 1; i < n_threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return out;
}

}  // namespace cdmp
