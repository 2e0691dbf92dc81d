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

// Minimal library walkthrough: synthesize a reach, train, push the robot
// mid-motion and watch the coupled system recover.

#include <iostream>

#include "cdmp/cdmp.hpp"

int main() {
  using namespace cdmp;

  const Demonstration demo = synth_demo(SynthOptions::defaults(DemoKind::kReach));
  const TrainResult trained = train(demo, DmpParameters{});
  const DmpModel& model = trained.fit.model;
  const ReproductionError err = reproduction_error(model, demo);
  std::cout << "rollout rms: " << err.rms_position << " m, " << err.rms_orientation
            << " rad\n";

  Vec6 push;
  push << 5.0, 0.0, 0.0, 0.0, 0.0, 5.0;
  const Gains gains(10.0, 10.0, 10.0, 1000.0, model.tau());
  const EpisodeLog log =
      run_episode(model, gains, {Perturbation::accel_pulse(0.8, 1.1, push)}, 30.0);

  std::cout << "max tau_a / tau: " << max_tau_a(log) / model.tau() << '\n'
            << "converged: " << (converged(log) ? "yes" : "no") << " at t = "
            << convergence_time(log) << " s\n";
  return 0;
}
