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

// Temporal coupling and pose tracking.
//
// A first-order filter smooths the pose error between the robot and the
// coupled DMP; its squared norm stretches the DMP time constant
//
//   tau_a = tau (1 + k_c e^T e),
//
// and a critically damped PD law with feedforward drives the robot toward
// the coupled pose.
#pragma once

#include <cmath>
#include <stdexcept>

#include "cdmp/dmp.hpp"
#include "cdmp/quaternion.hpp"

namespace cdmp {

/// Controller gains. k_p is derived as k_v^2 / 4 so the loop is critically
/// damped; orientation may use its own k_v but defaults to the shared one.
class Gains {
 public:
  Gains(double k_v, double alpha_e, double k_c, double tau)
      : Gains(k_v, k_v, alpha_e, k_c, tau) {}

  Gains(double k_v, double k_v_orientation, double alpha_e, double k_c,
        double tau)
      : k_v_(k_v), k_v_o_(k_v_orientation), alpha_e_(alpha_e), k_c_(k_c),
        tau_(tau) {
    if (!(k_v > 0) || !(k_v_orientation > 0) || !(alpha_e > 0) ||
        !(k_c > 0) || !(tau > 0)) {
      throw std::invalid_argument("all controller gains must be positive");
    }
  }

  double k_v() const { return k_v_; }
  double k_p() const { return k_v_ * k_v_ / 4.0; }
  double k_v_orientation() const { return k_v_o_; }
  double k_p_orientation() const { return k_v_o_ * k_v_o_ / 4.0; }
  double alpha_e() const { return alpha_e_; }
  double k_c() const { return k_c_; }
  double tau() const { return tau_; }

  Gains with_tau(double tau) const {
    return Gains(k_v_, k_v_o_, alpha_e_, k_c_, tau);
  }

 private:
  double k_v_;
  double k_v_o_;
  double alpha_e_;
  double k_c_;
  double tau_;
};

struct ErrorFilterState {
  Vec3 e_p = Vec3::Zero();
  Vec3 e_o = Vec3::Zero();

  Vec6 stacked() const {
    Vec6 e;
    e << e_p, e_o;
    return e;
  }
};

/// Rate of the filtered error, alpha_e (u - e) with u = (y_a - y_c, d_ac).
inline Vec6 error_filter_rate(const ErrorFilterState& s, const Vec3& y_a,
                              const Vec3& y_c, const Vec3& d_ac,
                              double alpha_e) {
  Vec6 u;
  u << y_a - y_c, d_ac;
  return alpha_e * (u - s.stacked());
}

/// Exact zero-order-hold step of the error filter: e+ = u + (e - u) exp(-alpha_e dt).
inline ErrorFilterState error_filter_step(const ErrorFilterState& s,
                                          const Vec3& y_a, const Vec3& y_c,
                                          const Vec3& d_ac, double alpha_e,
                                          double dt) {
  if (!(dt > 0)) throw std::invalid_argument("dt must be > 0");
  const double decay = std::exp(-alpha_e * dt);
  const Vec3 u_p = y_a - y_c;
  return {u_p + (s.e_p - u_p) * decay, d_ac + (s.e_o - d_ac) * decay};
}

inline double adaptive_tau(const Gains& g, const Vec6& e) {
  return g.tau() * (1.0 + g.k_c() * e.squaredNorm());
}

/// d(tau_a)/dt = 2 tau k_c e^T e_dot.
inline double adaptive_tau_rate(const Gains& g, const Vec6& e,
                                const Vec6& e_dot) {
  return 2.0 * g.tau() * g.k_c() * e.dot(e_dot);
}

struct ReferenceAcceleration {
  Vec3 y_ddot;
  Vec3 omega_dot;
};

/// PD + feedforward pose law:
///   y_r''   = k_p (y_c - y_a) + k_v (y_c' - y_a') + y_c''
///   omega_r' = -k_p d_ac - k_v (omega_a - omega_c) + omega_c'
inline ReferenceAcceleration pd_feedforward(
    const Gains& g, const Vec3& y_a, const Vec3& y_a_dot, const Vec3& y_c,
    const Vec3& y_c_dot, const Vec3& y_c_ddot, const Vec3& d_ac,
    const Vec3& omega_a, const Vec3& omega_c, const Vec3& omega_c_dot) {
  return {g.k_p() * (y_c - y_a) + g.k_v() * (y_c_dot - y_a_dot) + y_c_ddot,
          -g.k_p_orientation() * d_ac -
              g.k_v_orientation() * (omega_a - omega_c) + omega_c_dot};
}

}  // namespace cdmp
