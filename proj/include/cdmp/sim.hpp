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

// Closed-loop episodes: coupled DMP -> PD + feedforward -> double-integrator
// robot, with the filtered tracking error feeding back into tau_a.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "cdmp/controller.hpp"
#include "cdmp/dmp.hpp"
#include "cdmp/quaternion.hpp"

namespace cdmp {

inline constexpr double kDefaultDt = 1.0 / 250.0;

struct RobotState {
  Vec3 y_a = Vec3::Zero();
  Vec3 y_a_dot = Vec3::Zero();
  Quaternion q_a;
  Vec3 omega_a = Vec3::Zero();
};

struct Perturbation {
  enum class Kind { kDisplaceRelease, kAccelPulse };

  Kind kind = Kind::kAccelPulse;
  double t_start = 0.0;
  double t_end = 0.0;
  Vec3 delta_y = Vec3::Zero();
  /// Rotation vector applied on the world side of q_a.
  Vec3 delta_angle_axis = Vec3::Zero();
  /// Position (0..2) and angular (3..5) acceleration added to the reference.
  Vec6 accel = Vec6::Zero();

  static Perturbation displace_release(double t, const Vec3& dy,
                                       const Vec3& drot) {
    Perturbation p;
    p.kind = Kind::kDisplaceRelease;
    p.t_start = t;
    p.t_end = t;
    p.delta_y = dy;
    p.delta_angle_axis = drot;
    return p;
  }

  static Perturbation accel_pulse(double t_start, double t_end,
                                  const Vec6& accel) {
    if (!(t_start < t_end)) {
      throw std::invalid_argument("accel_pulse needs t_start < t_end");
    }
    Perturbation p;
    p.kind = Kind::kAccelPulse;
    p.t_start = t_start;
    p.t_end = t_end;
    p.accel = accel;
    return p;
  }

  /// Instant after which the perturbation no longer acts.
  double end_time() const {
    return kind == Kind::kDisplaceRelease ? t_start : t_end;
  }
};

/// Semi-implicit Euler double integrator: velocities first, then pose with
/// the new velocities.
inline RobotState robot_step(const RobotState& r, const Vec3& y_ddot_r,
                             const Vec3& omega_dot_r, const Vec6& disturbance,
                             double dt) {
  if (!(dt > 0)) throw std::invalid_argument("dt must be > 0");
  RobotState out;
  out.y_a_dot = r.y_a_dot + dt * (y_ddot_r + disturbance.head<3>());
  out.y_a = r.y_a + dt * out.y_a_dot;
  out.omega_a = r.omega_a + dt * (omega_dot_r + disturbance.tail<3>());
  out.q_a = integrate_orientation(r.q_a, out.omega_a, dt);
  return out;
}

/// Names of the ten blocks of the closed-loop state, in stacking order.
inline constexpr std::array<const char*, 10> kXiBlockNames = {
    "ypos", "yvel", "dac", "womega", "e", "x", "ycg", "z", "dcg", "wz"};

/// Closed-loop state
///   (y_a - y_c, y_a' - y_c', d_ac, omega_a - omega_c, e, x, y_c - g, z, d_cg, w_z).
struct XiVector {
  Vec3 y_pos;
  Vec3 y_vel;
  Vec3 d_ac;
  Vec3 omega_err;
  Vec6 e;
  double x;
  Vec3 y_cg;
  Vec3 z;
  Vec3 d_cg;
  Vec3 omega_z;

  static constexpr int kSize = 31;

  Eigen::Matrix<double, kSize, 1> stacked() const {
    Eigen::Matrix<double, kSize, 1> v;
    v << y_pos, y_vel, d_ac, omega_err, e, x, y_cg, z, d_cg, omega_z;
    return v;
  }

  /// Block 2-norms in kXiBlockNames order.
  std::array<double, 10> norms() const {
    return {y_pos.norm(), y_vel.norm(), d_ac.norm(), omega_err.norm(),
            e.norm(),     std::abs(x),  y_cg.norm(), z.norm(),
            d_cg.norm(),  omega_z.norm()};
  }

  double norm() const { return stacked().norm(); }
};

inline XiVector xi_vector(const CoupledState& c, const RobotState& r,
                          const ErrorFilterState& f, const DmpModel& m,
                          double tau_a) {
  XiVector xi;
  xi.y_pos = r.y_a - c.y_c;
  xi.y_vel = r.y_a_dot - c.z / tau_a;
  xi.d_ac = quat_diff(r.q_a, c.q_c, m.pole_eps());
  xi.omega_err = r.omega_a - c.omega_z / tau_a;
  xi.e = f.stacked();
  xi.x = c.x;
  xi.y_cg = c.y_c - m.goal_position();
  xi.z = c.z;
  xi.d_cg = quat_diff(c.q_c, m.goal_orientation(), m.pole_eps());
  xi.omega_z = c.omega_z;
  return xi;
}

struct EpisodeRecord {
  double t;
  double tau_a;
  XiVector xi;
  Quaternion q_c;
  Quaternion q_a;
};

struct EpisodeLog {
  double tau = 0.0;
  double dt = 0.0;
  /// End of the last perturbation (displacement instant or pulse end), or
  /// the start time when there are none.
  double last_perturbation_end = 0.0;
  std::vector<EpisodeRecord> records;
  bool aborted = false;
  std::string error;
};

struct EpisodeStart {
  CoupledState coupled;
  RobotState robot;
  ErrorFilterState filter;

  /// Robot at rest on the DMP start pose, phase 1, empty filter.
  static EpisodeStart at_rest(const DmpModel& m) {
    EpisodeStart s;
    s.coupled = initial_state(m, m.tau());
    s.robot.y_a = s.coupled.y_c;
    s.robot.q_a = s.coupled.q_c;
    return s;
  }

  /// DMP already settled on the goal, as after a long previous execution:
  /// phase exp(-alpha_x * settle_periods).
  static EpisodeStart converged(const DmpModel& m, double settle_periods) {
    EpisodeStart s;
    s.coupled.y_c = m.goal_position();
    s.coupled.q_c = m.goal_orientation();
    s.coupled.x = std::exp(-m.alpha_x() * settle_periods);
    s.robot.y_a = s.coupled.y_c;
    s.robot.q_a = s.coupled.q_c;
    return s;
  }
};

/// Runs the cascade for round(T / dt) steps and logs the state at every
/// control instant, including t = 0 and t = T. Each step: apply due
/// displacements, compute tau_a and its rate from the filter, log, evaluate
/// DMP feedforward and the PD law, then advance robot, DMP and filter.
/// A DomainError ends the episode early with `aborted` set.
inline EpisodeLog run_episode(const DmpModel& m, const Gains& g,
                              const std::vector<Perturbation>& perturbations,
                              double horizon, double dt,
                              const EpisodeStart& start) {
  if (!(dt > 0) || !(horizon > 0)) {
    throw std::invalid_argument("horizon and dt must be positive");
  }
  const long n_steps = std::lround(horizon / dt);
  EpisodeLog log;
  log.tau = g.tau();
  log.dt = dt;
  for (const auto& p : perturbations) {
    log.last_perturbation_end = std::max(log.last_perturbation_end, p.end_time());
  }
  log.records.reserve(static_cast<std::size_t>(n_steps) + 1);

  CoupledState s = start.coupled;
  RobotState r = start.robot;
  ErrorFilterState f = start.filter;
  std::vector<bool> applied(perturbations.size(), false);
  const double half = 0.5 * dt;

  for (long k = 0; k <= n_steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    try {
      for (std::size_t i = 0; i < perturbations.size(); ++i) {
        const auto& p = perturbations[i];
        if (p.kind == Perturbation::Kind::kDisplaceRelease && !applied[i] &&
            t + half >= p.t_start) {
          r.y_a += p.delta_y;
          r.q_a = multiply(exp_map<double>(0.5 * p.delta_angle_axis), r.q_a);
          applied[i] = true;
        }
      }

      const Vec3 d_ac = quat_diff(r.q_a, s.q_c, m.pole_eps());
      const Vec6 e = f.stacked();
      const double tau_a = adaptive_tau(g, e);
      log.records.push_back({t, tau_a, xi_vector(s, r, f, m, tau_a), s.q_c, r.q_a});
      if (k == n_steps) break;

      const Vec6 e_dot = error_filter_rate(f, r.y_a, s.y_c, d_ac, g.alpha_e());
      const double tau_a_dot = adaptive_tau_rate(g, e, e_dot);
      const Feedforward ff = coupled_feedforward(m, s, tau_a, tau_a_dot);
      const ReferenceAcceleration ref =
          pd_feedforward(g, r.y_a, r.y_a_dot, s.y_c, s.z / tau_a, ff.y_c_ddot,
                         d_ac, r.omega_a, s.omega_z / tau_a, ff.omega_c_dot);

      Vec6 disturbance = Vec6::Zero();
      for (const auto& p : perturbations) {
        if (p.kind == Perturbation::Kind::kAccelPulse && t + half >= p.t_start &&
            t + half < p.t_end) {
          disturbance += p.accel;
        }
      }

      const RobotState r_next =
          robot_step(r, ref.y_ddot, ref.omega_dot, disturbance, dt);
      const CoupledState s_next = step_coupled(m, s, tau_a, dt);
      f = error_filter_step(f, r.y_a, s.y_c, d_ac, g.alpha_e(), dt);
      r = r_next;
      s = s_next;
    } catch (const DomainError& err) {
      log.aborted = true;
      log.error = "step " + std::to_string(k) + " (t=" + std::to_string(t) +
                  "): " + err.what();
      break;
    }
  }
  return log;
}

inline EpisodeLog run_episode(const DmpModel& m, const Gains& g,
                              const std::vector<Perturbation>& perturbations,
                              double horizon, double dt = kDefaultDt) {
  return run_episode(m, g, perturbations, horizon, dt, EpisodeStart::at_rest(m));
}

// Episode analysis ----------------------------------------------------------

/// Every block norm of the final record is below `threshold`.
inline bool converged(const EpisodeLog& log, double threshold = 1e-3) {
  if (log.records.empty() || log.aborted) return false;
  const auto n = log.records.back().xi.norms();
  return std::all_of(n.begin(), n.end(),
                     [&](double v) { return v < threshold; });
}

/// First time after which every block norm stays below `threshold`;
/// +inf if that never happens.
inline double convergence_time(const EpisodeLog& log, double threshold = 1e-3) {
  double t_conv = std::numeric_limits<double>::infinity();
  for (auto it = log.records.rbegin(); it != log.records.rend(); ++it) {
    const auto n = it->xi.norms();
    if (!std::all_of(n.begin(), n.end(),
                     [&](double v) { return v < threshold; })) {
      break;
    }
    t_conv = it->t;
  }
  return t_conv;
}

struct DecayFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::size_t samples = 0;
};

/// Least-squares line through (t_i, log v_i), stopping at the first sample
/// whose value falls below `floor`.
inline DecayFit fit_log_decay(const std::vector<double>& t,
                              const std::vector<double>& v, double floor = 1e-12) {
  std::vector<double> ts;
  std::vector<double> ls;
  for (std::size_t i = 0; i < t.size() && i < v.size(); ++i) {
    if (v[i] < floor) break;
    ts.push_back(t[i]);
    ls.push_back(std::log(v[i]));
  }
  DecayFit fit;
  fit.samples = ts.size();
  if (ts.size() < 2) return fit;
  const double k = static_cast<double>(ts.size());
  double mt = 0, ml = 0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    mt += ts[i];
    ml += ls[i];
  }
  mt /= k;
  ml /= k;
  double stt = 0, stl = 0, sll = 0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    stt += (ts[i] - mt) * (ts[i] - mt);
    stl += (ts[i] - mt) * (ls[i] - ml);
    sll += (ls[i] - ml) * (ls[i] - ml);
  }
  fit.slope = stl / stt;
  fit.intercept = ml - fit.slope * mt;
  fit.r_squared = sll > 0 ? (stl * stl) / (stt * sll) : 1.0;
  return fit;
}

/// Same fit on ||xi|| for records with t in [t_from, t_to].
inline DecayFit fit_log_decay(const EpisodeLog& log, double t_from, double t_to,
                              double floor = 1e-12) {
  std::vector<double> ts;
  std::vector<double> ns;
  for (const auto& rec : log.records) {
    if (rec.t + 1e-12 < t_from) continue;
    if (rec.t > t_to + 1e-12) break;
    ts.push_back(rec.t);
    ns.push_back(rec.xi.norm());
  }
  return fit_log_decay(ts, ns, floor);
}

/// Decay fit over [last perturbation end, end of log].
inline DecayFit post_perturbation_decay(const EpisodeLog& log) {
  if (log.records.empty()) return {};
  return fit_log_decay(log, log.last_perturbation_end, log.records.back().t);
}

inline double max_tau_a(const EpisodeLog& log) {
  double m = 0.0;
  for (const auto& r : log.records) m = std::max(m, r.tau_a);
  return m;
}

/// Smallest dot product between successive logged q_c samples.
inline double min_successive_dot(const EpisodeLog& log) {
  double m = 1.0;
  for (std::size_t k = 1; k < log.records.size(); ++k) {
    m = std::min(m, log.records[k].q_c.dot(log.records[k - 1].q_c));
  }
  return m;
}

/// The scalar part of q_c changes sign somewhere along the episode.
inline bool equator_crossed(const EpisodeLog& log) {
  if (log.records.empty()) return false;
  const bool first = log.records.front().q_c.w() >= 0;
  for (const auto& r : log.records) {
    if ((r.q_c.w() >= 0) != first) return true;
  }
  return false;
}

}  // namespace cdmp
