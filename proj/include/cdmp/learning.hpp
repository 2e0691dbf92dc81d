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

// Learning DMP forcing weights from a demonstrated pose trajectory.
//
// Pipeline: differentiate_demo -> compute_targets -> fit_weights. The
// regression is locally weighted: every basis function gets an independent
// scalar weighted least-squares fit on the regressor x * scale_i.
#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cdmp/dmp.hpp"
#include "cdmp/quaternion.hpp"

namespace cdmp {

class InvalidAngle : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InvalidDemonstration : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Recorded pose trajectory. Construction validates sampling and flips the
/// sign of any sample whose quaternion is antipodal-ish to its predecessor.
class Demonstration {
 public:
  Demonstration(std::vector<double> t, std::vector<Vec3> y,
                std::vector<Quaternion> q)
      : t_(std::move(t)), y_(std::move(y)), q_(std::move(q)) {
    if (t_.size() < 3) {
      throw InvalidDemonstration("demonstration needs at least 3 samples");
    }
    if (y_.size() != t_.size() || q_.size() != t_.size()) {
      throw InvalidDemonstration("t, y and q must have equal length");
    }
    for (std::size_t k = 1; k < t_.size(); ++k) {
      if (!(t_[k] > t_[k - 1])) {
        throw InvalidDemonstration("time stamps must be strictly increasing");
      }
      if (q_[k].dot(q_[k - 1]) < 0) {
        q_[k] = -q_[k];
        ++resigned_;
      }
    }
  }

  std::size_t size() const { return t_.size(); }
  const std::vector<double>& t() const { return t_; }
  const std::vector<Vec3>& y() const { return y_; }
  const std::vector<Quaternion>& q() const { return q_; }
  double duration() const { return t_.back() - t_.front(); }
  /// Number of samples whose sign was flipped on ingestion.
  int resigned() const { return resigned_; }

 private:
  std::vector<double> t_;
  std::vector<Vec3> y_;
  std::vector<Quaternion> q_;
  int resigned_ = 0;
};

struct DemoDerivatives {
  std::vector<Vec3> y_dot;
  std::vector<Vec3> y_ddot;
  std::vector<Vec3> omega;
  std::vector<Vec3> omega_dot;
  /// Set when a sampling interval deviates more than 10% from the mean.
  bool non_uniform_sampling = false;
};

struct DifferentiateOptions {
  /// First-order low-pass cutoff applied to the velocity and acceleration
  /// estimates. Zero disables filtering.
  double lowpass_cutoff_hz = 0.0;
  double pole_eps = kDefaultPoleEpsilon;
};

namespace detail {

// Derivative weights of the quadratic through (t0, t1, t2), evaluated at `at`.
struct Stencil {
  std::array<double, 3> d1;
  std::array<double, 3> d2;
};

inline Stencil lagrange3(double t0, double t1, double t2, double at) {
  const double a = (t0 - t1) * (t0 - t2);
  const double b = (t1 - t0) * (t1 - t2);
  const double c = (t2 - t0) * (t2 - t1);
  return {{(2 * at - t1 - t2) / a, (2 * at - t0 - t2) / b,
           (2 * at - t0 - t1) / c},
          {2 / a, 2 / b, 2 / c}};
}

// Index of the first node of the 3-point stencil used at sample k.
inline std::size_t stencil_start(std::size_t k, std::size_t n) {
  if (k == 0) return 0;
  if (k + 1 >= n) return n - 3;
  return k - 1;
}

template <typename V>
std::vector<V> derivative(const std::vector<double>& t,
                          const std::vector<V>& f, bool second) {
  const std::size_t n = t.size();
  std::vector<V> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t s = stencil_start(k, n);
    const Stencil w = lagrange3(t[s], t[s + 1], t[s + 2], t[k]);
    const auto& c = second ? w.d2 : w.d1;
    // The weights sum to zero; differencing against f[s] keeps constants
    // exactly stationary.
    out[k] = c[1] * (f[s + 1] - f[s]) + c[2] * (f[s + 2] - f[s]);
  }
  return out;
}

template <typename V>
void lowpass(const std::vector<double>& t, std::vector<V>& f, double cutoff_hz) {
  if (cutoff_hz <= 0) return;
  const double rc = 1.0 / (2.0 * std::numbers::pi * cutoff_hz);
  for (std::size_t k = 1; k < f.size(); ++k) {
    const double dt = t[k] - t[k - 1];
    const double a = dt / (rc + dt);
    f[k] = f[k - 1] + a * (f[k] - f[k - 1]);
  }
}

}  // namespace detail

/// Velocities and accelerations by 3-point (possibly non-uniform) finite
/// differences: central in the interior, one-sided at the ends. Angular
/// velocity is the world-frame derivative of the rotation vector relative
/// to the stencil's evaluation sample.
inline DemoDerivatives differentiate_demo(const Demonstration& demo,
                                          const DifferentiateOptions& opt = {}) {
  const auto& t = demo.t();
  const std::size_t n = demo.size();
  DemoDerivatives d;

  const double mean_dt = demo.duration() / static_cast<double>(n - 1);
  for (std::size_t k = 1; k < n; ++k) {
    if (std::abs((t[k] - t[k - 1]) - mean_dt) > 0.1 * mean_dt) {
      d.non_uniform_sampling = true;
      break;
    }
  }

  d.y_dot = detail::derivative(t, demo.y(), false);
  if (opt.lowpass_cutoff_hz > 0) {
    detail::lowpass(t, d.y_dot, opt.lowpass_cutoff_hz);
    d.y_ddot = detail::derivative(t, d.y_dot, false);
    detail::lowpass(t, d.y_ddot, opt.lowpass_cutoff_hz);
  } else {
    d.y_ddot = detail::derivative(t, demo.y(), true);
  }

  const auto& q = demo.q();
  d.omega.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t s = detail::stencil_start(k, n);
    const detail::Stencil w = detail::lagrange3(t[s], t[s + 1], t[s + 2], t[k]);
    Vec3 acc = Vec3::Zero();
    for (std::size_t j = 0; j < 3; ++j) {
      if (s + j == k) continue;
      acc += w.d1[j] * quat_diff(q[s + j], q[k], opt.pole_eps);
    }
    d.omega[k] = acc;
  }
  detail::lowpass(t, d.omega, opt.lowpass_cutoff_hz);
  d.omega_dot = detail::derivative(t, d.omega, false);
  detail::lowpass(t, d.omega_dot, opt.lowpass_cutoff_hz);
  return d;
}

struct RegressionTargets {
  std::vector<double> x;
  std::vector<Vec6> f_target;
  /// (g - y_0, d(q_g conj(q_0))).
  Vec6 scale = Vec6::Zero();
};

struct DmpParameters {
  double alpha_z = 25.0;
  double alpha_x = 1.0;
  int n_basis = 25;
};

/// Forcing values that make the DMP (with tau_a fixed at tau) reproduce the
/// demonstration exactly. The goal pose is the last sample.
inline RegressionTargets compute_targets(const Demonstration& demo,
                                         const DemoDerivatives& der,
                                         const DmpParameters& p, double tau,
                                         double pole_eps = kDefaultPoleEpsilon) {
  if (!(tau > 0)) throw std::invalid_argument("tau must be > 0");
  const double az = p.alpha_z;
  const double bz = p.alpha_z / 4.0;
  const Vec3& g = demo.y().back();
  const Quaternion& qg = demo.q().back();
  RegressionTargets out;
  out.scale.head<3>() = g - demo.y().front();
  out.scale.tail<3>() = quat_diff(qg, demo.q().front(), pole_eps);
  const std::size_t n = demo.size();
  out.x.resize(n);
  out.f_target.resize(n);
  const double t0 = demo.t().front();
  for (std::size_t k = 0; k < n; ++k) {
    out.x[k] = std::exp(-p.alpha_x * (demo.t()[k] - t0) / tau);
    const Vec3 d_qg = quat_diff(demo.q()[k], qg, pole_eps);
    Vec6 f;
    f.head<3>() = tau * tau * der.y_ddot[k] -
                  az * (bz * (g - demo.y()[k]) - tau * der.y_dot[k]);
    f.tail<3>() = tau * tau * der.omega_dot[k] -
                  az * (bz * (-d_qg) - tau * der.omega[k]);
    out.f_target[k] = f;
  }
  return out;
}

struct FitResult {
  DmpModel model;
  /// Dimensions skipped because their scale is degenerate.
  std::vector<int> skipped_dimensions;
  /// (dimension, basis) pairs whose normal equation was ill-conditioned.
  std::vector<std::pair<int, int>> ill_conditioned;
};

/// Locally weighted regression of every basis weight:
/// w_ij = sum_k Psi_ij(x_k) s_k f_ik / sum_k Psi_ij(x_k) s_k^2, s_k = x_k scale_i.
inline FitResult fit_weights(const RegressionTargets& targets,
                             const DmpModel& skeleton) {
  const int nb = skeleton.n_basis();
  BasisMatrix w = BasisMatrix::Zero(kPoseDims, nb);
  std::vector<int> skipped;
  std::vector<std::pair<int, int>> ill;
  for (int i = 0; i < kPoseDims; ++i) {
    if (std::abs(targets.scale[i]) < kDegenerateScale) {
      skipped.push_back(i);
      continue;
    }
    Eigen::VectorXd num = Eigen::VectorXd::Zero(nb);
    Eigen::VectorXd den = Eigen::VectorXd::Zero(nb);
    for (std::size_t k = 0; k < targets.x.size(); ++k) {
      const Eigen::VectorXd psi = basis_activations(skeleton, targets.x[k], i);
      const double s = targets.x[k] * targets.scale[i];
      num += psi * (s * targets.f_target[k][i]);
      den += psi * (s * s);
    }
    for (int j = 0; j < nb; ++j) {
      if (den[j] < 1e-12) {
        ill.emplace_back(i, j);
        continue;
      }
      w(i, j) = num[j] / den[j];
    }
  }
  return {skeleton.with_weights(w), std::move(skipped), std::move(ill)};
}

/// RMS of target minus reproduced forcing, per dimension.
inline Vec6 forcing_residual(const DmpModel& m, const RegressionTargets& t) {
  Vec6 acc = Vec6::Zero();
  for (std::size_t k = 0; k < t.x.size(); ++k) {
    acc += (t.f_target[k] - forcing_term(m, t.x[k])).cwiseAbs2();
  }
  return (acc / static_cast<double>(t.x.size())).cwiseSqrt();
}

struct ReproductionError {
  double rms_position = 0.0;
  double rms_orientation = 0.0;
};

/// Unperturbed rollout at the demonstration's own time stamps, compared
/// sample by sample.
inline ReproductionError reproduction_error(
    const DmpModel& m, const Demonstration& demo,
    Integrator integrator = Integrator::kSemiImplicitEuler) {
  CoupledState s = initial_state(m, m.tau());
  double pos = 0.0;
  double ori = 0.0;
  for (std::size_t k = 0; k < demo.size(); ++k) {
    if (k > 0) {
      s = step_coupled(m, s, m.tau(), demo.t()[k] - demo.t()[k - 1], integrator);
    }
    pos += (s.y_c - demo.y()[k]).squaredNorm();
    ori += quat_diff(s.q_c, demo.q()[k], m.pole_eps()).squaredNorm();
  }
  const double n = static_cast<double>(demo.size());
  return {std::sqrt(pos / n), std::sqrt(ori / n)};
}

struct TrainResult {
  FitResult fit;
  RegressionTargets targets;
  Vec6 residual;
  bool non_uniform_sampling = false;
};

/// Full pipeline with tau set to the demonstration duration and basis
/// centers spread over that duration.
inline TrainResult train(const Demonstration& demo, const DmpParameters& p,
                         const DifferentiateOptions& opt = {}) {
  const double tau = demo.duration();
  const DemoDerivatives der = differentiate_demo(demo, opt);
  RegressionTargets targets = compute_targets(demo, der, p, tau, opt.pole_eps);
  DmpModel::Fields f;
  {
    const BasisPlacement b = place_basis(p.n_basis, p.alpha_x, tau, tau);
    f.alpha_z = p.alpha_z;
    f.alpha_x = p.alpha_x;
    f.tau = tau;
    f.centers = b.centers.transpose().replicate(kPoseDims, 1);
    f.widths = b.widths.transpose().replicate(kPoseDims, 1);
    f.weights = BasisMatrix::Zero(kPoseDims, p.n_basis);
    f.start_position = demo.y().front();
    f.start_orientation = demo.q().front();
    f.goal_position = demo.y().back();
    f.goal_orientation = demo.q().back();
    f.pole_eps = opt.pole_eps;
  }
  FitResult fit = fit_weights(targets, DmpModel(std::move(f)));
  const Vec6 residual = forcing_residual(fit.model, targets);
  return {std::move(fit), std::move(targets), residual, der.non_uniform_sampling};
}

// Synthetic demonstrations --------------------------------------------------

enum class DemoKind { kReach, kHandoverGtPi };

struct SynthOptions {
  DemoKind kind = DemoKind::kReach;
  double duration = 4.0;
  double rate_hz = 250.0;
  Vec3 start_position = Vec3::Zero();
  Vec3 goal_position = Vec3::Zero();
  Quaternion start_orientation;
  Vec3 axis = Vec3::UnitZ();
  double angle = 0.0;

  /// Defaults for a kind: a short reach with a modest reorientation, or a
  /// handover whose end effector turns 1.5 pi about a fixed axis.
  static SynthOptions defaults(DemoKind kind) {
    SynthOptions o;
    o.kind = kind;
    if (kind == DemoKind::kReach) {
      o.duration = 3.0;
      o.start_position = Vec3(0.30, -0.20, 0.20);
      o.goal_position = Vec3(0.45, 0.10, 0.35);
      o.start_orientation = from_axis_angle<double>(Vec3(0, 1, 0), 0.3);
      o.axis = Vec3(1, 2, 3);
      o.angle = 0.6;
    } else {
      o.duration = 4.0;
      o.start_position = Vec3(0.35, -0.25, 0.25);
      o.goal_position = Vec3(0.40, 0.25, 0.30);
      o.start_orientation = Quaternion::identity();
      o.axis = Vec3(0.2, 0.3, 1.0);
      o.angle = 1.5 * std::numbers::pi;
    }
    return o;
  }
};

/// Minimum-jerk profile s(u) = 10u^3 - 15u^4 + 6u^5 on [0, 1].
inline double minimum_jerk(double u) {
  return u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
}

/// Samples at exactly rate_hz: round(duration * rate) samples, with the
/// motion profile completing on the last one.
inline Demonstration synth_demo(const SynthOptions& o) {
  if (!(o.duration > 0) || !(o.rate_hz > 0)) {
    throw std::invalid_argument("duration and rate must be positive");
  }
  const double two_pi = 2.0 * std::numbers::pi;
  if (!(o.angle > 0 && o.angle < two_pi)) {
    throw InvalidAngle("rotation angle must lie in (0, 2*pi)");
  }
  if (o.kind == DemoKind::kHandoverGtPi && !(o.angle > std::numbers::pi)) {
    throw InvalidAngle("handover_gt_pi needs a rotation angle in (pi, 2*pi)");
  }
  if (!(o.axis.norm() > 0)) throw std::invalid_argument("axis must be non-zero");
  const auto n = static_cast<std::size_t>(std::llround(o.duration * o.rate_hz));
  if (n < 3) throw std::invalid_argument("demonstration would have < 3 samples");
  const double t_end = static_cast<double>(n - 1) / o.rate_hz;

  std::vector<double> t(n);
  std::vector<Vec3> y(n);
  std::vector<Quaternion> q(n);
  for (std::size_t k = 0; k < n; ++k) {
    t[k] = static_cast<double>(k) / o.rate_hz;
    const double s = minimum_jerk(t[k] / t_end);
    y[k] = o.start_position + s * (o.goal_position - o.start_position);
    q[k] = multiply(from_axis_angle<double>(o.axis, s * o.angle),
                    o.start_orientation);
  }
  y.back() = o.goal_position;
  return Demonstration(std::move(t), std::move(y), std::move(q));
}

}  // namespace cdmp
