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

// Temporally coupled Cartesian DMP: position and orientation transformation
// systems sharing one canonical phase and one adaptive time parameter tau_a.
//
//   tau_a z'      = alpha_z (beta_z (g - y_c) - z) + f_p(x)
//   tau_a y_c'    = z
//   tau_a w_z'    = alpha_z (beta_z (-d_cg) - w_z) + f_o(x)
//   tau_a omega_c = w_z
//   tau_a x'      = -alpha_x x
//
// Dimensions 0..2 of every 6-vector are position, 3..5 orientation.
#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "cdmp/quaternion.hpp"

namespace cdmp {

inline constexpr int kPoseDims = 6;

using Vec6 = Eigen::Matrix<double, 6, 1>;
using BasisMatrix = Eigen::Matrix<double, kPoseDims, Eigen::Dynamic>;

/// Scaling components below this magnitude switch that dimension's forcing
/// term off.
inline constexpr double kDegenerateScale = 1e-12;

struct BasisPlacement {
  Eigen::VectorXd centers;
  Eigen::VectorXd widths;
};

/// Centers equally spaced in nominal time over [0, t_nominal], mapped
/// through the canonical system: c_j = exp(-alpha_x (j-1)/(N-1) t_nominal/tau).
/// Widths are half the gap to the next center; the last one is copied.
inline BasisPlacement place_basis(int n_basis, double alpha_x, double t_nominal,
                                  double tau) {
  if (n_basis < 1) throw std::invalid_argument("n_basis must be >= 1");
  if (!(alpha_x > 0) || !(tau > 0) || !(t_nominal > 0)) {
    throw std::invalid_argument("alpha_x, tau and t_nominal must be positive");
  }
  BasisPlacement out{Eigen::VectorXd(n_basis), Eigen::VectorXd(n_basis)};
  if (n_basis == 1) {
    out.centers[0] = std::exp(-0.5 * alpha_x * t_nominal / tau);
    out.widths[0] = 1.0;
    return out;
  }
  for (int j = 0; j < n_basis; ++j) {
    const double frac = static_cast<double>(j) / (n_basis - 1);
    out.centers[j] = std::exp(-alpha_x * frac * t_nominal / tau);
  }
  for (int j = 0; j + 1 < n_basis; ++j) {
    out.widths[j] = 0.5 * std::abs(out.centers[j + 1] - out.centers[j]);
  }
  out.widths[n_basis - 1] = out.widths[n_basis - 2];
  return out;
}

/// Immutable DMP parameter set. beta_z is always alpha_z / 4.
class DmpModel {
 public:
  struct Fields {
    double alpha_z = 25.0;
    double alpha_x = 1.0;
    double tau = 1.0;
    BasisMatrix centers;
    BasisMatrix widths;
    BasisMatrix weights;
    Vec3 goal_position = Vec3::Zero();
    Quaternion goal_orientation;
    Vec3 start_position = Vec3::Zero();
    Quaternion start_orientation;
    double pole_eps = kDefaultPoleEpsilon;
  };

  explicit DmpModel(Fields f) : f_(std::move(f)) {
    if (!(f_.alpha_z > 0)) throw std::invalid_argument("alpha_z must be > 0");
    if (!(f_.alpha_x > 0)) throw std::invalid_argument("alpha_x must be > 0");
    if (!(f_.tau > 0)) throw std::invalid_argument("tau must be > 0");
    const auto n = f_.centers.cols();
    if (n < 1 || f_.widths.cols() != n || f_.weights.cols() != n) {
      throw std::invalid_argument(
          "centers, widths and weights must share N_b >= 1 columns");
    }
    if (!(f_.widths.array() > 0).all()) {
      throw std::invalid_argument("basis widths must be > 0");
    }
    for (int i = 0; i < kPoseDims; ++i) {
      for (Eigen::Index j = 0; j + 1 < n; ++j) {
        if (!(f_.centers(i, j + 1) < f_.centers(i, j))) {
          throw std::invalid_argument("basis centers must strictly decrease");
        }
      }
    }
    scale_.head<3>() = f_.goal_position - f_.start_position;
    scale_.tail<3>() =
        quat_diff(f_.goal_orientation, f_.start_orientation, f_.pole_eps);
  }

  /// Zero-weight model with the default basis placement.
  static DmpModel skeleton(double alpha_z, double alpha_x, double tau,
                           int n_basis, double t_nominal, const Vec3& y0,
                           const Quaternion& q0, const Vec3& g,
                           const Quaternion& qg) {
    const BasisPlacement b = place_basis(n_basis, alpha_x, t_nominal, tau);
    Fields f;
    f.alpha_z = alpha_z;
    f.alpha_x = alpha_x;
    f.tau = tau;
    f.centers = b.centers.transpose().replicate(kPoseDims, 1);
    f.widths = b.widths.transpose().replicate(kPoseDims, 1);
    f.weights = BasisMatrix::Zero(kPoseDims, n_basis);
    f.start_position = y0;
    f.start_orientation = q0;
    f.goal_position = g;
    f.goal_orientation = qg;
    return DmpModel(std::move(f));
  }

  DmpModel with_weights(const BasisMatrix& w) const {
    Fields f = f_;
    f.weights = w;
    return DmpModel(std::move(f));
  }

  double alpha_z() const { return f_.alpha_z; }
  double beta_z() const { return f_.alpha_z / 4.0; }
  double alpha_x() const { return f_.alpha_x; }
  double tau() const { return f_.tau; }
  int n_basis() const { return static_cast<int>(f_.centers.cols()); }
  const BasisMatrix& centers() const { return f_.centers; }
  const BasisMatrix& widths() const { return f_.widths; }
  const BasisMatrix& weights() const { return f_.weights; }
  const Vec3& goal_position() const { return f_.goal_position; }
  const Quaternion& goal_orientation() const { return f_.goal_orientation; }
  const Vec3& start_position() const { return f_.start_position; }
  const Quaternion& start_orientation() const { return f_.start_orientation; }
  double pole_eps() const { return f_.pole_eps; }
  const Fields& fields() const { return f_; }

  /// Per-dimension forcing scale: (g - y_0, d(q_g conj(q_0))).
  const Vec6& scale() const { return scale_; }

  bool degenerate(int i) const { return std::abs(scale_[i]) < kDegenerateScale; }

  std::vector<int> degenerate_dimensions() const {
    std::vector<int> out;
    for (int i = 0; i < kPoseDims; ++i) {
      if (degenerate(i)) out.push_back(i);
    }
    return out;
  }

  bool operator==(const DmpModel& o) const {
    return f_.alpha_z == o.f_.alpha_z && f_.alpha_x == o.f_.alpha_x &&
           f_.tau == o.f_.tau && f_.centers == o.f_.centers &&
           f_.widths == o.f_.widths && f_.weights == o.f_.weights &&
           f_.goal_position == o.f_.goal_position &&
           f_.goal_orientation == o.f_.goal_orientation &&
           f_.start_position == o.f_.start_position &&
           f_.start_orientation == o.f_.start_orientation &&
           f_.pole_eps == o.f_.pole_eps;
  }

 private:
  Fields f_;
  Vec6 scale_;
};

/// DMP-side state. omega_c is not stored; it is omega_z / tau_a.
struct CoupledState {
  Vec3 y_c = Vec3::Zero();
  Vec3 z = Vec3::Zero();
  Quaternion q_c;
  Vec3 omega_z = Vec3::Zero();
  double x = 1.0;
};

struct CoupledDerivatives {
  Vec3 y_c_dot;
  Vec3 z_dot;
  Vec3 omega_c;
  Vec3 omega_z_dot;
  double x_dot;
};

struct Feedforward {
  Vec3 y_c_ddot;
  Vec3 omega_c_dot;
};

enum class Integrator { kSemiImplicitEuler, kRungeKutta4 };

/// Start-of-motion state: pose at (y_0, q_0), phase 1. The velocity
/// arguments set z = tau_a y_c' and w_z = tau_a omega_c.
inline CoupledState initial_state(const DmpModel& m, double tau_a,
                                  const Vec3& y_dot = Vec3::Zero(),
                                  const Vec3& omega = Vec3::Zero()) {
  CoupledState s;
  s.y_c = m.start_position();
  s.q_c = m.start_orientation();
  s.z = tau_a * y_dot;
  s.omega_z = tau_a * omega;
  s.x = 1.0;
  return s;
}

/// Gaussian activations Psi_{i,j}(x) for dimension i.
inline Eigen::VectorXd basis_activations(const DmpModel& m, double x, int i) {
  const auto c = m.centers().row(i).transpose().array();
  const auto s = m.widths().row(i).transpose().array();
  return (-(x - c).square() / (2.0 * s.square())).exp().matrix();
}

namespace detail {

// Normalized mixture sum_j Psi_j w_j / sum_j Psi_j, evaluated with the
// exponents shifted by their maximum. Far from every center all Psi_j
// underflow, but the ratio stays well defined.
inline double basis_mixture(const DmpModel& m, double x, int i) {
  const Eigen::ArrayXd c = m.centers().row(i).transpose().array();
  const Eigen::ArrayXd s = m.widths().row(i).transpose().array();
  Eigen::ArrayXd a = -(x - c).square() / (2.0 * s.square());
  a = (a - a.maxCoeff()).exp();
  return (a * m.weights().row(i).transpose().array()).sum() / a.sum();
}

}  // namespace detail

/// Forcing term for all six dimensions. Degenerate dimensions return 0.
inline Vec6 forcing_term(const DmpModel& m, double x) {
  Vec6 f = Vec6::Zero();
  for (int i = 0; i < kPoseDims; ++i) {
    if (m.degenerate(i)) continue;
    f[i] = detail::basis_mixture(m, x, i) * x * m.scale()[i];
  }
  return f;
}

inline CoupledDerivatives dmp_derivatives(const DmpModel& m,
                                          const CoupledState& s, double tau_a) {
  if (!(tau_a > 0)) throw std::invalid_argument("tau_a must be > 0");
  const Vec3 d_cg = quat_diff(s.q_c, m.goal_orientation(), m.pole_eps());
  const Vec6 f = forcing_term(m, s.x);
  const double az = m.alpha_z();
  const double bz = m.beta_z();
  CoupledDerivatives d;
  d.z_dot = (az * (bz * (m.goal_position() - s.y_c) - s.z) + f.head<3>()) / tau_a;
  d.y_c_dot = s.z / tau_a;
  d.omega_z_dot = (az * (bz * (-d_cg) - s.omega_z) + f.tail<3>()) / tau_a;
  d.omega_c = s.omega_z / tau_a;
  d.x_dot = -(m.alpha_x() * s.x) / tau_a;
  return d;
}

/// Accelerations of the coupled pose, by the quotient rule on
/// y_c' = z / tau_a and omega_c = w_z / tau_a.
inline Feedforward coupled_feedforward(const DmpModel& m, const CoupledState& s,
                                       double tau_a, double tau_a_dot) {
  const CoupledDerivatives d = dmp_derivatives(m, s, tau_a);
  const double k = tau_a_dot / (tau_a * tau_a);
  return {d.z_dot / tau_a - s.z * k, d.omega_z_dot / tau_a - s.omega_z * k};
}

namespace detail {

// Inverse left Jacobian of SO(3) at rotation vector phi. Maps a world-frame
// angular velocity to the rate of phi in q = exp(phi/2) q_ref.
inline Eigen::Matrix3d inverse_left_jacobian(const Vec3& phi) {
  const double th = phi.norm();
  Eigen::Matrix3d hat;
  hat << 0, -phi.z(), phi.y(), phi.z(), 0, -phi.x(), -phi.y(), phi.x(), 0;
  double c2;
  if (th < 1e-4) {
    c2 = 1.0 / 12.0 + th * th / 720.0;
  } else {
    const double half = 0.5 * th;
    c2 = (1.0 - half * std::cos(half) / std::sin(half)) / (th * th);
  }
  return Eigen::Matrix3d::Identity() - 0.5 * hat + c2 * hat * hat;
}

struct FlatRates {
  Vec3 y, z, phi, w;
};

inline FlatRates flat_rates(const DmpModel& m, const CoupledState& base,
                            const Vec3& y, const Vec3& z, const Vec3& phi,
                            const Vec3& w, double x, double tau_a) {
  CoupledState s;
  s.y_c = y;
  s.z = z;
  s.q_c = multiply(exp_map<double>(0.5 * phi), base.q_c);
  s.omega_z = w;
  s.x = x;
  const CoupledDerivatives d = dmp_derivatives(m, s, tau_a);
  return {d.y_c_dot, d.z_dot, inverse_left_jacobian(phi) * d.omega_c,
          d.omega_z_dot};
}

}  // namespace detail

/// One fixed step of length dt at constant tau_a. The phase always advances
/// by its exact exponential decay.
inline CoupledState step_coupled(
    const DmpModel& m, const CoupledState& s, double tau_a, double dt,
    Integrator integrator = Integrator::kSemiImplicitEuler) {
  if (!(dt > 0)) throw std::invalid_argument("dt must be > 0");
  if (!(tau_a > 0)) throw std::invalid_argument("tau_a must be > 0");
  const double decay_rate = m.alpha_x() / tau_a;
  CoupledState out;
  if (integrator == Integrator::kSemiImplicitEuler) {
    const CoupledDerivatives d = dmp_derivatives(m, s, tau_a);
    out.z = s.z + dt * d.z_dot;
    out.y_c = s.y_c + dt * (out.z / tau_a);
    out.omega_z = s.omega_z + dt * d.omega_z_dot;
    out.q_c = integrate_orientation(s.q_c, Vec3(out.omega_z / tau_a), dt);
    out.x = s.x * std::exp(-decay_rate * dt);
    return out;
  }

  // Classical RK4 on (y, z, phi, w_z) with the orientation expressed in a
  // rotation-vector chart centered at the start-of-step quaternion.
  const auto x_at = [&](double h) { return s.x * std::exp(-decay_rate * h); };
  const Vec3 zero = Vec3::Zero();
  const auto k1 = detail::flat_rates(m, s, s.y_c, s.z, zero, s.omega_z, s.x, tau_a);
  const double h2 = 0.5 * dt;
  const auto k2 = detail::flat_rates(m, s, s.y_c + h2 * k1.y, s.z + h2 * k1.z,
                                     h2 * k1.phi, s.omega_z + h2 * k1.w,
                                     x_at(h2), tau_a);
  const auto k3 = detail::flat_rates(m, s, s.y_c + h2 * k2.y, s.z + h2 * k2.z,
                                     h2 * k2.phi, s.omega_z + h2 * k2.w,
                                     x_at(h2), tau_a);
  const auto k4 = detail::flat_rates(m, s, s.y_c + dt * k3.y, s.z + dt * k3.z,
                                     dt * k3.phi, s.omega_z + dt * k3.w,
                                     x_at(dt), tau_a);
  const double w6 = dt / 6.0;
  out.y_c = s.y_c + w6 * (k1.y + 2 * k2.y + 2 * k3.y + k4.y);
  out.z = s.z + w6 * (k1.z + 2 * k2.z + 2 * k3.z + k4.z);
  out.omega_z = s.omega_z + w6 * (k1.w + 2 * k2.w + 2 * k3.w + k4.w);
  const Vec3 phi = w6 * (k1.phi + 2 * k2.phi + 2 * k3.phi + k4.phi);
  out.q_c = multiply(exp_map<double>(0.5 * phi), s.q_c);
  out.x = x_at(dt);
  return out;
}

/// Uncoupled rollout (tau_a fixed at tau) from the model's start pose.
/// Returns n_steps + 1 states including the initial one.
inline std::vector<CoupledState> rollout(
    const DmpModel& m, double dt, int n_steps,
    Integrator integrator = Integrator::kSemiImplicitEuler) {
  std::vector<CoupledState> out;
  out.reserve(static_cast<std::size_t>(n_steps) + 1);
  out.push_back(initial_state(m, m.tau()));
  for (int k = 0; k < n_steps; ++k) {
    out.push_back(step_coupled(m, out.back(), m.tau(), dt, integrator));
  }
  return out;
}

}  // namespace cdmp
