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

// Unit quaternion algebra on S^3 with the point (-1,0,0,0) removed.
//
// Quaternions are stored scalar-first (w, x, y, z) and are never
// sign-canonicalized: q and -q are distinct states, which is what lets a
// trajectory sweep through both half-hyperspheres continuously. Angular
// velocities are world-frame vectors, integrated by left multiplication.
#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <type_traits>

#include <Eigen/Dense>

namespace cdmp {

/// Raised when an operation is evaluated at (or within the guard radius of)
/// a removed point, where the difference map is not continuous.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Default guard radius around the removed point (-1,0,0,0).
inline constexpr double kDefaultPoleEpsilon = 1e-7;

template <typename Scalar>
using Vector3 = Eigen::Matrix<Scalar, 3, 1>;

template <typename Scalar>
using Vector4 = Eigen::Matrix<Scalar, 4, 1>;

template <typename Scalar>
class UnitQuaternion {
 public:
  using Vec3 = Vector3<Scalar>;
  using Vec4 = Vector4<Scalar>;

  UnitQuaternion() : w_(1), v_(Vec3::Zero()) {}

  /// Normalizes the given components. Throws std::invalid_argument for a
  /// zero or non-finite input.
  UnitQuaternion(Scalar w, Scalar x, Scalar y, Scalar z) : w_(w), v_(x, y, z) {
    normalize();
  }

  UnitQuaternion(Scalar w, const Vec3& v) : w_(w), v_(v) { normalize(); }

  explicit UnitQuaternion(const Vec4& wxyz)
      : w_(wxyz[0]), v_(wxyz[1], wxyz[2], wxyz[3]) {
    normalize();
  }

  static UnitQuaternion identity() { return UnitQuaternion(); }

  Scalar w() const { return w_; }
  Scalar x() const { return v_[0]; }
  Scalar y() const { return v_[1]; }
  Scalar z() const { return v_[2]; }
  const Vec3& vec() const { return v_; }

  Vec4 coeffs() const { return Vec4(w_, v_[0], v_[1], v_[2]); }

  Scalar dot(const UnitQuaternion& other) const {
    return w_ * other.w_ + v_.dot(other.v_);
  }

  Scalar norm() const { return std::sqrt(w_ * w_ + v_.squaredNorm()); }

  /// Distance in R^4 to the removed point (-1,0,0,0).
  Scalar distance_to_pole() const {
    return std::sqrt((w_ + 1) * (w_ + 1) + v_.squaredNorm());
  }

  UnitQuaternion operator-() const { return UnitQuaternion(-w_, -v_); }

  bool operator==(const UnitQuaternion& o) const {
    return w_ == o.w_ && v_ == o.v_;
  }

 private:
  void normalize() {
    const Scalar n = norm();
    if (!(n > 0) || !std::isfinite(n)) {
      throw std::invalid_argument("quaternion must be finite and non-zero");
    }
    // Leave already-normalized values bit-identical so normalization is
    // idempotent (stored models round-trip exactly).
    if (std::abs(n - Scalar(1)) > 4 * std::numeric_limits<Scalar>::epsilon()) {
      w_ /= n;
      v_ /= n;
    }
  }

  Scalar w_;
  Vec3 v_;
};

using Quaternion = UnitQuaternion<double>;
using Vec3 = Vector3<double>;
using Vec4 = Vector4<double>;

/// Hamilton product q1 * q2, renormalized.
template <typename Scalar>
UnitQuaternion<Scalar> multiply(const UnitQuaternion<Scalar>& q1,
                                const UnitQuaternion<Scalar>& q2) {
  const Scalar w = q1.w() * q2.w() - q1.vec().dot(q2.vec());
  const Vector3<Scalar> v =
      q1.w() * q2.vec() + q2.w() * q1.vec() + q1.vec().cross(q2.vec());
  return UnitQuaternion<Scalar>(w, v);
}

template <typename Scalar>
UnitQuaternion<Scalar> operator*(const UnitQuaternion<Scalar>& q1,
                                 const UnitQuaternion<Scalar>& q2) {
  return multiply(q1, q2);
}

/// Inverse of a unit quaternion.
template <typename Scalar>
UnitQuaternion<Scalar> conjugate(const UnitQuaternion<Scalar>& q) {
  return UnitQuaternion<Scalar>(q.w(), -q.vec());
}

/// Logarithm restricted to the imaginary part: (theta/2) * n for a rotation
/// by theta in [0, 2*pi) about the unit axis n. Throws DomainError within
/// pole_eps of (-1,0,0,0).
template <typename Scalar>
Vector3<Scalar> log_map(const UnitQuaternion<Scalar>& q,
                        Scalar pole_eps = Scalar(kDefaultPoleEpsilon)) {
  if (q.distance_to_pole() < pole_eps) {
    throw DomainError("log_map: quaternion is within " +
                      std::to_string(pole_eps) + " of (-1,0,0,0)");
  }
  const Scalar vn = q.vec().norm();
  if (vn < Scalar(1e-8) && q.w() > 0) {
    return q.vec() / q.w();
  }
  // atan2 equals arccos(w) on the unit sphere but keeps full precision
  // near w = +-1.
  const Scalar half_angle = std::atan2(vn, q.w());
  return (half_angle / vn) * q.vec();
}

/// Exponential of a pure-imaginary quaternion: (cos|r|, sin|r| r/|r|).
template <typename Scalar>
UnitQuaternion<Scalar> exp_map(const Vector3<Scalar>& r) {
  const Scalar n = r.norm();
  if (n < Scalar(1e-8)) {
    return UnitQuaternion<Scalar>(Scalar(1), r);
  }
  return UnitQuaternion<Scalar>(std::cos(n), (std::sin(n) / n) * r);
}

/// Orientation difference d(q1 * conj(q2)) = 2 Im log(q1 * conj(q2)). Its
/// norm is the geodesic rotation angle from q2 to q1, in [0, 2*pi).
template <typename Scalar>
Vector3<Scalar> quat_diff(const UnitQuaternion<Scalar>& q1,
                          const UnitQuaternion<Scalar>& q2,
                          Scalar pole_eps = Scalar(kDefaultPoleEpsilon)) {
  return Scalar(2) * log_map(multiply(q1, conjugate(q2)), pole_eps);
}

/// Advances q by a world-frame angular velocity held constant over dt.
template <typename Scalar>
UnitQuaternion<Scalar> integrate_orientation(
    const UnitQuaternion<Scalar>& q,
    const std::type_identity_t<Vector3<Scalar>>& omega,
    std::type_identity_t<Scalar> dt) {
  if (!(dt > 0)) {
    throw std::invalid_argument("integrate_orientation: dt must be positive");
  }
  return multiply(exp_map<Scalar>(Scalar(0.5) * dt * omega), q);
}

/// Rotation by `angle` about `axis` (normalized internally).
template <typename Scalar>
UnitQuaternion<Scalar> from_axis_angle(const Vector3<Scalar>& axis,
                                       Scalar angle) {
  const Vector3<Scalar> n = axis.normalized();
  return UnitQuaternion<Scalar>(std::cos(angle / 2), std::sin(angle / 2) * n);
}

/// Stereographic projection of S^3 minus a pole onto R^3. Coordinates are
/// taken in a fixed orthonormal basis of the hyperplane orthogonal to the
/// pole.
template <typename Scalar>
class StereographicChart {
 public:
  using Vec3 = Vector3<Scalar>;
  using Vec4 = Vector4<Scalar>;
  using Mat43 = Eigen::Matrix<Scalar, 4, 3>;

  explicit StereographicChart(const Vec4& pole,
                              Scalar pole_eps = Scalar(kDefaultPoleEpsilon))
      : pole_(pole.normalized()), eps_(pole_eps) {
    // Columns 1..3 of a Householder reflector mapping e1 to the pole span
    // its orthogonal complement.
    const Eigen::Matrix<Scalar, 4, 4> q =
        Eigen::HouseholderQR<Eigen::Matrix<Scalar, 4, 1>>(pole_)
            .householderQ();
    basis_ = q.template rightCols<3>();
  }

  const Vec4& pole() const { return pole_; }
  const Mat43& basis() const { return basis_; }

  Vec3 project(const Vec4& p) const {
    const Scalar gap = (p - pole_).norm();
    if (gap < eps_) {
      throw DomainError("stereographic projection at its own pole");
    }
    // 1 - p.pole written as |p - pole|^2 / 2 avoids cancellation near the
    // pole.
    const Scalar denom = Scalar(0.5) * gap * gap;
    const Vec4 tangent = p - p.dot(pole_) * pole_;
    return basis_.transpose() * tangent / denom;
  }

  Vec4 unproject(const Vec3& u) const {
    const Scalar n2 = u.squaredNorm();
    return (Scalar(2) * (basis_ * u) + (n2 - 1) * pole_) / (n2 + 1);
  }

 private:
  Vec4 pole_;
  Scalar eps_;
  Mat43 basis_;
};

template <typename Scalar>
Vector3<Scalar> stereographic_project(
    const Vector4<Scalar>& p, const Vector4<Scalar>& pole,
    Scalar pole_eps = Scalar(kDefaultPoleEpsilon)) {
  return StereographicChart<Scalar>(pole, pole_eps).project(p);
}

template <typename Scalar>
Vector4<Scalar> stereographic_unproject(const Vector3<Scalar>& u,
                                        const Vector4<Scalar>& pole) {
  return StereographicChart<Scalar>(pole).unproject(u);
}

}  // namespace cdmp
