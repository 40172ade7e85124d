#pragma once

#include <Eigen/Dense>

namespace flexcrystal {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// Geometric predicates (unit length, antipodality, collinearity).
inline constexpr double kGeometricTol = 1e-9;
// Identities expected of freshly constructed matrices.
inline constexpr double kAlgebraicTol = 1e-12;

/// A 3x3 orthogonal matrix together with the sign of its determinant.
///
/// Rotations (det +1) and roto-reflections (det -1) share this type. The
/// sign is fixed at construction and carried through products, negation and
/// transposition, so callers never recompute a determinant to learn which
/// component of O(3) they are in.
class Orthogonal3 {
 public:
  Orthogonal3() : m_(Mat3::Identity()), det_sign_(1) {}

  static Orthogonal3 identity() { return {}; }

  /// Wraps an arbitrary matrix after checking MᵀM = I and |det| = 1 within
  /// `tol`. Throws InputError otherwise.
  static Orthogonal3 from_matrix(const Mat3& m, double tol = kGeometricTol);

  const Mat3& matrix() const { return m_; }
  int det_sign() const { return det_sign_; }
  bool is_rotation() const { return det_sign_ > 0; }

  double operator()(int row, int col) const { return m_(row, col); }

  Vec3 operator*(const Vec3& v) const { return m_ * v; }
  Orthogonal3 operator*(const Orthogonal3& o) const {
    return Orthogonal3(m_ * o.m_, det_sign_ * o.det_sign_);
  }
  // -M flips the determinant in odd dimension.
  Orthogonal3 operator-() const { return Orthogonal3(-m_, -det_sign_); }

  Orthogonal3 transpose() const { return Orthogonal3(m_.transpose(), det_sign_); }
  Orthogonal3 inverse() const { return transpose(); }

  /// max |MᵀM − I| entry.
  double orthogonality_error() const;
  /// |det(M) − det_sign|.
  double determinant_error() const;

  /// Largest entrywise difference.
  double distance(const Orthogonal3& other) const;

 private:
  Orthogonal3(const Mat3& m, int det_sign) : m_(m), det_sign_(det_sign) {}

  friend Orthogonal3 make_orthogonal_unchecked(const Mat3& m, int det_sign);

  Mat3 m_;
  int det_sign_;
};

// For constructions whose orthogonality holds by algebra; no checks.
Orthogonal3 make_orthogonal_unchecked(const Mat3& m, int det_sign);

Mat3 skew(const Vec3& w);

/// Rodrigues rotation about a unit axis. Throws InputError if |axis| is not 1.
Orthogonal3 rotation_from_axis_angle(const Vec3& axis, double angle,
                                     double tol = kGeometricTol);

/// Exponential map so(3) -> SO(3); the argument is axis * angle.
Orthogonal3 rotation_from_vector(const Vec3& omega);

/// Smallest rotation taking unit `a` to unit `b`, with axis along a×b.
/// Antipodal inputs have no preferred axis and raise GeometryError.
Orthogonal3 minimal_rotation(const Vec3& a, const Vec3& b,
                             double tol = kGeometricTol);

/// I − 2nnᵀ for a unit normal n.
Orthogonal3 reflection_across_plane(const Vec3& normal, double tol = kGeometricTol);

/// The one-parameter family of rotations sending v to w (equal lengths):
/// rotate by φ about w after the minimal rotation v̂ -> ŵ. Every such
/// rotation occurs for exactly one φ in [0, 2π).
Orthogonal3 rotation_circle(const Vec3& v, const Vec3& w, double phi,
                            double tol = kGeometricTol);

/// Reflection in the plane through the origin containing m1 and m2; this
/// is the reflection of S² in the great circle through both directions.
Orthogonal3 geodesic_reflection(const Vec3& m1, const Vec3& m2,
                                double tol = kGeometricTol);

/// Circle on S² whose points p satisfy p·m = |m|², i.e. the circle with
/// diameter [e, Qe] when m = (e + Qe) / 2.
///
/// Points on it pair up through the chord midpoint: p and 2m − p are both
/// unit and both on the circle. A pinned orthonormal frame of m⊥ gives the
/// angular parametrization used by point_at.
class SphericalCircle {
 public:
  const Vec3& midpoint() const { return m_; }
  /// Direction of the spherical centre, m / |m|.
  Vec3 spherical_center() const { return m_.normalized(); }
  double radius() const { return radius_; }
  bool degenerate() const { return degenerate_; }

  Vec3 point_at(double angle) const;
  Vec3 complement(const Vec3& p) const { return 2.0 * m_ - p; }
  bool contains(const Vec3& p, double tol = kGeometricTol) const;

 private:
  friend SphericalCircle chord_midpoint_circle(const Vec3&, const Vec3&, double);

  Vec3 m_ = Vec3::Zero();
  Vec3 u_ = Vec3::Zero();  // frame of m⊥, u_ toward the first witness point
  Vec3 w_ = Vec3::Zero();
  double radius_ = 0.0;
  bool degenerate_ = true;
};

/// Throws GeometryError when e = −Qe (the midpoint vanishes).
SphericalCircle chord_midpoint_circle(const Vec3& e, const Vec3& qe,
                                      double tol = kGeometricTol);

}  // namespace flexcrystal
