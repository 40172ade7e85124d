#include "flexcrystal/geom3.hpp"

#include <cmath>
#include <sstream>

#include "flexcrystal/errors.hpp"

namespace flexcrystal {

namespace {

void require_unit(const Vec3& v, double tol, const char* what) {
  if (!v.allFinite() || std::abs(v.norm() - 1.0) > tol) {
    std::ostringstream msg;
    msg << what << " must be a unit vector (norm " << v.norm() << ")";
    throw InputError(msg.str());
  }
}

// Any unit vector orthogonal to the unit vector n.
Vec3 any_orthogonal(const Vec3& n) {
  const Vec3 trial = std::abs(n.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  return (trial - trial.dot(n) * n).normalized();
}

}  // namespace

Orthogonal3 make_orthogonal_unchecked(const Mat3& m, int det_sign) {
  return Orthogonal3(m, det_sign);
}

Orthogonal3 Orthogonal3::from_matrix(const Mat3& m, double tol) {
  if (!m.allFinite()) throw InputError("orthogonal matrix has non-finite entries");
  const double ortho = (m.transpose() * m - Mat3::Identity()).cwiseAbs().maxCoeff();
  const double det = m.determinant();
  if (ortho > tol || std::abs(std::abs(det) - 1.0) > tol) {
    std::ostringstream msg;
    msg << "matrix is not orthogonal (|MtM - I| = " << ortho << ", det = " << det << ")";
    throw InputError(msg.str());
  }
  return Orthogonal3(m, det > 0 ? 1 : -1);
}

double Orthogonal3::orthogonality_error() const {
  return (m_.transpose() * m_ - Mat3::Identity()).cwiseAbs().maxCoeff();
}

double Orthogonal3::determinant_error() const {
  return std::abs(m_.determinant() - det_sign_);
}

double Orthogonal3::distance(const Orthogonal3& other) const {
  return (m_ - other.m_).cwiseAbs().maxCoeff();
}

Mat3 skew(const Vec3& w) {
  Mat3 k;
  k << 0.0, -w.z(), w.y(),
       w.z(), 0.0, -w.x(),
       -w.y(), w.x(), 0.0;
  return k;
}

Orthogonal3 rotation_from_axis_angle(const Vec3& axis, double angle, double tol) {
  require_unit(axis, tol, "rotation axis");
  if (!std::isfinite(angle)) throw InputError("rotation angle must be finite");
  const Vec3 n = axis.normalized();
  const Mat3 k = skew(n);
  const Mat3 r = Mat3::Identity() + std::sin(angle) * k + (1.0 - std::cos(angle)) * (k * k);
  return make_orthogonal_unchecked(r, 1);
}

Orthogonal3 rotation_from_vector(const Vec3& omega) {
  if (!omega.allFinite()) throw InputError("rotation vector must be finite");
  const double angle = omega.norm();
  if (angle == 0.0) return Orthogonal3::identity();
  return rotation_from_axis_angle(omega / angle, angle);
}

Orthogonal3 minimal_rotation(const Vec3& a, const Vec3& b, double tol) {
  require_unit(a, tol, "source direction");
  require_unit(b, tol, "target direction");
  const double c = a.dot(b);
  if (c < -1.0 + tol) {
    throw GeometryError("minimal rotation between antipodal directions has no unique axis");
  }
  // R = I + K + K²/(1 + c) with K = [a×b]ₓ; exact for unit a, b.
  const Mat3 k = skew(a.cross(b));
  const Mat3 r = Mat3::Identity() + k + (k * k) / (1.0 + c);
  return make_orthogonal_unchecked(r, 1);
}

Orthogonal3 reflection_across_plane(const Vec3& normal, double tol) {
  require_unit(normal, tol, "plane normal");
  const Vec3 n = normal.normalized();
  return make_orthogonal_unchecked(Mat3::Identity() - 2.0 * n * n.transpose(), -1);
}

Orthogonal3 rotation_circle(const Vec3& v, const Vec3& w, double phi, double tol) {
  const double nv = v.norm();
  const double nw = w.norm();
  if (!v.allFinite() || !w.allFinite() || nv < tol || nw < tol) {
    throw InputError("rotation circle needs nonzero finite vectors");
  }
  if (std::abs(nv - nw) > tol * std::max(1.0, nv)) {
    throw InputError("rotation circle needs vectors of equal length");
  }
  const Vec3 w_hat = w / nw;
  return rotation_from_axis_angle(w_hat, phi) * minimal_rotation(v / nv, w_hat, tol);
}

Orthogonal3 geodesic_reflection(const Vec3& m1, const Vec3& m2, double tol) {
  const double n1 = m1.norm();
  const double n2 = m2.norm();
  if (!m1.allFinite() || !m2.allFinite() || n1 < tol || n2 < tol) {
    throw GeometryError("geodesic endpoints must be nonzero");
  }
  const Vec3 normal = (m1 / n1).cross(m2 / n2);
  if (normal.norm() < tol) {
    throw GeometryError("geodesic endpoints are collinear; the great circle is undefined");
  }
  return reflection_across_plane(normal.normalized());
}

Vec3 SphericalCircle::point_at(double angle) const {
  return m_ + radius_ * (std::cos(angle) * u_ + std::sin(angle) * w_);
}

bool SphericalCircle::contains(const Vec3& p, double tol) const {
  return std::abs(p.norm() - 1.0) < tol && std::abs(p.dot(m_) - m_.squaredNorm()) < tol;
}

SphericalCircle chord_midpoint_circle(const Vec3& e, const Vec3& qe, double tol) {
  require_unit(e, tol, "circle endpoint");
  require_unit(qe, tol, "circle endpoint");
  SphericalCircle c;
  c.m_ = 0.5 * (e + qe);
  if (c.m_.norm() < tol) {
    throw GeometryError("chord midpoint vanishes: endpoints are antipodal");
  }
  const Vec3 m_hat = c.m_.normalized();
  const Vec3 offset = e - c.m_;
  c.radius_ = offset.norm();
  c.degenerate_ = c.radius_ < tol;
  c.u_ = c.degenerate_ ? any_orthogonal(m_hat) : Vec3((offset - offset.dot(m_hat) * m_hat).normalized());
  c.w_ = m_hat.cross(c.u_);
  return c;
}

}  // namespace flexcrystal
