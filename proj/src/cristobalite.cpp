#include "flexcrystal/cristobalite.hpp"

#include <cmath>
#include <numbers>

#include "flexcrystal/errors.hpp"
#include "flexcrystal/quartz.hpp"

namespace flexcrystal::cristobalite {

std::array<Vec3, 3> fixed_vertices() {
  const quartz::QuartzBase b = quartz::base_tetrahedron();
  return {b.e1, b.e2, b.e3};
}

CristobaliteConfig realize(const Orthogonal3& rotation) {
  if (!rotation.is_rotation()) {
    throw OrientationError("cristobalite is parametrized by proper rotations (det +1)");
  }
  CristobaliteConfig c{rotation, fixed_vertices(), {}, {}, {}};
  for (int i = 0; i < 3; ++i) {
    c.t[i] = -(rotation * c.s[i]);
    c.gamma[i] = c.t[i] - c.s[i];
  }

  PeriodicRealization& f = c.fragment;
  f.add_vertex("O", Vec3::Zero());
  for (int i = 0; i < 3; ++i) f.add_vertex("s" + std::to_string(i + 1), c.s[i]);
  for (int i = 0; i < 3; ++i) f.add_vertex("t" + std::to_string(i + 1), c.t[i]);
  f.add_tetrahedron("O", "s1", "s2", "s3");
  f.add_tetrahedron("O", "t1", "t2", "t3");
  for (int i = 0; i < 3; ++i) {
    const std::string n = std::to_string(i + 1);
    f.generators.push_back({"t" + n + "-s" + n, f.position("t" + n) - f.position("s" + n)});
  }
  return c;
}

double gamma_determinant(const CristobaliteConfig& config) {
  Mat3 m;
  m << config.gamma[0], config.gamma[1], config.gamma[2];
  return m.determinant();
}

bool is_admissible(const CristobaliteConfig& config, double tol) {
  return std::abs(gamma_determinant(config)) > tol;
}

std::vector<Vec3> fibonacci_sphere(int n) {
  const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
  std::vector<Vec3> out;
  out.reserve(static_cast<std::size_t>(std::max(n, 0)));
  for (int i = 0; i < n; ++i) {
    const double z = 1.0 - 2.0 * (i + 0.5) / n;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden_angle * i;
    out.push_back(Vec3(r * std::cos(phi), r * std::sin(phi), z).normalized());
  }
  return out;
}

std::vector<ScanRow> admissibility_scan(int axis_samples, int angle_samples) {
  if (axis_samples < 1 || angle_samples < 1) {
    throw InputError("admissibility scan needs at least one axis and one angle");
  }
  std::vector<ScanRow> rows;
  rows.reserve(static_cast<std::size_t>(axis_samples) * angle_samples);
  for (const Vec3& axis : fibonacci_sphere(axis_samples)) {
    for (int k = 0; k < angle_samples; ++k) {
      const double angle =
          angle_samples == 1 ? 0.0 : std::numbers::pi * k / (angle_samples - 1);
      const double det = gamma_determinant(realize(rotation_from_axis_angle(axis, angle)));
      rows.push_back({axis, angle, det});
    }
  }
  return rows;
}

void write_scan_csv(const std::vector<ScanRow>& rows, std::ostream& out) {
  out << "axis_x,axis_y,axis_z,angle,det_gamma\n";
  for (const ScanRow& r : rows) {
    out << format_real(r.axis.x()) << ',' << format_real(r.axis.y()) << ','
        << format_real(r.axis.z()) << ',' << format_real(r.angle) << ','
        << format_real(r.det_gamma) << '\n';
  }
}

}  // namespace flexcrystal::cristobalite
