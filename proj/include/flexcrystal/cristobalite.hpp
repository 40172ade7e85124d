#pragma once

#include <array>
#include <ostream>
#include <vector>

#include "flexcrystal/framework.hpp"
#include "flexcrystal/geom3.hpp"

namespace flexcrystal::cristobalite {

// Orbit counts of the periodic framework under its translation lattice.
inline constexpr int kVertexOrbits = 4;
inline constexpr int kEdgeOrbits = 12;

/// Two regular tetrahedra sharing the origin O: the fixed one O s1 s2 s3 and
/// the moving one O t1 t2 t3 with t_i = −R s_i. The lattice is spanned by
/// γ_i = t_i − s_i.
struct CristobaliteConfig {
  Orthogonal3 rotation;
  std::array<Vec3, 3> s;
  std::array<Vec3, 3> t;
  std::array<Vec3, 3> gamma;
  PeriodicRealization fragment;
};

/// Non-origin vertices of the fixed tetrahedron.
std::array<Vec3, 3> fixed_vertices();

/// Throws OrientationError unless `rotation` is proper.
CristobaliteConfig realize(const Orthogonal3& rotation);

/// det[γ1 γ2 γ3].
double gamma_determinant(const CristobaliteConfig& config);

bool is_admissible(const CristobaliteConfig& config, double tol = kGeometricTol);

/// n points spread over S² on a Fibonacci spiral.
std::vector<Vec3> fibonacci_sphere(int n);

struct ScanRow {
  Vec3 axis;
  double angle = 0.0;
  double det_gamma = 0.0;
};

/// Fibonacci-sphere axes times angles evenly spaced on [0, π] (both ends
/// included; a single angle sample is 0). Axis outer, angle inner.
std::vector<ScanRow> admissibility_scan(int axis_samples, int angle_samples);

/// CSV with header axis_x,axis_y,axis_z,angle,det_gamma.
void write_scan_csv(const std::vector<ScanRow>& rows, std::ostream& out);

}  // namespace flexcrystal::cristobalite
