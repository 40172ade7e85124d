#pragma once

#include <array>
#include <optional>
#include <ostream>
#include <vector>

#include "flexcrystal/framework.hpp"
#include "flexcrystal/geom3.hpp"

namespace flexcrystal::quartz {

/// Coordinates on the three-torus of quartz deformations.
///
/// theta picks the image of v = e1 − e2 − e3 under R0 on its circle of
/// admissible directions; phi0 and phi1 are the remaining rotational
/// freedom of R0 and R1 about the images of v.
struct QuartzChart {
  double theta = 0.0;
  double phi0 = 0.0;
  double phi1 = 0.0;

  /// Same point with every angle reduced to [0, 2π).
  QuartzChart reduced() const;
};

/// The fixed tetrahedron A0A1A2A3 and its edge vectors e_i = A_i − A0.
struct QuartzBase {
  std::array<Vec3, 4> a;
  Vec3 e1, e2, e3;

  Vec3 v() const { return e1 - e2 - e3; }
  Vec3 u() const { return e1 + e2 - e3; }

  /// Base data moved by a global rigid rotation about A0.
  QuartzBase rotated(const Orthogonal3& g) const;
};

QuartzBase base_tetrahedron();

struct QuartzRotations {
  Orthogonal3 r0;
  Orthogonal3 r1;
};

/// Point of the circle {w : |w| = |v|, w·u = −|u|²/2} at angle theta.
Vec3 circle_point(double theta, const QuartzBase& base = base_tetrahedron());

/// Both returned maps reverse orientation, and R1·v − R0·v = u holds.
QuartzRotations chart_to_rotations(const QuartzChart& chart,
                                   const QuartzBase& base = base_tetrahedron());

struct QuartzConfig {
  Orthogonal3 r0;
  Orthogonal3 r1;
  QuartzBase base;
  // Vertices A0..A3, B1..B3, C0, C2, C3; generators B3−C2, A3−C3, B2−A2,
  // C0−B1 with the zero-sum relation.
  PeriodicRealization fragment;
};

QuartzConfig realize(const QuartzChart& chart, const QuartzBase& base = base_tetrahedron());

/// Assembles the fragment from arbitrary orthogonal maps. The zero-sum
/// relation only holds when (r0, r1) satisfies the quartz closure equation.
QuartzConfig realize(const Orthogonal3& r0, const Orthogonal3& r1,
                     const QuartzBase& base = base_tetrahedron());

/// The four generators read back from the fragment.
std::array<Vec3, 4> generators(const QuartzConfig& config);

/// ‖R1·v − R0·v − u‖ from the rotations.
double closure_residual(const QuartzConfig& config);

/// Determinant of the first generator triple (in lexicographic order) that
/// is independent at `tol`, or of (g1, g2, g3) if none is.
double cell_determinant(const QuartzConfig& config, double tol = kLatticeRankTol);

/// True when the generators span fewer than three dimensions at `tol`.
bool is_degenerate(const QuartzConfig& config, double tol = kLatticeRankTol);

/// Finds a chart point where the generators span only a plane: scans
/// det(g1, g2, g3) on a grid, then bisects the first sign change along phi1.
std::optional<QuartzChart> find_degenerate_chart(int grid_n = 24);

struct SweepRow {
  QuartzChart chart;
  int rank = 0;
  double sigma_min = 0.0;
  double cell_det = 0.0;
};

/// Regular grid over the torus, theta outermost and phi1 innermost.
/// Throws InputError for counts < 1.
std::vector<SweepRow> sweep(const std::array<int, 3>& counts, double tol = kLatticeRankTol);

/// CSV with header theta,phi0,phi1,rank,sigma_min,cell_det.
void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out);

}  // namespace flexcrystal::quartz
