#pragma once

#include <array>
#include <string>
#include <vector>

#include "flexcrystal/framework.hpp"
#include "flexcrystal/geom3.hpp"
#include "flexcrystal/oracle.hpp"

namespace flexcrystal::tridymite {

/// The fixed tetrahedron O D1 E1 O1 (O at the origin, D1 = f1, E1 = f2,
/// O1 = f0) and an orthonormal frame with span(e1, e2) = span(f1, f2).
struct TridymiteBase {
  Vec3 f0, f1, f2;
  Vec3 e1, e2, e3;
  // Reflection in span(f1, f2): the aristotype value of R1 = R2.
  Orthogonal3 s;
};

TridymiteBase base();

/// Element of Z2 x Z2 acting on the four sheets: `swap` exchanges the roles
/// of Q1 and Q2, `reflect` mirrors the four-bar in the great circle through
/// the chord midpoints.
struct BranchLabel {
  bool swap = false;
  bool reflect = false;

  int index() const { return (swap ? 1 : 0) + (reflect ? 2 : 0); }
  static BranchLabel from_index(int i) { return {(i & 1) != 0, (i & 2) != 0}; }

  BranchLabel operator^(const BranchLabel& o) const {
    return {swap != o.swap, reflect != o.reflect};
  }
  friend bool operator==(const BranchLabel&, const BranchLabel&) = default;
};

struct TridymiteSolution {
  BranchLabel label;
  Orthogonal3 q;   // det +1
  Orthogonal3 q1;  // det −1
  Orthogonal3 q2;  // det −1
  Orthogonal3 r0, r1, r2;
  double residual_eq4 = 0.0;  // max_i ‖e_i + Q e_i − Q1 e_i − Q2 e_i‖
  double residual_eq2 = 0.0;  // max_i ‖(I − R0 − R1 + R2 R0) f_i‖
  PeriodicRealization config;
};

using Branches = std::array<TridymiteSolution, 4>;

/// Unique det −1 orthogonal map sending e1 to a and e2 to b (a ⊥ b, unit).
Orthogonal3 extend_from_images(const Vec3& a, const Vec3& b, const TridymiteBase& frame = base());

/// Reflection in the great circle through the midpoints of [e_i, Q e_i].
/// Throws NeighborhoodError when a midpoint vanishes or the two are collinear.
Orthogonal3 midpoint_reflection(const Orthogonal3& q);

/// The four closed-form solutions (Q1, Q2) for a given Q, indexed by
/// BranchLabel::index(). Coinciding sheets are kept; see ramification_defect.
/// Throws OrientationError for det(Q) = −1 and NeighborhoodError outside the
/// region where the midpoint reflection exists.
Branches solve(const Orthogonal3& q);

struct Recovered {
  Orthogonal3 r0, r1, r2;
};

/// R0 = −Q, R1 = Q1, R2 = Q2 Qᵀ. Throws OrientationError on wrong signs.
Recovered recover(const Orthogonal3& q, const Orthogonal3& q1, const Orthogonal3& q2);

/// Vertices O, O1, O2, D1, D2, E1, E2, A1, A2, B1, B2, C1, C2; the 24 edges
/// of the four tetrahedra; periods A2−A1, B2−B1, C2−C1, D2−D1, E2−E1, O2−O
/// with the two relations (C2−C1)+(D2−D1) = A2−A1 and (C2−C1)+(E2−E1) = B2−B1.
PeriodicRealization realize(const Orthogonal3& r0, const Orthogonal3& r1, const Orthogonal3& r2);

double eq4_residual(const Orthogonal3& q, const Orthogonal3& q1, const Orthogonal3& q2);
double eq2_residual(const Orthogonal3& r0, const Orthogonal3& r1, const Orthogonal3& r2);

/// Image of a solution under a group element; the result is again a
/// solution for the same Q, carrying label `solution.label ^ g`.
TridymiteSolution act(const TridymiteSolution& solution, const BranchLabel& g);

struct Ramification {
  // max over i, k of ‖Qk e_i − Qk' e_i‖ between sheets b and b'.
  std::array<std::array<double, 4>, 4> distance{};
  int distinct = 0;
};

Ramification ramification_defect(const Branches& solutions, double tol = kGeometricTol);

struct OracleRoot {
  oracle::Vec2 angles;
  // (Q1 e1, Q1 e2, Q2 e1, Q2 e2) read off the two circles.
  std::array<Vec3, 4> images;
  double residual = 0.0;
  int matched_branch = -1;
  double match_distance = 0.0;
};

struct OracleResult {
  int count = 0;
  // A circle collapsed to a point; `count` came from the closed-form sheets.
  bool degenerate = false;
  std::vector<OracleRoot> roots;
};

/// Independent solution count: scans the two chord-midpoint circles for
/// orthonormal pairs on a grid, refines with Newton, and deduplicates at tol.
OracleResult oracle_count(const Orthogonal3& q, int grid_n = 256, double tol = 1e-7);

struct TangentReport {
  int nullity = 0;
  int rank = 0;
  Eigen::VectorXd singular_values;
};

/// Nullity of the linearized constraint at the aristotype, from a
/// central-difference Jacobian over (log Q, log S Q1, log S Q2) ∈ R⁹.
/// Throws InputError unless h ∈ [1e-8, 1e-3].
TangentReport tangent_dimension_at_aristotype(double h = 1e-5);

/// JSON array of sheets: label {swap, reflect} as 0/1, the row-major 3x3
/// matrices Q1, Q2, R0, R1, R2, both residuals, and the framework document
/// under "config".
std::string solutions_json(const Branches& solutions);

}  // namespace flexcrystal::tridymite
