#include "flexcrystal/tridymite.hpp"

#include <algorithm>
#include <cmath>

#include "flexcrystal/errors.hpp"

namespace flexcrystal::tridymite {

TridymiteBase base() {
  TridymiteBase b;
  b.f1 = Vec3(1.0, 0.0, 0.0);
  b.f2 = Vec3(0.5, std::sqrt(3.0) / 2.0, 0.0);
  b.f0 = Vec3(0.5, std::sqrt(3.0) / 6.0, std::sqrt(6.0) / 3.0);
  b.e1 = Vec3::UnitX();
  b.e2 = Vec3::UnitY();
  b.e3 = Vec3::UnitZ();
  b.s = reflection_across_plane(b.e3);
  return b;
}

Orthogonal3 extend_from_images(const Vec3& a, const Vec3& b, const TridymiteBase& frame) {
  Mat3 images;
  images << a, b, -a.cross(b);
  Mat3 basis;
  basis << frame.e1, frame.e2, frame.e3;
  return Orthogonal3::from_matrix(images * basis.transpose());
}

Orthogonal3 midpoint_reflection(const Orthogonal3& q) {
  const TridymiteBase b = base();
  const Vec3 m1 = b.e1 + q * b.e1;
  const Vec3 m2 = b.e2 + q * b.e2;
  if (m1.norm() < kGeometricTol || m2.norm() < kGeometricTol) {
    throw NeighborhoodError("Q sends e1 or e2 to its antipode: a chord midpoint vanishes");
  }
  if (m1.normalized().cross(m2.normalized()).norm() < kGeometricTol) {
    throw NeighborhoodError("chord midpoints are collinear: the reflecting geodesic is undefined");
  }
  return geodesic_reflection(m1, m2);
}

Recovered recover(const Orthogonal3& q, const Orthogonal3& q1, const Orthogonal3& q2) {
  if (!q.is_rotation() || q1.is_rotation() || q2.is_rotation()) {
    throw OrientationError("recover expects det Q = +1 and det Q1 = det Q2 = -1");
  }
  // −R0 = Q, R1 = Q1, −R2 R0 = Q2.
  return {-q, q1, q2 * q.transpose()};
}

double eq4_residual(const Orthogonal3& q, const Orthogonal3& q1, const Orthogonal3& q2) {
  const TridymiteBase b = base();
  double worst = 0.0;
  for (const Vec3& e : {b.e1, b.e2}) {
    worst = std::max(worst, (e + q * e - q1 * e - q2 * e).norm());
  }
  return worst;
}

double eq2_residual(const Orthogonal3& r0, const Orthogonal3& r1, const Orthogonal3& r2) {
  const TridymiteBase b = base();
  const Mat3 m = Mat3::Identity() - r0.matrix() - r1.matrix() + (r2 * r0).matrix();
  return std::max((m * b.f1).norm(), (m * b.f2).norm());
}

PeriodicRealization realize(const Orthogonal3& r0, const Orthogonal3& r1, const Orthogonal3& r2) {
  const TridymiteBase b = base();
  const Orthogonal3 r2r0 = r2 * r0;
  const Vec3 o2 = r0 * b.f0;

  PeriodicRealization f;
  f.add_vertex("O", Vec3::Zero());
  f.add_vertex("O1", b.f0);
  f.add_vertex("O2", o2);
  f.add_vertex("D1", b.f1);
  f.add_vertex("D2", r0 * b.f1);
  f.add_vertex("E1", b.f2);
  f.add_vertex("E2", r0 * b.f2);
  f.add_vertex("A1", b.f0 + r1 * (b.f1 - b.f0));
  f.add_vertex("A2", o2 + r2r0 * (b.f1 - b.f0));
  f.add_vertex("B1", b.f0 + r1 * (b.f2 - b.f0));
  f.add_vertex("B2", o2 + r2r0 * (b.f2 - b.f0));
  f.add_vertex("C1", b.f0 - r1 * b.f0);
  f.add_vertex("C2", o2 - r2r0 * b.f0);

  f.add_tetrahedron("O", "D1", "E1", "O1");
  f.add_tetrahedron("O", "D2", "E2", "O2");
  f.add_tetrahedron("O1", "A1", "B1", "C1");
  f.add_tetrahedron("O2", "A2", "B2", "C2");

  for (const char* p : {"A", "B", "C", "D", "E"}) {
    const std::string one = std::string(p) + "1";
    const std::string two = std::string(p) + "2";
    f.generators.push_back({two + "-" + one, f.position(two) - f.position(one)});
  }
  f.generators.push_back({"O2-O", f.position("O2") - f.position("O")});
  //                A   B  C  D  E  O
  f.relations = {{-1, 0, 1, 1, 0, 0},
                 {0, -1, 1, 0, 1, 0}};
  return f;
}

namespace {

TridymiteSolution assemble(const BranchLabel& label, const Orthogonal3& q,
                           const Orthogonal3& q1, const Orthogonal3& q2) {
  const Recovered r = recover(q, q1, q2);
  TridymiteSolution s{label, q, q1, q2, r.r0, r.r1, r.r2, 0.0, 0.0, {}};
  s.residual_eq4 = eq4_residual(q, q1, q2);
  s.residual_eq2 = eq2_residual(r.r0, r.r1, r.r2);
  s.config = realize(r.r0, r.r1, r.r2);
  return s;
}

}  // namespace

Branches solve(const Orthogonal3& q) {
  if (!q.is_rotation()) throw OrientationError("tridymite solve expects Q in SO(3)");
  const TridymiteBase b = base();
  const Orthogonal3 r = midpoint_reflection(q);

  // The quadrilateral e1, Qe1, Qe2, e2 and its mirror image, each read
  // with both labelings.
  const std::array<Vec3, 2> plain_a{b.e1, b.e2};
  const std::array<Vec3, 2> plain_b{q * b.e1, q * b.e2};
  const std::array<Vec3, 2> mirror_a{r * plain_a[0], r * plain_a[1]};
  const std::array<Vec3, 2> mirror_b{r * plain_b[0], r * plain_b[1]};

  Branches out;
  for (int i = 0; i < 4; ++i) {
    const BranchLabel label = BranchLabel::from_index(i);
    const auto& a = label.reflect ? mirror_a : plain_a;
    const auto& c = label.reflect ? mirror_b : plain_b;
    const auto& first = label.swap ? c : a;
    const auto& second = label.swap ? a : c;
    out[i] = assemble(label, q, extend_from_images(first[0], first[1], b),
                      extend_from_images(second[0], second[1], b));
  }
  return out;
}

TridymiteSolution act(const TridymiteSolution& solution, const BranchLabel& g) {
  const TridymiteBase b = base();
  Orthogonal3 q1 = solution.q1;
  Orthogonal3 q2 = solution.q2;
  if (g.reflect) {
    const Orthogonal3 r = midpoint_reflection(solution.q);
    q1 = extend_from_images(r * (q1 * b.e1), r * (q1 * b.e2), b);
    q2 = extend_from_images(r * (q2 * b.e1), r * (q2 * b.e2), b);
  }
  if (g.swap) std::swap(q1, q2);
  return assemble(solution.label ^ g, solution.q, q1, q2);
}

Ramification ramification_defect(const Branches& solutions, double tol) {
  const TridymiteBase b = base();
  Ramification out;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      double d = 0.0;
      for (const Vec3& e : {b.e1, b.e2}) {
        d = std::max(d, (solutions[i].q1 * e - solutions[j].q1 * e).norm());
        d = std::max(d, (solutions[i].q2 * e - solutions[j].q2 * e).norm());
      }
      out.distance[i][j] = d;
    }
  }
  std::vector<int> representatives;
  for (int i = 0; i < 4; ++i) {
    const bool seen = std::any_of(representatives.begin(), representatives.end(),
                                  [&](int k) { return out.distance[i][k] <= tol; });
    if (!seen) representatives.push_back(i);
  }
  out.distinct = static_cast<int>(representatives.size());
  return out;
}

namespace {

double image_distance(const std::array<Vec3, 4>& x, const std::array<Vec3, 4>& y) {
  double d = 0.0;
  for (std::size_t k = 0; k < 4; ++k) d = std::max(d, (x[k] - y[k]).norm());
  return d;
}

std::array<Vec3, 4> branch_images(const TridymiteSolution& s) {
  const TridymiteBase b = base();
  return {s.q1 * b.e1, s.q1 * b.e2, s.q2 * b.e1, s.q2 * b.e2};
}

}  // namespace

OracleResult oracle_count(const Orthogonal3& q, int grid_n, double tol) {
  const TridymiteBase b = base();
  const Branches branches = solve(q);
  OracleResult result;

  const SphericalCircle c1 = chord_midpoint_circle(b.e1, q * b.e1);
  const SphericalCircle c2 = chord_midpoint_circle(b.e2, q * b.e2);
  if (c1.degenerate() || c2.degenerate()) {
    result.degenerate = true;
    result.count = ramification_defect(branches, tol).distinct;
    return result;
  }

  auto images_at = [&](const oracle::Vec2& x) -> std::array<Vec3, 4> {
    const Vec3 p1 = c1.point_at(x[0]);
    const Vec3 p2 = c2.point_at(x[1]);
    return {p1, p2, c1.complement(p1), c2.complement(p2)};
  };
  // Q1 and Q2 must each keep e1 ⊥ e2.
  oracle::ScalarSystem2 system;
  system.eval = [&](const oracle::Vec2& x) {
    const auto im = images_at(x);
    return oracle::Vec2(im[0].dot(im[1]), im[2].dot(im[3]));
  };

  const std::vector<oracle::GridCell> cells = oracle::grid_sign_scan(system, grid_n);
  std::vector<char> first(static_cast<std::size_t>(grid_n) * grid_n, 0);
  std::vector<char> second(first.size(), 0);
  for (const auto& c : cells) {
    const std::size_t k = static_cast<std::size_t>(c.i) * grid_n + c.j;
    first[k] = c.first_changes;
    second[k] = c.second_changes;
  }
  // A root sits where both zero curves meet; allow them to be flagged in
  // neighbouring cells.
  auto second_nearby = [&](int i, int j) {
    for (int di = -1; di <= 1; ++di) {
      for (int dj = -1; dj <= 1; ++dj) {
        const int ii = (i + di + grid_n) % grid_n;
        const int jj = (j + dj + grid_n) % grid_n;
        if (second[static_cast<std::size_t>(ii) * grid_n + jj]) return true;
      }
    }
    return false;
  };

  for (const auto& cell : cells) {
    if (!cell.first_changes || !second_nearby(cell.i, cell.j)) continue;
    const oracle::NewtonResult nr = oracle::newton2(system, cell.center(system.domain, grid_n));
    if (!nr.ok()) continue;
    const auto images = images_at(nr.x);
    const bool duplicate = std::any_of(result.roots.begin(), result.roots.end(),
                                       [&](const OracleRoot& r) {
                                         return image_distance(r.images, images) <= tol;
                                       });
    if (duplicate) continue;

    OracleRoot root{nr.x, images, nr.residual, -1, 0.0};
    for (int k = 0; k < 4; ++k) {
      const double d = image_distance(images, branch_images(branches[k]));
      if (root.matched_branch < 0 || d < root.match_distance) {
        root.matched_branch = k;
        root.match_distance = d;
      }
    }
    result.roots.push_back(root);
  }
  result.count = static_cast<int>(result.roots.size());
  return result;
}

TangentReport tangent_dimension_at_aristotype(double h) {
  if (!(h >= 1e-8 && h <= 1e-3)) {
    throw InputError("finite-difference step must lie in [1e-8, 1e-3]");
  }
  const TridymiteBase b = base();
  const oracle::VectorMap constraint = [&](const Eigen::VectorXd& x) {
    const Orthogonal3 q = rotation_from_vector(x.segment<3>(0));
    const Orthogonal3 q1 = b.s * rotation_from_vector(x.segment<3>(3));
    const Orthogonal3 q2 = b.s * rotation_from_vector(x.segment<3>(6));
    const Mat3 m = Mat3::Identity() + q.matrix() - q1.matrix() - q2.matrix();
    Eigen::VectorXd out(6);
    out << m * b.e1, m * b.e2;
    return out;
  };
  const Eigen::MatrixXd jac = oracle::fd_jacobian(constraint, Eigen::VectorXd::Zero(9), h);
  const oracle::RankReport rank = oracle::svd_rank(jac, 1e-6);
  return {static_cast<int>(jac.cols()) - rank.rank, rank.rank, rank.singular_values};
}

namespace {

std::string matrix_json(const Orthogonal3& m) {
  std::string out = "[";
  for (int i = 0; i < 3; ++i) {
    out += i ? ", [" : "[";
    for (int j = 0; j < 3; ++j) out += (j ? ", " : "") + format_real(m(i, j));
    out += "]";
  }
  return out + "]";
}

// Re-indents a multi-line document so it nests under a key.
std::string nested(const std::string& doc, const std::string& indent) {
  std::string out;
  for (std::size_t k = 0; k < doc.size(); ++k) {
    out += doc[k];
    if (doc[k] == '\n' && k + 1 < doc.size()) out += indent;
  }
  while (!out.empty() && out.back() == '\n') out.pop_back();
  return out;
}

}  // namespace

std::string solutions_json(const Branches& solutions) {
  std::string out = "[";
  for (std::size_t k = 0; k < solutions.size(); ++k) {
    const TridymiteSolution& s = solutions[k];
    out += k ? ",\n  {\n" : "\n  {\n";
    out += "    \"label\": {\"swap\": " + std::to_string(s.label.swap ? 1 : 0) +
           ", \"reflect\": " + std::to_string(s.label.reflect ? 1 : 0) + "},\n";
    out += "    \"Q1\": " + matrix_json(s.q1) + ",\n";
    out += "    \"Q2\": " + matrix_json(s.q2) + ",\n";
    out += "    \"R0\": " + matrix_json(s.r0) + ",\n";
    out += "    \"R1\": " + matrix_json(s.r1) + ",\n";
    out += "    \"R2\": " + matrix_json(s.r2) + ",\n";
    out += "    \"residual_eq4\": " + format_real(s.residual_eq4) + ",\n";
    out += "    \"residual_eq2\": " + format_real(s.residual_eq2) + ",\n";
    out += "    \"config\": " + nested(export_json(s.config), "    ") + "\n  }";
  }
  return out + "\n]\n";
}

}  // namespace flexcrystal::tridymite
