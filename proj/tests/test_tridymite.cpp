#include <cmath>
#include <numbers>

#include <doctest.h>

#include "flexcrystal/errors.hpp"
#include "flexcrystal/tridymite.hpp"
#include "support/sampling.hpp"

using namespace flexcrystal;
using namespace flexcrystal::tridymite;
using flexcrystal::testing::Sampler;

namespace {

constexpr double kPi = std::numbers::pi;

const Vec3 kDiagonal = Vec3(1, 1, 1).normalized();

double max_edge_error(const PeriodicRealization& f) {
  double worst = 0.0;
  for (const Edge& e : f.edges) {
    worst = std::max(worst,
                     std::abs((f.vertices[e.u].position - f.vertices[e.v].position).norm() - 1.0));
  }
  return worst;
}

double max_relation(const PeriodicRealization& f) {
  double worst = 0.0;
  for (double r : relation_residuals(f)) worst = std::max(worst, r);
  return worst;
}

}  // namespace

TEST_CASE("base") {
  const TridymiteBase b = base();
  const Vec3 pts[] = {Vec3::Zero(), b.f0, b.f1, b.f2};
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) CHECK(std::abs((pts[i] - pts[j]).norm() - 1.0) < 1e-15);
  CHECK(b.f1.z() == 0.0);
  CHECK(b.f2.z() == 0.0);
  CHECK(b.e1.dot(b.e2) == 0.0);
  CHECK((b.e1.cross(b.e2) - b.e3).norm() == 0.0);
  CHECK((b.s * b.f1 - b.f1).norm() == 0.0);
  CHECK((b.s * b.f2 - b.f2).norm() == 0.0);
  CHECK((b.s * b.f0 - b.f0).norm() > 1.0);
  CHECK(b.s.det_sign() == -1);
}

TEST_CASE("solve") {
  const TridymiteBase b = base();

  SUBCASE("aristotype: every sheet is (S, S)") {
    const Branches br = solve(Orthogonal3::identity());
    CHECK(midpoint_reflection(Orthogonal3::identity()).distance(b.s) < 1e-15);
    for (const auto& s : br) {
      CHECK(s.q1.distance(b.s) < 1e-15);
      CHECK(s.q2.distance(b.s) < 1e-15);
    }
  }
  SUBCASE("closed-form sheets are S, QS, r, rQ") {
    Sampler rng(61);
    for (int i = 0; i < 50; ++i) {
      const Orthogonal3 q = rng.rotation_with_angle(0.05, 0.5);
      const Orthogonal3 r = midpoint_reflection(q);
      const Branches br = solve(q);
      CHECK(br[0].q1.distance(b.s) < 1e-12);
      CHECK(br[0].q2.distance(q * b.s) < 1e-12);
      CHECK(br[1].q1.distance(q * b.s) < 1e-12);
      CHECK(br[1].q2.distance(b.s) < 1e-12);
      CHECK(br[2].q1.distance(r) < 1e-12);
      CHECK(br[2].q2.distance(r * q) < 1e-12);
      CHECK(br[3].q1.distance(r * q) < 1e-12);
      CHECK(br[3].q2.distance(r) < 1e-12);
      for (int k = 0; k < 4; ++k) CHECK(br[k].label.index() == k);
    }
  }
  SUBCASE("rotations about e3 commute with S and fold the sheets in pairs") {
    for (double angle : {0.05, 0.2, 0.5}) {
      const Orthogonal3 q = rotation_from_axis_angle(Vec3::UnitZ(), angle);
      CHECK((b.s * q).distance(q * b.s) < 1e-15);
      CHECK(midpoint_reflection(q).distance(b.s) < 1e-12);
      const Ramification ram = ramification_defect(solve(q));
      CHECK(ram.distinct == 2);
    }
  }
  SUBCASE("generic rotation has four sheets") {
    const Orthogonal3 q = rotation_from_axis_angle(kDiagonal, 0.3);
    const Branches br = solve(q);
    for (const auto& s : br) {
      CHECK(s.residual_eq4 < 1e-9);
      CHECK(s.residual_eq2 < 1e-9);
    }
    CHECK(ramification_defect(br).distinct == 4);
    CHECK(oracle_count(q).count == 4);
  }
  SUBCASE("orthogonality bookkeeping on random sheets") {
    Sampler rng(62);
    for (int i = 0; i < 200; ++i) {
      for (const auto& s : solve(rng.rotation_with_angle(0.05, 0.5))) {
        CHECK(s.q1.det_sign() == -1);
        CHECK(s.q2.det_sign() == -1);
        CHECK(std::abs(s.q1.matrix().determinant() + 1.0) < 1e-12);
        CHECK(std::abs(s.q2.matrix().determinant() + 1.0) < 1e-12);
        CHECK(std::abs((s.q1 * b.e1).dot(s.q1 * b.e2)) < 1e-12);
        CHECK(std::abs((s.q2 * b.e1).dot(s.q2 * b.e2)) < 1e-12);
        CHECK(s.residual_eq4 < 1e-9);
      }
    }
  }
  SUBCASE("outside the neighborhood") {
    // Half-turn about e3 sends e1 to −e1.
    CHECK_THROWS_AS(solve(rotation_from_axis_angle(Vec3::UnitZ(), kPi)), NeighborhoodError);
    // Half-turn about (e1 + e2)/√2 swaps e1 and e2: equal midpoints.
    CHECK_THROWS_AS(solve(rotation_from_axis_angle(Vec3(1, 1, 0).normalized(), kPi)),
                    NeighborhoodError);
    CHECK_THROWS_AS(solve(-Orthogonal3::identity()), OrientationError);
  }
}

TEST_CASE("recover") {
  const TridymiteBase b = base();
  SUBCASE("aristotype values") {
    const Recovered r = recover(Orthogonal3::identity(), b.s, b.s);
    CHECK(r.r0.distance(-Orthogonal3::identity()) == 0.0);
    CHECK(r.r1.distance(b.s) == 0.0);
    CHECK(r.r2.distance(b.s) == 0.0);
  }
  SUBCASE("round trip and determinant signs") {
    Sampler rng(63);
    for (int i = 0; i < 100; ++i) {
      const Orthogonal3 q = rng.rotation_with_angle(0.05, 0.5);
      for (const auto& s : solve(q)) {
        const Recovered r = recover(s.q, s.q1, s.q2);
        CHECK((-r.r0).distance(s.q) < 1e-12);
        CHECK(r.r1.distance(s.q1) < 1e-12);
        CHECK((-(r.r2 * r.r0)).distance(s.q2) < 1e-12);
        for (const auto* m : {&r.r0, &r.r1, &r.r2}) {
          CHECK(m->det_sign() == -1);
          CHECK(std::abs(m->matrix().determinant() + 1.0) < 1e-12);
        }
      }
    }
  }
  SUBCASE("wrong signs") {
    CHECK_THROWS_AS(recover(Orthogonal3::identity(), Orthogonal3::identity(), b.s),
                    OrientationError);
    CHECK_THROWS_AS(recover(-Orthogonal3::identity(), b.s, b.s), OrientationError);
  }
}

TEST_CASE("realize") {
  const TridymiteBase b = base();
  SUBCASE("aristotype") {
    const PeriodicRealization f = realize(-Orthogonal3::identity(), b.s, b.s);
    CHECK(f.vertices.size() == 13);
    CHECK(f.edges.size() == 24);
    CHECK(f.generators.size() == 6);
    CHECK(max_edge_error(f) < 1e-12);
    CHECK(max_relation(f) < 1e-15);
    CHECK(validate(f).pass);
  }
  SUBCASE("relation rows equal −(I − R0 − R1 + R2 R0) f_i") {
    Sampler rng(64);
    for (int i = 0; i < 200; ++i) {
      // Arbitrary orientation-reversing maps: the identity is algebraic and
      // does not need the closure condition to hold.
      const Orthogonal3 r0 = -rng.rotation();
      const Orthogonal3 r1 = -rng.rotation();
      const Orthogonal3 r2 = -rng.rotation();
      const PeriodicRealization f = realize(r0, r1, r2);
      const Mat3 m = Mat3::Identity() - r0.matrix() - r1.matrix() + (r2 * r0).matrix();
      const auto g = [&](const char* label) {
        for (const auto& gen : f.generators)
          if (gen.label == label) return gen.vector;
        FAIL("missing generator");
        return Vec3(Vec3::Zero());
      };
      const Vec3 row1 = g("C2-C1") + g("D2-D1") - g("A2-A1");
      const Vec3 row2 = g("C2-C1") + g("E2-E1") - g("B2-B1");
      CHECK((row1 + m * b.f1).norm() < 1e-12);
      CHECK((row2 + m * b.f2).norm() < 1e-12);
      CHECK(max_edge_error(f) < 1e-12);
    }
  }
  SUBCASE("perturbing R1 shows up linearly in the relations") {
    const Orthogonal3 q = rotation_from_axis_angle(kDiagonal, 0.3);
    const TridymiteSolution s = solve(q)[2];
    for (double angle : {1e-3, 1e-6}) {
      const Orthogonal3 bumped = rotation_from_axis_angle(Vec3(0, 0.6, 0.8), angle) * s.r1;
      const PeriodicRealization f = realize(s.r0, bumped, s.r2);
      const Mat3 delta = bumped.matrix() - s.r1.matrix();
      const auto res = relation_residuals(f);
      CHECK(std::abs(res[0] - (delta * b.f1).norm()) < 1e-12);
      CHECK(std::abs(res[1] - (delta * b.f2).norm()) < 1e-12);
    }
  }
  SUBCASE("closure residual computed two ways") {
    Sampler rng(65);
    for (int i = 0; i < 200; ++i) {
      for (const auto& s : solve(rng.rotation_with_angle(0.05, 0.5))) {
        CHECK(s.residual_eq2 < 1e-9);
        CHECK(std::abs(max_relation(s.config) - s.residual_eq2) < 1e-12);
        CHECK(max_edge_error(s.config) < 1e-9);
      }
    }
  }
}

TEST_CASE("Z2 x Z2 action") {
  const BranchLabel swap{true, false};
  const BranchLabel reflect{false, true};
  Sampler rng(66);
  for (int i = 0; i < 50; ++i) {
    const Branches br = solve(rng.rotation_with_angle(0.05, 0.5));
    for (const auto& s : br) {
      for (const BranchLabel g : {swap, reflect}) {
        const TridymiteSolution twice = act(act(s, g), g);
        CHECK(twice.label == s.label);
        CHECK(twice.q1.distance(s.q1) < 1e-12);
        CHECK(twice.q2.distance(s.q2) < 1e-12);
      }
      const TridymiteSolution sr = act(act(s, swap), reflect);
      const TridymiteSolution rs = act(act(s, reflect), swap);
      CHECK(sr.q1.distance(rs.q1) < 1e-12);
      CHECK(sr.q2.distance(rs.q2) < 1e-12);
      // The action permutes the closed-form sheets.
      for (int k = 0; k < 4; ++k) {
        const BranchLabel g = BranchLabel::from_index(k);
        const TridymiteSolution moved = act(s, g);
        const TridymiteSolution& target = br[(s.label ^ g).index()];
        CHECK(moved.q1.distance(target.q1) < 1e-12);
        CHECK(moved.q2.distance(target.q2) < 1e-12);
      }
    }
  }
  const TridymiteSolution aristotype = solve(Orthogonal3::identity())[0];
  for (int k = 0; k < 4; ++k) {
    const TridymiteSolution moved = act(aristotype, BranchLabel::from_index(k));
    CHECK(moved.q1.distance(aristotype.q1) < 1e-12);
    CHECK(moved.q2.distance(aristotype.q2) < 1e-12);
  }
}

TEST_CASE("ramification") {
  const Ramification at_identity = ramification_defect(solve(Orthogonal3::identity()));
  CHECK(at_identity.distinct == 1);
  for (const auto& row : at_identity.distance)
    for (double d : row) CHECK(d == 0.0);

  const Ramification generic = ramification_defect(solve(rotation_from_axis_angle(kDiagonal, 0.3)));
  CHECK(generic.distinct == 4);
  for (int i = 0; i < 4; ++i) {
    CHECK(generic.distance[i][i] == 0.0);
    for (int j = 0; j < 4; ++j) CHECK(generic.distance[i][j] == generic.distance[j][i]);
  }
}

TEST_CASE("oracle_count") {
  SUBCASE("identity takes the degenerate path") {
    const OracleResult r = oracle_count(Orthogonal3::identity());
    CHECK(r.degenerate);
    CHECK(r.count == 1);
  }
  SUBCASE("generic rotations: every refined root is a closed-form sheet") {
    Sampler rng(67);
    for (int i = 0; i < 10; ++i) {
      const Orthogonal3 q = rng.rotation_with_angle(0.05, 0.5);
      const OracleResult r = oracle_count(q, 256);
      CHECK(!r.degenerate);
      CHECK(r.count == ramification_defect(solve(q)).distinct);
      CHECK(r.count == 4);
      int seen_mask = 0;
      for (const auto& root : r.roots) {
        CHECK(root.match_distance < 1e-7);
        seen_mask |= 1 << root.matched_branch;
      }
      CHECK(seen_mask == 0b1111);
    }
  }
}

TEST_CASE("tangent dimension at the aristotype") {
  for (double h : {1e-4, 1e-5, 1e-6}) {
    const TangentReport t = tangent_dimension_at_aristotype(h);
    CHECK(t.nullity == 6);
    CHECK(t.rank == 3);
    CHECK(t.singular_values.size() == 6);
  }
  CHECK_THROWS_AS(tangent_dimension_at_aristotype(1e-2), InputError);
  CHECK_THROWS_AS(tangent_dimension_at_aristotype(1e-9), InputError);
}
