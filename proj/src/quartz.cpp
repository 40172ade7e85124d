#include "flexcrystal/quartz.hpp"

#include <cmath>
#include <numbers>

#include "flexcrystal/errors.hpp"

namespace flexcrystal::quartz {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double reduce_angle(double a) {
  const double r = std::fmod(a, kTwoPi);
  return r < 0.0 ? r + kTwoPi : r;
}

// Fixed reflection through a plane containing v; makes R0 and R1 reverse
// orientation while keeping R·v = w.
Orthogonal3 reflection_fixing_v(const QuartzBase& base) {
  return reflection_across_plane(base.v().cross(base.u()).normalized());
}

double triple(const Vec3& a, const Vec3& b, const Vec3& c) { return a.dot(b.cross(c)); }

}  // namespace

QuartzChart QuartzChart::reduced() const {
  return {reduce_angle(theta), reduce_angle(phi0), reduce_angle(phi1)};
}

QuartzBase base_tetrahedron() {
  QuartzBase b;
  b.a[0] = Vec3::Zero();
  b.a[1] = Vec3(1.0, 0.0, 0.0);
  b.a[2] = Vec3(0.5, std::sqrt(3.0) / 2.0, 0.0);
  b.a[3] = Vec3(0.5, std::sqrt(3.0) / 6.0, std::sqrt(6.0) / 3.0);
  b.e1 = b.a[1] - b.a[0];
  b.e2 = b.a[2] - b.a[0];
  b.e3 = b.a[3] - b.a[0];
  return b;
}

QuartzBase QuartzBase::rotated(const Orthogonal3& g) const {
  QuartzBase out;
  for (std::size_t i = 0; i < a.size(); ++i) out.a[i] = g * a[i];
  out.e1 = g * e1;
  out.e2 = g * e2;
  out.e3 = g * e3;
  return out;
}

Vec3 circle_point(double theta, const QuartzBase& base) {
  const Vec3 u = base.u();
  const Vec3 u_hat = u.normalized();
  const Vec3 centre = -0.5 * u;
  const double radius = std::sqrt(base.v().squaredNorm() - centre.squaredNorm());
  const Vec3 p = (base.e3 - base.e3.dot(u_hat) * u_hat).normalized();
  const Vec3 q = u_hat.cross(p);
  return centre + radius * (std::cos(theta) * p + std::sin(theta) * q);
}

QuartzRotations chart_to_rotations(const QuartzChart& chart, const QuartzBase& base) {
  const Vec3 v = base.v();
  const Vec3 w0 = circle_point(chart.theta, base);
  const Vec3 w1 = w0 + base.u();
  const Orthogonal3 s = reflection_fixing_v(base);
  // w0·v and w1·v stay well above −|v|², so neither rotation_circle call can
  // see antipodal input; a GeometryError here would mean corrupted base data.
  return {rotation_circle(v, w0, chart.phi0) * s, rotation_circle(v, w1, chart.phi1) * s};
}

QuartzConfig realize(const QuartzChart& chart, const QuartzBase& base) {
  const QuartzRotations rot = chart_to_rotations(chart, base);
  return realize(rot.r0, rot.r1, base);
}

QuartzConfig realize(const Orthogonal3& r0, const Orthogonal3& r1, const QuartzBase& base) {
  QuartzConfig c{r0, r1, base, {}};
  PeriodicRealization& f = c.fragment;
  const std::array<Vec3, 4>& a = base.a;

  f.add_vertex("A0", a[0]);
  f.add_vertex("A1", a[1]);
  f.add_vertex("A2", a[2]);
  f.add_vertex("A3", a[3]);
  // R0 fixes A0 and sends A_i to B_i.
  f.add_vertex("B1", a[0] + r0 * (a[1] - a[0]));
  f.add_vertex("B2", a[0] + r0 * (a[2] - a[0]));
  f.add_vertex("B3", a[0] + r0 * (a[3] - a[0]));
  // R1 fixes A1 and sends A_j to C_j.
  f.add_vertex("C0", a[1] + r1 * (a[0] - a[1]));
  f.add_vertex("C2", a[1] + r1 * (a[2] - a[1]));
  f.add_vertex("C3", a[1] + r1 * (a[3] - a[1]));

  f.add_tetrahedron("A0", "A1", "A2", "A3");
  f.add_tetrahedron("A0", "B1", "B2", "B3");
  f.add_tetrahedron("A1", "C0", "C2", "C3");

  f.generators = {
      {"B3-C2", f.position("B3") - f.position("C2")},
      {"A3-C3", f.position("A3") - f.position("C3")},
      {"B2-A2", f.position("B2") - f.position("A2")},
      {"C0-B1", f.position("C0") - f.position("B1")},
  };
  f.relations = {{1, 1, 1, 1}};
  return c;
}

std::array<Vec3, 4> generators(const QuartzConfig& config) {
  const auto& g = config.fragment.generators;
  return {g[0].vector, g[1].vector, g[2].vector, g[3].vector};
}

double closure_residual(const QuartzConfig& config) {
  const Vec3 v = config.base.v();
  return (config.r1 * v - config.r0 * v - config.base.u()).norm();
}

double cell_determinant(const QuartzConfig& config, double tol) {
  const auto g = generators(config);
  constexpr int triples[4][3] = {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}};
  for (const auto& t : triples) {
    Mat3 m;
    m << g[t[0]], g[t[1]], g[t[2]];
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(Eigen::MatrixXd{m});
    if (svd.singularValues()(2) > tol) return m.determinant();
  }
  return triple(g[0], g[1], g[2]);
}

namespace {

Eigen::Vector3d generator_singular_values(const QuartzConfig& config) {
  return Eigen::JacobiSVD<Eigen::MatrixXd>(config.fragment.generator_matrix()).singularValues();
}

}  // namespace

bool is_degenerate(const QuartzConfig& config, double tol) {
  return generator_singular_values(config)[2] <= tol;
}

std::optional<QuartzChart> find_degenerate_chart(int grid_n) {
  if (grid_n < 2) throw InputError("degenerate-chart scan needs at least 2 samples per axis");
  const double step = kTwoPi / grid_n;
  auto det_at = [](const QuartzChart& c) {
    const auto g = generators(realize(c));
    return triple(g[0], g[1], g[2]);
  };

  for (int i = 0; i < grid_n; ++i) {
    for (int j = 0; j < grid_n; ++j) {
      QuartzChart lo{i * step, j * step, 0.0};
      double f_lo = det_at(lo);
      for (int k = 1; k <= grid_n; ++k) {
        QuartzChart hi{i * step, j * step, k * step};
        const double f_hi = det_at(hi);
        if ((f_lo < 0.0) != (f_hi < 0.0)) {
          // Bisect on phi1 until the bracket stops shrinking.
          for (int it = 0; it < 200; ++it) {
            QuartzChart mid = lo;
            mid.phi1 = 0.5 * (lo.phi1 + hi.phi1);
            if (mid.phi1 == lo.phi1 || mid.phi1 == hi.phi1) break;
            const double f_mid = det_at(mid);
            if ((f_mid < 0.0) == (f_lo < 0.0)) {
              lo = mid;
              f_lo = f_mid;
            } else {
              hi = mid;
            }
          }
          QuartzChart best = std::abs(det_at(lo)) <= std::abs(det_at(hi)) ? lo : hi;
          best = best.reduced();
          if (is_degenerate(realize(best))) return best;
          lo = QuartzChart{i * step, j * step, k * step};
          f_lo = det_at(lo);
          continue;
        }
        lo = hi;
        f_lo = f_hi;
      }
    }
  }
  return std::nullopt;
}

std::vector<SweepRow> sweep(const std::array<int, 3>& counts, double tol) {
  for (int n : counts) {
    if (n < 1) throw InputError("sweep sample counts must be at least 1");
  }
  std::vector<SweepRow> rows;
  rows.reserve(static_cast<std::size_t>(counts[0]) * counts[1] * counts[2]);
  for (int i = 0; i < counts[0]; ++i) {
    for (int j = 0; j < counts[1]; ++j) {
      for (int k = 0; k < counts[2]; ++k) {
        const QuartzChart chart{kTwoPi * i / counts[0], kTwoPi * j / counts[1],
                                kTwoPi * k / counts[2]};
        const QuartzConfig config = realize(chart);
        const Eigen::Vector3d sv = generator_singular_values(config);
        rows.push_back({chart, static_cast<int>((sv.array() > tol).count()), sv[2],
                        cell_determinant(config, tol)});
      }
    }
  }
  return rows;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
  out << "theta,phi0,phi1,rank,sigma_min,cell_det\n";
  for (const SweepRow& r : rows) {
    out << format_real(r.chart.theta) << ',' << format_real(r.chart.phi0) << ','
        << format_real(r.chart.phi1) << ',' << r.rank << ',' << format_real(r.sigma_min) << ','
        << format_real(r.cell_det) << '\n';
  }
}

}  // namespace flexcrystal::quartz
