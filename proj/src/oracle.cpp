#include "flexcrystal/oracle.hpp"

#include <cmath>
#include <stdexcept>

#include "flexcrystal/errors.hpp"

namespace flexcrystal::oracle {

std::string_view to_string(NewtonStatus status) {
  switch (status) {
    case NewtonStatus::converged: return "converged";
    case NewtonStatus::max_iterations: return "max_iterations";
    case NewtonStatus::singular_jacobian: return "singular_jacobian";
    case NewtonStatus::left_domain: return "left_domain";
    case NewtonStatus::line_search_failed: return "line_search_failed";
  }
  return "unknown";
}

namespace {

constexpr double kNewtonStep = 1e-7;
constexpr double kSingularDet = 1e-14;
constexpr int kMaxHalvings = 30;

Vec2 wrap(const Vec2& x, const Box2& box) {
  Vec2 out;
  for (int k = 0; k < 2; ++k) {
    const double span = box.hi[k] - box.lo[k];
    out[k] = box.lo[k] + std::fmod(std::fmod(x[k] - box.lo[k], span) + span, span);
  }
  return out;
}

bool inside(const Vec2& x, const Box2& box) {
  return (x.array() >= box.lo.array()).all() && (x.array() <= box.hi.array()).all();
}

Eigen::Matrix2d jacobian2(const ScalarSystem2& system, const Vec2& x) {
  Eigen::Matrix2d j;
  for (int k = 0; k < 2; ++k) {
    Vec2 dx = Vec2::Zero();
    dx[k] = kNewtonStep;
    j.col(k) = (system.eval(x + dx) - system.eval(x - dx)) / (2.0 * kNewtonStep);
  }
  return j;
}

}  // namespace

NewtonResult newton2(const ScalarSystem2& system, const Vec2& x0, int max_iter, double tol) {
  NewtonResult result;
  result.x = system.periodic ? wrap(x0, system.domain) : x0;
  result.residual = system.eval(result.x).norm();
  result.residual_history.push_back(result.residual);

  for (int iter = 0; iter < max_iter; ++iter) {
    if (result.residual < tol) {
      result.status = NewtonStatus::converged;
      return result;
    }
    result.iterations = iter + 1;
    const Vec2 f = system.eval(result.x);
    const Eigen::Matrix2d j = jacobian2(system, result.x);
    if (std::abs(j.determinant()) < kSingularDet) {
      result.status = NewtonStatus::singular_jacobian;
      return result;
    }
    const Vec2 step = j.partialPivLu().solve(-f);

    double scale = 1.0;
    bool accepted = false;
    bool blocked_by_boundary = false;
    for (int halving = 0; halving <= kMaxHalvings; ++halving, scale *= 0.5) {
      Vec2 trial = result.x + scale * step;
      if (system.periodic) {
        trial = wrap(trial, system.domain);
      } else if (!inside(trial, system.domain)) {
        blocked_by_boundary = true;
        continue;
      }
      const double r = system.eval(trial).norm();
      if (r < result.residual) {
        result.x = trial;
        result.residual = r;
        result.residual_history.push_back(r);
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      result.status =
          blocked_by_boundary ? NewtonStatus::left_domain : NewtonStatus::line_search_failed;
      return result;
    }
  }
  result.status = result.residual < tol ? NewtonStatus::converged : NewtonStatus::max_iterations;
  return result;
}

Vec2 GridCell::center(const Box2& box, int grid_n) const {
  const Vec2 cell = (box.hi - box.lo) / grid_n;
  return box.lo + Vec2((i + 0.5) * cell[0], (j + 0.5) * cell[1]);
}

std::vector<GridCell> grid_sign_scan(const ScalarSystem2& system, int grid_n) {
  if (grid_n < 8) throw InputError("grid_sign_scan needs grid_n >= 8");
  // Periodic domains reuse column/row 0 for the far edge so the seam is scanned.
  const int samples = system.periodic ? grid_n : grid_n + 1;
  const Vec2 cell = (system.domain.hi - system.domain.lo) / grid_n;

  std::vector<Vec2> values(static_cast<std::size_t>(samples) * samples);
  auto at = [&](int i, int j) -> Vec2& {
    return values[static_cast<std::size_t>(i) * samples + j];
  };
  for (int i = 0; i < samples; ++i) {
    for (int j = 0; j < samples; ++j) {
      at(i, j) = system.eval(system.domain.lo + Vec2(i * cell[0], j * cell[1]));
    }
  }

  auto changes = [](double a, double b, double c, double d) {
    const bool any_nonneg = a >= 0 || b >= 0 || c >= 0 || d >= 0;
    const bool any_neg = a < 0 || b < 0 || c < 0 || d < 0;
    return any_nonneg && any_neg;
  };

  std::vector<GridCell> out;
  for (int i = 0; i < grid_n; ++i) {
    for (int j = 0; j < grid_n; ++j) {
      const int i1 = (i + 1) % samples;
      const int j1 = (j + 1) % samples;
      const Vec2& a = at(i, j);
      const Vec2& b = at(i1, j);
      const Vec2& c = at(i, j1);
      const Vec2& d = at(i1, j1);
      GridCell g{i, j, changes(a[0], b[0], c[0], d[0]), changes(a[1], b[1], c[1], d[1])};
      if (g.first_changes || g.second_changes) out.push_back(g);
    }
  }
  return out;
}

Eigen::MatrixXd fd_jacobian(const VectorMap& map, const Eigen::VectorXd& at, double h) {
  if (!(h > 0.0)) throw InputError("finite-difference step must be positive");
  Eigen::MatrixXd jac;
  for (Eigen::Index k = 0; k < at.size(); ++k) {
    Eigen::VectorXd plus = at;
    Eigen::VectorXd minus = at;
    plus[k] += h;
    minus[k] -= h;
    const Eigen::VectorXd fp = map(plus);
    const Eigen::VectorXd fm = map(minus);
    if (!fp.allFinite() || !fm.allFinite() || fp.size() != fm.size()) {
      throw std::domain_error("finite-difference evaluation is not finite");
    }
    if (k == 0) jac.resize(fp.size(), at.size());
    jac.col(k) = (fp - fm) / (2.0 * h);
  }
  return jac;
}

RankReport svd_rank(const Eigen::MatrixXd& matrix, double rel_threshold) {
  if (!matrix.allFinite()) throw InputError("svd_rank needs finite entries");
  RankReport report;
  if (matrix.size() == 0) return report;
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(matrix);
  report.singular_values = svd.singularValues();
  const double sigma_max = report.singular_values.size() ? report.singular_values[0] : 0.0;
  report.threshold = rel_threshold * sigma_max;
  if (sigma_max > 0.0) {
    report.rank = static_cast<int>((report.singular_values.array() > report.threshold).count());
  }
  return report;
}

}  // namespace flexcrystal::oracle
