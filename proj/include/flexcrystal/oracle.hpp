#pragma once

#include <functional>
#include <numbers>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace flexcrystal::oracle {

using Vec2 = Eigen::Vector2d;

struct Box2 {
  Vec2 lo{0.0, 0.0};
  Vec2 hi{2.0 * std::numbers::pi, 2.0 * std::numbers::pi};
};

/// A map R² -> R² on a rectangular domain. When `periodic` is set the domain
/// is a torus: iterates wrap and grid scans compare across the seam.
struct ScalarSystem2 {
  std::function<Vec2(const Vec2&)> eval;
  Box2 domain;
  bool periodic = true;
  bool continuous = true;
};

enum class NewtonStatus {
  converged,
  max_iterations,
  singular_jacobian,
  left_domain,
  line_search_failed,
};

std::string_view to_string(NewtonStatus status);

struct NewtonResult {
  NewtonStatus status = NewtonStatus::max_iterations;
  Vec2 x = Vec2::Zero();
  double residual = 0.0;
  int iterations = 0;
  // ‖F‖ after each accepted step, starting with the initial point.
  std::vector<double> residual_history;

  bool ok() const { return status == NewtonStatus::converged; }
};

/// Damped Newton iteration with a central-difference Jacobian (h = 1e-7).
/// A step that increases ‖F‖ or leaves a non-periodic box is halved, at
/// most 30 times; exhausting the halvings against the boundary reports
/// left_domain.
NewtonResult newton2(const ScalarSystem2& system, const Vec2& x0, int max_iter = 50,
                     double tol = 1e-12);

struct GridCell {
  int i = 0;  // index along the first coordinate
  int j = 0;
  bool first_changes = false;
  bool second_changes = false;

  bool both_change() const { return first_changes && second_changes; }
  Vec2 center(const Box2& box, int grid_n) const;
};

/// Cells of a grid_n x grid_n lattice over the domain on which either
/// component of F changes sign between corners. Row-major order (i outer).
/// Throws InputError for grid_n < 8.
std::vector<GridCell> grid_sign_scan(const ScalarSystem2& system, int grid_n);

using VectorMap = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

/// Central-difference Jacobian. Throws InputError for h <= 0 and
/// std::domain_error on non-finite evaluations.
Eigen::MatrixXd fd_jacobian(const VectorMap& map, const Eigen::VectorXd& at, double h);

struct RankReport {
  Eigen::VectorXd singular_values;  // descending
  int rank = 0;
  double threshold = 0.0;  // absolute cut actually applied
};

/// Rank as the number of singular values above rel_threshold * σ_max.
RankReport svd_rank(const Eigen::MatrixXd& matrix, double rel_threshold);

}  // namespace flexcrystal::oracle
