#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "flexcrystal/geom3.hpp"

namespace flexcrystal {

struct LabeledPoint {
  std::string label;
  Vec3 position;
};

struct Edge {
  std::size_t u = 0;
  std::size_t v = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct Generator {
  std::string label;
  Vec3 vector;
};

/// Finite fragment of a periodic framework: labeled joints, unit bars between
/// them, a set of lattice generators, and integer linear relations the
/// generators must satisfy (one row per relation, one coefficient per
/// generator).
struct PeriodicRealization {
  std::vector<LabeledPoint> vertices;
  std::vector<Edge> edges;
  std::vector<Generator> generators;
  std::vector<std::vector<int>> relations;

  /// Index of the vertex with this label; throws StructuralError if absent.
  std::size_t index_of(std::string_view label) const;
  const Vec3& position(std::string_view label) const;

  std::size_t add_vertex(std::string label, const Vec3& position);
  void add_edge(std::string_view a, std::string_view b);
  /// All six edges among four labeled vertices.
  void add_tetrahedron(std::string_view a, std::string_view b, std::string_view c,
                       std::string_view d);

  /// 3 x k matrix whose columns are the generator vectors.
  Eigen::Matrix<double, 3, Eigen::Dynamic> generator_matrix() const;
};

struct ValidationReport {
  double max_edge_length_error = 0.0;
  double max_relation_residual = 0.0;
  int lattice_rank = 0;
  double smallest_lattice_singular_value = 0.0;
  bool pass = false;
};

// Singular values of the generator matrix at or below this count as zero.
inline constexpr double kLatticeRankTol = 1e-9;

/// Checks unit edges, generator relations, and that the generators span
/// three dimensions. Throws StructuralError on out-of-range indices or
/// relation rows of the wrong length.
///
/// `tol` bounds edge and relation errors; `rank_tol` is the singular value
/// threshold for the lattice rank. Keeping them separate makes `pass`
/// monotone in `tol`.
ValidationReport validate(const PeriodicRealization& realization,
                          double tol = kGeometricTol, double rank_tol = kLatticeRankTol);

/// Residual norm of each relation row.
std::vector<double> relation_residuals(const PeriodicRealization& realization);

std::string export_json(const PeriodicRealization& realization);
PeriodicRealization import_json(std::string_view text);

/// Wavefront text: "v x y z" per vertex, "l i j" (1-based) per edge.
std::string export_obj(const PeriodicRealization& realization);

/// "%.17g" rendering shared by every text format in the project.
std::string format_real(double x);

}  // namespace flexcrystal
