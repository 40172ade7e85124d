#include "flexcrystal/framework.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "flexcrystal/errors.hpp"

namespace flexcrystal {

using json = nlohmann::json;

std::size_t PeriodicRealization::index_of(std::string_view label) const {
  const auto it = std::find_if(vertices.begin(), vertices.end(),
                               [&](const LabeledPoint& p) { return p.label == label; });
  if (it == vertices.end()) {
    throw StructuralError("no vertex labeled '" + std::string(label) + "'");
  }
  return static_cast<std::size_t>(it - vertices.begin());
}

const Vec3& PeriodicRealization::position(std::string_view label) const {
  return vertices[index_of(label)].position;
}

std::size_t PeriodicRealization::add_vertex(std::string label, const Vec3& position) {
  vertices.push_back({std::move(label), position});
  return vertices.size() - 1;
}

void PeriodicRealization::add_edge(std::string_view a, std::string_view b) {
  edges.push_back({index_of(a), index_of(b)});
}

void PeriodicRealization::add_tetrahedron(std::string_view a, std::string_view b,
                                          std::string_view c, std::string_view d) {
  const std::string_view corners[] = {a, b, c, d};
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) add_edge(corners[i], corners[j]);
  }
}

Eigen::Matrix<double, 3, Eigen::Dynamic> PeriodicRealization::generator_matrix() const {
  Eigen::Matrix<double, 3, Eigen::Dynamic> g(3, static_cast<Eigen::Index>(generators.size()));
  for (std::size_t k = 0; k < generators.size(); ++k) {
    g.col(static_cast<Eigen::Index>(k)) = generators[k].vector;
  }
  return g;
}

namespace {

void check_structure(const PeriodicRealization& r) {
  const std::size_t n = r.vertices.size();
  for (std::size_t k = 0; k < r.edges.size(); ++k) {
    const Edge& e = r.edges[k];
    if (e.u >= n || e.v >= n) {
      std::ostringstream msg;
      msg << "edge " << k << " references vertex outside [0, " << n << ")";
      throw StructuralError(msg.str());
    }
  }
  for (std::size_t k = 0; k < r.relations.size(); ++k) {
    if (r.relations[k].size() != r.generators.size()) {
      std::ostringstream msg;
      msg << "relation " << k << " has " << r.relations[k].size()
          << " coefficients for " << r.generators.size() << " generators";
      throw StructuralError(msg.str());
    }
  }
}

}  // namespace

std::vector<double> relation_residuals(const PeriodicRealization& realization) {
  check_structure(realization);
  std::vector<double> out;
  out.reserve(realization.relations.size());
  for (const auto& row : realization.relations) {
    Vec3 sum = Vec3::Zero();
    for (std::size_t k = 0; k < row.size(); ++k) {
      sum += row[k] * realization.generators[k].vector;
    }
    out.push_back(sum.norm());
  }
  return out;
}

ValidationReport validate(const PeriodicRealization& realization, double tol, double rank_tol) {
  check_structure(realization);
  ValidationReport report;
  for (const Edge& e : realization.edges) {
    const double len =
        (realization.vertices[e.u].position - realization.vertices[e.v].position).norm();
    report.max_edge_length_error = std::max(report.max_edge_length_error, std::abs(len - 1.0));
  }
  for (double r : relation_residuals(realization)) {
    report.max_relation_residual = std::max(report.max_relation_residual, r);
  }

  const auto g = realization.generator_matrix();
  if (g.cols() > 0) {
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(g);
    const Eigen::VectorXd& sv = svd.singularValues();
    report.lattice_rank = static_cast<int>((sv.array() > rank_tol).count());
    // Fewer than three generators leaves a zero singular value implicit.
    report.smallest_lattice_singular_value = sv.size() < 3 ? 0.0 : sv.minCoeff();
  }

  report.pass = report.max_edge_length_error < tol && report.max_relation_residual < tol &&
                report.lattice_rank == 3;
  return report;
}

std::string format_real(double x) {
  if (!std::isfinite(x)) throw InputError("cannot serialize a non-finite number");
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

std::string vec_json(const Vec3& v) {
  return "[" + format_real(v.x()) + ", " + format_real(v.y()) + ", " + format_real(v.z()) + "]";
}

}  // namespace

std::string export_json(const PeriodicRealization& realization) {
  check_structure(realization);
  std::string out = "{\n  \"vertices\": [";
  for (std::size_t i = 0; i < realization.vertices.size(); ++i) {
    const auto& p = realization.vertices[i];
    out += i ? ",\n    " : "\n    ";
    out += "{\"label\": " + json(p.label).dump() + ", \"pos\": " + vec_json(p.position) + "}";
  }
  out += realization.vertices.empty() ? "],\n" : "\n  ],\n";

  out += "  \"edges\": [";
  for (std::size_t i = 0; i < realization.edges.size(); ++i) {
    const auto& e = realization.edges[i];
    out += i ? ", " : "";
    out += "[" + std::to_string(e.u) + ", " + std::to_string(e.v) + "]";
  }
  out += "],\n";

  out += "  \"generators\": [";
  for (std::size_t i = 0; i < realization.generators.size(); ++i) {
    const auto& g = realization.generators[i];
    out += i ? ",\n    " : "\n    ";
    out += "{\"label\": " + json(g.label).dump() + ", \"vec\": " + vec_json(g.vector) + "}";
  }
  out += realization.generators.empty() ? "],\n" : "\n  ],\n";

  out += "  \"relations\": [";
  for (std::size_t i = 0; i < realization.relations.size(); ++i) {
    out += i ? ", [" : "[";
    const auto& row = realization.relations[i];
    for (std::size_t k = 0; k < row.size(); ++k) {
      out += (k ? ", " : "") + std::to_string(row[k]);
    }
    out += "]";
  }
  out += "]\n}\n";
  return out;
}

namespace {

const json& field(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) throw ParseError(path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(path + "/" + key, "missing field");
  return *it;
}

const json& array_field(const json& obj, const char* key, const std::string& path) {
  const json& a = field(obj, key, path);
  if (!a.is_array()) throw ParseError(path + "/" + key, "expected an array");
  return a;
}

std::string string_field(const json& obj, const char* key, const std::string& path) {
  const json& s = field(obj, key, path);
  if (!s.is_string()) throw ParseError(path + "/" + key, "expected a string");
  return s.get<std::string>();
}

Vec3 vec_field(const json& obj, const char* key, const std::string& path) {
  const json& a = field(obj, key, path);
  const std::string here = path + "/" + key;
  if (!a.is_array() || a.size() != 3) throw ParseError(here, "expected three coordinates");
  Vec3 v;
  for (int i = 0; i < 3; ++i) {
    if (!a[i].is_number()) {
      throw ParseError(here + "/" + std::to_string(i), "expected a number");
    }
    v[i] = a[i].get<double>();
  }
  return v;
}

long long integer_at(const json& x, const std::string& path) {
  if (!x.is_number_integer()) throw ParseError(path, "expected an integer");
  return x.get<long long>();
}

}  // namespace

PeriodicRealization import_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("", std::string("malformed JSON: ") + e.what());
  }

  PeriodicRealization r;
  const json& vertices = array_field(doc, "vertices", "");
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const std::string path = "/vertices/" + std::to_string(i);
    r.vertices.push_back({string_field(vertices[i], "label", path),
                          vec_field(vertices[i], "pos", path)});
  }

  const json& edges = array_field(doc, "edges", "");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::string path = "/edges/" + std::to_string(i);
    if (!edges[i].is_array() || edges[i].size() != 2) {
      throw ParseError(path, "expected a pair of vertex indices");
    }
    const long long u = integer_at(edges[i][0], path + "/0");
    const long long v = integer_at(edges[i][1], path + "/1");
    const auto n = static_cast<long long>(r.vertices.size());
    if (u < 0 || u >= n) throw ParseError(path + "/0", "vertex index out of range");
    if (v < 0 || v >= n) throw ParseError(path + "/1", "vertex index out of range");
    r.edges.push_back({static_cast<std::size_t>(u), static_cast<std::size_t>(v)});
  }

  const json& generators = array_field(doc, "generators", "");
  for (std::size_t i = 0; i < generators.size(); ++i) {
    const std::string path = "/generators/" + std::to_string(i);
    r.generators.push_back({string_field(generators[i], "label", path),
                            vec_field(generators[i], "vec", path)});
  }

  const json& relations = array_field(doc, "relations", "");
  for (std::size_t i = 0; i < relations.size(); ++i) {
    const std::string path = "/relations/" + std::to_string(i);
    if (!relations[i].is_array()) throw ParseError(path, "expected an array of integers");
    if (relations[i].size() != r.generators.size()) {
      throw ParseError(path, "relation length does not match generator count");
    }
    std::vector<int> row;
    for (std::size_t k = 0; k < relations[i].size(); ++k) {
      row.push_back(static_cast<int>(integer_at(relations[i][k], path + "/" + std::to_string(k))));
    }
    r.relations.push_back(std::move(row));
  }
  return r;
}

std::string export_obj(const PeriodicRealization& realization) {
  check_structure(realization);
  std::string out;
  for (const auto& p : realization.vertices) {
    out += "v " + format_real(p.position.x()) + " " + format_real(p.position.y()) + " " +
           format_real(p.position.z()) + "\n";
  }
  for (const auto& e : realization.edges) {
    out += "l " + std::to_string(e.u + 1) + " " + std::to_string(e.v + 1) + "\n";
  }
  return out;
}

}  // namespace flexcrystal
