// flexcrystal: command-line front end for the quartz, cristobalite and
// tridymite deformation solvers.
//
// Exit codes: 0 success, 1 usage or parse error, 2 validation or degeneracy
// failure, 3 rotation outside the tridymite solvable neighborhood.
// The requested artifact goes to stdout (or --output); everything else to
// stderr. Angles are radians throughout.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "flexcrystal/cristobalite.hpp"
#include "flexcrystal/errors.hpp"
#include "flexcrystal/framework.hpp"
#include "flexcrystal/quartz.hpp"
#include "flexcrystal/tridymite.hpp"

namespace fc = flexcrystal;

namespace {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kFailed = 2,
  kOutsideNeighborhood = 3,
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Config {
  double tol = fc::kGeometricTol;
  std::uint64_t seed = 0;
  std::string output;
  std::string format;
  bool strict = false;
};

// Environment default for --tol; the flag wins when both are given.
double default_tol() {
  const char* env = std::getenv("FLEXCRYSTAL_TOL");
  if (env == nullptr || *env == '\0') return fc::kGeometricTol;
  char* end = nullptr;
  const double v = std::strtod(env, &end);
  if (end == env || *end != '\0' || !(v > 0.0)) {
    throw UsageError(std::string("FLEXCRYSTAL_TOL must be a positive number, got '") + env + "'");
  }
  return v;
}

fc::Vec3 parse_axis(const std::string& text, const char* flag) {
  std::istringstream in(text);
  fc::Vec3 v;
  char sep = 0;
  if (!(in >> v.x() >> sep) || sep != ',' || !(in >> v.y() >> sep) || sep != ',' ||
      !(in >> v.z()) || !(in >> std::ws).eof()) {
    throw UsageError(std::string(flag) + ": expected x,y,z but got '" + text + "'");
  }
  if (!v.allFinite() || v.norm() < 1e-12) {
    throw UsageError(std::string(flag) + ": axis must be a nonzero finite vector");
  }
  return v.normalized();
}

std::array<int, 3> parse_grid(const std::string& text) {
  std::istringstream in(text);
  std::array<int, 3> g{};
  char sep = 0;
  if (!(in >> g[0] >> sep) || sep != ',' || !(in >> g[1] >> sep) || sep != ',' ||
      !(in >> g[2]) || !(in >> std::ws).eof()) {
    throw UsageError("--grid: expected n_theta,n_phi0,n_phi1 but got '" + text + "'");
  }
  for (int n : g) {
    if (n < 1) throw UsageError("--grid: sample counts must be at least 1");
  }
  return g;
}

std::string resolve_format(const Config& cfg, const std::string& fallback,
                           std::initializer_list<const char*> allowed) {
  const std::string f = cfg.format.empty() ? fallback : cfg.format;
  for (const char* a : allowed) {
    if (f == a) return f;
  }
  throw UsageError("--format " + f + " is not available for this subcommand");
}

void emit(const Config& cfg, const std::string& text) {
  if (cfg.output.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(cfg.output, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + cfg.output + " for writing");
  out << text;
  if (!out) throw std::runtime_error("failed writing " + cfg.output);
}

std::string framework_text(const fc::PeriodicRealization& r, const std::string& format) {
  return format == "obj" ? fc::export_obj(r) : fc::export_json(r);
}

void print_report(std::ostream& out, const fc::ValidationReport& rep) {
  out << "max_edge_length_error " << fc::format_real(rep.max_edge_length_error) << '\n'
      << "max_relation_residual " << fc::format_real(rep.max_relation_residual) << '\n'
      << "lattice_rank " << rep.lattice_rank << '\n'
      << "smallest_lattice_singular_value "
      << fc::format_real(rep.smallest_lattice_singular_value) << '\n'
      << "pass " << (rep.pass ? "true" : "false") << '\n';
}

// ---------------------------------------------------------------- quartz

struct QuartzArgs {
  double theta = 0.0, phi0 = 0.0, phi1 = 0.0;
  std::string grid = "8,8,8";
};

int quartz_realize(const Config& cfg, const QuartzArgs& a) {
  const std::string format = resolve_format(cfg, "json", {"json", "obj"});
  const fc::quartz::QuartzConfig config =
      fc::quartz::realize(fc::quartz::QuartzChart{a.theta, a.phi0, a.phi1});
  const fc::ValidationReport rep = fc::validate(config.fragment, cfg.tol);
  print_report(std::cerr, rep);
  if (!rep.pass) {
    std::cerr << (cfg.strict ? "error" : "warning")
              << ": configuration is degenerate or violates its constraints\n";
    if (cfg.strict) return kFailed;
  }
  emit(cfg, framework_text(config.fragment, format));
  return kOk;
}

int quartz_sweep(const Config& cfg, const QuartzArgs& a) {
  resolve_format(cfg, "csv", {"csv"});
  const auto rows = fc::quartz::sweep(parse_grid(a.grid));
  std::ostringstream out;
  fc::quartz::write_sweep_csv(rows, out);
  emit(cfg, out.str());
  return kOk;
}

// ---------------------------------------------------------- cristobalite

struct RotationArgs {
  std::string axis = "0,0,1";
  double angle = 0.0;
};

int cristobalite_realize(const Config& cfg, const RotationArgs& a) {
  const std::string format = resolve_format(cfg, "json", {"json", "obj"});
  const fc::Vec3 axis = parse_axis(a.axis, "--axis");
  const auto config = fc::cristobalite::realize(fc::rotation_from_axis_angle(axis, a.angle));
  const double det = fc::cristobalite::gamma_determinant(config);
  std::cerr << "det_gamma " << fc::format_real(det) << '\n';
  if (!fc::cristobalite::is_admissible(config, cfg.tol)) {
    std::cerr << (cfg.strict ? "error" : "warning")
              << ": generators are linearly dependent (half-turn)\n";
    if (cfg.strict) return kFailed;
  }
  emit(cfg, framework_text(config.fragment, format));
  return kOk;
}

struct ScanArgs {
  int axes = 16;
  int angles = 16;
};

int cristobalite_scan(const Config& cfg, const ScanArgs& a) {
  resolve_format(cfg, "csv", {"csv"});
  if (a.axes < 1 || a.angles < 1) throw UsageError("--axes and --angles must be at least 1");
  std::ostringstream out;
  fc::cristobalite::write_scan_csv(fc::cristobalite::admissibility_scan(a.axes, a.angles), out);
  emit(cfg, out.str());
  return kOk;
}

// ------------------------------------------------------------- tridymite

struct TridymiteArgs {
  RotationArgs rotation;
  std::optional<int> branch;
  double h = 1e-5;
  int grid = 256;
  double match_tol = 1e-7;
};

int tridymite_solve(const Config& cfg, const TridymiteArgs& a) {
  const fc::Vec3 axis = parse_axis(a.rotation.axis, "--axis");
  const auto q = fc::rotation_from_axis_angle(axis, a.rotation.angle);
  const fc::tridymite::Branches branches = fc::tridymite::solve(q);
  const auto ram = fc::tridymite::ramification_defect(branches, cfg.tol);
  std::cerr << "distinct branches: " << ram.distinct << '\n';

  if (a.branch) {
    const std::string format = resolve_format(cfg, "json", {"json", "obj"});
    if (*a.branch < 0 || *a.branch > 3) throw UsageError("--branch must be 0, 1, 2 or 3");
    const auto& sheet = branches[static_cast<std::size_t>(*a.branch)];
    const fc::ValidationReport rep = fc::validate(sheet.config, cfg.tol);
    if (!rep.pass) {
      print_report(std::cerr, rep);
      if (cfg.strict) return kFailed;
    }
    emit(cfg, framework_text(sheet.config, format));
    return kOk;
  }

  resolve_format(cfg, "json", {"json"});
  bool all_valid = true;
  for (const auto& s : branches) all_valid = all_valid && fc::validate(s.config, cfg.tol).pass;
  if (!all_valid) {
    std::cerr << (cfg.strict ? "error" : "warning") << ": a sheet failed validation\n";
    if (cfg.strict) return kFailed;
  }
  emit(cfg, fc::tridymite::solutions_json(branches));
  return kOk;
}

int tridymite_tangent(const Config& cfg, const TridymiteArgs& a) {
  const auto t = fc::tridymite::tangent_dimension_at_aristotype(a.h);
  std::cerr << "jacobian rank " << t.rank << '\n';
  std::string out = std::to_string(t.nullity) + "\n";
  for (Eigen::Index k = 0; k < t.singular_values.size(); ++k) {
    out += (k ? " " : "") + fc::format_real(t.singular_values[k]);
  }
  emit(cfg, out + "\n");
  return kOk;
}

int tridymite_oracle(const Config& cfg, const TridymiteArgs& a) {
  if (a.grid < 8) throw UsageError("--grid must be at least 8");
  const fc::Vec3 axis = parse_axis(a.rotation.axis, "--axis");
  const auto q = fc::rotation_from_axis_angle(axis, a.rotation.angle);
  const auto r = fc::tridymite::oracle_count(q, a.grid, a.match_tol);
  if (r.degenerate) {
    std::cerr << "note: a chord-midpoint circle is a single point; count taken from the "
                 "closed-form sheets\n";
  }
  std::string out = std::to_string(r.count) + "\n";
  for (const auto& root : r.roots) {
    out += fc::format_real(root.angles[0]) + " " + fc::format_real(root.angles[1]) + " " +
           std::to_string(root.matched_branch) + " " + fc::format_real(root.match_distance) +
           "\n";
  }
  emit(cfg, out);
  return kOk;
}

// -------------------------------------------------------------- validate

int validate_file(const Config& cfg, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  const fc::PeriodicRealization r = fc::import_json(buf.str());
  const fc::ValidationReport rep = fc::validate(r, cfg.tol);
  std::ostringstream out;
  print_report(out, rep);
  emit(cfg, out.str());
  return rep.pass ? kOk : kFailed;
}

}  // namespace

int main(int argc, char** argv) {
  Config cfg;
  try {
    cfg.tol = default_tol();
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }

  CLI::App app{"Deformation spaces of ideal quartz, cristobalite and tridymite frameworks"};
  app.fallthrough();
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.add_option("--tol", cfg.tol, "Geometric tolerance (default 1e-9 or $FLEXCRYSTAL_TOL)")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", cfg.seed, "Seed for sampled subcommands");
  app.add_option("-o,--output", cfg.output, "Write the artifact here instead of stdout");
  app.add_option("--format", cfg.format, "json, obj or csv, depending on the subcommand")
      ->check(CLI::IsMember({"json", "obj", "csv"}));
  app.add_flag("--strict", cfg.strict, "Treat degenerate configurations as failures");

  std::function<int()> action;

  QuartzArgs qa;
  auto* quartz = app.add_subcommand("quartz", "Three-torus chart of quartz deformations");
  quartz->require_subcommand(1);
  auto* q_realize = quartz->add_subcommand("realize", "Fragment at a chart point");
  q_realize->add_option("--theta", qa.theta, "Circle angle of R0 v (radians)");
  q_realize->add_option("--phi0", qa.phi0, "Spin of R0 about R0 v (radians)");
  q_realize->add_option("--phi1", qa.phi1, "Spin of R1 about R1 v (radians)");
  q_realize->callback([&] { action = [&] { return quartz_realize(cfg, qa); }; });
  auto* q_sweep = quartz->add_subcommand("sweep", "Rank and cell determinant over a grid");
  q_sweep->add_option("--grid", qa.grid, "Samples per axis as n_theta,n_phi0,n_phi1");
  q_sweep->callback([&] { action = [&] { return quartz_sweep(cfg, qa); }; });

  RotationArgs ca;
  ScanArgs sa;
  auto* crist = app.add_subcommand("cristobalite", "SO(3) chart of cristobalite deformations");
  crist->require_subcommand(1);
  auto* c_realize = crist->add_subcommand("realize", "Fragment for one rotation");
  c_realize->add_option("--axis", ca.axis, "Rotation axis x,y,z (normalized)");
  c_realize->add_option("--angle", ca.angle, "Rotation angle (radians)");
  c_realize->callback([&] { action = [&] { return cristobalite_realize(cfg, ca); }; });
  auto* c_scan = crist->add_subcommand("scan", "det of the generators over axes x angles");
  c_scan->add_option("--axes", sa.axes, "Fibonacci-sphere axis count");
  c_scan->add_option("--angles", sa.angles, "Angles evenly spaced on [0, pi]");
  c_scan->callback([&] { action = [&] { return cristobalite_scan(cfg, sa); }; });

  TridymiteArgs ta;
  auto* trid = app.add_subcommand("tridymite", "Four-sheeted tridymite deformations");
  trid->require_subcommand(1);
  auto* t_solve = trid->add_subcommand("solve", "Closed-form sheets for a rotation Q");
  t_solve->add_option("--axis", ta.rotation.axis, "Axis of Q as x,y,z (normalized)");
  t_solve->add_option("--angle", ta.rotation.angle, "Angle of Q (radians)");
  t_solve->add_option("--branch", ta.branch, "Emit only this sheet's framework (0-3)");
  t_solve->callback([&] { action = [&] { return tridymite_solve(cfg, ta); }; });
  auto* t_tangent = trid->add_subcommand("tangent", "Tangent dimension at the aristotype");
  t_tangent->add_option("--step", ta.h, "Finite-difference step in [1e-8, 1e-3]");
  t_tangent->callback([&] { action = [&] { return tridymite_tangent(cfg, ta); }; });
  auto* t_oracle = trid->add_subcommand("oracle", "Independent four-bar solution count");
  t_oracle->add_option("--axis", ta.rotation.axis, "Axis of Q as x,y,z (normalized)");
  t_oracle->add_option("--angle", ta.rotation.angle, "Angle of Q (radians)");
  t_oracle->add_option("--grid", ta.grid, "Scan resolution per circle");
  t_oracle->add_option("--match-tol", ta.match_tol, "Root deduplication distance");
  t_oracle->callback([&] { action = [&] { return tridymite_oracle(cfg, ta); }; });

  std::string validate_path;
  auto* val = app.add_subcommand("validate", "Check a framework JSON document");
  val->add_option("path", validate_path, "Framework JSON file")->required();
  val->callback([&] { action = [&] { return validate_file(cfg, validate_path); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    return action();
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const fc::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const fc::InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const fc::NeighborhoodError& e) {
    std::cerr << "error: Q is outside the solvable neighborhood: " << e.what() << '\n';
    return kOutsideNeighborhood;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailed;
  }
}
