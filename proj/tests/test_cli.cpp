#include <cstdio>
#include <string>

#include <doctest.h>
#include <json.hpp>

#include "flexcrystal/cristobalite.hpp"
#include "flexcrystal/framework.hpp"
#include "flexcrystal/quartz.hpp"
#include "support/process.hpp"

using namespace flexcrystal;
using flexcrystal::testing::line_count;
using flexcrystal::testing::run_cli;
using flexcrystal::testing::scratch_dir;

namespace {

std::string write_file(const std::string& name, const std::string& text) {
  const auto path = scratch_dir() / name;
  std::FILE* f = std::fopen(path.c_str(), "wb");
  std::fwrite(text.data(), 1, text.size(), f);
  std::fclose(f);
  return path.string();
}

}  // namespace

TEST_CASE("quartz subcommands") {
  SUBCASE("realize at the chart origin") {
    const auto r = run_cli("quartz realize --theta 0 --phi0 0 --phi1 0 --format json");
    CHECK(r.exit_code == 0);
    const PeriodicRealization f = import_json(r.out);
    CHECK(f.generators.size() == 4);
    REQUIRE(f.relations.size() == 1);
    CHECK(f.relations[0] == std::vector<int>{1, 1, 1, 1});
    CHECK(r.err.find("pass true") != std::string::npos);
  }
  SUBCASE("realize as OBJ") {
    const auto r = run_cli("quartz realize --theta 1 --format obj");
    CHECK(r.exit_code == 0);
    CHECK(r.out.rfind("v 0 0 0\n", 0) == 0);
    CHECK(line_count(r.out) == 10 + 18);
  }
  SUBCASE("sweep row count") {
    const auto r = run_cli("quartz sweep --grid 8,8,8");
    CHECK(r.exit_code == 0);
    CHECK(line_count(r.out) == 1 + 512);
    CHECK(r.out.rfind("theta,phi0,phi1,rank,sigma_min,cell_det\n", 0) == 0);
  }
  SUBCASE("degenerate point under --strict") {
    const auto chart = quartz::find_degenerate_chart();
    REQUIRE(chart.has_value());
    const std::string args = " --theta " + format_real(chart->theta) + " --phi0 " +
                             format_real(chart->phi0) + " --phi1 " + format_real(chart->phi1);
    CHECK(run_cli("quartz realize --strict" + args).exit_code == 2);
    const auto lenient = run_cli("quartz realize" + args);
    CHECK(lenient.exit_code == 0);
    CHECK(lenient.err.find("warning") != std::string::npos);
    CHECK(lenient.err.find("lattice_rank 2") != std::string::npos);
  }
  SUBCASE("usage errors") {
    const auto r = run_cli("quartz realize --theta abc");
    CHECK(r.exit_code == 1);
    CHECK(r.err.find("--theta") != std::string::npos);
    CHECK(run_cli("quartz sweep --grid 8,8").exit_code == 1);
    CHECK(run_cli("quartz sweep --grid 0,1,1").exit_code == 1);
    CHECK(run_cli("quartz sweep --format json").exit_code == 1);
    CHECK(run_cli("quartz").exit_code == 1);
  }
}

TEST_CASE("cristobalite subcommands") {
  SUBCASE("aristotype generators are −2 s_i") {
    const auto r = run_cli("cristobalite realize --axis 0,0,1 --angle 0");
    CHECK(r.exit_code == 0);
    const PeriodicRealization f = import_json(r.out);
    const auto s = cristobalite::fixed_vertices();
    REQUIRE(f.generators.size() == 3);
    for (int i = 0; i < 3; ++i) CHECK(f.generators[i].vector == -2.0 * s[i]);
  }
  SUBCASE("half-turn under --strict") {
    CHECK(run_cli("cristobalite realize --axis 0,0,1 --angle 3.14159265 --strict").exit_code == 2);
    CHECK(run_cli("cristobalite realize --axis 0,0,1 --angle 3.14159265").exit_code == 0);
  }
  SUBCASE("scan row count") {
    const auto r = run_cli("cristobalite scan --axes 16 --angles 16");
    CHECK(r.exit_code == 0);
    CHECK(line_count(r.out) == 1 + 256);
  }
  SUBCASE("zero axis") {
    CHECK(run_cli("cristobalite realize --axis 0,0,0 --angle 1").exit_code == 1);
  }
}

TEST_CASE("tridymite subcommands") {
  SUBCASE("solve at the aristotype") {
    const auto r = run_cli("tridymite solve --axis 0,0,1 --angle 0");
    CHECK(r.exit_code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    REQUIRE(doc.is_array());
    CHECK(doc.size() == 4);
    CHECK(doc[3]["label"]["swap"] == 1);
    CHECK(doc[3]["label"]["reflect"] == 1);
    CHECK(doc[0]["config"]["vertices"].size() == 13);
    CHECK(r.err.find("distinct branches: 1") != std::string::npos);
  }
  SUBCASE("solve for a generic rotation") {
    const auto r = run_cli("tridymite solve --axis 1,1,1 --angle 0.3");
    CHECK(r.exit_code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    for (const auto& b : doc) {
      CHECK(b["residual_eq4"].get<double>() < 1e-9);
      CHECK(b["residual_eq2"].get<double>() < 1e-9);
      CHECK(b["R0"].size() == 3);
    }
    CHECK(r.err.find("distinct branches: 4") != std::string::npos);
  }
  SUBCASE("outside the neighborhood") {
    const auto r = run_cli("tridymite solve --axis 0,0,1 --angle 3.141592653589793");
    CHECK(r.exit_code == 3);
    CHECK(r.err.find("midpoint") != std::string::npos);
    CHECK(run_cli("tridymite solve --axis 1,1,0 --angle 3.141592653589793").exit_code == 3);
  }
  SUBCASE("tangent") {
    const auto r = run_cli("tridymite tangent");
    CHECK(r.exit_code == 0);
    CHECK(r.out.rfind("6\n", 0) == 0);
    CHECK(run_cli("tridymite tangent --step 1").exit_code == 1);
  }
  SUBCASE("oracle") {
    const auto r = run_cli("tridymite oracle --axis 0.577,0.577,0.577 --angle 0.3 --grid 256");
    CHECK(r.exit_code == 0);
    CHECK(r.out.rfind("4\n", 0) == 0);
    CHECK(line_count(r.out) == 5);
  }
}

TEST_CASE("validate subcommand") {
  SUBCASE("a solve branch validates") {
    const auto solved = run_cli("tridymite solve --axis 1,2,3 --angle 0.2 --branch 3");
    REQUIRE(solved.exit_code == 0);
    const auto r = run_cli("validate '" + write_file("branch.json", solved.out) + "'");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("pass true") != std::string::npos);
  }
  SUBCASE("a stretched edge fails") {
    PeriodicRealization f = cristobalite::realize(Orthogonal3::identity()).fragment;
    f.vertices[f.index_of("s1")].position *= 1.1;
    const auto r = run_cli("validate '" + write_file("bad.json", export_json(f)) + "'");
    CHECK(r.exit_code == 2);
    CHECK(r.out.find("pass false") != std::string::npos);
  }
  SUBCASE("malformed documents") {
    CHECK(run_cli("validate '" + write_file("junk.json", "{\"vertices\": [") + "'").exit_code ==
          1);
    const auto r = run_cli("validate '" + write_file("nopos.json",
                                                     R"({"vertices":[{"label":"a"}],"edges":[],"generators":[],"relations":[]})") +
                           "'");
    CHECK(r.exit_code == 1);
    CHECK(r.err.find("/vertices/0/pos") != std::string::npos);
    CHECK(run_cli("validate /nonexistent/file.json").exit_code == 1);
  }
}

TEST_CASE("global options") {
  SUBCASE("identical invocations are byte-identical") {
    const auto a = run_cli("tridymite solve --axis 0.3,-0.2,0.9 --angle 0.4");
    const auto b = run_cli("tridymite solve --axis 0.3,-0.2,0.9 --angle 0.4");
    CHECK(a.out == b.out);
    CHECK(a.err == b.err);
    CHECK(run_cli("quartz sweep --grid 3,3,3").out == run_cli("quartz sweep --grid 3,3,3").out);
  }
  SUBCASE("tolerance from the environment and the flag") {
    // Near-half-turn: |det γ| ≈ 2.8e-6.
    const std::string cmd = "cristobalite realize --axis 0,0,1 --angle 3.14 --strict";
    CHECK(run_cli(cmd).exit_code == 0);
    CHECK(run_cli(cmd, "FLEXCRYSTAL_TOL=1e-3").exit_code == 2);
    CHECK(run_cli("--tol 1e-9 " + cmd, "FLEXCRYSTAL_TOL=1e-3").exit_code == 0);
    CHECK(run_cli(cmd, "FLEXCRYSTAL_TOL=bogus").exit_code == 1);
  }
  SUBCASE("output file") {
    const auto path = (scratch_dir() / "sweep.csv").string();
    const auto r = run_cli("quartz sweep --grid 2,2,2 -o '" + path + "'");
    CHECK(r.exit_code == 0);
    CHECK(r.out.empty());
    CHECK(line_count(flexcrystal::testing::slurp(path)) == 9);
  }
}
