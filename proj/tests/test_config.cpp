// Copyright (c) 2026 the nhdfem developers.
// SPDX-License-Identifier: Apache-2.0

#include <filesystem>
#include <sstream>

#include <doctest.h>

#include "nhdfem/config.hpp"

using namespace nhdfem;

namespace {

RunConfig parse_str(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

}  // namespace

TEST_CASE("defaults parse from an empty stream") {
  const RunConfig cfg = parse_str("");
  CHECK(cfg.problem == "manufactured");
  CHECK(cfg.order == 1);
  CHECK(cfg.levels == 3);
  CHECK(cfg.mesh.source == "box");
  CHECK(cfg.solver.method == "direct");
  CHECK(cfg.solver.tol == 1e-10);
}

TEST_CASE("parse then serialize then parse is a fixpoint") {
  const std::string text = R"(
problem = scattering
order = 2
levels = 1

[mesh]
source = ball
ball_n = 8
ball_metal_shell = 2
ball_r_metal = 0.25
ball_r_outer = 1
diameter = 0.5
boundary_marker = 2
surface_marker = 1

[physics]
omega_p = 1
gamma = 0.05
beta = 0.1234567890123456
omega_list = 0.5 0.65 0.8

[solver]
method = gmres
tol = 1e-9

[output]
dir = run_out
vtk_omegas = 0.65
)";
  const RunConfig a = parse_str(text);
  const std::string sa = serialize_config(a);
  const RunConfig b = parse_str(sa);
  const std::string sb = serialize_config(b);
  CHECK(sa == sb);
  CHECK(b.physics.params.beta == a.physics.params.beta);
  CHECK(b.physics.omega_list == a.physics.omega_list);
  CHECK(b.output.vtk_omegas == a.output.vtk_omegas);
  CHECK(b.solver.method == "gmres");
  CHECK(b.mesh.diameter == 0.5);
}

TEST_CASE("comments and blank lines are ignored") {
  const RunConfig cfg = parse_str(
      "# leading comment\n"
      "problem = dispersion   ; trailing comment\n"
      "\n"
      "[physics]  # section comment\n"
      "omega_count = 7\n");
  CHECK(cfg.problem == "dispersion");
  CHECK(cfg.physics.omega_count == 7);
}

TEST_CASE("unknown keys and sections are rejected with line numbers") {
  SUBCASE("unknown key") {
    try {
      parse_str("problem = manufactured\nbogus = 1\n");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
      CHECK(std::string(e.what()).find("bogus") != std::string::npos);
    }
  }
  SUBCASE("unknown section") {
    try {
      parse_str("\n\n[nope]\n");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 3);
    }
  }
  SUBCASE("key valid only in another section") {
    CHECK_THROWS_AS(parse_str("[mesh]\ntol = 1e-8\n"), ParseError);
  }
  SUBCASE("missing equals") {
    CHECK_THROWS_AS(parse_str("problem manufactured\n"), ParseError);
  }
  SUBCASE("unterminated section") {
    CHECK_THROWS_AS(parse_str("[mesh\n"), ParseError);
  }
}

TEST_CASE("malformed values are rejected") {
  CHECK_THROWS_AS(parse_str("order = two\n"), ParseError);
  CHECK_THROWS_AS(parse_str("[physics]\ngamma = 0.1x\n"), ParseError);
  CHECK_THROWS_AS(parse_str("[physics]\nomega_list = 0.5 oops\n"), ParseError);
}

TEST_CASE("semantic constraints are enforced") {
  CHECK_THROWS_AS(parse_str("problem = eigen\n"), ParseError);
  CHECK_THROWS_AS(parse_str("order = 3\n"), ParseError);
  CHECK_THROWS_AS(parse_str("levels = 0\n"), ParseError);
  CHECK_THROWS_AS(parse_str("[mesh]\nsource = gmsh\n"), ParseError);
  CHECK_THROWS_AS(parse_str("[solver]\nmethod = cg\n"), ParseError);
  CHECK_THROWS_AS(parse_str("[physics]\nomega_count = 0\n"), ParseError);
}

TEST_CASE("file loader reports unopenable paths") {
  CHECK_THROWS_AS(parse_config_file("/nonexistent/path/run.cfg"), ParseError);
}

#ifdef NHDFEM_CONFIG_DIR
TEST_CASE("shipped example configs parse and round-trip") {
  namespace fs = std::filesystem;
  int seen = 0;
  for (const auto& entry : fs::directory_iterator(NHDFEM_CONFIG_DIR)) {
    if (entry.path().extension() != ".cfg") continue;
    ++seen;
    INFO("config ", entry.path().string());
    const RunConfig cfg = parse_config_file(entry.path().string());
    const std::string once = serialize_config(cfg);
    const std::string twice = serialize_config(parse_str(once));
    CHECK(once == twice);
  }
  CHECK(seen >= 4);
}
#endif
