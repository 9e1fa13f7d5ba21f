#include <doctest.h>

#include <cmath>
#include <string>

#include "skewtor/report.hpp"
#include "skewtor/theorem.hpp"

using namespace skewtor;

namespace {

RunConfig small_config(const char* command) {
  RunConfig c;
  c.command = command;
  c.order = 12;
  c.points = 6;
  c.directions = 3;
  c.seed = 7;
  return c;
}

GeometrySpec spec(const std::string& name, std::map<std::string, double> params = {}) {
  return GeometrySpec{name, std::move(params)};
}

const nlohmann::ordered_json* find_check(const Output& out, const std::string& name) {
  for (const auto& c : out.json["checks"])
    if (c["name"] == name) return &c;
  return nullptr;
}

}  // namespace

TEST_CASE("verify passes on round_s3 with r = 1, c = 1") {
  RunConfig c = small_config("verify");
  c.order = 16;
  const Output out = run_verify(c, spec("round_s3", {{"r", 1.0}, {"c", 1.0}}));
  for (const auto& ch : out.json["checks"]) {
    CAPTURE(ch.dump());
    CHECK(ch["pass"].get<bool>());
  }
  CHECK(out.pass);
  CHECK(out.json["schema"] == 1);
  CHECK(out.json["seed"] == 7);
  CHECK(find_check(out, "first-variation-theorem") != nullptr);
  CHECK(find_check(out, "cross-validation") != nullptr);
  CHECK(find_check(out, "parallel-sigma") != nullptr);
}

TEST_CASE("a wrong-sign Ricci route fails the ricci-relation check only") {
  VerifyHooks hooks;
  hooks.ricci_route = [](const PointCurvature<double>& pc) {
    const int n = pc.g.dim();
    Matrix m(n, 2);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        m(i, j) = pc.ricci_riemannian(i, j) + 0.25 * pc.s(i, j) - 0.5 * pc.codiff(i, j);
    return m;
  };
  const Output out = run_verify(small_config("verify"), spec("flat_torus3"), hooks);
  CHECK_FALSE(out.pass);
  for (const auto& ch : out.json["checks"]) {
    CAPTURE(ch["name"].get<std::string>());
    CHECK(ch["pass"].get<bool>() == (ch["name"] != "ricci-relation"));
  }
}

TEST_CASE("verify on the flat torus reduces to the Riemannian checks") {
  const Output out = run_verify(small_config("verify"), spec("flat_torus3", {{"c", 0.0}}));
  CHECK(out.pass);
  const auto* th = find_check(out, "first-variation-theorem");
  REQUIRE(th != nullptr);
  CHECK((*th)["max_residual"].get<double>() < 1e-10);
}

TEST_CASE("identical config gives byte-identical JSON") {
  const RunConfig c = small_config("curvature");
  const std::string a = render(run_curvature(c, spec("su2_invariant", {{"a", 2.0}})), "json");
  const std::string b = render(run_curvature(c, spec("su2_invariant", {{"a", 2.0}})), "json");
  CHECK(a == b);
  RunConfig c2 = c;
  c2.seed = 8;
  CHECK(render(run_curvature(c2, spec("su2_invariant", {{"a", 2.0}})), "json") != a);
}

TEST_CASE("thread count does not change results") {
  RunConfig c = small_config("variation");
  const Output one = run_variation(c, spec("round_s3", {{"c", 1.0}}));
  c.threads = 3;
  const Output three = run_variation(c, spec("round_s3", {{"c", 1.0}}));
  CHECK(one.json["rows"] == three.json["rows"]);
  CHECK(one.pass);
}

TEST_CASE("theorem report at zero Scal^nabla") {
  RunConfig c = small_config("theorem");
  c.directions = 5;
  const Output out = run_theorem(c, spec("round_s3", {{"c", 2.0}}));
  CHECK(out.pass);
  // Gauss nodes near the poles amplify rounding by 1/sin^2(theta)
  CHECK(std::abs(out.json["scal_nabla"].get<double>()) < 1e-8);
  for (const auto& r : out.json["rows"]) CHECK(std::abs(r["lhs"].get<double>()) < 1e-6);
  CHECK(out.csv_rows.size() == 5);
}

TEST_CASE("theorem report reduces to the classical identity at T = 0") {
  const Output out = run_theorem(small_config("theorem"), spec("round_s3", {{"c", 0.0}}));
  CHECK(out.pass);
  CHECK(out.json["scal_nabla"].get<double>() == doctest::Approx(6.0));
}

TEST_CASE("volume-neutral directions exercise the RHS = 0 branch") {
  RunConfig c = small_config("theorem");
  c.direction_kind = "volume-neutral";
  const Output out = run_theorem(c, spec("round_s3", {{"c", 1.0}}));
  CHECK(out.pass);
  for (const auto& r : out.json["rows"]) {
    CHECK(std::abs(r["rhs"].get<double>()) < 1e-10);
    CHECK(r["rate_min"].get<double>() < 0.0);
    CHECK(r["rate_max"].get<double>() > 0.0);
  }
}

TEST_CASE("theorem names the violated hypothesis") {
  try {
    (void)run_theorem(small_config("theorem"), spec("su2_invariant", {{"a", 2.0}}));
    FAIL("expected a precondition error");
  } catch (const TheoremPreconditionError& e) {
    CHECK(e.hypothesis() == "nabla-Einstein");
  }
}

TEST_CASE("solve campaign on su(2)") {
  const SolveSpec s = load_solve_spec(SKEWTOR_SPEC_DIR "/su2.json");
  const Output out = run_solve(small_config("solve"), s);
  CHECK(out.pass);
  REQUIRE(!out.json["distinct"].empty());
  for (const auto& r : out.json["distinct"]) {
    CHECK(r["residual"].get<double>() < 1e-10);
    CHECK(r["certified_residual"].get<double>() < 1e-10);
  }
  CHECK(out.json["results"].size() == 10);
}

TEST_CASE("abelian algebra solves trivially") {
  const Output out = run_solve(small_config("solve"), load_solve_spec(SKEWTOR_SPEC_DIR "/abelian3.json"));
  CHECK(out.pass);
  for (const auto& r : out.json["results"]) {
    CHECK(r["converged"].get<bool>());
    CHECK(r["residual"].get<double>() < 1e-14);
  }
}

TEST_CASE("non-Jacobi constants record per-seed errors and complete") {
  const Output out = run_solve(small_config("solve"), load_solve_spec(SKEWTOR_SPEC_DIR "/non_jacobi.json"));
  CHECK_FALSE(out.pass);
  REQUIRE(out.json["results"].size() == 4);
  for (const auto& r : out.json["results"]) CHECK(r.contains("error"));
}

TEST_CASE("continuation table") {
  const Output out = run_solve(small_config("solve"),
                               load_solve_spec(SKEWTOR_SPEC_DIR "/su2_pair_continuation.json"));
  const auto& rows = out.json["continuation"]["rows"];
  REQUIRE(rows.size() == 5);
  for (const auto& r : rows) {
    const double a = r["value"].get<double>();
    CHECK(r["converged"].get<bool>());
    CHECK(r["params"]["b"].get<double>() == doctest::Approx(1.0 / a).epsilon(1e-8));
  }
  CHECK(out.csv_rows.size() == 5);
}

TEST_CASE("geometry specs") {
  CHECK(parse_geometry_spec(nlohmann::json::parse(R"({"name": "round_s3"})")).name == "round_s3");
  const GeometrySpec s = load_geometry_spec(SKEWTOR_SPEC_DIR "/berger.json");
  CHECK(s.params.at("lambda") == 0.5);
  CHECK_THROWS_AS(load_geometry_spec("/nonexistent/spec.json"), ConfigError);
  CHECK_THROWS_AS(parse_geometry_spec(nlohmann::json::parse(R"({"geometry": 3})")), ConfigError);
  CHECK_THROWS_AS(run_curvature(small_config("curvature"), spec("hyperbolic")), GeometryError);
  CHECK_THROWS_AS(run_curvature(small_config("curvature"), spec("round_s3", {{"radius", 1.0}})),
                  GeometryError);
}

TEST_CASE("solve specs") {
  CHECK_THROWS_AS(parse_solve_spec(nlohmann::json::parse(R"({"algebra": "so5"})")), ConfigError);
  CHECK_THROWS_AS(
      parse_solve_spec(nlohmann::json::parse(R"({"algebra": {"n": 3, "c": [[0, 1, 5, 1.0]]}})")),
      ConfigError);
  CHECK_THROWS_AS(parse_solve_spec(nlohmann::json::parse(R"({"algebra": "su2", "family": "su2_pair"})")),
                  ConfigError);
}

TEST_CASE("run config validation") {
  RunConfig c = small_config("verify");
  c.tol = -1.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.tol.reset();
  c.order = 2;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.order = 8;
  c.format = "xml";
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("csv quoting") {
  Output o;
  o.csv_header = {"a", "b"};
  o.csv_rows = {{"x, y", "say \"hi\""}};
  CHECK(render(o, "csv") == "a,b\n\"x, y\",\"say \"\"hi\"\"\"\n");
}
