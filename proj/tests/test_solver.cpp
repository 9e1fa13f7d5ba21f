#include <doctest.h>

#include <cmath>

#include "skewtor/random.hpp"
#include "skewtor/solver.hpp"

using namespace skewtor;

TEST_CASE("structure constants must satisfy Jacobi") {
  CHECK_NOTHROW(LieAlgebraData::su2().require_jacobi());
  const LieAlgebraData bad = LieAlgebraData::from_entries(3, {{0, 1, 1, 1.0}, {0, 2, 0, 1.0}});
  CHECK_THROWS_AS(bad.require_jacobi(), LieAlgebraError);
}

TEST_CASE("jet Jacobian agrees with finite differences") {
  const std::vector<double> p{1.3, 0.8, 1.1, 0.4};
  CHECK(jacobian_fd_check(LieAlgebraData::su2(), su2_diagonal_family(), p) < 1e-7);
}

TEST_CASE("su(2) campaign converges to the round metric") {
  const Family f = su2_diagonal_family();
  const Campaign c = run_campaign(LieAlgebraData::su2(), f, seed_grid(f, 10, 7));
  REQUIRE(!c.distinct.empty());
  for (const SolverResult& r : c.distinct) {
    CHECK(r.residual < 1e-10);
    CHECK(r.certified_residual < 1e-10);
    CHECK(r.params[0] == doctest::Approx(r.params[1]));
    CHECK(r.params[1] == doctest::Approx(r.params[2]));
  }
}

TEST_CASE("abelian algebra gives the trivial zero-residual solution") {
  const SolverResult r =
      solve_einstein(LieAlgebraData::abelian(3), generic_diagonal_family(3), {2.0, 1.0, 0.5, 0.0});
  CHECK(r.converged);
  CHECK(r.iterations == 0);
  CHECK(r.residual < 1e-14);
}

TEST_CASE("non-Jacobi constants surface per-seed errors") {
  const LieAlgebraData bad = LieAlgebraData::from_entries(3, {{0, 1, 1, 1.0}, {0, 2, 0, 1.0}});
  const Family f = su2_diagonal_family();
  const Campaign c = run_campaign(bad, f, seed_grid(f, 3, 1));
  REQUIRE(c.outcomes.size() == 3);
  for (const SeedOutcome& o : c.outcomes) {
    CHECK(!o.result);
    CHECK(!o.error.empty());
  }
}

TEST_CASE("continuation on su(2) + su(2)") {
  const Family f = su2_pair_family(false);
  // a = 1 is a square-root branch point where lambda1 converges only to ~sqrt(tol)
  const auto rows = continuation(LieAlgebraData::su2_plus_su2(), f, 0, {0.95, 0.9, 0.8},
                                 {0.95, 1.0, 0.3});
  for (const ContinuationRow& row : rows) {
    CAPTURE(row.value);
    REQUIRE(row.result.converged);
    const double a = row.value;
    CHECK(row.result.params[1] == doctest::Approx(1.0 / a).epsilon(1e-8));
    CHECK(std::abs(row.result.params[2]) ==
          doctest::Approx(a * std::sqrt(1.0 - a * a)).epsilon(1e-8));
  }
}

TEST_CASE("chart and algebraic engines agree") {
  for (const char* name : {"round_s3", "su2_invariant", "flat_torus3"}) {
    CAPTURE(name);
    const GeometryBundle b = make_geometry(name, {});
    FieldFactory fac(b, 17);
    const std::vector<Point> pts = fac.points(4);
    const CrossValidation cv = cross_validate(b, pts);
    CHECK(cv.pass);
    CHECK(cv.max_abs_diff < 1e-8);
  }
}
