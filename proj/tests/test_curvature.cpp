#include <doctest.h>

#include <cmath>
#include <numbers>

#include "skewtor/curvature.hpp"
#include "skewtor/zoo.hpp"

using namespace skewtor;

TEST_CASE("round_s3 closed-form curvature at r=1, c=1") {
  const GeometryBundle b = make_geometry("round_s3", {{"r", 1.0}, {"c", 1.0}});
  const Point x{0.7, 1.3, 2.9};
  const CurvatureReport r = curvature_report(*b.metric, b.torsion, x);
  CHECK(r.scal_riemannian == doctest::Approx(6.0).epsilon(1e-12));
  CHECK(r.torsion_norm_sq == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.scal_nabla == doctest::Approx(4.5).epsilon(1e-12));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      CHECK(r.s_tensor(i, j) == doctest::Approx(i == j ? 2.0 : 0.0).epsilon(1e-10));
      CHECK(r.ricci_sym(i, j) == doctest::Approx(i == j ? 1.5 : 0.0).epsilon(1e-10));
      CHECK(std::abs(r.ricci_skew(i, j)) < 1e-10);
    }
}

TEST_CASE("round_s3 with c=2 is the flat Cartan connection") {
  const GeometryBundle b = make_geometry("round_s3", {{"c", 2.0}});
  const CurvatureReport r = curvature_report(*b.metric, b.torsion, Point{1.1, 0.4, 5.0});
  CHECK(max_abs(r.curvature) < 1e-9);
  CHECK(std::abs(r.scal_nabla) < 1e-9);
}

TEST_CASE("su2_invariant matches Milnor's closed form") {
  const GeometryBundle b =
      make_geometry("su2_invariant", {{"a", 2.0}, {"b", 1.0}, {"c", 0.5}, {"lambda", 0.3}});
  const CurvatureReport r = curvature_report(*b.metric, b.torsion, Point{0.9, 2.0, 7.0});
  CHECK(r.scal_riemannian == doctest::Approx(b.refs.scal_riemannian).epsilon(1e-10));
  CHECK(r.torsion_norm_sq == doctest::Approx(b.refs.torsion_norm_sq).epsilon(1e-10));
  const CurvatureReport alg = invariant_curvature_report(b.invariant->algebra, b.invariant->structure);
  CHECK(alg.scal_riemannian == doctest::Approx(b.refs.scal_riemannian).epsilon(1e-12));
}

TEST_CASE("algebraic su(2) closed forms") {
  const LieAlgebraData su2 = LieAlgebraData::su2();
  InvariantStructure s{identity_matrix(3), Tensor<double>(3, 3)};
  CurvatureReport r = invariant_curvature_report(su2, s);
  CHECK(r.scal_riemannian == doctest::Approx(1.5));
  for (int i = 0; i < 3; ++i) CHECK(r.ricci_riemannian(i, i) == doctest::Approx(0.5));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) s.torsion(i, j, k) = levi_civita3(i, j, k);
  r = invariant_curvature_report(su2, s);
  CHECK(max_abs(r.curvature) < 1e-12);
  CHECK(std::abs(r.scal_nabla) < 1e-12);
}
