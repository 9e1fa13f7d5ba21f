#include <doctest.h>

#include <cmath>
#include <numbers>

#include "skewtor/random.hpp"
#include "skewtor/theorem.hpp"
#include "skewtor/variation.hpp"
#include "skewtor/forms.hpp"
#include "skewtor/zoo.hpp"

using namespace skewtor;

TEST_CASE("four-point Gauss-Legendre nodes") {
  const AxisRule r = gauss_legendre(4, -1.0, 1.0);
  const double a = std::sqrt(3.0 / 7.0 - 2.0 / 7.0 * std::sqrt(6.0 / 5.0));
  const double b = std::sqrt(3.0 / 7.0 + 2.0 / 7.0 * std::sqrt(6.0 / 5.0));
  CHECK(r.nodes[0] == doctest::Approx(-b).epsilon(1e-15));
  CHECK(r.nodes[1] == doctest::Approx(-a).epsilon(1e-15));
  CHECK(r.weights[0] == doctest::Approx((18.0 - std::sqrt(30.0)) / 36.0).epsilon(1e-15));
  CHECK(r.weights[1] == doctest::Approx((18.0 + std::sqrt(30.0)) / 36.0).epsilon(1e-15));
}

TEST_CASE("grid order below 4 is rejected") {
  CHECK_THROWS_AS(build_grid(euler_s3_chart(), 3), std::invalid_argument);
}

TEST_CASE("volume of the unit three-sphere") {
  const GeometryBundle b = make_geometry("round_s3", {});
  const QuadratureGrid grid = build_grid(b.chart, 24);
  CHECK(std::abs(volume(*b.metric, grid) - 2.0 * std::numbers::pi * std::numbers::pi) < 1e-8);
}

TEST_CASE("flat torus volume") {
  const GeometryBundle b = make_geometry("flat_torus3", {});
  const QuadratureGrid grid = build_grid(b.chart, 8);
  CHECK(volume(*b.metric, grid) == doctest::Approx(std::pow(2.0 * std::numbers::pi, 3)).epsilon(1e-13));
}

TEST_CASE("Laplacian integrates to zero") {
  FieldFactory fac(make_geometry("flat_torus3", {}), 9);
  const auto g = fac.randomized_metric();
  const FormField f = fac.scalar_field(0.0, 1.0);
  const QuadratureGrid grid = build_grid(g->chart(), 16);
  CHECK(std::abs(integrate(*g, [&](const Point& x) { return laplacian(*g, f, x); }, grid)) < 1e-7);
}

TEST_CASE("non-finite integrand names the node") {
  const GeometryBundle b = make_geometry("flat_torus3", {});
  const QuadratureGrid grid = build_grid(b.chart, 4);
  CHECK_THROWS_AS(integrate(*b.metric, [](const Point&) { return std::nan(""); }, grid),
                  std::domain_error);
}

TEST_CASE("volume-neutral direction has zero volume rate") {
  FieldFactory fac(make_geometry("round_s3", {}), 4);
  const GeometryBundle& b = fac.bundle();
  const QuadratureGrid grid = build_grid(b.chart, 12);
  const SymTensorField h = volume_neutral_direction(*b.metric, fac.scalar_field(0.3, 1.0), grid);
  CHECK(std::abs(volume_rate(*b.metric, h, grid)) < 1e-12);
}

TEST_CASE("theorem identity on round_s3") {
  const QuadratureGrid grid = build_grid(euler_s3_chart(), 10);
  for (double c : {0.0, 1.0, 2.0}) {
    CAPTURE(c);
    FieldFactory fac(make_geometry("round_s3", {{"c", c}}), 21);
    const GeometryBundle& b = fac.bundle();
    const SymTensorField h = fac.sym_tensor(0.5);
    const TheoremResult r = ville_theorem_check(*b.metric, b.torsion, h, grid);
    CHECK(r.scal_nabla == doctest::Approx(6.0 - 1.5 * c * c).epsilon(1e-10));
    CHECK(r.residual < 1e-6);
  }
}

TEST_CASE("theorem rejects a non-Einstein metric") {
  FieldFactory fac(make_geometry("round_s3", {}), 2);
  const auto g = fac.randomized_metric();
  const TorsionField t = fac.torsion(g, 0.0, 0.0);
  const QuadratureGrid grid = build_grid(g->chart(), 4);
  const SymTensorField h = fac.sym_tensor(0.1);
  try {
    (void)ville_theorem_check(*g, t, h, grid);
    FAIL("expected a precondition error");
  } catch (const TheoremPreconditionError& e) {
    CHECK(e.hypothesis() == "nabla-Einstein");
  }
}

TEST_CASE("functional gradient matches finite differences") {
  FieldFactory fac(make_geometry("flat_torus3", {}), 13);
  const auto g = fac.randomized_metric();
  const TorsionField t = fac.torsion(g, 0.3, 0.3);
  const SymTensorField h = fac.sym_tensor(0.3);
  const QuadratureGrid grid = build_grid(g->chart(), 8);
  const double lambda = 0.25;
  const GradientField grad = functional_gradient(*g, t, lambda);
  const double analytic =
      integrate(*g, [&](const Point& x) { return grad.pairing_with(h, x); }, grid);
  const FdEstimate fd = richardson_derivative(
      [&](double s) { return functional_along(*g, t, h, s, lambda, grid); });
  CHECK(relative_residual(analytic, fd.value) < 1e-5);
}

TEST_CASE("gradient vanishes at the flat Cartan structure") {
  const GeometryBundle b = make_geometry("round_s3", {{"c", 2.0}});
  const GradientField grad = functional_gradient(*b.metric, b.torsion, 0.0);
  CHECK(frobenius(grad.at(Point{0.5, 1.0, 2.0})) < 1e-9);
}
