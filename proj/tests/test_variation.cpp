#include <doctest.h>

#include <cmath>

#include "skewtor/forms.hpp"
#include "skewtor/random.hpp"
#include "skewtor/variation.hpp"
#include "skewtor/zoo.hpp"

using namespace skewtor;

namespace {

double fd_rel(double analytic, const std::function<double(double)>& f) {
  return relative_residual(analytic, richardson_derivative(f).value);
}

}  // namespace

TEST_CASE("richardson derivative is exact on quartics") {
  const FdEstimate e = richardson_derivative([](double t) { return 3.0 * t + t * t * t * t - 2.0 * t * t * t; });
  CHECK(e.value == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("relative residual is zero when both vanish") {
  CHECK(relative_residual(0.0, 0.0) == 0.0);
  CHECK(relative_residual(1.0, 0.0) == 1.0);
}

TEST_CASE("clamp schedule keeps steps below epsilon / 10") {
  const FdSchedule s = clamp_schedule({}, 1e-3);
  CHECK(s.steps[0] == doctest::Approx(1e-4));
  CHECK(s.steps[2] == doctest::Approx(2.5e-5));
  CHECK(clamp_schedule({}, 1.0).steps[0] == 1e-3);
}

TEST_CASE("pointwise rates agree with finite differences on randomized fields") {
  for (const char* name : {"round_s3", "flat_torus3", "su2_invariant"}) {
    CAPTURE(name);
    FieldFactory fac(make_geometry(name, {}), 11);
    const auto g = fac.randomized_metric();
    const TorsionField t = fac.torsion(g, 0.4, 0.3);
    const SymTensorField h = fac.sym_tensor(0.5);
    for (int k = 0; k < 3; ++k) {
      const Point x = fac.point();
      const RateContext ctx(*g, t, x);
      CHECK(fd_rel(ctx.volume_element_rate(h.value_at(x)),
                   [&](double s) { return log_volume_element(*g, h, s, x); }) < 1e-5);
      CHECK(fd_rel(ctx.torsion_norm_rate(h.value_at(x)),
                   [&](double s) { return torsion_norm_along(*g, t, h, s, x); }) < 1e-5);
      CHECK(fd_rel(ctx.scalar_g_rate(h), [&](double s) { return scalar_g_along(*g, h, s, x); }) <
            1e-5);
      CHECK(fd_rel(ctx.scalar_nabla_rate(h),
                   [&](double s) { return scalar_nabla_along(*g, t, h, s, x); }) < 1e-5);
    }
  }
}

TEST_CASE("conformal direction h = 2g on unit S3") {
  const GeometryBundle b = make_geometry("round_s3", {{"c", 1.0}});
  const SymTensorField h = as_sym_tensor(*b.metric, 2.0);
  const Point x{1.0, 0.5, 3.0};
  const RateContext ctx(*b.metric, b.torsion, x);
  CHECK(ctx.volume_element_rate(h.value_at(x)) == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(ctx.torsion_norm_rate(h.value_at(x)) == doctest::Approx(-2.0).epsilon(1e-10));
  CHECK(ctx.scalar_g_rate(h) == doctest::Approx(-12.0).epsilon(1e-9));
}

TEST_CASE("frame curve rate is -1/2 H") {
  const SpdMatrix g(Matrix(diagonal_matrix({2.0, 1.0, 0.5})));
  Matrix h(3, 2);
  h(0, 1) = h(1, 0) = 0.3;
  h(2, 2) = -0.2;
  h(0, 0) = 0.1;
  const FrameCurveRate r = frame_curve_rate(g, h);
  // e^T g e = I, so d/dt of g_t(e_i(t), e_j(t)) must vanish
  const Matrix lhs = matmul(transpose(r.frame), matmul(h, r.frame)) +
                     matmul(transpose(r.e_dot), matmul(g.matrix(), r.frame)) +
                     matmul(transpose(r.frame), matmul(g.matrix(), r.e_dot));
  CHECK(max_abs(lhs) < 1e-14);
}

TEST_CASE("isometry pair") {
  const SpdMatrix a(Matrix(diagonal_matrix({2.0, 1.0, 3.0})));
  Matrix bm = diagonal_matrix({1.0, 4.0, 2.0});
  bm(0, 2) = bm(2, 0) = 0.5;
  const SpdMatrix b(bm);
  const IsometryPair p = isometry_pair(a, b);
  CHECK(max_abs(matmul(a.matrix(), p.b) - b.matrix()) < 1e-12);
  CHECK(max_abs(matmul(transpose(p.d), matmul(b.matrix(), p.d)) - a.matrix()) < 1e-12);
}

TEST_CASE("metric curve certification") {
  const GeometryBundle b = make_geometry("flat_torus3", {});
  const SymTensorField h = as_sym_tensor(*b.metric, -4.0);
  const std::vector<Point> nodes{{0.1, 0.2, 0.3}};
  const MetricCurve c = certify_curve(*b.metric, h, nodes);
  CHECK(c.epsilon == doctest::Approx(0.125));
}

TEST_CASE("parallel torsion identities on round_s3") {
  const GeometryBundle b = make_geometry("round_s3", {{"c", 1.0}});
  const Point x{0.8, 2.0, 1.0};
  const ParallelTorsionIdentities p = parallel_torsion_identities(*b.metric, b.torsion, x);
  CHECK(p.codiff_torsion < 1e-8);
  CHECK(p.dt_minus_two_sigma < 1e-8);
  CHECK(p.nabla_torsion < 1e-8);
  const EinsteinTensor e = einstein_tensor_nabla(*b.metric, b.torsion, x);
  CHECK(max_abs(e.div) < 1e-7);
}

TEST_CASE("codifferentials agree on randomized torsion") {
  FieldFactory fac(make_geometry("round_s3", {}), 5);
  const auto g = fac.randomized_metric();
  const TorsionField t = fac.torsion(g, 0.2, 0.5);
  const ParallelTorsionIdentities p = parallel_torsion_identities(*g, t, fac.point());
  CHECK(p.codiff_nabla_gap < 1e-9);
  CHECK(p.codiff_torsion > 1e-6);
}

TEST_CASE("d squared vanishes") {
  FieldFactory fac(make_geometry("flat_torus3", {}), 3);
  const auto g = fac.randomized_metric();
  const FormField f = fac.scalar_field(0.0, 1.0);
  CHECK(max_abs(exterior_derivative_twice(*g, f, fac.point())) < 1e-11);
}
