#include <doctest.h>

#include <cmath>
#include <random>
#include <type_traits>

#include "skewtor/fields.hpp"
#include "skewtor/random.hpp"
#include "skewtor/spd.hpp"
#include "skewtor/zoo.hpp"

using namespace skewtor;

namespace {

template <typename S>
S sample_expression(std::span<const S> x) {
  using std::cos;
  using std::exp;
  using std::log;
  using std::sin;
  using std::sqrt;
  return sin(x[0] * x[1]) + exp(x[2]) / (1.0 + x[0] * x[0]) + sqrt(2.0 + x[1] * x[2]) -
         log(3.0 + cos(x[0] - x[2])) * x[1] * x[1] * x[1];
}

double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

Matrix random_spd(std::mt19937_64& rng, int n, double max_log10_cond) {
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Matrix a(n, 2);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = normal(rng);
  const Matrix q = symmetric_eigen(symmetrized(a)).vectors;
  Matrix d(n, 2);
  for (int i = 0; i < n; ++i) d(i, i) = std::pow(10.0, max_log10_cond * unit(rng));
  return symmetrized(matmul(matmul(q, d), transpose(q)));
}

// ||E^T G E - I||_F accumulated in extended precision
double frame_residual(const Matrix& e, const Matrix& g) {
  const int n = g.dim();
  long double sum = 0.0L;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      long double v = i == j ? -1.0L : 0.0L;
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          v += static_cast<long double>(e(k, i)) * g(k, l) * static_cast<long double>(e(l, j));
      sum += v * v;
    }
  return static_cast<double>(std::sqrt(sum));
}

Chart unit_box() { return Chart::box({-2.0, -2.0, -2.0}, {2.0, 2.0, 2.0}, {false, false, false}); }

}  // namespace

TEST_CASE("jet calculus on elementary cases") {
  const Jet x = Jet::variable(3.0, 1, 0);
  const Jet sq = x * x;
  CHECK(sq.value() == 9.0);
  CHECK(sq.grad(0) == 6.0);
  CHECK(sq.hess(0, 0) == 2.0);

  const Jet c = Jet::constant(4.5, 2);
  CHECK(c.grad(0) == 0.0);
  CHECK(c.grad(1) == 0.0);
  CHECK(c.hess(0, 1) == 0.0);

  const Jet s = sin(Jet::variable(0.0, 1, 0));
  CHECK(s.value() == 0.0);
  CHECK(s.grad(0) == 1.0);
  CHECK(s.hess(0, 0) == 0.0);
}

TEST_CASE("jet errors") {
  CHECK_THROWS_AS(Jet::variable(1.0, 2, 0) + Jet::variable(1.0, 3, 0), JetDimensionError);
  CHECK_THROWS_AS(Jet::variable(1.0, 1, 0) / Jet::constant(0.0, 1), std::domain_error);
  CHECK_THROWS_AS(Jet::variable(1.0, kMaxChartDim + 1, 0), std::invalid_argument);
}

TEST_CASE("jets agree with central differences on a composed expression") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-0.8, 0.8);
  constexpr double h = 1e-5;
  for (int trial = 0; trial < 20; ++trial) {
    const Point p{u(rng), u(rng), u(rng)};
    const std::vector<Jet> xj = jet_point(p);
    const Jet f = sample_expression<Jet>(xj);
    CHECK(f.value() == doctest::Approx(sample_expression<double>(p)).epsilon(1e-14));
    for (int i = 0; i < 3; ++i) {
      Point a = p, b = p;
      a[i] += h;
      b[i] -= h;
      const double fd = (sample_expression<double>(a) - sample_expression<double>(b)) / (2 * h);
      CHECK(rel_err(f.grad(i), fd) < 1e-6);
      const Jet fa = sample_expression<Jet>(jet_point(a));
      const Jet fb = sample_expression<Jet>(jet_point(b));
      for (int j = 0; j < 3; ++j) {
        CHECK(rel_err(f.hess(i, j), (fa.grad(j) - fb.grad(j)) / (2 * h)) < 1e-6);
        CHECK(f.hess(i, j) == f.hess(j, i));
      }
    }
  }
}

TEST_CASE("third-order jets carry the gradient of every slot") {
  const Point p{0.3, -0.4, 0.9};
  const Jet3 f = sample_expression<Jet3>(jet3_point(p));
  const Jet g = sample_expression<Jet>(jet_point(p));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(f.hess(i, j).value() == doctest::Approx(g.hess(i, j)).epsilon(1e-13));
  // d/dx_m of the (0, 1) Hessian slot against differences of the Hessian
  constexpr double h = 1e-5;
  for (int m = 0; m < 3; ++m) {
    Point a = p, b = p;
    a[m] += h;
    b[m] -= h;
    const double fd = (sample_expression<Jet>(jet_point(a)).hess(0, 1) -
                       sample_expression<Jet>(jet_point(b)).hess(0, 1)) /
                      (2 * h);
    CHECK(rel_err(f.hess(0, 1).d(m), fd) < 1e-6);
  }
}

TEST_CASE("cholesky frame closed forms") {
  auto close = [](const Matrix& a, const Matrix& b) { return max_abs(a - b) < 1e-15; };
  CHECK(close(spd_cholesky_frame(SpdMatrix(identity_matrix(3))), identity_matrix(3)));
  CHECK(close(spd_cholesky_frame(SpdMatrix(4.0 * identity_matrix(3))), 0.5 * identity_matrix(3)));
  CHECK(close(spd_cholesky_frame(SpdMatrix(diagonal_matrix({1, 4, 9}))),
              diagonal_matrix({1.0, 0.5, 1.0 / 3.0})));
}

TEST_CASE("non-SPD input names the failing pivot") {
  try {
    (void)SpdMatrix(diagonal_matrix({1, -2, 3}));
    FAIL("expected NotPositiveDefinite");
  } catch (const NotPositiveDefinite& e) {
    CHECK(e.pivot() == 1);
  }
  CHECK_THROWS_AS(spd_inv_sqrt(SpdMatrix(diagonal_matrix({1, 1, 0}))), NotPositiveDefinite);
}

TEST_CASE("inverse square root closed forms") {
  CHECK(max_abs(spd_inv_sqrt(SpdMatrix(identity_matrix(3))).matrix() - identity_matrix(3)) < 1e-15);
  CHECK(max_abs(spd_inv_sqrt(SpdMatrix(4.0 * identity_matrix(3))).matrix() - 0.5 * identity_matrix(3)) <
        1e-15);
}

TEST_CASE("random SPD matrices: frame and inverse square root residuals") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 3 + trial % 2;
    const Matrix g = random_spd(rng, n, trial < 25 ? 1.0 : 5.9);
    const Matrix e = spd_cholesky_frame(SpdMatrix(g));
    CHECK(frame_residual(e, g) < 1e-12);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) CHECK(e(j, i) == 0.0);  // upper triangular, L^{-T}

    const Matrix b = random_spd(rng, n, 1.0);
    const Matrix r = spd_inv_sqrt(SpdMatrix(b)).matrix();
    CHECK(frobenius(matmul(matmul(r, b), r) - identity_matrix(n)) < 1e-12);
    CHECK(frobenius(matmul(r, r) - inverse(b)) < 1e-12 * std::max(1.0, frobenius(inverse(b))));
    CHECK(max_abs(r - transpose(r)) == 0.0);
  }
}

TEST_CASE("symmetric eigen conventions") {
  const SymmetricEigen eig = symmetric_eigen(diagonal_matrix({3, 1, 2}));
  CHECK(eig.values == std::vector<double>{1, 2, 3});
  for (int k = 0; k < 3; ++k) {
    double first = 0.0;
    for (int i = 0; i < 3 && first == 0.0; ++i) first = eig.vectors(i, k);
    CHECK(first > 0.0);
  }
}

TEST_CASE("metric jets: constant, conformal and round S^3") {
  const GeometryBundle torus = make_geometry("flat_torus3");
  const Point x0{1.0, 2.0, 3.0};
  const LocalMetric<double> flat = evaluate_metric_jet(*torus.metric, x0);
  CHECK(max_abs(flat.s.d) == 0.0);
  CHECK(max_abs(flat.s.dd) == 0.0);

  const MetricField conformal(unit_box(), [](auto x) {
    using S = std::remove_cvref_t<decltype(x[0])>;
    using std::exp;
    using std::sin;
    Tensor<S> g(3, 2);
    const S f = exp(2.0 * sin(x[0]));
    for (int i = 0; i < 3; ++i) g(i, i) = f;
    return g;
  });
  const Point x1{0.4, -0.3, 1.1};
  const LocalMetric<double> c = evaluate_metric_jet(conformal, x1);
  const double e2f = std::exp(2 * std::sin(0.4));
  for (int i = 0; i < 3; ++i) {
    CHECK(c.s.d(0, i, i) == doctest::Approx(2 * std::cos(0.4) * e2f).epsilon(1e-14));
    CHECK(c.s.dd(0, 0, i, i) ==
          doctest::Approx((4 * std::cos(0.4) * std::cos(0.4) - 2 * std::sin(0.4)) * e2f).epsilon(1e-14));
    CHECK(c.s.d(1, i, i) == 0.0);
    CHECK(c.s.dd(0, 1, i, i) == 0.0);
  }

  const GeometryBundle s3 = make_geometry("round_s3", {{"r", 1.0}, {"c", 1.0}});
  const Point x2{0.9, 1.7, 2.3};
  const LocalMetric<double> m = evaluate_metric_jet(*s3.metric, x2);
  constexpr double h = 1e-5;
  for (int k = 0; k < 3; ++k) {
    Point a = x2, b = x2;
    a[k] += h;
    b[k] -= h;
    const Tensor<double> ga = s3.metric->value_at(a), gb = s3.metric->value_at(b);
    const LocalMetric<double> ma = evaluate_metric_jet(*s3.metric, a);
    const LocalMetric<double> mb = evaluate_metric_jet(*s3.metric, b);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        CHECK(std::abs(m.s.d(k, i, j) - (ga(i, j) - gb(i, j)) / (2 * h)) < 1e-6);
        CHECK(m.s.d(k, i, j) == m.s.d(k, j, i));
        for (int p = 0; p < 3; ++p) {
          CHECK(std::abs(m.s.dd(k, p, i, j) - (ma.s.d(p, i, j) - mb.s.d(p, i, j)) / (2 * h)) < 1e-6);
          CHECK(m.s.dd(k, p, i, j) == m.s.dd(p, k, i, j));
        }
      }
  }
}

TEST_CASE("metric evaluation rejects points outside the chart and non-SPD values") {
  const GeometryBundle s3 = make_geometry("round_s3");
  const Point outside{-0.5, 1.0, 1.0};
  CHECK_THROWS_AS(evaluate_metric_jet(*s3.metric, outside), GeometryError);
  const MetricField bad(unit_box(), [](auto x) {
    using S = std::remove_cvref_t<decltype(x[0])>;
    Tensor<S> g(3, 2);
    g(0, 0) = S(1.0);
    g(1, 1) = x[0];
    g(2, 2) = S(1.0);
    return g;
  });
  const Point neg{-1.0, 0.0, 0.0};
  CHECK_THROWS(evaluate_metric_jet(bad, neg));
  CHECK_THROWS(orthonormal_frame(bad, neg));
}

TEST_CASE("orthonormal frames") {
  const MetricField diag(unit_box(), [](auto x) {
    using S = std::remove_cvref_t<decltype(x[0])>;
    Tensor<S> g(3, 2);
    g(0, 0) = S(1.0);
    g(1, 1) = S(4.0);
    g(2, 2) = S(9.0);
    return g;
  });
  const Point x{0.0, 0.0, 0.0};
  CHECK(max_abs(orthonormal_frame(diag, x).e - diagonal_matrix({1.0, 0.5, 1.0 / 3.0})) < 1e-15);

  const GeometryBundle s3 = make_geometry("round_s3");
  FieldFactory fac(s3, 3);
  const std::shared_ptr<const MetricField> g = fac.randomized_metric();
  for (const Point& p : fac.points(20)) {
    const FramePoint f = orthonormal_frame(*g, p);
    const Tensor<double> gv = g->value_at(p);
    CHECK(frobenius(matmul(matmul(transpose(f.e), gv), f.e) - identity_matrix(3)) < 1e-12);
    for (double s : {0.25, 3.0}) {
      const FramePoint fs = orthonormal_frame(scaled(*g, s), p);
      CHECK(max_abs(fs.e - (1.0 / std::sqrt(s)) * f.e) < 1e-12);
    }
  }
}

TEST_CASE("torsion validation") {
  const GeometryBundle s3 = make_geometry("round_s3", {{"c", 1.5}});
  FieldFactory fac(s3, 9);
  const std::vector<Point> pts = fac.points(15);
  CHECK(validate_torsion(*s3.metric, s3.torsion, pts).pass);

  const std::shared_ptr<const MetricField> g = fac.randomized_metric();
  const TorsionField random = fac.torsion(g, 0.5, 0.5);
  const TorsionValidation ok = validate_torsion(*g, random, pts);
  CHECK(ok.pass);
  CHECK(ok.max_violation < kTorsionAntisymmetryTol);

  // antisymmetric in (i, j) only: T_010 = g_00 T^0_01 is not skew in (i, k)
  const TorsionField broken(s3.chart, [](auto x) {
    using S = std::remove_cvref_t<decltype(x[0])>;
    Tensor<S> t(3, 3);
    t(0, 0, 1) = S(1.0);
    t(0, 1, 0) = S(-1.0);
    return t;
  });
  const TorsionValidation bad = validate_torsion(*g, broken, pts);
  CHECK_FALSE(bad.pass);
  CHECK(bad.failing.size() == pts.size());
  CHECK(bad.max_violation > 0.1);

  for (const Point& p : pts) {
    const Tensor<double> gv = g->value_at(p);
    const Tensor<double> t = random.value_at(p);
    CHECK(max_abs(raise_torsion(inverse(gv), lower_torsion(gv, t)) - t) < 1e-12);
  }
}
