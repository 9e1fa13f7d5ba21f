#include "skewtor/checks.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "skewtor/forms.hpp"
#include "skewtor/parallel.hpp"
#include "skewtor/random.hpp"
#include "skewtor/solver.hpp"
#include "skewtor/theorem.hpp"

namespace skewtor {

namespace {

struct Task {
  const RandomInput* in;
  const Point* x;
};

std::vector<Task> tasks(const std::vector<RandomInput>& in) {
  std::vector<Task> out;
  for (const RandomInput& r : in)
    for (const Point& x : r.points) out.push_back({&r, &x});
  return out;
}

// Runs f over every (input, point) pair and returns the largest value.
double worst_over(const std::vector<RandomInput>& in, int threads,
                  const std::function<double(const RandomInput&, const Point&)>& f,
                  std::size_t* count = nullptr) {
  const std::vector<Task> ts = tasks(in);
  std::vector<double> r(ts.size(), 0.0);
  parallel_for(ts.size(), threads, [&](std::size_t i) { r[i] = f(*ts[i].in, *ts[i].x); });
  if (count) *count = ts.size();
  double worst = 0.0;
  for (double v : r) worst = std::isnan(v) ? v : std::max(worst, v);
  return worst;
}

Matrix random_spd(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix a(n, 2);
  for (std::size_t k = 0; k < a.size(); ++k) a.at_flat(k) = u(rng);
  Matrix m = matmul(a, transpose(a));
  for (int i = 0; i < n; ++i) m(i, i) += 0.5;
  return m;
}

Matrix random_sym(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix a(n, 2);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) a(i, j) = a(j, i) = u(rng);
  return a;
}

std::string range_detail(double lo, double hi) {
  std::ostringstream os;
  os.precision(6);
  os << "pointwise rate range [" << lo << ", " << hi << "]";
  return os.str();
}

}  // namespace

Check make_check(std::string name, std::string anchor, std::size_t points, double residual,
                 double tol) {
  Check c;
  c.name = std::move(name);
  c.anchor = std::move(anchor);
  c.points = points;
  c.max_residual = residual;
  c.tolerance = tol;
  c.pass = std::isfinite(residual) && residual <= tol;
  return c;
}

std::vector<RandomInput> random_inputs(const GeometryBundle& bundle, std::uint64_t seed,
                                       int fields, int points, int directions) {
  FieldFactory fac(bundle, seed);
  std::vector<RandomInput> out;
  for (int k = 0; k < fields; ++k) {
    RandomInput r;
    r.g = fac.randomized_metric();
    r.t = fac.torsion(r.g, 0.5, 0.5);
    r.points = fac.points(points);
    for (int d = 0; d < directions; ++d) r.directions.push_back(fac.sym_tensor(0.5));
    out.push_back(std::move(r));
  }
  return out;
}

Matrix ricci_relation_route(const PointCurvature<double>& pc) {
  const int n = pc.g.dim();
  Matrix out(n, 2);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out(i, j) = pc.ricci_riemannian(i, j) - 0.25 * pc.s(i, j) - 0.5 * pc.codiff(i, j);
  return out;
}

Check check_ricci_relation(const std::vector<RandomInput>& in, double tol, const RicciRoute& route,
                           int threads) {
  std::size_t n = 0;
  const double worst = worst_over(
      in, threads,
      [&](const RandomInput& r, const Point& x) {
        const PointCurvature<double> pc = point_curvature(*r.g, r.t, x);
        return max_abs(pc.ricci - route(pc));
      },
      &n);
  return make_check("ricci-relation", "Ric^nabla = Ric^g - S/4 - (d*T)/2", n, worst, tol);
}

Check check_scalar_identity(const std::vector<RandomInput>& in, double tol, int threads) {
  std::size_t n = 0;
  const double worst = worst_over(
      in, threads,
      [&](const RandomInput& r, const Point& x) {
        const PointCurvature<double> pc = point_curvature(*r.g, r.t, x);
        return std::abs(pc.scal_nabla - (pc.scal_riemannian - 1.5 * pc.torsion_norm_sq));
      },
      &n);
  return make_check("scalar-identity", "Scal^nabla = Scal^g - (3/2)|T|^2", n, worst, tol);
}

Check check_s_trace(const std::vector<RandomInput>& in, double tol, int threads) {
  std::size_t n = 0;
  const double worst = worst_over(
      in, threads,
      [&](const RandomInput& r, const Point& x) {
        const PointCurvature<double> pc = point_curvature(*r.g, r.t, x);
        return std::abs(trace_with(pc.ginv, pc.s) - 6.0 * pc.torsion_norm_sq);
      },
      &n);
  return make_check("s-trace", "tr S = 6|T|^2", n, worst, tol);
}

Check check_metricity(const std::vector<RandomInput>& in, double tol, int threads) {
  std::size_t n = 0;
  const double worst = worst_over(
      in, threads,
      [&](const RandomInput& r, const Point& x) { return metricity_residual(*r.g, r.t, x); }, &n);
  return make_check("metricity", "nabla g = 0", n, worst, tol);
}

Check check_codiff_agreement(const std::vector<RandomInput>& in, double tol, int threads) {
  std::size_t n = 0;
  const double worst = worst_over(
      in, threads,
      [&](const RandomInput& r, const Point& x) {
        return parallel_torsion_identities(*r.g, r.t, x).codiff_nabla_gap;
      },
      &n);
  return make_check("codifferential-agreement", "d*_nabla T = d*T", n, worst, tol);
}

Check check_d_squared(const GeometryBundle& bundle, std::uint64_t seed, int count, double tol) {
  FieldFactory fac(bundle, seed);
  const auto g = fac.randomized_metric();
  double worst = 0.0;
  for (int k = 0; k < count; ++k) {
    const FormField f = fac.scalar_field(0.0, 1.0);
    worst = std::max(worst, max_abs(exterior_derivative_twice(*g, f, fac.point())));
  }
  return make_check("d-squared", "d d f = 0", count, worst, tol);
}

Check check_rate(const std::vector<RandomInput>& in, RateKind kind, double tol,
                 const FdSchedule& schedule, int threads) {
  const char* name = "";
  const char* anchor = "";
  switch (kind) {
    case RateKind::kVolumeElement:
      name = "volume-element-rate";
      anchor = "d/dt dV = (1/2) tr_g h dV";
      break;
    case RateKind::kTorsionNorm:
      name = "torsion-norm-rate";
      anchor = "d/dt |T|^2 = -(1/6) (S, h)";
      break;
    case RateKind::kScalarG:
      name = "scalar-riemannian-rate";
      anchor = "d/dt Scal^g = Delta tr h + div div h - (Ric^g, h)";
      break;
    case RateKind::kScalarNabla:
      name = "scalar-nabla-rate";
      anchor = "d/dt Scal^nabla = d/dt Scal^g - (3/2) d/dt |T|^2";
      break;
  }
  double worst = 0.0;
  std::size_t evaluations = 0;
  for (const RandomInput& r : in) {
    std::vector<FdSchedule> sched;
    for (const SymTensorField& h : r.directions)
      sched.push_back(clamp_schedule(schedule, certify_curve(*r.g, h, r.points).epsilon));
    std::vector<double> res(r.points.size(), 0.0);
    parallel_for(r.points.size(), threads, [&](std::size_t i) {
      const Point& x = r.points[i];
      const RateContext ctx(*r.g, r.t, x);
      double w = 0.0;
      for (std::size_t d = 0; d < r.directions.size(); ++d) {
        const SymTensorField& h = r.directions[d];
        double analytic = 0.0;
        std::function<double(double)> along;
        switch (kind) {
          case RateKind::kVolumeElement:
            analytic = ctx.volume_element_rate(h.value_at(x));
            along = [&](double s) { return log_volume_element(*r.g, h, s, x); };
            break;
          case RateKind::kTorsionNorm:
            analytic = ctx.torsion_norm_rate(h.value_at(x));
            along = [&](double s) { return torsion_norm_along(*r.g, r.t, h, s, x); };
            break;
          case RateKind::kScalarG:
            analytic = ctx.scalar_g_rate(h);
            along = [&](double s) { return scalar_g_along(*r.g, h, s, x); };
            break;
          case RateKind::kScalarNabla:
            analytic = ctx.scalar_nabla_rate(h);
            along = [&](double s) { return scalar_nabla_along(*r.g, r.t, h, s, x); };
            break;
        }
        const double fd = richardson_derivative(along, sched[d]).value;
        const double rel = relative_residual(analytic, fd);
        w = std::isnan(rel) ? rel : std::max(w, rel);
      }
      res[i] = w;
    });
    for (double v : res) worst = std::isnan(v) ? v : std::max(worst, v);
    evaluations += r.points.size() * r.directions.size();
  }
  Check c = make_check(name, anchor, evaluations, worst, tol);
  c.detail = "relative residual against Richardson-extrapolated central differences";
  return c;
}

Check check_conformal_rates(const GeometryBundle& bundle, const std::vector<Point>& points,
                            double tol) {
  const SymTensorField h = as_sym_tensor(*bundle.metric, 2.0);
  const int n = bundle.chart.dim;
  double worst = 0.0;
  for (const Point& x : points) {
    const RateContext ctx(*bundle.metric, bundle.torsion, x);
    const PointCurvature<double>& pc = ctx.curvature();
    const Matrix hv = h.value_at(x);
    worst = std::max(worst, std::abs(ctx.volume_element_rate(hv) - n));
    worst = std::max(worst, std::abs(ctx.torsion_norm_rate(hv) + 2.0 * pc.torsion_norm_sq));
    worst = std::max(worst, std::abs(ctx.scalar_g_rate(h) + 2.0 * pc.scal_riemannian));
  }
  return make_check("conformal-rates", "h = 2g: rates n, -2|T|^2, -2 Scal^g", points.size(), worst,
                    tol);
}

Check check_frame_rate(std::uint64_t seed, int samples, double tol) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int k = 0; k < samples; ++k) {
    const int n = 3 + k % 2;
    const Matrix g = random_spd(rng, n);
    const Matrix h = random_sym(rng, n);
    const FrameCurveRate r = frame_curve_rate(SpdMatrix(g), h);
    // d/dt e^T g_t e = 0 along the curve
    const Matrix orth = matmul(transpose(r.frame), matmul(h, r.frame)) +
                        matmul(transpose(r.e_dot), matmul(g, r.frame)) +
                        matmul(transpose(r.frame), matmul(g, r.e_dot));
    worst = std::max(worst, max_abs(orth));
    // frame_rate equals -1/2 H with H_ij = h(e_i, e_j)
    const Matrix big_h = matmul(transpose(r.frame), matmul(h, r.frame));
    worst = std::max(worst, max_abs(r.frame_rate + 0.5 * big_h));
    worst = std::max(worst, max_abs(matmul(r.d_rate, r.frame) - r.e_dot));
  }
  return make_check("frame-curve-rate", "e'(0) = -(1/2) H e", samples, worst, tol);
}

Check check_inv_sqrt_rate(std::uint64_t seed, int samples, double tol) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int k = 0; k < samples; ++k) {
    const int n = 3 + k % 2;
    const Matrix h = random_sym(rng, n);
    const Matrix id = identity_matrix(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const FdEstimate fd = richardson_derivative(
            [&](double t) { return spd_inv_sqrt(SpdMatrix(id + t * h)).matrix()(i, j); });
        worst = std::max(worst, std::abs(fd.value + 0.5 * h(i, j)));
      }
  }
  return make_check("inverse-sqrt-rate", "d/dt (I + tH)^{-1/2} = -(1/2) H", samples, worst, tol);
}

Check check_isometry_pair(std::uint64_t seed, int samples, double tol) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int k = 0; k < samples; ++k) {
    const int n = 3 + k % 2;
    const Matrix a = random_spd(rng, n);
    const Matrix b = random_spd(rng, n);
    const IsometryPair p = isometry_pair(SpdMatrix(a), SpdMatrix(b));
    worst = std::max(worst, max_abs(matmul(a, p.b) - b));
    worst = std::max(worst, max_abs(matmul(transpose(p.d), matmul(b, p.d)) - a));
  }
  return make_check("isometry-pair", "a(X, Y) = b(dX, dY), b = a(B., .)", samples, worst, tol);
}

Check check_volume(const GeometryBundle& bundle, const QuadratureGrid& grid, double tol,
                   int threads) {
  const double v = volume(*bundle.metric, grid, threads);
  Check c = make_check("volume", "Vol(M, g) against the closed form", grid.size(),
                       std::abs(v - bundle.refs.volume), tol);
  std::ostringstream os;
  os.precision(17);
  os << "quadrature " << v << ", closed form " << bundle.refs.volume;
  c.detail = os.str();
  return c;
}

Check check_laplacian_integral(const MetricField& g, const FormField& f,
                               const QuadratureGrid& grid, double tol, int threads) {
  const double v =
      integrate(g, [&](const Point& x) { return laplacian(g, f, x); }, grid, threads);
  return make_check("laplacian-integral", "int Delta f dV = 0", grid.size(), std::abs(v), tol);
}

Check check_reference_values(const GeometryBundle& bundle, const std::vector<Point>& points,
                             double tol) {
  double worst = 0.0;
  for (const Point& x : points) {
    const PointCurvature<double> pc = point_curvature(*bundle.metric, bundle.torsion, x);
    worst = std::max(worst, std::abs(pc.scal_riemannian - bundle.refs.scal_riemannian));
    worst = std::max(worst, std::abs(pc.torsion_norm_sq - bundle.refs.torsion_norm_sq));
    worst = std::max(worst, std::abs(pc.scal_nabla - bundle.refs.scal_nabla));
  }
  return make_check("closed-form-curvature", "Scal^g, |T|^2, Scal^nabla against closed forms",
                    points.size(), worst, tol);
}

Check check_einstein(const GeometryBundle& bundle, const std::vector<Point>& points, double tol) {
  double worst = 0.0;
  for (const Point& x : points)
    worst = std::max(worst, einstein_deviation(curvature_report(*bundle.metric, bundle.torsion, x)));
  return make_check("nabla-einstein", "Ric_S^nabla = (Scal^nabla / n) g", points.size(), worst,
                    tol);
}

std::vector<Check> check_parallel_torsion(const GeometryBundle& bundle,
                                          const std::vector<Point>& points,
                                          const ParallelTolerances& tol) {
  double codiff = 0.0, sigma = 0.0, nabla_t = 0.0, div_g = 0.0;
  for (const Point& x : points) {
    const ParallelTorsionIdentities p = parallel_torsion_identities(*bundle.metric, bundle.torsion, x);
    codiff = std::max(codiff, p.codiff_torsion);
    sigma = std::max(sigma, p.dt_minus_two_sigma);
    nabla_t = std::max(nabla_t, p.nabla_torsion);
    div_g = std::max(div_g, max_abs(einstein_tensor_nabla(*bundle.metric, bundle.torsion, x).div));
  }
  const std::size_t n = points.size();
  return {make_check("parallel-codifferential", "nabla T = 0 implies d*T = 0", n, codiff, tol.codiff),
          make_check("parallel-sigma", "nabla T = 0 implies dT = 2 sigma_T", n, sigma, tol.sigma),
          make_check("parallel-torsion", "nabla T = 0", n, nabla_t, tol.nabla_t),
          make_check("einstein-divergence", "nabla T = 0 implies Div G^nabla = 0", n, div_g,
                     tol.div_g)};
}

Check check_theorem(const GeometryBundle& bundle, const std::vector<SymTensorField>& directions,
                    const QuadratureGrid& grid, double tol, int threads) {
  const TheoremReport r = ville_theorem_check(*bundle.metric, bundle.torsion, directions, grid, threads);
  double worst = 0.0;
  for (const TheoremResult& d : r.directions) worst = std::max(worst, d.residual);
  Check c = make_check("first-variation-theorem",
                       "int d/dt Scal^nabla dV = -(2 Scal^nabla / n) d/dt Vol", directions.size(),
                       worst, tol);
  std::ostringstream os;
  os.precision(12);
  os << "Scal^nabla = " << r.diagnostics.scal_mean << " on " << r.diagnostics.nodes << " nodes";
  c.detail = os.str();
  return c;
}

Check check_null_direction(const GeometryBundle& bundle,
                           const std::vector<SymTensorField>& directions,
                           const QuadratureGrid& grid, double tol, double zero_tol, int threads) {
  const TheoremReport r = ville_theorem_check(*bundle.metric, bundle.torsion, directions, grid, threads);
  double worst = 0.0;
  double lo = 0.0, hi = 0.0;
  bool signs_ok = true;
  for (const TheoremResult& d : r.directions) {
    worst = std::max(worst, std::abs(d.lhs));
    lo = std::min(lo, d.rate_min);
    hi = std::max(hi, d.rate_max);
    const bool vanishes = std::max(std::abs(d.rate_min), std::abs(d.rate_max)) < zero_tol;
    if (!vanishes && !(d.rate_min < 0.0 && d.rate_max > 0.0)) signs_ok = false;
  }
  Check c = make_check("null-direction-sign-change",
                       "int tr h dV = 0 implies int d/dt Scal^nabla dV = 0", directions.size(),
                       worst, tol);
  c.pass = c.pass && signs_ok;
  c.detail = range_detail(lo, hi);
  if (!signs_ok) c.detail += "; a nonzero rate kept one sign";
  return c;
}

Check check_gradient(const MetricField& g, const TorsionField& t,
                     const std::vector<SymTensorField>& directions, double lambda,
                     const QuadratureGrid& grid, double tol, int threads) {
  const GradientField grad = functional_gradient(g, t, lambda);
  double worst = 0.0;
  for (const SymTensorField& h : directions) {
    const double analytic =
        integrate(g, [&](const Point& x) { return grad.pairing_with(h, x); }, grid, threads);
    const FdSchedule s = clamp_schedule({}, certify_curve(g, h, grid.nodes).epsilon);
    const FdEstimate fd = richardson_derivative(
        [&](double u) { return functional_along(g, t, h, u, lambda, grid, threads); }, s);
    worst = std::max(worst, relative_residual(analytic, fd.value));
  }
  return make_check("functional-gradient", "d/dt L = int (G^nabla - Lambda g, h) dV",
                    directions.size(), worst, tol);
}

Check check_gradient_norm(const GeometryBundle& bundle, const std::vector<Point>& points,
                          double lambda, double tol) {
  const GradientField grad = functional_gradient(*bundle.metric, bundle.torsion, lambda);
  double worst = 0.0;
  for (const Point& x : points) {
    const Matrix ginv = inverse(bundle.metric->value_at(x));
    const Matrix gx = grad.at(x);
    worst = std::max(worst, std::sqrt(std::max(0.0, inner_with(ginv, gx, gx))));
  }
  return make_check("gradient-norm", "|G^nabla - Lambda g|", points.size(), worst, tol);
}

Check check_cross_validation(const GeometryBundle& bundle, const std::vector<Point>& points,
                             double tol) {
  CrossValidation cv;
  std::string worst_field;
  try {
    cv = cross_validate(bundle, points, tol);
  } catch (const CrossValidationError& e) {
    cv = e.table();
  }
  double w = -1.0;
  for (const CrossValidationRow& r : cv.rows)
    if (r.max_abs_diff > w) {
      w = r.max_abs_diff;
      worst_field = r.field;
    }
  Check c = make_check("cross-validation", "chart engine = left-invariant engine", points.size(),
                       cv.max_abs_diff, tol);
  c.pass = c.pass && cv.pass;
  c.detail = "worst field: " + worst_field;
  return c;
}

}  // namespace skewtor
