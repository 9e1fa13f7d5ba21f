#include "skewtor/variation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "skewtor/forms.hpp"

namespace skewtor {

namespace {

FieldSample<double> zero_torsion_sample(int n) {
  return FieldSample<double>{Tensor<double>(n, 3), Tensor<double>(n, 4), {}};
}

double scalar_g_of(const MetricField& gt, std::span<const double> x) {
  const LocalMetric<double> lm = evaluate_metric_jet(gt, x);
  return compute_point_curvature(lm, zero_torsion_sample(gt.dim())).scal_riemannian;
}

// (1/6) sum_ij G(T(e_i, e_j), T(e_i, e_j)) with e a G-orthonormal frame.
double frame_torsion_norm(const Matrix& gv, const Tensor<double>& t_up) {
  const int n = gv.dim();
  const Matrix e = cholesky_frame(gv);
  double acc = 0.0;
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        double s = 0.0;
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b) s += t_up(k, a, b) * e(a, i) * e(b, j);
        v[k] = s;
      }
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) acc += gv(k, l) * v[k] * v[l];
    }
  return acc / 6.0;
}

Matrix sym_part(const Matrix& a) {
  const int n = a.dim();
  Matrix s(n, 2);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s(i, j) = 0.5 * (a(i, j) + a(j, i));
  return s;
}

}  // namespace

IsometryPair isometry_pair(const SpdMatrix& a, const SpdMatrix& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("isometry_pair: dimension mismatch");
  const Matrix l = cholesky_lower(a.matrix());
  const Matrix linv = inverse(l);
  const Matrix b_hat = symmetrized(matmul(linv, matmul(b.matrix(), transpose(linv))));
  const SpdMatrix d_hat = spd_inv_sqrt(SpdMatrix(b_hat));
  IsometryPair out;
  out.b = matmul(inverse(a.matrix()), b.matrix());
  out.d = matmul(transpose(linv), matmul(d_hat.matrix(), transpose(l)));
  return out;
}

FrameCurveRate frame_curve_rate(const SpdMatrix& g, const Matrix& h) {
  const int n = g.dim();
  if (h.dim() != n || h.rank() != 2) throw std::invalid_argument("frame_curve_rate: bad h");
  FrameCurveRate r;
  r.frame = spd_cholesky_frame(g);
  const Matrix& e = r.frame;
  r.frame_rate = Matrix(n, 2);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double hij = 0.0;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) hij += h(a, b) * e(a, i) * e(b, j);
      r.frame_rate(j, i) = -0.5 * hij;
    }
  r.e_dot = matmul(e, r.frame_rate);
  r.d_rate = matmul(r.e_dot, inverse(e));
  return r;
}

FdEstimate richardson_derivative(const std::function<double(double)>& f,
                                 const FdSchedule& schedule) {
  FdEstimate est;
  est.steps = schedule.steps;
  for (int i = 0; i < 3; ++i) {
    const double t = schedule.steps[i];
    est.central[i] = (f(t) - f(-t)) / (2.0 * t);
  }
  const double r1a = (4.0 * est.central[1] - est.central[0]) / 3.0;
  const double r1b = (4.0 * est.central[2] - est.central[1]) / 3.0;
  est.value = (16.0 * r1b - r1a) / 15.0;
  return est;
}

FdSchedule clamp_schedule(FdSchedule s, double epsilon) {
  const double cap = epsilon / 10.0;
  if (s.steps[0] > cap) {
    const double scale = cap / s.steps[0];
    for (double& t : s.steps) t *= scale;
  }
  return s;
}

double relative_residual(double analytic, double fd) {
  const double denom = std::max(std::abs(analytic), std::abs(fd));
  return denom == 0.0 ? 0.0 : std::abs(analytic - fd) / denom;
}

VariationReport make_report(std::string quantity, Point x, double analytic, const FdEstimate& fd) {
  VariationReport r;
  r.quantity = std::move(quantity);
  r.point = std::move(x);
  r.analytic = analytic;
  r.fd = fd.value;
  r.abs_residual = std::abs(analytic - fd.value);
  r.rel_residual = relative_residual(analytic, fd.value);
  r.steps = fd.steps;
  return r;
}

MetricCurve certify_curve(const MetricField& g, const SymTensorField& h,
                          std::span<const Point> nodes) {
  if (g.dim() != h.dim()) throw GeometryError("certify_curve: dimension mismatch");
  double t_max = std::numeric_limits<double>::infinity();
  for (const Point& x : nodes) {
    const Matrix linv = inverse(cholesky_lower(g.value_at(x)));
    const Matrix m = symmetrized(matmul(linv, matmul(h.value_at(x), transpose(linv))));
    const SymmetricEigen e = symmetric_eigen(m);
    const double mu = std::max(std::abs(e.values.front()), std::abs(e.values.back()));
    if (mu > 0.0) t_max = std::min(t_max, 1.0 / mu);
  }
  MetricCurve c{&g, &h, std::min(1.0, 0.5 * t_max)};
  for (const Point& x : nodes)
    for (double sign : {-1.0, 1.0}) {
      const Matrix gt = g.value_at(x) + (sign * c.epsilon) * h.value_at(x);
      try {
        (void)cholesky_lower(gt);
      } catch (const NotPositiveDefinite& err) {
        std::ostringstream os;
        os << "metric curve fails Cholesky at t = " << sign * c.epsilon << ": " << err.what();
        throw GeometryError(os.str());
      }
    }
  return c;
}

double pairing(const Matrix& ginv, const Matrix& a, const Matrix& b) {
  return inner_with(ginv, a, b);
}

RateContext::RateContext(const MetricField& g, const TorsionField& t, std::span<const double> x)
    : x_(x.begin(), x.end()), pc_(point_curvature(g, t, x)), lifted_(evaluate_metric_lifted(g, x)) {}

double RateContext::volume_element_rate(const Tensor<double>& h_value) const {
  return 0.5 * trace_with(pc_.ginv, h_value);
}

double RateContext::torsion_norm_rate(const Tensor<double>& h_value) const {
  return -pairing(pc_.ginv, pc_.s, h_value) / 6.0;
}

double RateContext::scalar_g_rate(const SymTensorField& h) const {
  const FieldSample<Dual> hs = sample_lifted(h, x_);
  Matrix hv(hs.value.dim(), 2);
  for (std::size_t k = 0; k < hv.size(); ++k) hv.at_flat(k) = hs.value.at_flat(k).value();
  return laplacian_of_trace(lifted_, hs) + divergence_of_divergence(lifted_, hs) -
         pairing(pc_.ginv, sym_part(pc_.ricci_riemannian), hv);
}

double RateContext::scalar_nabla_rate(const SymTensorField& h) const {
  return scalar_g_rate(h) - 1.5 * torsion_norm_rate(h.value_at(x_));
}

double RateContext::gradient_pairing(const Tensor<double>& h_value, double lambda) const {
  const int n = pc_.g.dim();
  Matrix grad(n, 2);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      grad(i, j) = -0.5 * (pc_.ricci(i, j) + pc_.ricci(j, i)) +
                   (0.5 * pc_.scal_nabla - lambda) * pc_.g(i, j);
  return pairing(pc_.ginv, grad, h_value);
}

namespace {

TorsionField zero_torsion(const MetricField& g) {
  const int n = g.dim();
  return TorsionField(g.chart(), [n](auto x) {
    using S = std::remove_cv_t<typename decltype(x)::element_type>;
    return Tensor<S>(n, 3);
  });
}

}  // namespace

double volume_element_rate(const MetricField& g, const SymTensorField& h,
                           std::span<const double> x) {
  return 0.5 * trace_with(inverse(g.value_at(x)), h.value_at(x));
}

double torsion_norm_rate(const MetricField& g, const TorsionField& t, const SymTensorField& h,
                         std::span<const double> x) {
  const Matrix gv = g.value_at(x);
  const Matrix ginv = inverse(gv);
  const Matrix s = engine::s_tensor(engine::lower_torsion(gv, t.value_at(x)), ginv);
  return -pairing(ginv, s, h.value_at(x)) / 6.0;
}

double scalar_g_rate(const MetricField& g, const SymTensorField& h, std::span<const double> x) {
  return RateContext(g, zero_torsion(g), x).scalar_g_rate(h);
}

double scalar_nabla_rate(const MetricField& g, const TorsionField& t, const SymTensorField& h,
                         std::span<const double> x) {
  return RateContext(g, t, x).scalar_nabla_rate(h);
}

double log_volume_element(const MetricField& g, const SymTensorField& h, double t,
                          std::span<const double> x) {
  return 0.5 * std::log(determinant(g.value_at(x) + t * h.value_at(x)));
}

double torsion_norm_along(const MetricField& g, const TorsionField& t, const SymTensorField& h,
                          double s, std::span<const double> x) {
  return frame_torsion_norm(g.value_at(x) + s * h.value_at(x), t.value_at(x));
}

double scalar_g_along(const MetricField& g, const SymTensorField& h, double s,
                      std::span<const double> x) {
  return scalar_g_of(perturbed(g, h, s), x);
}

double scalar_nabla_along(const MetricField& g, const TorsionField& t, const SymTensorField& h,
                          double s, std::span<const double> x) {
  const MetricField gt = perturbed(g, h, s);
  return scalar_g_of(gt, x) - 1.5 * frame_torsion_norm(gt.value_at(x), t.value_at(x));
}

GradientField::GradientField(const MetricField& g, const TorsionField& t, double lambda)
    : g_(&g), t_(&t), lambda_(lambda) {
  if (g.dim() != t.dim()) throw GeometryError("functional_gradient: dimension mismatch");
}

Matrix GradientField::at(std::span<const double> x) const {
  const PointCurvature<double> pc = point_curvature(*g_, *t_, x);
  const int n = pc.g.dim();
  Matrix out(n, 2);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out(i, j) = -0.5 * (pc.ricci(i, j) + pc.ricci(j, i)) +
                  (0.5 * pc.scal_nabla - lambda_) * pc.g(i, j);
  return out;
}

double GradientField::pairing_with(const SymTensorField& h, std::span<const double> x) const {
  return pairing(inverse(g_->value_at(x)), at(x), h.value_at(x));
}

GradientField functional_gradient(const MetricField& g, const TorsionField& t, double lambda) {
  return GradientField(g, t, lambda);
}

double functional_along(const MetricField& g, const TorsionField& t, const SymTensorField& h,
                        double s, double lambda, const QuadratureGrid& grid, int threads) {
  const MetricField gt = perturbed(g, h, s);
  return integrate(
      gt,
      [&](const Point& x) {
        return scalar_g_of(gt, x) - 1.5 * frame_torsion_norm(gt.value_at(x), t.value_at(x)) -
               2.0 * lambda;
      },
      grid, threads);
}

}  // namespace skewtor
