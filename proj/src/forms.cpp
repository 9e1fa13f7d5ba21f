#include "skewtor/forms.hpp"

#include <cmath>

namespace skewtor {

namespace {

Tensor<double> values(const Tensor<Dual>& t) {
  Tensor<double> v(t.dim(), t.rank());
  for (std::size_t k = 0; k < t.size(); ++k) v.at_flat(k) = t.at_flat(k).value();
  return v;
}

// Coordinate gradient of a Dual tensor, laid out as (m, ...).
Tensor<double> gradients(const Tensor<Dual>& t) {
  const int n = t.dim();
  const std::size_t size = t.size();
  Tensor<double> d(n, t.rank() + 1);
  for (int m = 0; m < n; ++m)
    for (std::size_t k = 0; k < size; ++k) d.at_flat(m * size + k) = t.at_flat(k).d(m);
  return d;
}

void require_same_chart(int a, int b, const char* what) {
  if (a != b) throw GeometryError(std::string(what) + ": fields live on charts of different dimension");
}

Tensor<double> codifferential(const Tensor<double>& nabla_w, const Matrix& ginv) {
  if (nabla_w.rank() < 2) return Tensor<double>(ginv.dim(), 0);
  return engine::negative_trace_first_two(nabla_w, ginv);
}

// Raise every slot of a covariant tensor.
Tensor<double> raise_all(const Matrix& ginv, Tensor<double> t) {
  const int n = t.dim();
  const int p = t.rank();
  std::array<int, 8> idx{};
  for (int slot = 0; slot < p; ++slot) {
    Tensor<double> out(n, p);
    for (std::size_t k = 0; k < t.size(); ++k) {
      engine::decode_index(k, n, p, idx);
      std::array<int, 8> jdx = idx;
      double s = 0.0;
      for (int m = 0; m < n; ++m) {
        jdx[slot] = m;
        s += ginv(idx[slot], m) * t.at_flat(engine::encode_index(jdx, n, p));
      }
      out.at_flat(k) = s;
    }
    t = std::move(out);
  }
  return t;
}

}  // namespace

ExteriorDerivatives covariant_exterior(const MetricField& g, const TorsionField& t,
                                       const FormField& w, std::span<const double> x) {
  require_same_chart(g.dim(), t.dim(), "covariant_exterior");
  require_same_chart(g.dim(), w.dim(), "covariant_exterior");
  const LocalMetric<double> lm = evaluate_metric_jet(g, x);
  const FieldSample<double> ws = sample(w, x);
  const Tensor<double> gam = engine::christoffel(lm.ginv, lm.s.d);
  const Tensor<double> conn = engine::add_scaled(gam, t.value_at(x), 0.5);
  const Tensor<double> nw_g = engine::covariant_derivative(gam, ws.value, ws.d);
  const Tensor<double> nw = engine::covariant_derivative(conn, ws.value, ws.d);
  ExteriorDerivatives e;
  e.d_nabla = engine::alternate_derivative(nw);
  e.d = engine::alternate_derivative(nw_g);
  e.codiff_nabla = codifferential(nw, lm.ginv);
  e.codiff = codifferential(nw_g, lm.ginv);
  return e;
}

Tensor<double> exterior_derivative_twice(const MetricField& g, const FormField& w,
                                         std::span<const double> x) {
  require_same_chart(g.dim(), w.dim(), "exterior_derivative_twice");
  const LocalMetric<Dual> lm = evaluate_metric_lifted(g, x);
  const FieldSample<Dual> ws = sample_lifted(w, x);
  const Tensor<Dual> gam = engine::christoffel(lm.ginv, lm.s.d);
  const Tensor<Dual> dw = engine::alternate_derivative(engine::covariant_derivative(gam, ws.value, ws.d));
  const Tensor<double> gamv = values(gam);
  return engine::alternate_derivative(
      engine::covariant_derivative(gamv, values(dw), gradients(dw)));
}

Tensor<double> sigma_t(const MetricField& g, const TorsionField& t, std::span<const double> x) {
  const ExteriorDerivatives e = covariant_exterior(g, t, torsion_form(g, t), x);
  return -0.5 * (e.d_nabla - e.d);
}

Tensor<double> nabla_torsion(const MetricField& g, const TorsionField& t,
                             std::span<const double> x) {
  require_same_chart(g.dim(), t.dim(), "nabla_torsion");
  const LocalMetric<double> lm = evaluate_metric_jet(g, x);
  const FieldSample<double> ts = sample(t, x);
  const Tensor<double> conn =
      engine::add_scaled(engine::christoffel(lm.ginv, lm.s.d), ts.value, 0.5);
  const Tensor<double> w = engine::lower_torsion(lm.s.value, ts.value);
  const Tensor<double> dw = engine::lower_torsion_derivative(lm.s.value, lm.s.d, ts.value, ts.d);
  return engine::covariant_derivative(conn, w, dw);
}

ParallelTorsionIdentities parallel_torsion_identities(const MetricField& g, const TorsionField& t,
                                                      std::span<const double> x) {
  const ExteriorDerivatives e = covariant_exterior(g, t, torsion_form(g, t), x);
  const Tensor<double> sigma = -0.5 * (e.d_nabla - e.d);
  ParallelTorsionIdentities out;
  out.codiff_torsion = max_abs(e.codiff);
  out.codiff_nabla_gap = max_abs(e.codiff_nabla - e.codiff);
  out.dt_minus_two_sigma = max_abs(e.d - 2.0 * sigma);
  out.nabla_torsion = max_abs(nabla_torsion(g, t, x));
  return out;
}

double form_inner(const Matrix& ginv, const Tensor<double>& a, const Tensor<double>& b) {
  if (a.rank() != b.rank() || a.dim() != b.dim() || a.dim() != ginv.dim())
    throw GeometryError("form_inner: incompatible forms");
  const Tensor<double> bu = raise_all(ginv, b);
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a.at_flat(k) * bu.at_flat(k);
  double fact = 1.0;
  for (int i = 2; i <= a.rank(); ++i) fact *= i;
  return s / fact;
}

Tensor<double> divergence_sym(const MetricField& g, const SymTensorField& f,
                              std::span<const double> x) {
  require_same_chart(g.dim(), f.dim(), "divergence_sym");
  const LocalMetric<double> lm = evaluate_metric_jet(g, x);
  const FieldSample<double> fs = sample(f, x);
  const Tensor<double> gam = engine::christoffel(lm.ginv, lm.s.d);
  return engine::negative_trace_first_two(engine::covariant_derivative(gam, fs.value, fs.d),
                                          lm.ginv);
}

double divergence_of_divergence(const LocalMetric<Dual>& lm, const FieldSample<Dual>& fs) {
  const Tensor<Dual> gam = engine::christoffel(lm.ginv, lm.s.d);
  const Tensor<Dual> div = engine::negative_trace_first_two(
      engine::covariant_derivative(gam, fs.value, fs.d), lm.ginv);
  const Tensor<double> gamv = values(gam);
  const Tensor<double> ndiv = engine::covariant_derivative(gamv, values(div), gradients(div));
  return engine::negative_trace_first_two(ndiv, values(lm.ginv)).at_flat(0);
}

double divergence_of_divergence(const MetricField& g, const SymTensorField& f,
                                std::span<const double> x) {
  require_same_chart(g.dim(), f.dim(), "divergence_of_divergence");
  return divergence_of_divergence(evaluate_metric_lifted(g, x), sample_lifted(f, x));
}

double laplacian_of_trace(const LocalMetric<Dual>& lm, const FieldSample<Dual>& hs) {
  const int n = lm.dim();
  const Tensor<Dual> dginv = engine::inverse_derivative(lm.ginv, lm.s.d);
  // d_m tr_g h = (d_m g^ij) h_ij + g^ij d_m h_ij, carried with its own gradient
  std::vector<double> df(n);
  Tensor<double> ddf(n, 2);
  for (int m = 0; m < n; ++m) {
    Dual s(0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        s += dginv(m, i, j) * hs.value(i, j) + lm.ginv(i, j) * hs.d(m, i, j);
    df[m] = s.value();
    for (int p = 0; p < n; ++p) ddf(m, p) = s.d(p);
  }
  const Tensor<double> ginv = values(lm.ginv);
  const Tensor<double> gam = values(engine::christoffel(lm.ginv, lm.s.d));
  return engine::laplacian<double>(ginv, gam, df, ddf);
}

double laplacian_of_trace(const MetricField& g, const SymTensorField& h,
                          std::span<const double> x) {
  require_same_chart(g.dim(), h.dim(), "laplacian_of_trace");
  return laplacian_of_trace(evaluate_metric_lifted(g, x), sample_lifted(h, x));
}

double laplacian(const MetricField& g, const FormField& f, std::span<const double> x) {
  require_same_chart(g.dim(), f.dim(), "laplacian");
  if (f.degree() != 0) throw GeometryError("laplacian: expected a 0-form");
  const LocalMetric<double> lm = evaluate_metric_jet(g, x);
  const FieldSample<double> fs = sample(f, x);
  const Tensor<double> gam = engine::christoffel(lm.ginv, lm.s.d);
  return engine::laplacian<double>(lm.ginv, gam, fs.d.flat(), fs.dd);
}

EinsteinTensor einstein_tensor_nabla(const MetricField& g, const TorsionField& t,
                                     std::span<const double> x) {
  require_same_chart(g.dim(), t.dim(), "einstein_tensor_nabla");
  const int n = g.dim();
  const LocalMetric<Dual> lm = evaluate_metric_dual(g, x);
  const FieldSample<Dual> ts = sample_dual(t, x);
  const PointCurvature<Dual> pc = compute_point_curvature(lm, ts);
  Tensor<Dual> gn(n, 2);
  Tensor<Dual> gg(n, 2);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      gn(i, j) = (pc.ricci(i, j) + pc.ricci(j, i)) * (-0.5) + pc.scal_nabla * pc.g(i, j) * 0.5;
      gg(i, j) = (pc.ricci_riemannian(i, j) + pc.ricci_riemannian(j, i)) * 0.5 -
                 pc.scal_riemannian * pc.g(i, j) * 0.5;
    }
  const Tensor<double> ginv = values(lm.ginv);
  const Tensor<double> gam = values(pc.christoffel);
  EinsteinTensor e;
  e.g_nabla = values(gn);
  e.g_riemannian = values(gg);
  e.div = engine::negative_trace_first_two(
      engine::covariant_derivative(gam, e.g_nabla, gradients(gn)), ginv);
  e.div_riemannian = engine::negative_trace_first_two(
      engine::covariant_derivative(gam, e.g_riemannian, gradients(gg)), ginv);
  return e;
}

}  // namespace skewtor
