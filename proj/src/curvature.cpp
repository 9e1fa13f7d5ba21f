#include "skewtor/curvature.hpp"

#include <cmath>
#include <sstream>

namespace skewtor {

RicciRouteMismatch::RicciRouteMismatch(double discrepancy, Matrix contraction, Matrix relation)
    : std::runtime_error("Ricci routes disagree: max |contraction - relation| = " +
                         std::to_string(discrepancy)),
      discrepancy_(discrepancy),
      contraction_(std::move(contraction)),
      relation_(std::move(relation)) {}

namespace {

void require_invariants(const CurvatureReport& r) {
  const double scale = 1.0 + max_abs(r.ricci_riemannian) + r.torsion_norm_sq;
  double tr = 0.0;
  double tr_s = 0.0;
  for (int i = 0; i < r.dim; ++i) {
    tr += r.ricci(i, i);
    tr_s += r.s_tensor(i, i);
  }
  std::ostringstream err;
  if (std::abs(tr - r.scal_nabla) > 1e-9 * scale) err << "tr Ric != Scal; ";
  if (std::abs(r.scal_nabla - (r.scal_riemannian - 1.5 * r.torsion_norm_sq)) > 1e-9 * scale)
    err << "Scal identity violated; ";
  if (std::abs(tr_s - 6.0 * r.torsion_norm_sq) > 1e-10 * scale) err << "tr S != 6|T|^2; ";
  if (r.torsion_norm_sq < -1e-12 * scale) err << "negative torsion norm; ";
  if (!err.str().empty()) throw std::runtime_error("curvature report invariants: " + err.str());
}

}  // namespace

CurvatureReport assemble_report(Point point, const PointCurvature<double>& pc, double tol) {
  CurvatureReport r;
  r.point = std::move(point);
  r.dim = pc.g.dim();
  const int n = r.dim;
  r.frame = cholesky_frame(pc.g);
  r.christoffel = pc.christoffel;
  r.connection = pc.connection;
  r.curvature = pc.r_low;
  r.curvature_frame = change_basis(pc.r_low, r.frame);

  r.ricci = change_basis(pc.ricci, r.frame);
  r.ricci_riemannian = change_basis(pc.ricci_riemannian, r.frame);
  r.s_tensor = change_basis(pc.s, r.frame);
  r.codiff_torsion = change_basis(pc.codiff, r.frame);
  r.ricci_sym = Matrix(n, 2);
  r.ricci_skew = Matrix(n, 2);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      r.ricci_sym(i, j) = 0.5 * (r.ricci(i, j) + r.ricci(j, i));
      r.ricci_skew(i, j) = r.ricci(i, j) - r.ricci_sym(i, j);
    }
  r.ricci_relation = Matrix(n, 2);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      r.ricci_relation(i, j) =
          r.ricci_riemannian(i, j) - 0.25 * r.s_tensor(i, j) - 0.5 * r.codiff_torsion(i, j);

  r.scal_riemannian = pc.scal_riemannian;
  r.scal_nabla = pc.scal_nabla;
  r.torsion_norm_sq = pc.torsion_norm_sq;
  r.basis = {pc.g, pc.ricci, pc.ricci_riemannian, pc.s, pc.codiff};

  const double gap = max_abs(r.ricci - r.ricci_relation);
  if (gap > tol * (1.0 + max_abs(r.ricci_riemannian)))
    throw RicciRouteMismatch(gap, r.ricci, r.ricci_relation);
  require_invariants(r);
  return r;
}

PointCurvature<double> point_curvature(const MetricField& g, const TorsionField& t,
                                       std::span<const double> x) {
  if (g.dim() != t.dim()) throw GeometryError("metric and torsion live on different charts");
  const LocalMetric<double> lm = evaluate_metric_jet(g, x);
  const FieldSample<double> ts = sample(t, x);
  return compute_point_curvature(lm, ts);
}

CurvatureReport curvature_report(const MetricField& g, const TorsionField& t,
                                 std::span<const double> x, double tol) {
  return assemble_report(Point(x.begin(), x.end()), point_curvature(g, t, x), tol);
}

Tensor<double> christoffel(const MetricField& g, std::span<const double> x) {
  const LocalMetric<double> lm = evaluate_metric_jet(g, x);
  return engine::christoffel(lm.ginv, lm.s.d);
}

Tensor<double> connection_with_torsion(const MetricField& g, const TorsionField& t,
                                       std::span<const double> x) {
  const LocalMetric<double> lm = evaluate_metric_jet(g, x);
  return engine::add_scaled(engine::christoffel(lm.ginv, lm.s.d), t.value_at(x), 0.5);
}

CurvatureTensor curvature_tensor(const MetricField& g, const TorsionField& t,
                                 std::span<const double> x) {
  const PointCurvature<double> pc = point_curvature(g, t, x);
  CurvatureTensor out;
  out.basis = pc.r_low;
  out.e = cholesky_frame(pc.g);
  out.frame = change_basis(pc.r_low, out.e);
  return out;
}

Matrix s_tensor(const MetricField& g, const TorsionField& t, std::span<const double> x) {
  const Tensor<double> gv = g.value_at(x);
  return engine::s_tensor(engine::lower_torsion(gv, t.value_at(x)), inverse(gv));
}

double torsion_norm(const MetricField& g, const TorsionField& t, std::span<const double> x) {
  const Tensor<double> gv = g.value_at(x);
  return engine::torsion_norm_sq(engine::lower_torsion(gv, t.value_at(x)), inverse(gv));
}

double einstein_deviation(const CurvatureReport& r) {
  Matrix dev = r.ricci_sym;
  for (int i = 0; i < r.dim; ++i) dev(i, i) -= r.scal_nabla / r.dim;
  return frobenius(dev);
}

double metricity_residual(const MetricField& g, const TorsionField& t, std::span<const double> x) {
  const LocalMetric<double> lm = evaluate_metric_jet(g, x);
  const Tensor<double> conn =
      engine::add_scaled(engine::christoffel(lm.ginv, lm.s.d), t.value_at(x), 0.5);
  const Tensor<double> ng = engine::covariant_derivative(conn, lm.s.value, lm.s.d);
  return max_abs(ng);
}

}  // namespace skewtor
