// Curvature of nabla = nabla^g + 1/2 T: connection coefficients, R^nabla,
// Ricci tensors and their split, the S-tensor, and both scalar curvatures.

#ifndef SKEWTOR_CURVATURE_HPP_
#define SKEWTOR_CURVATURE_HPP_

#include <stdexcept>
#include <string>

#include "skewtor/engine.hpp"
#include "skewtor/fields.hpp"

namespace skewtor {

// Basis components of the curvature stack at one point. V is double for
// reports and Dual when coordinate gradients of the curvature are needed.
template <typename V>
struct PointCurvature {
  Tensor<V> g, ginv;
  Tensor<V> christoffel;  // Levi-Civita
  Tensor<V> connection;   // with torsion
  Tensor<V> r_low;        // R^nabla(i, j, k, l)
  Tensor<V> ricci;        // contraction of R^nabla
  Tensor<V> ricci_riemannian;
  Tensor<V> s;
  Tensor<V> w;       // torsion 3-form
  Tensor<V> codiff;  // d*T, a 2-form
  V torsion_norm_sq{0.0};
  V scal_riemannian{0.0};
  V scal_nabla{0.0};
};

// Requires second partials of g and first partials of T in the samples.
template <typename V>
PointCurvature<V> compute_point_curvature(const LocalMetric<V>& lm, const FieldSample<V>& t) {
  if (!lm.s.has_second()) throw std::logic_error("curvature needs second metric partials");
  PointCurvature<V> pc;
  const Tensor<V>& g = lm.s.value;
  pc.g = g;
  pc.ginv = lm.ginv;
  pc.christoffel = engine::christoffel(lm.ginv, lm.s.d);
  const Tensor<V> dgam = engine::christoffel_derivative(lm.ginv, lm.s.d, lm.s.dd);
  pc.connection = engine::add_scaled(pc.christoffel, t.value, 0.5);
  const Tensor<V> dconn = engine::add_scaled(dgam, t.d, 0.5);

  pc.r_low = engine::lower_last(engine::riemann_up(pc.connection, dconn), g);
  pc.ricci = engine::ricci(pc.r_low, lm.ginv);
  const Tensor<V> rg_low = engine::lower_last(engine::riemann_up(pc.christoffel, dgam), g);
  pc.ricci_riemannian = engine::ricci(rg_low, lm.ginv);

  pc.w = engine::lower_torsion(g, t.value);
  const Tensor<V> dw = engine::lower_torsion_derivative(g, lm.s.d, t.value, t.d);
  pc.s = engine::s_tensor(pc.w, lm.ginv);
  pc.torsion_norm_sq = engine::torsion_norm_sq(pc.w, lm.ginv);
  pc.codiff = engine::negative_trace_first_two(
      engine::covariant_derivative(pc.christoffel, pc.w, dw), lm.ginv);

  pc.scal_riemannian = trace_with(lm.ginv, pc.ricci_riemannian);
  pc.scal_nabla = trace_with(lm.ginv, pc.ricci);
  return pc;
}

struct CurvatureReport {
  Point point;  // empty for algebraic reports
  int dim = 0;
  Matrix frame;  // columns g-orthonormal, in the working basis

  // working-basis (chart coordinates or Lie algebra basis) components
  Tensor<double> christoffel;
  Tensor<double> connection;
  Tensor<double> curvature;

  // orthonormal-frame components
  Tensor<double> curvature_frame;
  Matrix ricci;
  Matrix ricci_sym;
  Matrix ricci_skew;
  Matrix ricci_riemannian;
  Matrix s_tensor;
  Matrix codiff_torsion;
  Matrix ricci_relation;  // Ric^g - S/4 - (d*T)/2

  double scal_riemannian = 0.0;
  double scal_nabla = 0.0;
  double torsion_norm_sq = 0.0;

  struct Basis {
    Matrix g;
    Matrix ricci;
    Matrix ricci_riemannian;
    Matrix s_tensor;
    Matrix codiff_torsion;
  } basis;
};

class RicciRouteMismatch : public std::runtime_error {
 public:
  RicciRouteMismatch(double discrepancy, Matrix contraction, Matrix relation);
  double discrepancy() const { return discrepancy_; }
  const Matrix& contraction() const { return contraction_; }
  const Matrix& relation() const { return relation_; }

 private:
  double discrepancy_;
  Matrix contraction_;
  Matrix relation_;
};

inline constexpr double kRicciRouteTol = 1e-9;

// Frame components, both Ricci routes, and the invariant checks. Throws
// RicciRouteMismatch when the routes disagree beyond tol * (1 + |Ric^g|_max).
CurvatureReport assemble_report(Point point, const PointCurvature<double>& pc,
                                double tol = kRicciRouteTol);

Tensor<double> christoffel(const MetricField& g, std::span<const double> x);
Tensor<double> connection_with_torsion(const MetricField& g, const TorsionField& t,
                                       std::span<const double> x);

struct CurvatureTensor {
  Tensor<double> basis;  // R(i, j, k, l) in coordinates
  Tensor<double> frame;  // in the Cholesky orthonormal frame
  Matrix e;
};
CurvatureTensor curvature_tensor(const MetricField& g, const TorsionField& t,
                                 std::span<const double> x);

// Coordinate components of S.
Matrix s_tensor(const MetricField& g, const TorsionField& t, std::span<const double> x);
double torsion_norm(const MetricField& g, const TorsionField& t, std::span<const double> x);

PointCurvature<double> point_curvature(const MetricField& g, const TorsionField& t,
                                       std::span<const double> x);
CurvatureReport curvature_report(const MetricField& g, const TorsionField& t,
                                 std::span<const double> x, double tol = kRicciRouteTol);

// |Ric_S - (Scal^nabla / n) g| in the orthonormal frame.
double einstein_deviation(const CurvatureReport& r);
inline constexpr double kEinsteinTol = 1e-8;
inline bool is_nabla_einstein_at(const CurvatureReport& r, double tol = kEinsteinTol) {
  return einstein_deviation(r) < tol;
}

// max |(nabla_m g)_ij| for the torsionful connection.
double metricity_residual(const MetricField& g, const TorsionField& t, std::span<const double> x);

}  // namespace skewtor

#endif  // SKEWTOR_CURVATURE_HPP_
