// First variations along metric curves g(t) = g + t h, holding the vector-valued
// torsion T^k_ij fixed, together with a finite-difference cross-check driver.

#ifndef SKEWTOR_VARIATION_HPP_
#define SKEWTOR_VARIATION_HPP_

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "skewtor/curvature.hpp"
#include "skewtor/quadrature.hpp"
#include "skewtor/spd.hpp"

namespace skewtor {

//--------------------------------------------------------------------------------------------------
// Pointwise linear algebra of the metric curve

struct IsometryPair {
  Matrix b;  // b(u, v) = a(B u, v), i.e. B = a^{-1} b
  Matrix d;  // B^{-1/2}; a(X, Y) = b(d X, d Y)
};
IsometryPair isometry_pair(const SpdMatrix& a, const SpdMatrix& b);

struct FrameCurveRate {
  Matrix d_rate;       // d/dt d^g_{g+th} at 0 as an endomorphism (coordinates)
  Matrix frame;        // the g-orthonormal frame e (columns)
  Matrix e_dot;        // columns: e_i'(0) = -1/2 sum_j h(e_i, e_j) e_j
  Matrix frame_rate;   // -1/2 h(e_i, e_j): e_dot expressed in the frame
};
FrameCurveRate frame_curve_rate(const SpdMatrix& g, const Matrix& h);

//--------------------------------------------------------------------------------------------------
// Richardson-extrapolated central differences

struct FdSchedule {
  std::array<double, 3> steps{1e-3, 5e-4, 2.5e-4};
};

struct FdEstimate {
  double value = 0.0;
  std::array<double, 3> steps{};
  std::array<double, 3> central{};
};

// Central differences D(t) at the three steps, then two Richardson levels:
// R1 = (4 D(t/2) - D(t)) / 3, R2 = (16 R1(t/2) - R1(t)) / 15.
FdEstimate richardson_derivative(const std::function<double(double)>& f,
                                 const FdSchedule& schedule = {});
// The schedule scaled so its largest step stays below epsilon / 10.
FdSchedule clamp_schedule(FdSchedule s, double epsilon);

struct VariationReport {
  std::string quantity;
  Point point;  // empty for integrated quantities
  double analytic = 0.0;
  double fd = 0.0;
  double abs_residual = 0.0;
  double rel_residual = 0.0;
  std::array<double, 3> steps{};
};
// |a - f| / max(|a|, |f|), zero when both vanish.
double relative_residual(double analytic, double fd);
VariationReport make_report(std::string quantity, Point x, double analytic, const FdEstimate& fd);

//--------------------------------------------------------------------------------------------------
// Metric curves

struct MetricCurve {
  const MetricField* g = nullptr;
  const SymTensorField* h = nullptr;
  double epsilon = 0.0;  // g + t h is SPD at all certification nodes for |t| <= epsilon
};

// epsilon = half the largest t for which g + t h is SPD at every node, capped
// at 1, confirmed by Cholesky at t = +-epsilon.
MetricCurve certify_curve(const MetricField& g, const SymTensorField& h,
                          std::span<const Point> nodes);

//--------------------------------------------------------------------------------------------------
// Analytic rates at a point

// Base data at x reused across directions h.
class RateContext {
 public:
  RateContext(const MetricField& g, const TorsionField& t, std::span<const double> x);

  double volume_element_rate(const Tensor<double>& h_value) const;
  double torsion_norm_rate(const Tensor<double>& h_value) const;
  double scalar_g_rate(const SymTensorField& h) const;
  double scalar_nabla_rate(const SymTensorField& h) const;
  // (G^nabla - Lambda g, h)_g
  double gradient_pairing(const Tensor<double>& h_value, double lambda) const;

  const PointCurvature<double>& curvature() const { return pc_; }
  const Point& point() const { return x_; }

 private:
  Point x_;
  PointCurvature<double> pc_;
  LocalMetric<Dual> lifted_;
};

// (A, B)_g = g^ia g^jb A_ij B_ab.
double pairing(const Matrix& ginv, const Matrix& a, const Matrix& b);

double volume_element_rate(const MetricField& g, const SymTensorField& h, std::span<const double> x);
double torsion_norm_rate(const MetricField& g, const TorsionField& t, const SymTensorField& h,
                         std::span<const double> x);
double scalar_g_rate(const MetricField& g, const SymTensorField& h, std::span<const double> x);
double scalar_nabla_rate(const MetricField& g, const TorsionField& t, const SymTensorField& h,
                         std::span<const double> x);

//--------------------------------------------------------------------------------------------------
// Quantities along the curve, used as finite-difference oracles. They never
// call the analytic rate code.

// log sqrt det(g + t h) at x.
double log_volume_element(const MetricField& g, const SymTensorField& h, double t,
                          std::span<const double> x);
// (1/6) sum_ij g_t(T(e_i, e_j), T(e_i, e_j)) over a g_t-orthonormal frame, T^k_ij fixed.
double torsion_norm_along(const MetricField& g, const TorsionField& t, const SymTensorField& h,
                          double s, std::span<const double> x);
double scalar_g_along(const MetricField& g, const SymTensorField& h, double s,
                      std::span<const double> x);
// Scal^{g_t} - (3/2) |T|^2_{g_t}.
double scalar_nabla_along(const MetricField& g, const TorsionField& t, const SymTensorField& h,
                          double s, std::span<const double> x);

//--------------------------------------------------------------------------------------------------
// Functional gradient

// G^nabla - Lambda g, sampled pointwise in coordinates. The field carries
// values only; its derivatives are never needed.
class GradientField {
 public:
  GradientField(const MetricField& g, const TorsionField& t, double lambda);
  Matrix at(std::span<const double> x) const;
  // (G^nabla - Lambda g, h)_g at x.
  double pairing_with(const SymTensorField& h, std::span<const double> x) const;
  double lambda() const { return lambda_; }

 private:
  const MetricField* g_;
  const TorsionField* t_;
  double lambda_;
};
GradientField functional_gradient(const MetricField& g, const TorsionField& t, double lambda);

// L(g + s h) = int (Scal^nabla_{g_s} - 2 Lambda) dV_{g_s} with T^k_ij fixed.
double functional_along(const MetricField& g, const TorsionField& t, const SymTensorField& h,
                        double s, double lambda, const QuadratureGrid& grid, int threads = 1);

}  // namespace skewtor

#endif  // SKEWTOR_VARIATION_HPP_
