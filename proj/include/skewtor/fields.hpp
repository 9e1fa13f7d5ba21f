// Coordinate charts and tensor fields evaluated on them.
//
// A field is a closure over chart coordinates. It is written once as a generic
// callable and instantiated for two scalar types: Jet (exact first and second
// partials) and Jet3 (the same, with each slot carrying one more derivative).

#ifndef SKEWTOR_FIELDS_HPP_
#define SKEWTOR_FIELDS_HPP_

#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "skewtor/jet.hpp"
#include "skewtor/tensor.hpp"

namespace skewtor {

using Point = std::vector<double>;

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Chart {
  int dim = 3;
  std::vector<double> lo;
  std::vector<double> hi;
  std::vector<bool> periodic;
  double measure_norm = 1.0;

  static Chart box(std::vector<double> lo, std::vector<double> hi, std::vector<bool> periodic,
                   double measure_norm = 1.0);

  void validate() const;
  bool contains(std::span<const double> x) const;
  void require_contains(std::span<const double> x) const;
};

class TensorField {
 public:
  TensorField() = default;

  // f must be callable as f(std::span<const S>) -> Tensor<S> for S in {Jet, Jet3}.
  template <typename F>
  TensorField(Chart chart, int rank, F f)
      : chart_(std::move(chart)),
        rank_(rank),
        eval2_([f](std::span<const Jet> x) { return f(x); }),
        eval3_([f](std::span<const Jet3> x) { return f(x); }) {
    chart_.validate();
  }

  const Chart& chart() const { return chart_; }
  int dim() const { return chart_.dim; }
  int rank() const { return rank_; }

  Tensor<Jet> evaluate(std::span<const Jet> x) const { return eval2_(x); }
  Tensor<Jet3> evaluate(std::span<const Jet3> x) const { return eval3_(x); }

  // Evaluation at a chart point with coordinate variables seeded.
  Tensor<Jet> jet_at(std::span<const double> x) const;
  Tensor<Jet3> jet3_at(std::span<const double> x) const;
  Tensor<double> value_at(std::span<const double> x) const;

 private:
  Chart chart_;
  int rank_ = 0;
  std::function<Tensor<Jet>(std::span<const Jet>)> eval2_;
  std::function<Tensor<Jet3>(std::span<const Jet3>)> eval3_;
};

// g_ij; value part SPD in the chart box.
class MetricField : public TensorField {
 public:
  MetricField() = default;
  template <typename F>
  MetricField(Chart chart, F f) : TensorField(std::move(chart), 2, std::move(f)) {}
};

// h_ij; symmetric.
class SymTensorField : public TensorField {
 public:
  SymTensorField() = default;
  template <typename F>
  SymTensorField(Chart chart, F f) : TensorField(std::move(chart), 2, std::move(f)) {}
};

// Vector-valued torsion T^k_ij stored as t(k, i, j), antisymmetric in (i, j).
// Lowering with the companion metric gives the 3-form T_ijk = g_kl T^l_ij.
class TorsionField : public TensorField {
 public:
  TorsionField() = default;
  template <typename F>
  TorsionField(Chart chart, F f, std::shared_ptr<const MetricField> base = nullptr)
      : TensorField(std::move(chart), 3, std::move(f)), base_(std::move(base)) {}

  const MetricField* base_metric() const { return base_.get(); }

 private:
  std::shared_ptr<const MetricField> base_;
};

// Fully antisymmetric coordinate components of a p-form.
class FormField : public TensorField {
 public:
  FormField() = default;
  template <typename F>
  FormField(Chart chart, int degree, F f) : TensorField(std::move(chart), degree, std::move(f)) {}
  int degree() const { return rank(); }
};

std::vector<Jet> jet_point(std::span<const double> x);
std::vector<Jet3> jet3_point(std::span<const double> x);

//--------------------------------------------------------------------------------------------------
// Local samples: a field's components together with coordinate derivatives.
// d(m, ...) = d/dx^m, dd(m, p, ...) = d^2/dx^m dx^p. dd may be empty.

template <typename V>
struct FieldSample {
  Tensor<V> value;
  Tensor<V> d;
  Tensor<V> dd;
  bool has_second() const { return !dd.empty(); }
};

// Exact (value, first, second) partials at a point.
FieldSample<double> sample(const TensorField& f, std::span<const double> x);
// Third-order path: every slot carries its own coordinate gradient.
FieldSample<Dual> sample_dual(const TensorField& f, std::span<const double> x);
// Second-order data repacked as (value, first) with gradients; dd empty.
FieldSample<Dual> sample_lifted(const TensorField& f, std::span<const double> x);

template <typename V>
struct LocalMetric {
  FieldSample<V> s;
  Tensor<V> ginv;
  int dim() const { return s.value.dim(); }
  const Tensor<V>& g() const { return s.value; }
};

// Metric value and exact partials; rejects points outside the chart and
// non-SPD values.
LocalMetric<double> evaluate_metric_jet(const MetricField& g, std::span<const double> x);
LocalMetric<Dual> evaluate_metric_dual(const MetricField& g, std::span<const double> x);
LocalMetric<Dual> evaluate_metric_lifted(const MetricField& g, std::span<const double> x);

struct FramePoint {
  Point x;
  Matrix e;  // columns e_1..e_n, E^T g E = I
};

FramePoint orthonormal_frame(const MetricField& g, std::span<const double> x);

struct TorsionValidation {
  bool pass = true;
  double max_violation = 0.0;
  std::vector<Point> failing;
};

inline constexpr double kTorsionAntisymmetryTol = 1e-10;

// Pass iff the lowered torsion is fully antisymmetric at every sample.
TorsionValidation validate_torsion(const MetricField& g, const TorsionField& t,
                                   std::span<const Point> samples,
                                   double tol = kTorsionAntisymmetryTol);

// T_ijk = g_kl T^l_ij at a point (values only).
Tensor<double> lower_torsion(const Tensor<double>& g, const Tensor<double>& t_up);
// T^k_ij = g^kl T_ijl.
Tensor<double> raise_torsion(const Tensor<double>& ginv, const Tensor<double>& t_low);

//--------------------------------------------------------------------------------------------------
// Field combinators

// g + t h.
MetricField perturbed(const MetricField& g, const SymTensorField& h, double t);
// s g.
MetricField scaled(const MetricField& g, double s);
// T^k_ij = g^kl w_ijl for a 3-form w and the metric g.
TorsionField raised_form(std::shared_ptr<const MetricField> g, const FormField& w);
// T_ijk = g_kl T^l_ij as a 3-form field.
FormField torsion_form(const MetricField& g, const TorsionField& t);
// A metric viewed as a symmetric tensor field, scaled by s.
SymTensorField as_sym_tensor(const MetricField& g, double s = 1.0);
// f g for a scalar field given as a 0-form.
SymTensorField conformal_direction(const MetricField& g, const FormField& f);

}  // namespace skewtor

#endif  // SKEWTOR_FIELDS_HPP_
