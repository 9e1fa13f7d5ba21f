// Exterior calculus on coordinate forms, divergences of symmetric tensors,
// and the Einstein tensor of the torsionful connection.
//
// Forms use the determinant convention: for a p-form w,
//   (D w)_{j0..jp} = sum_s (-1)^s (nabla_{j_s} w)_{j0..^js..jp}
//   (D* w)_{j2..jp} = -g^{ab} (nabla_a w)_{b j2..jp}
// with nabla = nabla^g for (d, d*) and nabla^g + T/2 for (d_nabla, d*_nabla).
// The matching pointwise inner product is <a, b> = (1/p!) a_I b^I.

#ifndef SKEWTOR_FORMS_HPP_
#define SKEWTOR_FORMS_HPP_

#include <span>

#include "skewtor/curvature.hpp"
#include "skewtor/fields.hpp"

namespace skewtor {

struct ExteriorDerivatives {
  Tensor<double> d_nabla;       // degree p + 1 (zero when p + 1 > n)
  Tensor<double> codiff_nabla;  // degree p - 1 (a zero scalar for p = 0)
  Tensor<double> d;
  Tensor<double> codiff;
};

ExteriorDerivatives covariant_exterior(const MetricField& g, const TorsionField& t,
                                       const FormField& w, std::span<const double> x);

// d(dw) with the Levi-Civita differential.
Tensor<double> exterior_derivative_twice(const MetricField& g, const FormField& w,
                                         std::span<const double> x);

// sigma_T = -(d_nabla T - dT) / 2 for the torsion 3-form.
Tensor<double> sigma_t(const MetricField& g, const TorsionField& t, std::span<const double> x);

struct ParallelTorsionIdentities {
  double codiff_torsion = 0.0;       // max |d*T|
  double codiff_nabla_gap = 0.0;     // max |d*_nabla T - d*T|
  double dt_minus_two_sigma = 0.0;   // max |dT - 2 sigma_T|
  double nabla_torsion = 0.0;        // max |nabla T|
};
ParallelTorsionIdentities parallel_torsion_identities(const MetricField& g, const TorsionField& t,
                                                      std::span<const double> x);

// (nabla_i T)_{jkl} for the torsionful connection.
Tensor<double> nabla_torsion(const MetricField& g, const TorsionField& t, std::span<const double> x);

// (1/p!) a_I b^I.
double form_inner(const Matrix& ginv, const Tensor<double>& a, const Tensor<double>& b);

// Div F (c) = -g^{ab} (nabla^g_a F)_{bc}.
Tensor<double> divergence_sym(const MetricField& g, const SymTensorField& f,
                              std::span<const double> x);
// Div(Div F), a scalar.
double divergence_of_divergence(const MetricField& g, const SymTensorField& f,
                                std::span<const double> x);
// Delta (tr_g h) with Delta = d*d.
double laplacian_of_trace(const MetricField& g, const SymTensorField& h, std::span<const double> x);
// The same two scalars from a lifted metric sample (see evaluate_metric_lifted)
// and a lifted sample of the tensor, for callers that reuse the metric.
double divergence_of_divergence(const LocalMetric<Dual>& lm, const FieldSample<Dual>& f);
double laplacian_of_trace(const LocalMetric<Dual>& lm, const FieldSample<Dual>& h);
// Delta f for a 0-form.
double laplacian(const MetricField& g, const FormField& f, std::span<const double> x);

struct EinsteinTensor {
  Matrix g_nabla;           // -Ric_S + Scal^nabla g / 2, coordinate components
  Tensor<double> div;       // Div G^nabla
  Matrix g_riemannian;      // Ric^g - Scal^g g / 2
  Tensor<double> div_riemannian;
};
// Divergences come from the third-order jet path (exact derivatives of the
// curvature), not from finite-difference stencils.
EinsteinTensor einstein_tensor_nabla(const MetricField& g, const TorsionField& t,
                                     std::span<const double> x);

}  // namespace skewtor

#endif  // SKEWTOR_FORMS_HPP_
