// Seeded random smooth fields on the zoo charts.
//
// Scalars are globally smooth on the underlying compact manifold: sparse
// trigonometric polynomials on tori, and quadratic polynomials in the unit
// quaternion on S^3 (even, hence well defined on SU(2) and periodic in the
// Euler chart). Tensors are assembled from scalars in the bundle's global
// coframe, so they are smooth across the chart's coordinate singularities.

#ifndef SKEWTOR_RANDOM_HPP_
#define SKEWTOR_RANDOM_HPP_

#include <cstdint>
#include <memory>
#include <random>
#include <vector>

#include "skewtor/zoo.hpp"

namespace skewtor {

class RandomScalar {
 public:
  RandomScalar() = default;
  // Sup norm of the non-constant part is at most `amplitude`.
  RandomScalar(ChartKind kind, int dim, double period, double offset, double amplitude,
               std::mt19937_64& rng);

  template <typename S>
  S operator()(std::span<const S> x) const {
    using std::cos;
    using std::sin;
    S f(offset_);
    if (kind_ == ChartKind::kEulerS3) {
      const std::array<S, 4> q = zoo::quaternion<S>(x);
      for (int a = 0, k = 0; a < 4; ++a)
        for (int b = a; b < 4; ++b, ++k) f += q[a] * q[b] * coeff_[k];
      return f;
    }
    for (std::size_t t = 0; t < coeff_.size(); t += 2) {
      S phase(0.0);
      const int* w = &waves_[(t / 2) * dim_];
      for (int i = 0; i < dim_; ++i)
        if (w[i] != 0) phase += x[i] * (w[i] * freq_);
      f += cos(phase) * coeff_[t] + sin(phase) * coeff_[t + 1];
    }
    return f;
  }

 private:
  ChartKind kind_ = ChartKind::kTorus;
  int dim_ = 0;
  double freq_ = 1.0;
  double offset_ = 0.0;
  std::vector<double> coeff_;
  std::vector<int> waves_;
};

class FieldFactory {
 public:
  FieldFactory(const GeometryBundle& bundle, std::uint64_t seed);

  const GeometryBundle& bundle() const { return bundle_; }

  // Uniform interior point; theta stays 0.15 away from the chart's poles.
  Point point();
  std::vector<Point> points(int count);

  RandomScalar scalar(double offset, double amplitude);
  FormField scalar_field(double offset, double amplitude);

  // h = sum_ab F_ab sigma^a sigma^b with |F_ab| <= amplitude.
  SymTensorField sym_tensor(double amplitude);

  // Bundle metric plus a random symmetric perturbation, with frame amplitude
  // 0.3 lambda_min / n so the result stays SPD everywhere.
  std::shared_ptr<const MetricField> randomized_metric();

  // sum over index triples of f_abc sigma^a ^ sigma^b ^ sigma^c.
  FormField three_form(double offset, double amplitude);
  // A random 3-form raised with g, so the lowered torsion is skew.
  TorsionField torsion(std::shared_ptr<const MetricField> g, double offset, double amplitude);

  std::mt19937_64& rng() { return rng_; }

 private:
  GeometryBundle bundle_;
  std::mt19937_64 rng_;
};

// Metric perturbation amplitude used by randomized_metric.
double perturbation_amplitude(const GeometryBundle& b);

}  // namespace skewtor

#endif  // SKEWTOR_RANDOM_HPP_
