#include "skewtor/random.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "skewtor/spd.hpp"

namespace skewtor {

namespace {

template <typename X>
using Scalar = std::remove_cv_t<typename X::element_type>;

void normalize_l1(std::vector<double>& c, double amplitude) {
  double s = 0.0;
  for (double v : c) s += std::abs(v);
  if (s == 0.0) return;
  for (double& v : c) v *= amplitude / s;
}

// det of the 3x3 minor of sigma with rows (a, b, c) and columns (i, j, k).
template <typename S>
S minor3(const Tensor<S>& s, int a, int b, int c, int i, int j, int k) {
  return s(a, i) * (s(b, j) * s(c, k) - s(b, k) * s(c, j)) -
         s(a, j) * (s(b, i) * s(c, k) - s(b, k) * s(c, i)) +
         s(a, k) * (s(b, i) * s(c, j) - s(b, j) * s(c, i));
}

}  // namespace

RandomScalar::RandomScalar(ChartKind kind, int dim, double period, double offset,
                           double amplitude, std::mt19937_64& rng)
    : kind_(kind), dim_(dim), freq_(2.0 * std::numbers::pi / period), offset_(offset) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  if (kind == ChartKind::kEulerS3) {
    coeff_.resize(10);
    for (double& c : coeff_) c = u(rng);
  } else {
    constexpr int kWaves = 4;
    std::uniform_int_distribution<int> w(-1, 1);
    for (int t = 0; t < kWaves; ++t) {
      std::vector<int> k(dim, 0);
      while (std::all_of(k.begin(), k.end(), [](int v) { return v == 0; }))
        for (int& v : k) v = w(rng);
      waves_.insert(waves_.end(), k.begin(), k.end());
      coeff_.push_back(u(rng));
      coeff_.push_back(u(rng));
    }
  }
  normalize_l1(coeff_, amplitude);
}

FieldFactory::FieldFactory(const GeometryBundle& bundle, std::uint64_t seed)
    : bundle_(bundle), rng_(seed) {}

Point FieldFactory::point() {
  const Chart& c = bundle_.chart;
  Point x(c.dim);
  for (int i = 0; i < c.dim; ++i) {
    double lo = c.lo[i];
    double hi = c.hi[i];
    if (!c.periodic[i] && bundle_.kind == ChartKind::kEulerS3) {
      lo += 0.15;
      hi -= 0.15;
    }
    std::uniform_real_distribution<double> u(lo, hi);
    x[i] = u(rng_);
  }
  return x;
}

std::vector<Point> FieldFactory::points(int count) {
  std::vector<Point> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) out.push_back(point());
  return out;
}

RandomScalar FieldFactory::scalar(double offset, double amplitude) {
  const double period = bundle_.kind == ChartKind::kTorus ? bundle_.params.at("period") : 1.0;
  return RandomScalar(bundle_.kind, bundle_.chart.dim, period, offset, amplitude, rng_);
}

FormField FieldFactory::scalar_field(double offset, double amplitude) {
  const RandomScalar f = scalar(offset, amplitude);
  return FormField(bundle_.chart, 0, [f](auto x) {
    using S = Scalar<decltype(x)>;
    Tensor<S> out(static_cast<int>(x.size()), 0);
    out.at_flat(0) = f(x);
    return out;
  });
}

SymTensorField FieldFactory::sym_tensor(double amplitude) {
  const int n = bundle_.chart.dim;
  std::vector<RandomScalar> f;
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) f.push_back(scalar(0.0, amplitude));
  const TensorField coframe = bundle_.coframe;
  return SymTensorField(bundle_.chart, [n, f, coframe](auto x) {
    using S = Scalar<decltype(x)>;
    Tensor<S> fm(n, 2);
    for (int a = 0, k = 0; a < n; ++a)
      for (int b = a; b < n; ++b, ++k) {
        const S v = f[k](x);
        fm(a, b) = v;
        fm(b, a) = v;
      }
    return zoo::from_frame(coframe.evaluate(x), fm);
  });
}

double perturbation_amplitude(const GeometryBundle& b) {
  const SymmetricEigen e = symmetric_eigen(b.frame_metric);
  return 0.3 * e.values.front() / b.chart.dim;
}

std::shared_ptr<const MetricField> FieldFactory::randomized_metric() {
  const SymTensorField h = sym_tensor(perturbation_amplitude(bundle_));
  return std::make_shared<const MetricField>(perturbed(*bundle_.metric, h, 1.0));
}

FormField FieldFactory::three_form(double offset, double amplitude) {
  const int n = bundle_.chart.dim;
  std::vector<RandomScalar> f;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int c = b + 1; c < n; ++c) f.push_back(scalar(offset, amplitude));
  const TensorField coframe = bundle_.coframe;
  return FormField(bundle_.chart, 3, [n, f, coframe](auto x) {
    using S = Scalar<decltype(x)>;
    const Tensor<S> sigma = coframe.evaluate(x);
    std::vector<S> fv;
    fv.reserve(f.size());
    for (const RandomScalar& r : f) fv.push_back(r(x));
    Tensor<S> w(n, 3);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        for (int k = j + 1; k < n; ++k) {
          S s(0.0);
          int t = 0;
          for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b)
              for (int c = b + 1; c < n; ++c, ++t) s += fv[t] * minor3(sigma, a, b, c, i, j, k);
          w(i, j, k) = s;
          w(j, k, i) = s;
          w(k, i, j) = s;
          w(j, i, k) = -s;
          w(i, k, j) = -s;
          w(k, j, i) = -s;
        }
    return w;
  });
}

TorsionField FieldFactory::torsion(std::shared_ptr<const MetricField> g, double offset,
                                   double amplitude) {
  return raised_form(std::move(g), three_form(offset, amplitude));
}

}  // namespace skewtor
