#include "skewtor/fields.hpp"

#include <cmath>
#include <sstream>

namespace skewtor {

Chart Chart::box(std::vector<double> lo, std::vector<double> hi, std::vector<bool> periodic,
                 double measure_norm) {
  Chart c;
  c.dim = static_cast<int>(lo.size());
  c.lo = std::move(lo);
  c.hi = std::move(hi);
  c.periodic = std::move(periodic);
  c.measure_norm = measure_norm;
  c.validate();
  return c;
}

void Chart::validate() const {
  if (dim < 3)
    throw GeometryError("chart dimension must be at least 3 (a 3-form needs n >= 3), got " +
                        std::to_string(dim));
  if (dim > kMaxChartDim)
    throw GeometryError("chart dimension " + std::to_string(dim) + " exceeds supported maximum " +
                        std::to_string(kMaxChartDim));
  if (static_cast<int>(lo.size()) != dim || static_cast<int>(hi.size()) != dim ||
      static_cast<int>(periodic.size()) != dim)
    throw GeometryError("chart box arrays must have one entry per coordinate");
  for (int i = 0; i < dim; ++i)
    if (!(lo[i] < hi[i])) throw GeometryError("chart box: lo >= hi on axis " + std::to_string(i));
  if (!(measure_norm > 0.0)) throw GeometryError("chart measure normalization must be positive");
}

bool Chart::contains(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim) return false;
  for (int i = 0; i < dim; ++i)
    if (!(x[i] >= lo[i] && x[i] <= hi[i])) return false;
  return true;
}

void Chart::require_contains(std::span<const double> x) const {
  if (!contains(x)) {
    std::ostringstream os;
    os << "point (";
    for (std::size_t i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
    os << ") lies outside the chart box";
    throw GeometryError(os.str());
  }
}

std::vector<Jet> jet_point(std::span<const double> x) {
  const int n = static_cast<int>(x.size());
  std::vector<Jet> v;
  v.reserve(n);
  for (int i = 0; i < n; ++i) v.push_back(Jet::variable(x[i], n, i));
  return v;
}

std::vector<Jet3> jet3_point(std::span<const double> x) {
  const int n = static_cast<int>(x.size());
  std::vector<Jet3> v;
  v.reserve(n);
  for (int i = 0; i < n; ++i) v.push_back(Jet3::variable(Dual::variable(x[i], n, i), n, i));
  return v;
}

Tensor<Jet> TensorField::jet_at(std::span<const double> x) const {
  chart_.require_contains(x);
  const std::vector<Jet> p = jet_point(x);
  return eval2_(p);
}

Tensor<Jet3> TensorField::jet3_at(std::span<const double> x) const {
  chart_.require_contains(x);
  const std::vector<Jet3> p = jet3_point(x);
  return eval3_(p);
}

Tensor<double> TensorField::value_at(std::span<const double> x) const {
  const Tensor<Jet> j = jet_at(x);
  Tensor<double> v(j.dim(), j.rank());
  for (std::size_t k = 0; k < j.size(); ++k) v.at_flat(k) = j.at_flat(k).value();
  return v;
}

FieldSample<double> sample(const TensorField& f, std::span<const double> x) {
  const Tensor<Jet> j = f.jet_at(x);
  const int n = f.dim();
  const std::size_t size = j.size();
  FieldSample<double> s{Tensor<double>(n, f.rank()), Tensor<double>(n, f.rank() + 1),
                        Tensor<double>(n, f.rank() + 2)};
  for (std::size_t k = 0; k < size; ++k) {
    const Jet& e = j.at_flat(k);
    s.value.at_flat(k) = e.value();
    for (int m = 0; m < n; ++m) {
      s.d.at_flat(m * size + k) = e.grad(m);
      for (int p = 0; p < n; ++p) s.dd.at_flat((m * n + p) * size + k) = e.hess(m, p);
    }
  }
  return s;
}

FieldSample<Dual> sample_dual(const TensorField& f, std::span<const double> x) {
  const Tensor<Jet3> j = f.jet3_at(x);
  const int n = f.dim();
  const std::size_t size = j.size();
  FieldSample<Dual> s{Tensor<Dual>(n, f.rank()), Tensor<Dual>(n, f.rank() + 1),
                      Tensor<Dual>(n, f.rank() + 2)};
  for (std::size_t k = 0; k < size; ++k) {
    const Jet3& e = j.at_flat(k);
    s.value.at_flat(k) = e.value();
    for (int m = 0; m < n; ++m) {
      s.d.at_flat(m * size + k) = e.grad(m);
      for (int p = 0; p < n; ++p) s.dd.at_flat((m * n + p) * size + k) = e.hess(m, p);
    }
  }
  return s;
}

FieldSample<Dual> sample_lifted(const TensorField& f, std::span<const double> x) {
  const Tensor<Jet> j = f.jet_at(x);
  const int n = f.dim();
  const std::size_t size = j.size();
  FieldSample<Dual> s{Tensor<Dual>(n, f.rank()), Tensor<Dual>(n, f.rank() + 1), {}};
  for (std::size_t k = 0; k < size; ++k) {
    const Jet& e = j.at_flat(k);
    Dual v = Dual::with_gradient(e.value(), n);
    for (int m = 0; m < n; ++m) v.d(m) = e.grad(m);
    s.value.at_flat(k) = v;
    for (int m = 0; m < n; ++m) {
      Dual dm = Dual::with_gradient(e.grad(m), n);
      for (int p = 0; p < n; ++p) dm.d(p) = e.hess(m, p);
      s.d.at_flat(m * size + k) = dm;
    }
  }
  return s;
}

namespace {

void require_spd(const Tensor<double>& g, std::span<const double> x) {
  try {
    (void)cholesky_lower(g);
  } catch (const NotPositiveDefinite& e) {
    std::ostringstream os;
    os << "metric is not positive definite at (";
    for (std::size_t i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
    os << "): " << e.what();
    throw GeometryError(os.str());
  }
}

Tensor<double> values_of(const Tensor<Dual>& t) {
  Tensor<double> v(t.dim(), t.rank());
  for (std::size_t k = 0; k < t.size(); ++k) v.at_flat(k) = t.at_flat(k).value();
  return v;
}

}  // namespace

LocalMetric<double> evaluate_metric_jet(const MetricField& g, std::span<const double> x) {
  LocalMetric<double> lm{sample(g, x), {}};
  require_spd(lm.s.value, x);
  lm.ginv = inverse(lm.s.value);
  return lm;
}

LocalMetric<Dual> evaluate_metric_dual(const MetricField& g, std::span<const double> x) {
  LocalMetric<Dual> lm{sample_dual(g, x), {}};
  require_spd(values_of(lm.s.value), x);
  lm.ginv = inverse(lm.s.value);
  return lm;
}

LocalMetric<Dual> evaluate_metric_lifted(const MetricField& g, std::span<const double> x) {
  LocalMetric<Dual> lm{sample_lifted(g, x), {}};
  require_spd(values_of(lm.s.value), x);
  lm.ginv = inverse(lm.s.value);
  return lm;
}

FramePoint orthonormal_frame(const MetricField& g, std::span<const double> x) {
  const Tensor<double> gv = g.value_at(x);
  require_spd(gv, x);
  return FramePoint{Point(x.begin(), x.end()), cholesky_frame(gv)};
}

Tensor<double> lower_torsion(const Tensor<double>& g, const Tensor<double>& t_up) {
  const int n = g.dim();
  Tensor<double> low(n, 3);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double s = 0.0;
        for (int l = 0; l < n; ++l) s += g(k, l) * t_up(l, i, j);
        low(i, j, k) = s;
      }
  return low;
}

Tensor<double> raise_torsion(const Tensor<double>& ginv, const Tensor<double>& t_low) {
  const int n = ginv.dim();
  Tensor<double> up(n, 3);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int l = 0; l < n; ++l) s += ginv(k, l) * t_low(i, j, l);
        up(k, i, j) = s;
      }
  return up;
}

TorsionValidation validate_torsion(const MetricField& g, const TorsionField& t,
                                   std::span<const Point> samples, double tol) {
  TorsionValidation out;
  const int n = g.dim();
  if (t.dim() != n) throw GeometryError("validate_torsion: metric and torsion charts differ");
  for (const Point& x : samples) {
    const Tensor<double> low = lower_torsion(g.value_at(x), t.value_at(x));
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          worst = std::max(worst, std::abs(low(i, j, k) + low(j, i, k)));
          worst = std::max(worst, std::abs(low(i, j, k) + low(i, k, j)));
        }
    out.max_violation = std::max(out.max_violation, worst);
    if (!(worst <= tol)) {
      out.pass = false;
      out.failing.push_back(x);
    }
  }
  return out;
}

MetricField perturbed(const MetricField& g, const SymTensorField& h, double t) {
  if (g.dim() != h.dim()) throw GeometryError("perturbed: dimension mismatch");
  return MetricField(g.chart(), [g, h, t](auto x) {
    auto a = g.evaluate(x);
    const auto b = h.evaluate(x);
    for (std::size_t k = 0; k < a.size(); ++k) a.at_flat(k) += b.at_flat(k) * t;
    return a;
  });
}

MetricField scaled(const MetricField& g, double s) {
  return MetricField(g.chart(), [g, s](auto x) {
    auto a = g.evaluate(x);
    for (std::size_t k = 0; k < a.size(); ++k) a.at_flat(k) = a.at_flat(k) * s;
    return a;
  });
}

TorsionField raised_form(std::shared_ptr<const MetricField> g, const FormField& w) {
  if (w.degree() != 3) throw GeometryError("raised_form: expected a 3-form");
  const MetricField& gm = *g;
  return TorsionField(
      gm.chart(),
      [gm, w](auto x) {
        const auto ginv = inverse(gm.evaluate(x));
        const auto wc = w.evaluate(x);
        const int n = ginv.dim();
        using S = std::decay_t<decltype(ginv.at_flat(0))>;
        Tensor<S> up(n, 3);
        for (int k = 0; k < n; ++k)
          for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
              S s(0.0);
              for (int l = 0; l < n; ++l) s += ginv(k, l) * wc(i, j, l);
              up(k, i, j) = s;
              up(k, j, i) = -s;
            }
        return up;
      },
      std::move(g));
}

FormField torsion_form(const MetricField& g, const TorsionField& t) {
  return FormField(g.chart(), 3, [g, t](auto x) {
    const auto gc = g.evaluate(x);
    const auto tc = t.evaluate(x);
    const int n = gc.dim();
    using S = std::decay_t<decltype(gc.at_flat(0))>;
    Tensor<S> low(n, 3);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          S s(0.0);
          for (int l = 0; l < n; ++l) s += gc(k, l) * tc(l, i, j);
          low(i, j, k) = s;
        }
    return low;
  });
}

SymTensorField as_sym_tensor(const MetricField& g, double s) {
  return SymTensorField(g.chart(), [g, s](auto x) {
    auto a = g.evaluate(x);
    if (s != 1.0)
      for (std::size_t k = 0; k < a.size(); ++k) a.at_flat(k) = a.at_flat(k) * s;
    return a;
  });
}

SymTensorField conformal_direction(const MetricField& g, const FormField& f) {
  if (f.degree() != 0) throw GeometryError("conformal_direction: expected a 0-form");
  return SymTensorField(g.chart(), [g, f](auto x) {
    auto a = g.evaluate(x);
    const auto fv = f.evaluate(x);
    const auto phi = fv.at_flat(0);
    for (std::size_t k = 0; k < a.size(); ++k) a.at_flat(k) = a.at_flat(k) * phi;
    return a;
  });
}

}  // namespace skewtor
