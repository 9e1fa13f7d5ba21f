#include "skewtor/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "skewtor/parallel.hpp"

namespace skewtor {

AxisRule gauss_legendre(int order, double lo, double hi) {
  AxisRule r{"gauss-legendre", order, std::vector<double>(order), std::vector<double>(order)};
  const double mid = 0.5 * (hi + lo);
  const double half = 0.5 * (hi - lo);
  for (int i = 0; i < (order + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = 0.0;
      for (int k = 1; k <= order; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
      }
      dp = order * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    // recompute the derivative at the converged root
    double p0 = 1.0;
    double p1 = 0.0;
    for (int k = 1; k <= order; ++k) {
      const double p2 = p1;
      p1 = p0;
      p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
    }
    dp = order * (z * p0 - p1) / (z * z - 1.0);
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    r.nodes[i] = mid - half * z;
    r.nodes[order - 1 - i] = mid + half * z;
    r.weights[i] = half * w;
    r.weights[order - 1 - i] = half * w;
  }
  return r;
}

AxisRule trapezoid(int order, double lo, double hi) {
  AxisRule r{"trapezoid", order, std::vector<double>(order), std::vector<double>(order)};
  const double h = (hi - lo) / order;
  for (int i = 0; i < order; ++i) {
    r.nodes[i] = lo + i * h;
    r.weights[i] = h;
  }
  return r;
}

QuadratureGrid build_grid(const Chart& chart, int order) {
  chart.validate();
  if (order < 4) throw std::invalid_argument("quadrature order must be at least 4");
  const int n = chart.dim;
  if (n * std::log(static_cast<double>(order)) > std::log(static_cast<double>(kMaxGridNodes))) {
    std::ostringstream os;
    os << "grid of order " << order << " in dimension " << n << " exceeds " << kMaxGridNodes
       << " nodes; use a lower order";
    throw std::invalid_argument(os.str());
  }
  QuadratureGrid g;
  g.dim = n;
  for (int i = 0; i < n; ++i)
    g.axes.push_back(chart.periodic[i] ? trapezoid(order, chart.lo[i], chart.hi[i])
                                       : gauss_legendre(order, chart.lo[i], chart.hi[i]));
  std::size_t total = 1;
  for (int i = 0; i < n; ++i) total *= static_cast<std::size_t>(order);
  g.nodes.reserve(total);
  g.weights.reserve(total);
  std::vector<int> idx(n, 0);
  for (std::size_t k = 0; k < total; ++k) {
    Point x(n);
    double w = chart.measure_norm;
    for (int i = 0; i < n; ++i) {
      x[i] = g.axes[i].nodes[idx[i]];
      w *= g.axes[i].weights[idx[i]];
    }
    g.nodes.push_back(std::move(x));
    g.weights.push_back(w);
    for (int i = n - 1; i >= 0; --i) {
      if (++idx[i] < order) break;
      idx[i] = 0;
    }
  }
  return g;
}

double compensated_sum(const std::vector<double>& terms) {
  double sum = 0.0;
  double c = 0.0;
  for (double v : terms) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v))
      c += (sum - t) + v;
    else
      c += (v - t) + sum;
    sum = t;
  }
  return sum + c;
}

double integrate(const MetricField& g, const PointFunction& f, const QuadratureGrid& grid,
                 int threads) {
  if (grid.dim != g.dim()) throw GeometryError("integrate: grid and metric charts differ");
  std::vector<double> terms(grid.size());
  parallel_for(grid.size(), threads, [&](std::size_t i) {
    const Point& x = grid.nodes[i];
    const double fx = f(x);
    const double vol = std::sqrt(determinant(g.value_at(x)));
    const double v = grid.weights[i] * fx * vol;
    if (!std::isfinite(v)) {
      std::ostringstream os;
      os << "non-finite integrand at node " << i << " (";
      for (std::size_t k = 0; k < x.size(); ++k) os << (k ? ", " : "") << x[k];
      os << ")";
      throw std::domain_error(os.str());
    }
    terms[i] = v;
  });
  return compensated_sum(terms);
}

double volume(const MetricField& g, const QuadratureGrid& grid, int threads) {
  return integrate(g, [](const Point&) { return 1.0; }, grid, threads);
}

double volume_rate(const MetricField& g, const SymTensorField& h, const QuadratureGrid& grid,
                   int threads) {
  return integrate(
      g,
      [&](const Point& x) { return 0.5 * trace_with(inverse(g.value_at(x)), h.value_at(x)); },
      grid, threads);
}

double mean_value(const MetricField& g, const PointFunction& f, const QuadratureGrid& grid,
                  int threads) {
  return integrate(g, f, grid, threads) / volume(g, grid, threads);
}

SymTensorField volume_neutral_direction(const MetricField& g, const FormField& f,
                                        const QuadratureGrid& grid, int threads) {
  if (f.degree() != 0) throw GeometryError("volume_neutral_direction: expected a 0-form");
  const double mean =
      mean_value(g, [&](const Point& x) { return f.value_at(x).at_flat(0); }, grid, threads);
  const FormField centered(f.chart(), 0, [f, mean](auto x) {
    auto v = f.evaluate(x);
    v.at_flat(0) = v.at_flat(0) - mean;
    return v;
  });
  return conformal_direction(g, centered);
}

}  // namespace skewtor
