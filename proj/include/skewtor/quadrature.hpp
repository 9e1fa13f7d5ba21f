// Tensor-product quadrature against dV_g on compact charts: Gauss-Legendre on
// bounded axes (interior nodes only), the trapezoid rule on periodic axes.

#ifndef SKEWTOR_QUADRATURE_HPP_
#define SKEWTOR_QUADRATURE_HPP_

#include <functional>
#include <string>
#include <vector>

#include "skewtor/fields.hpp"

namespace skewtor {

struct AxisRule {
  std::string kind;  // "gauss-legendre" or "trapezoid"
  int order = 0;
  std::vector<double> nodes;
  std::vector<double> weights;
};

struct QuadratureGrid {
  int dim = 0;
  std::vector<Point> nodes;
  std::vector<double> weights;  // coordinate weights, measure normalization included
  std::vector<AxisRule> axes;
  std::size_t size() const { return nodes.size(); }
};

inline constexpr std::size_t kMaxGridNodes = 50'000'000;

AxisRule gauss_legendre(int order, double lo, double hi);
AxisRule trapezoid(int order, double lo, double hi);

// order^n nodes; throws for order < 4 and when the node count would exceed
// kMaxGridNodes.
QuadratureGrid build_grid(const Chart& chart, int order);

// Neumaier-compensated sum in the given order.
double compensated_sum(const std::vector<double>& terms);

using PointFunction = std::function<double(const Point&)>;

// sum_i w_i f(x_i) sqrt(det g(x_i)); throws on a non-finite sample, naming the node.
double integrate(const MetricField& g, const PointFunction& f, const QuadratureGrid& grid,
                 int threads = 1);
double volume(const MetricField& g, const QuadratureGrid& grid, int threads = 1);
// (1/2) int tr_g h dV_g.
double volume_rate(const MetricField& g, const SymTensorField& h, const QuadratureGrid& grid,
                   int threads = 1);
// Mean of f against dV_g.
double mean_value(const MetricField& g, const PointFunction& f, const QuadratureGrid& grid,
                  int threads = 1);

// (f - mean f) g: a conformal direction with int tr_g h dV_g = 0.
SymTensorField volume_neutral_direction(const MetricField& g, const FormField& f,
                                        const QuadratureGrid& grid, int threads = 1);

}  // namespace skewtor

#endif  // SKEWTOR_QUADRATURE_HPP_
