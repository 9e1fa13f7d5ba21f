#include "skewtor/theorem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "skewtor/parallel.hpp"
#include "skewtor/spd.hpp"

namespace skewtor {

TheoremReport ville_theorem_check(const MetricField& g, const TorsionField& t,
                                  std::span<const SymTensorField> directions,
                                  const QuadratureGrid& grid, int threads, double einstein_tol,
                                  double constancy_tol) {
  if (grid.dim != g.dim() || t.dim() != g.dim())
    throw GeometryError("ville_theorem_check: fields and grid live on different charts");
  const std::size_t count = grid.size();
  const std::size_t m = directions.size();
  std::vector<double> scal(count), deviation(count), route_gap(count), vol(count);
  // deviation over the coordinate condition number of g; the chart near a
  // coordinate singularity amplifies rounding in frame components by about that much
  std::vector<double> gated(count);
  // rate(k, i), vol_rate(k, i) laid out direction-major for ordered summation
  std::vector<double> rate(m * count), vrate(m * count);

  parallel_for(count, threads, [&](std::size_t i) {
    const Point& x = grid.nodes[i];
    const RateContext rc(g, t, x);
    const CurvatureReport rep = assemble_report(x, rc.curvature(), std::numeric_limits<double>::max());
    scal[i] = rep.scal_nabla;
    deviation[i] = einstein_deviation(rep);
    const SymmetricEigen e = symmetric_eigen(rc.curvature().g);
    gated[i] = deviation[i] / std::max(1.0, e.values.back() / e.values.front());
    route_gap[i] = max_abs(rep.ricci - rep.ricci_relation);
    const double w = grid.weights[i] * std::sqrt(determinant(rc.curvature().g));
    vol[i] = w;
    for (std::size_t k = 0; k < m; ++k) {
      const double r = rc.scalar_nabla_rate(directions[k]);
      rate[k * count + i] = r;
      vrate[k * count + i] = w * rc.volume_element_rate(directions[k].value_at(x));
    }
  });

  TheoremReport out;
  TheoremDiagnostics& d = out.diagnostics;
  d.nodes = count;
  d.max_einstein_deviation = *std::max_element(deviation.begin(), deviation.end());
  d.max_ricci_route_gap = *std::max_element(route_gap.begin(), route_gap.end());
  d.scal_mean = compensated_sum(scal) / static_cast<double>(count);
  std::vector<double> sq(count);
  for (std::size_t i = 0; i < count; ++i) sq[i] = (scal[i] - d.scal_mean) * (scal[i] - d.scal_mean);
  d.scal_std = std::sqrt(compensated_sum(sq) / static_cast<double>(count));

  if (!(*std::max_element(gated.begin(), gated.end()) < einstein_tol)) {
    std::ostringstream os;
    os << "max |Ric_S - (Scal/n) g| = " << d.max_einstein_deviation << " over " << count
       << " nodes exceeds " << einstein_tol << " times the condition number of g";
    throw TheoremPreconditionError("nabla-Einstein", os.str());
  }
  if (!(d.scal_std < constancy_tol * (1.0 + std::abs(d.scal_mean)))) {
    std::ostringstream os;
    os << "standard deviation " << d.scal_std << " of Scal^nabla (mean " << d.scal_mean
       << ") exceeds " << constancy_tol << " (1 + |mean|)";
    throw TheoremPreconditionError("constant Scal^nabla", os.str());
  }

  const int n = g.dim();
  for (std::size_t k = 0; k < m; ++k) {
    std::vector<double> terms(count);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t i = 0; i < count; ++i) {
      const double r = rate[k * count + i];
      terms[i] = vol[i] * r;
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    TheoremResult res;
    res.nodes = count;
    res.scal_nabla = d.scal_mean;
    res.lhs = compensated_sum(terms);
    res.vol_rate = compensated_sum(std::vector<double>(vrate.begin() + k * count,
                                                       vrate.begin() + (k + 1) * count));
    res.rhs = -(2.0 * d.scal_mean / n) * res.vol_rate;
    res.residual = std::abs(res.lhs - res.rhs) / (1.0 + std::abs(res.rhs));
    res.rate_min = lo;
    res.rate_max = hi;
    out.directions.push_back(res);
  }
  return out;
}

TheoremResult ville_theorem_check(const MetricField& g, const TorsionField& t,
                                  const SymTensorField& h, const QuadratureGrid& grid,
                                  int threads) {
  const SymTensorField hs[1] = {h};
  return ville_theorem_check(g, t, std::span<const SymTensorField>(hs, 1), grid, threads)
      .directions.front();
}

}  // namespace skewtor
