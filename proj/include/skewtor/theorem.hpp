// Integrated first variation of the scalar curvature with torsion against the
// first variation of the volume, at nabla-Einstein structures with constant
// Scal^nabla:
//   int (d/dt Scal^nabla) dV_g = -(2 Scal^nabla / n) d/dt Vol.

#ifndef SKEWTOR_THEOREM_HPP_
#define SKEWTOR_THEOREM_HPP_

#include <stdexcept>
#include <string>
#include <vector>

#include "skewtor/quadrature.hpp"
#include "skewtor/variation.hpp"

namespace skewtor {

class TheoremPreconditionError : public std::runtime_error {
 public:
  TheoremPreconditionError(std::string hypothesis, const std::string& detail)
      : std::runtime_error(hypothesis + ": " + detail), hypothesis_(std::move(hypothesis)) {}
  const std::string& hypothesis() const { return hypothesis_; }

 private:
  std::string hypothesis_;
};

inline constexpr double kConstancyTol = 1e-6;

struct TheoremDiagnostics {
  double max_einstein_deviation = 0.0;
  double scal_mean = 0.0;
  double scal_std = 0.0;
  double max_ricci_route_gap = 0.0;
  std::size_t nodes = 0;
};

struct TheoremResult {
  double lhs = 0.0;  // int d/dt Scal^nabla dV
  double rhs = 0.0;  // -(2 Scal^nabla / n) vol_rate
  double residual = 0.0;  // |lhs - rhs| / (1 + |rhs|)
  double scal_nabla = 0.0;
  double vol_rate = 0.0;
  // Range of the pointwise rate over the nodes (sign-change diagnostic).
  double rate_min = 0.0;
  double rate_max = 0.0;
  std::size_t nodes = 0;
};

struct TheoremReport {
  TheoremDiagnostics diagnostics;
  std::vector<TheoremResult> directions;
};

// Throws TheoremPreconditionError naming the violated hypothesis
// ("nabla-Einstein" or "constant Scal^nabla"). The Einstein gate at each node
// is einstein_tol times the coordinate condition number of g.
TheoremReport ville_theorem_check(const MetricField& g, const TorsionField& t,
                                  std::span<const SymTensorField> directions,
                                  const QuadratureGrid& grid, int threads = 1,
                                  double einstein_tol = kEinsteinTol,
                                  double constancy_tol = kConstancyTol);

TheoremResult ville_theorem_check(const MetricField& g, const TorsionField& t,
                                  const SymTensorField& h, const QuadratureGrid& grid,
                                  int threads = 1);

}  // namespace skewtor

#endif  // SKEWTOR_THEOREM_HPP_
