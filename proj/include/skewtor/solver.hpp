// Gauss-Newton search for nabla-Einstein left-invariant structures.
//
// A Family maps a parameter vector p to (metric, torsion) on the algebra:
//   g = sum_k p_k * (identity on the indices of metric group k)
//   T = sum_m p_{K+m} * W_m   for fixed 3-form generators W_m.
// Both are linear in p, so scaling p by s maps (g, T) to (s g, s T); with the
// vector-valued torsion held fixed this preserves the nabla-Einstein condition.

#ifndef SKEWTOR_SOLVER_HPP_
#define SKEWTOR_SOLVER_HPP_

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "skewtor/lie.hpp"
#include "skewtor/zoo.hpp"

namespace skewtor {

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Family {
  std::string name;
  int dim = 0;
  std::vector<std::vector<int>> metric_groups;
  std::vector<Tensor<double>> torsion_generators;  // lowered 3-forms
  std::vector<std::string> param_names;

  int size() const {
    return static_cast<int>(metric_groups.size() + torsion_generators.size());
  }
  void validate() const;

  template <typename S>
  void build(std::span<const S> p, Tensor<S>& g, Tensor<S>& w) const {
    g = Tensor<S>(dim, 2);
    w = Tensor<S>(dim, 3);
    const int k_metric = static_cast<int>(metric_groups.size());
    for (int k = 0; k < k_metric; ++k)
      for (int i : metric_groups[k]) g(i, i) = p[k];
    for (std::size_t m = 0; m < torsion_generators.size(); ++m) {
      const Tensor<double>& gen = torsion_generators[m];
      for (std::size_t f = 0; f < gen.size(); ++f)
        if (gen.at_flat(f) != 0.0) w.at_flat(f) += p[k_metric + m] * gen.at_flat(f);
    }
  }
  InvariantStructure structure(std::span<const double> p) const;
};

// diag(a, b, c) on su(2) with T = lambda e^123.
Family su2_diagonal_family();
// Berger metrics diag(a, b, b) on su(2) with T = lambda e^123.
Family su2_berger_family();
// su(2) + su(2) with metric diag(a I, b I) and T = lambda1 e^123 + lambda2 e^456.
Family su2_pair_family(bool with_second_torsion = true);
// Each basis index its own metric group; one generator per basis 3-form
// e^{ijk}, i < j < k. Throws if that exceeds kMaxParams.
Family generic_diagonal_family(int dim);
// Symmetric 3-form with W(i, j, k) = value, completed by antisymmetry.
Tensor<double> basis_three_form(int dim, int i, int j, int k, double value = 1.0);

struct SolverConfig {
  double tol = 1e-10;
  int max_iterations = 100;
  int max_rejections = 30;  // non-SPD trial points tolerated per solve
  double min_step = 1e-12;  // line-search floor on the step fraction
};

struct SolverResult {
  std::vector<double> seed;
  std::vector<double> params;
  InvariantStructure structure;
  double residual = 0.0;            // stacked residual norm, solver bookkeeping
  double certified_residual = 0.0;  // independent einstein_residual at the solution
  double det_gap = 0.0;             // |det g - 1|
  int iterations = 0;
  bool converged = false;
  double scal_nabla = 0.0;
  double torsion_norm_sq = 0.0;
  std::string message;
};

// Stacked residual: the packed Einstein residual followed by det g - 1.
template <typename S>
std::vector<S> stacked_residual(const LieAlgebraData& c, const Family& f, std::span<const S> p) {
  Tensor<S> g;
  Tensor<S> w;
  f.build(p, g, w);
  std::vector<S> r = lie::einstein_residual_vector(lie::invariant_curvature(c.c, g, w));
  r.push_back(determinant(g) - 1.0);
  return r;
}

// Jacobian of the stacked residual by forward-mode jets over the parameters,
// one inner vector per residual row.
std::vector<std::vector<double>> residual_jacobian(const LieAlgebraData& c, const Family& f, std::span<const double> p);

// max relative gap between the jet Jacobian and Richardson finite differences.
double jacobian_fd_check(const LieAlgebraData& c, const Family& f, std::span<const double> p);

// `free_mask` (optional) pins parameters not marked free at their seed value.
// When every parameter is free, the seed is first rescaled to det g = 1.
SolverResult solve_einstein(const LieAlgebraData& c, const Family& f, std::vector<double> seed,
                            const SolverConfig& config = {},
                            const std::vector<bool>* free_mask = nullptr);

struct SeedOutcome {
  std::vector<double> seed;
  std::optional<SolverResult> result;
  std::string error;  // set when the solve threw
};

struct Campaign {
  std::vector<SeedOutcome> outcomes;
  std::vector<SolverResult> distinct;  // converged, pairwise parameter distance > threshold
};

Campaign run_campaign(const LieAlgebraData& c, const Family& f,
                      const std::vector<std::vector<double>>& seeds,
                      const SolverConfig& config = {}, int threads = 1,
                      double distinct_threshold = 1e-6);

// Seeds drawn uniformly: metric groups in [0.5, 2], torsion in [-2, 2].
std::vector<std::vector<double>> seed_grid(const Family& f, int count, std::uint64_t seed);

struct ContinuationRow {
  double value = 0.0;
  SolverResult result;
};

// Pins parameter `index` to each value in turn, solves for the rest, and
// warm-starts from the previous point.
std::vector<ContinuationRow> continuation(const LieAlgebraData& c, const Family& f, int index,
                                          const std::vector<double>& values,
                                          std::vector<double> start,
                                          const SolverConfig& config = {});

//--------------------------------------------------------------------------------------------------
// Chart engine vs algebraic engine

struct CrossValidationRow {
  std::string field;
  double max_abs_diff = 0.0;
  Point worst_point;
};

struct CrossValidation {
  std::vector<CrossValidationRow> rows;
  double max_abs_diff = 0.0;
  bool pass = true;
};

class CrossValidationError : public std::runtime_error {
 public:
  CrossValidationError(const std::string& msg, CrossValidation table)
      : std::runtime_error(msg), table_(std::move(table)) {}
  const CrossValidation& table() const { return table_; }

 private:
  CrossValidation table_;
};

// Compares every curvature field of the chart engine, transported to the
// left-invariant frame E = sigma^{-1}, with the algebraic engine. Throws
// CrossValidationError naming the worst field and point above tol.
CrossValidation cross_validate(const GeometryBundle& bundle, std::span<const Point> points,
                               double tol = 1e-8);

}  // namespace skewtor

#endif  // SKEWTOR_SOLVER_HPP_
