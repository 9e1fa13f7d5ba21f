#include "skewtor/solver.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "skewtor/parallel.hpp"
#include "skewtor/variation.hpp"

namespace skewtor {

namespace {

double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// Residual at p, or nothing when the metric leaves the SPD cone.
std::optional<std::vector<double>> try_residual(const LieAlgebraData& c, const Family& f,
                                                const std::vector<double>& p) {
  Tensor<double> g;
  Tensor<double> w;
  f.build<double>(p, g, w);
  try {
    (void)cholesky_lower(g);
  } catch (const NotPositiveDefinite&) {
    return std::nullopt;
  }
  return stacked_residual<double>(c, f, p);
}

std::string format_params(const std::vector<double>& p) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < p.size(); ++i) os << (i ? ", " : "") << p[i];
  os << ')';
  return os.str();
}

}  // namespace

void Family::validate() const {
  if (dim < 1) throw SolverError("family '" + name + "': dimension must be positive");
  if (size() == 0) throw SolverError("family '" + name + "' has no parameters");
  if (size() > kMaxParams)
    throw SolverError("family '" + name + "' has " + std::to_string(size()) +
                      " parameters; at most " + std::to_string(kMaxParams) + " are supported");
  std::vector<int> seen(dim, 0);
  for (const auto& group : metric_groups)
    for (int i : group) {
      if (i < 0 || i >= dim) throw SolverError("family '" + name + "': metric index out of range");
      ++seen[i];
    }
  for (int i = 0; i < dim; ++i)
    if (seen[i] != 1)
      throw SolverError("family '" + name + "': every basis index must lie in exactly one metric group");
  for (const auto& gen : torsion_generators) {
    if (gen.dim() != dim || gen.rank() != 3)
      throw SolverError("family '" + name + "': torsion generator has the wrong shape");
    InvariantStructure probe{identity_matrix(dim), gen};
    try {
      probe.validate();
    } catch (const std::exception& e) {
      throw SolverError("family '" + name + "': " + e.what());
    }
  }
}

InvariantStructure Family::structure(std::span<const double> p) const {
  InvariantStructure s;
  build(p, s.metric, s.torsion);
  return s;
}

Tensor<double> basis_three_form(int dim, int i, int j, int k, double value) {
  Tensor<double> w(dim, 3);
  const int idx[3] = {i, j, k};
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c) {
        const int e = levi_civita3(a, b, c);
        if (e != 0) w(idx[a], idx[b], idx[c]) = e * value;
      }
  return w;
}

Family su2_diagonal_family() {
  return Family{"su2_diagonal", 3, {{0}, {1}, {2}}, {basis_three_form(3, 0, 1, 2)},
                {"a", "b", "c", "lambda"}};
}

Family su2_berger_family() {
  return Family{"su2_berger", 3, {{0}, {1, 2}}, {basis_three_form(3, 0, 1, 2)},
                {"a", "b", "lambda"}};
}

Family su2_pair_family(bool with_second_torsion) {
  Family f{"su2_pair", 6, {{0, 1, 2}, {3, 4, 5}}, {basis_three_form(6, 0, 1, 2)},
           {"a", "b", "lambda1"}};
  if (with_second_torsion) {
    f.torsion_generators.push_back(basis_three_form(6, 3, 4, 5));
    f.param_names.push_back("lambda2");
  }
  return f;
}

Family generic_diagonal_family(int dim) {
  Family f;
  f.name = "diagonal";
  f.dim = dim;
  for (int i = 0; i < dim; ++i) {
    f.metric_groups.push_back({i});
    f.param_names.push_back("g" + std::to_string(i));
  }
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j)
      for (int k = j + 1; k < dim; ++k) {
        f.torsion_generators.push_back(basis_three_form(dim, i, j, k));
        f.param_names.push_back("t" + std::to_string(i) + std::to_string(j) + std::to_string(k));
      }
  f.validate();
  return f;
}

std::vector<std::vector<double>> residual_jacobian(const LieAlgebraData& c, const Family& f,
                                                   std::span<const double> p) {
  const int np = f.size();
  std::vector<ParamDual> pd;
  pd.reserve(np);
  for (int i = 0; i < np; ++i) pd.push_back(ParamDual::variable(p[i], np, i));
  const std::vector<ParamDual> r = stacked_residual<ParamDual>(c, f, pd);
  std::vector<std::vector<double>> j(r.size(), std::vector<double>(np));
  for (std::size_t row = 0; row < r.size(); ++row)
    for (int col = 0; col < np; ++col) j[row][col] = r[row].d(col);
  return j;
}

double jacobian_fd_check(const LieAlgebraData& c, const Family& f, std::span<const double> p) {
  const int np = f.size();
  const auto jac = residual_jacobian(c, f, p);
  const std::size_t rows = jac.size();
  double scale = 0.0;
  for (const auto& row : jac)
    for (double v : row) scale = std::max(scale, std::abs(v));
  double worst = 0.0;
  for (int col = 0; col < np; ++col)
    for (std::size_t row = 0; row < rows; ++row) {
      const FdEstimate fd = richardson_derivative([&](double t) {
        std::vector<double> q(p.begin(), p.end());
        q[col] += t;
        return stacked_residual<double>(c, f, q)[row];
      });
      const double a = jac[row][col];
      worst = std::max(worst, std::abs(a - fd.value) / std::max(scale, 1e-300));
    }
  return worst;
}

SolverResult solve_einstein(const LieAlgebraData& c, const Family& f, std::vector<double> seed,
                            const SolverConfig& config, const std::vector<bool>* free_mask) {
  c.require_jacobi();
  f.validate();
  if (f.dim != c.dim) throw SolverError("family and algebra dimensions differ");
  const int np = f.size();
  if (static_cast<int>(seed.size()) != np)
    throw SolverError("seed has " + std::to_string(seed.size()) + " entries, family '" + f.name +
                      "' expects " + std::to_string(np));
  std::vector<int> free;
  for (int i = 0; i < np; ++i)
    if (!free_mask || (*free_mask)[i]) free.push_back(i);

  SolverResult res;
  res.seed = seed;
  std::vector<double> p = seed;
  if (static_cast<int>(free.size()) == np) {
    Tensor<double> g;
    Tensor<double> w;
    f.build<double>(p, g, w);
    const double det = determinant(g);
    if (!(det > 0.0)) throw SolverError("seed metric " + format_params(seed) + " is not positive definite");
    const double s = std::pow(det, -1.0 / f.dim);
    for (double& v : p) v *= s;
  }

  std::optional<std::vector<double>> r = try_residual(c, f, p);
  if (!r) throw SolverError("seed metric " + format_params(seed) + " is not positive definite");
  double norm = norm2(*r);
  int rejections = 0;
  // once inside tol, keep stepping toward tol / 1000 while steps still help
  const double polish = 1e-3 * config.tol;
  while (norm >= polish && res.iterations < config.max_iterations) {
    const auto jac = residual_jacobian(c, f, p);
    const int rows = static_cast<int>(r->size());
    Eigen::MatrixXd j(rows, static_cast<int>(free.size()));
    Eigen::VectorXd rhs(rows);
    for (int row = 0; row < rows; ++row) {
      rhs(row) = -(*r)[row];
      for (std::size_t k = 0; k < free.size(); ++k) j(row, k) = jac[row][free[k]];
    }
    const Eigen::VectorXd delta = j.completeOrthogonalDecomposition().solve(rhs);
    if (!delta.allFinite() || delta.norm() == 0.0) {
      if (norm >= config.tol) res.message = "singular Jacobian with no descent direction";
      break;
    }
    bool accepted = false;
    for (double alpha = 1.0; alpha >= config.min_step; alpha *= 0.5) {
      std::vector<double> trial = p;
      for (std::size_t k = 0; k < free.size(); ++k) trial[free[k]] += alpha * delta(k);
      std::optional<std::vector<double>> rt = try_residual(c, f, trial);
      if (!rt) {
        if (++rejections > config.max_rejections)
          throw SolverError("parametrization left the positive definite cone " +
                            std::to_string(rejections) + " times");
        continue;
      }
      const double nt = norm2(*rt);
      if (nt < norm) {
        p = std::move(trial);
        r = std::move(rt);
        norm = nt;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      if (norm >= config.tol) res.message = "line search found no decrease";
      break;
    }
    ++res.iterations;
  }
  if (norm >= config.tol && res.message.empty()) res.message = "iteration limit reached";

  res.params = p;
  res.structure = f.structure(p);
  res.residual = norm;
  res.det_gap = std::abs(determinant(res.structure.metric) - 1.0);
  res.certified_residual = einstein_residual(c, res.structure);
  const CurvatureReport rep = invariant_curvature_report(c, res.structure);
  res.scal_nabla = rep.scal_nabla;
  res.torsion_norm_sq = rep.torsion_norm_sq;
  res.converged = norm < config.tol && res.certified_residual < config.tol;
  if (norm < config.tol && !res.converged)
    res.message = "independent residual check failed";
  if (res.converged) res.message = "converged";
  return res;
}

Campaign run_campaign(const LieAlgebraData& c, const Family& f,
                      const std::vector<std::vector<double>>& seeds, const SolverConfig& config,
                      int threads, double distinct_threshold) {
  Campaign out;
  out.outcomes.resize(seeds.size());
  parallel_for(seeds.size(), threads, [&](std::size_t i) {
    SeedOutcome& o = out.outcomes[i];
    o.seed = seeds[i];
    try {
      o.result = solve_einstein(c, f, seeds[i], config);
    } catch (const std::exception& e) {
      o.error = e.what();
    }
  });
  for (const SeedOutcome& o : out.outcomes) {
    if (!o.result || !o.result->converged) continue;
    bool fresh = true;
    for (const SolverResult& d : out.distinct) {
      double dist = 0.0;
      for (std::size_t k = 0; k < d.params.size(); ++k)
        dist = std::max(dist, std::abs(d.params[k] - o.result->params[k]));
      if (dist <= distinct_threshold) {
        fresh = false;
        break;
      }
    }
    if (fresh) out.distinct.push_back(*o.result);
  }
  return out;
}

std::vector<std::vector<double>> seed_grid(const Family& f, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> metric(0.5, 2.0);
  std::uniform_real_distribution<double> torsion(-2.0, 2.0);
  std::vector<std::vector<double>> out;
  for (int s = 0; s < count; ++s) {
    std::vector<double> p;
    for (std::size_t k = 0; k < f.metric_groups.size(); ++k) p.push_back(metric(rng));
    for (std::size_t k = 0; k < f.torsion_generators.size(); ++k) p.push_back(torsion(rng));
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<ContinuationRow> continuation(const LieAlgebraData& c, const Family& f, int index,
                                          const std::vector<double>& values,
                                          std::vector<double> start, const SolverConfig& config) {
  if (index < 0 || index >= f.size()) throw SolverError("continuation parameter out of range");
  std::vector<bool> mask(f.size(), true);
  mask[index] = false;
  std::vector<ContinuationRow> rows;
  for (double v : values) {
    start[index] = v;
    ContinuationRow row{v, solve_einstein(c, f, start, config, &mask)};
    if (row.result.converged) start = row.result.params;
    rows.push_back(std::move(row));
  }
  return rows;
}

//--------------------------------------------------------------------------------------------------

namespace {

struct Tracker {
  CrossValidation table;
  void record(const std::string& field, double diff, const Point& x) {
    for (auto& row : table.rows)
      if (row.field == field) {
        if (diff > row.max_abs_diff) {
          row.max_abs_diff = diff;
          row.worst_point = x;
        }
        return;
      }
    table.rows.push_back({field, diff, x});
  }
};

double max_gap(const Tensor<double>& a, const Tensor<double>& b) { return max_abs(a - b); }

}  // namespace

CrossValidation cross_validate(const GeometryBundle& bundle, std::span<const Point> points,
                               double tol) {
  if (!bundle.invariant)
    throw GeometryError("cross_validate: bundle '" + bundle.name + "' has no invariant structure");
  const InvariantData& inv = *bundle.invariant;
  const PointCurvature<double> alg =
      lie::invariant_curvature(inv.algebra.c, inv.structure.metric, inv.structure.torsion);
  const int n = bundle.chart.dim;
  Tracker tr;
  for (const Point& x : points) {
    const PointCurvature<double> pc = point_curvature(*bundle.metric, bundle.torsion, x);
    const FieldSample<double> cf = sample(bundle.coframe, x);
    // E(i, a): coordinates of the left-invariant field E_a; dE(m) = -E (d_m sigma) E
    const Matrix e = inverse(cf.value);
    Tensor<double> de(n, 3);
    for (int m = 0; m < n; ++m) {
      Matrix ds(n, 2);
      for (int a = 0; a < n; ++a)
        for (int i = 0; i < n; ++i) ds(a, i) = cf.d(m, a, i);
      const Matrix dm = matmul(e, matmul(ds, e));
      for (int i = 0; i < n; ++i)
        for (int a = 0; a < n; ++a) de(m, i, a) = -dm(i, a);
    }
    // nabla_{E_a} E_b = sigma^c_k E_a^i (d_i E_b^k + G^k_ij E_b^j) E_c
    auto frame_connection = [&](const Tensor<double>& conn) {
      Tensor<double> out(n, 3);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          for (int k = 0; k < n; ++k) {
            double v = 0.0;
            for (int i = 0; i < n; ++i) {
              double inner = de(i, k, b);
              for (int j = 0; j < n; ++j) inner += conn(k, i, j) * e(j, b);
              v += e(i, a) * inner;
            }
            for (int cc = 0; cc < n; ++cc) out(cc, a, b) += cf.value(cc, k) * v;
          }
      return out;
    };
    tr.record("metric", max_gap(change_basis(pc.g, e), alg.g), x);
    tr.record("christoffel", max_gap(frame_connection(pc.christoffel), alg.christoffel), x);
    tr.record("connection", max_gap(frame_connection(pc.connection), alg.connection), x);
    tr.record("curvature", max_gap(change_basis(pc.r_low, e), alg.r_low), x);
    tr.record("ricci", max_gap(change_basis(pc.ricci, e), alg.ricci), x);
    tr.record("ricci_riemannian", max_gap(change_basis(pc.ricci_riemannian, e), alg.ricci_riemannian), x);
    tr.record("s_tensor", max_gap(change_basis(pc.s, e), alg.s), x);
    tr.record("torsion", max_gap(change_basis(pc.w, e), alg.w), x);
    tr.record("codiff_torsion", max_gap(change_basis(pc.codiff, e), alg.codiff), x);
    tr.record("scal_riemannian", std::abs(pc.scal_riemannian - alg.scal_riemannian), x);
    tr.record("scal_nabla", std::abs(pc.scal_nabla - alg.scal_nabla), x);
    tr.record("torsion_norm_sq", std::abs(pc.torsion_norm_sq - alg.torsion_norm_sq), x);
  }
  CrossValidation& table = tr.table;
  const CrossValidationRow* worst = nullptr;
  for (const auto& row : table.rows)
    if (!worst || row.max_abs_diff > worst->max_abs_diff) worst = &row;
  table.max_abs_diff = worst ? worst->max_abs_diff : 0.0;
  table.pass = table.max_abs_diff <= tol;
  if (!table.pass) {
    std::ostringstream os;
    os << "chart and algebraic engines disagree on '" << worst->field << "' by "
       << worst->max_abs_diff << " at (";
    for (std::size_t i = 0; i < worst->worst_point.size(); ++i)
      os << (i ? ", " : "") << worst->worst_point[i];
    os << ')';
    throw CrossValidationError(os.str(), table);
  }
  return table;
}

}  // namespace skewtor
