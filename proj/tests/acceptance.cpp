// Acceptance suite: eleven criteria, one PASS/FAIL line each. Exit status is
// nonzero iff any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "skewtor/checks.hpp"
#include "skewtor/forms.hpp"
#include "skewtor/lie.hpp"
#include "skewtor/parallel.hpp"
#include "skewtor/random.hpp"
#include "skewtor/solver.hpp"
#include "skewtor/theorem.hpp"

using namespace skewtor;

namespace {

constexpr std::uint64_t kSeed = 20240611;

const std::vector<std::string> kZoo = {"round_s3", "flat_torus3", "flat_torus4", "su2_invariant"};

// Randomized inputs per zoo geometry, shared by criteria 1, 2 and 8.
const std::vector<RandomInput>& inputs_for(const std::string& name) {
  static std::map<std::string, std::vector<RandomInput>> cache;
  auto it = cache.find(name);
  if (it == cache.end())
    it = cache.emplace(name, random_inputs(make_geometry(name, {}), kSeed, 5, 100, 0)).first;
  return it->second;
}

Check renamed(Check c, const std::string& suffix) {
  c.name += "[" + suffix + "]";
  return c;
}

std::vector<Check> ricci_oracle(int threads) {
  std::vector<Check> out;
  for (const auto& name : kZoo)
    out.push_back(renamed(check_ricci_relation(inputs_for(name), 1e-9, ricci_relation_route, threads), name));
  return out;
}

std::vector<Check> scalar_identity(int threads) {
  std::vector<Check> out;
  for (const auto& name : kZoo) {
    out.push_back(renamed(check_scalar_identity(inputs_for(name), 1e-9, threads), name));
    out.push_back(renamed(check_s_trace(inputs_for(name), 1e-10, threads), name));
  }
  return out;
}

std::vector<Check> closed_form(int) {
  const GeometryBundle b = make_geometry("round_s3", {{"r", 1.0}, {"c", 1.0}});
  FieldFactory fac(b, kSeed);
  const std::vector<Point> pts = fac.points(20);
  double worst = 0.0;
  for (const Point& x : pts) {
    const CurvatureReport r = curvature_report(*b.metric, b.torsion, x);
    worst = std::max(worst, std::abs(r.scal_riemannian - 6.0));
    worst = std::max(worst, std::abs(r.scal_nabla - 4.5));
    // frame components, so g = identity
    worst = std::max(worst, max_abs(r.s_tensor - 2.0 * identity_matrix(3)));
    worst = std::max(worst, max_abs(r.ricci_sym - 1.5 * identity_matrix(3)));
  }
  std::vector<Check> out{make_check("round-s3-closed-form", "Scal^g = 6, S = 2g, Ric_S = 1.5g, Scal^nabla = 4.5",
                                    pts.size(), worst, 1e-8)};

  const GeometryBundle cartan = make_geometry("round_s3", {{"c", 2.0}});
  double chart = 0.0;
  for (const Point& x : pts)
    chart = std::max(chart, frobenius(curvature_report(*cartan.metric, cartan.torsion, x).curvature_frame));
  out.push_back(make_check("flat-cartan-chart", "|R^nabla| = 0", pts.size(), chart, 1e-9));

  // su(2) with g = I and T(X, Y) = [X, Y]
  InvariantStructure s{identity_matrix(3), Tensor<double>(3, 3)};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) s.torsion(i, j, k) = levi_civita3(i, j, k);
  const CurvatureReport alg = invariant_curvature_report(LieAlgebraData::su2(), s);
  out.push_back(make_check("flat-cartan-algebraic", "|R^nabla| = 0", 1, frobenius(alg.curvature_frame), 1e-9));
  return out;
}

std::vector<Check> frame_machinery(int) {
  return {check_frame_rate(kSeed, 100, 1e-13), check_inv_sqrt_rate(kSeed + 1, 20, 1e-7),
          check_isometry_pair(kSeed + 2, 100, 1e-10)};
}

std::vector<Check> variations(int threads) {
  std::vector<Check> out;
  for (const auto& name : kZoo) {
    // 5 fields x 20 points = 100 points, 10 directions each
    const std::vector<RandomInput> in = random_inputs(make_geometry(name, {}), kSeed + 10, 5, 20, 10);
    for (RateKind k : {RateKind::kVolumeElement, RateKind::kTorsionNorm, RateKind::kScalarG})
      out.push_back(renamed(check_rate(in, k, 1e-5, {}, threads), name));
  }
  const GeometryBundle s3 = make_geometry("round_s3", {{"r", 1.0}, {"c", 1.0}});
  const SymTensorField h = as_sym_tensor(*s3.metric, 2.0);
  FieldFactory fac(s3, kSeed);
  double worst = 0.0;
  std::size_t n = 0;
  for (const Point& x : fac.points(20)) {
    const RateContext ctx(*s3.metric, s3.torsion, x);
    const Matrix hv = h.value_at(x);
    worst = std::max(worst, std::abs(ctx.volume_element_rate(hv) - 3.0));
    worst = std::max(worst, std::abs(ctx.torsion_norm_rate(hv) + 2.0 * s3.refs.torsion_norm_sq));
    worst = std::max(worst, std::abs(ctx.scalar_g_rate(h) + 12.0));
    ++n;
  }
  out.push_back(make_check("conformal-unit-s3", "h = 2g: rates 3, -2|T|^2, -12", n, worst, 1e-7));
  return out;
}

std::vector<SymTensorField> random_directions(const GeometryBundle& b, std::uint64_t seed, int count) {
  FieldFactory fac(b, seed);
  std::vector<SymTensorField> out;
  for (int k = 0; k < count; ++k) out.push_back(fac.sym_tensor(0.5));
  return out;
}

std::vector<Check> theorem(int threads) {
  const QuadratureGrid grid = build_grid(euler_s3_chart(), 24);
  std::vector<Check> out;

  const GeometryBundle c1 = make_geometry("round_s3", {{"c", 1.0}});
  out.push_back(renamed(check_theorem(c1, random_directions(c1, kSeed + 20, 20), grid, 1e-6, threads), "c=1"));

  const GeometryBundle c2 = make_geometry("round_s3", {{"c", 2.0}});
  const TheoremReport r2 =
      ville_theorem_check(*c2.metric, c2.torsion, random_directions(c2, kSeed + 21, 20), grid, threads);
  double lhs = 0.0;
  for (const TheoremResult& d : r2.directions) lhs = std::max(lhs, std::abs(d.lhs));
  out.push_back(make_check("zero-scalar-lhs", "Scal^nabla = 0 implies int d/dt Scal^nabla dV = 0",
                           r2.directions.size(), lhs, 1e-6));

  const GeometryBundle c0 = make_geometry("round_s3", {{"c", 0.0}});
  const TheoremReport r0 =
      ville_theorem_check(*c0.metric, c0.torsion, random_directions(c0, kSeed + 22, 20), grid, threads);
  double res = std::abs(r0.diagnostics.scal_mean - 6.0);
  for (const TheoremResult& d : r0.directions) res = std::max(res, d.residual);
  out.push_back(make_check("classical-branch", "T = 0, Scal = 6, n = 3", r0.directions.size(), res, 1e-6));
  return out;
}

std::vector<Check> null_direction(int threads) {
  const QuadratureGrid grid = build_grid(euler_s3_chart(), 24);
  std::vector<Check> out;
  for (double c : {0.0, 1.0}) {
    const GeometryBundle b = make_geometry("round_s3", {{"c", c}});
    FieldFactory fac(b, kSeed + 30);
    std::vector<SymTensorField> dirs;
    for (int k = 0; k < 5; ++k)
      dirs.push_back(volume_neutral_direction(*b.metric, fac.scalar_field(0.3, 1.0), grid, threads));
    out.push_back(renamed(check_null_direction(b, dirs, grid, 1e-6, 1e-8, threads), "c=" + std::to_string(int(c))));
  }
  return out;
}

std::vector<Check> parallel_torsion(int threads) {
  std::vector<Check> out;
  const std::vector<std::pair<std::string, std::map<std::string, double>>> bundles = {
      {"round_s3", {{"c", 1.0}}},
      {"round_s3", {{"r", 2.0}, {"c", 0.7}}},
      {"flat_torus3", {{"c", 1.5}}},
      {"flat_torus4", {{"c", 0.5}}},
      {"su2_invariant", {{"lambda", 0.8}}},
      // a 3-form proportional to the volume form is parallel even off the Einstein locus
      {"su2_invariant", {{"a", 2.0}, {"lambda", 0.8}}},
  };
  for (const auto& [name, params] : bundles) {
    const GeometryBundle b = make_geometry(name, params);
    if (!b.refs.parallel_torsion) continue;
    FieldFactory fac(b, kSeed + 40);
    for (Check& c : check_parallel_torsion(b, fac.points(10))) out.push_back(renamed(std::move(c), name));
  }
  for (const auto& name : kZoo)
    out.push_back(renamed(check_codiff_agreement(inputs_for(name), 1e-9, threads), name));
  return out;
}

std::vector<Check> quadrature(int threads) {
  std::vector<Check> out;
  const GeometryBundle s3 = make_geometry("round_s3", {});
  for (int order : {24, 32})
    out.push_back(renamed(check_volume(s3, build_grid(s3.chart, order), 1e-8, threads),
                          "order " + std::to_string(order)));
  for (const char* name : {"flat_torus3", "flat_torus4"}) {
    const GeometryBundle b = make_geometry(name, {});
    FieldFactory fac(b, kSeed + 50);
    const auto g = fac.randomized_metric();
    const QuadratureGrid grid = build_grid(b.chart, b.chart.dim == 3 ? 24 : 12);
    for (int k = 0; k < 2; ++k)
      out.push_back(renamed(check_laplacian_integral(*g, fac.scalar_field(0.0, 1.0), grid, 1e-7, threads), name));
  }
  return out;
}

std::vector<Check> solver(int threads) {
  std::vector<Check> out;
  const Family f = su2_diagonal_family();
  const Campaign camp = run_campaign(LieAlgebraData::su2(), f, seed_grid(f, 10, kSeed), {}, threads);
  double res = camp.distinct.empty() ? INFINITY : 0.0;
  double cert = res;
  for (const SolverResult& r : camp.distinct) {
    res = std::max(res, r.residual);
    cert = std::max(cert, r.certified_residual);
  }
  out.push_back(make_check("su2-campaign", "Ric_S^nabla = (Scal^nabla / n) g", camp.distinct.size(), res, 1e-10));
  out.push_back(make_check("independent-certification", "g^{-1}-contracted Einstein residual",
                           camp.distinct.size(), cert, 1e-10));
  const std::vector<std::pair<std::string, std::map<std::string, double>>> bundles = {
      {"round_s3", {{"c", 1.0}}},
      {"round_s3", {{"r", 1.5}, {"c", 0.3}}},
      {"su2_invariant", {{"a", 2.0}, {"b", 1.0}, {"c", 0.5}, {"lambda", 0.3}}},
      {"su2_invariant", {{"a", 0.7}, {"b", 1.3}, {"c", 1.1}, {"lambda", -1.2}}},
      {"flat_torus3", {{"c", 0.8}}},
      {"flat_torus4", {{"c", 0.4}}},
  };
  for (const auto& [name, params] : bundles) {
    const GeometryBundle b = make_geometry(name, params);
    FieldFactory fac(b, kSeed + 60);
    out.push_back(renamed(check_cross_validation(b, fac.points(10), 1e-8), name));
  }
  return out;
}

std::vector<Check> gradient(int threads) {
  std::vector<Check> out;
  for (const char* name : {"flat_torus3", "round_s3"}) {
    const GeometryBundle b = make_geometry(name, {});
    FieldFactory fac(b, kSeed + 70);
    const auto g = fac.randomized_metric();
    const TorsionField t = fac.torsion(g, 0.5, 0.5);
    std::vector<SymTensorField> dirs{fac.sym_tensor(0.3), fac.sym_tensor(0.3), fac.sym_tensor(0.3)};
    const QuadratureGrid grid = build_grid(b.chart, 12);
    out.push_back(renamed(check_gradient(*g, t, dirs, 0.4, grid, 1e-5, threads), name));
  }
  const GeometryBundle cartan = make_geometry("round_s3", {{"c", 2.0}});
  FieldFactory fac(cartan, kSeed + 71);
  out.push_back(renamed(check_gradient_norm(cartan, fac.points(20), 0.0, 1e-9), "flat Cartan"));
  return out;
}

struct Criterion {
  int id;
  const char* title;
  std::function<std::vector<Check>(int)> run;
};

}  // namespace

int main() {
  const int threads = resolve_threads();
  const std::vector<Criterion> criteria = {
      {1, "Ricci relation oracle", ricci_oracle},
      {2, "scalar identity and tr S", scalar_identity},
      {3, "closed-form curvature", closed_form},
      {4, "frame-curve machinery", frame_machinery},
      {5, "variation formulas", variations},
      {6, "first-variation theorem", theorem},
      {7, "null-direction sign change", null_direction},
      {8, "parallel-torsion identities", parallel_torsion},
      {9, "quadrature", quadrature},
      {10, "solver and cross-validation", solver},
      {11, "functional gradient", gradient},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    bool pass = true;
    std::string summary;
    try {
      const std::vector<Check> checks = c.run(threads);
      double ratio = 0.0;
      const Check* worst = nullptr;
      for (const Check& ch : checks) {
        pass = pass && ch.pass;
        const double r = ch.tolerance > 0.0 ? ch.max_residual / ch.tolerance : 0.0;
        if (!ch.pass) {
          summary += " " + ch.name + " residual " + std::to_string(ch.max_residual) +
                     (ch.detail.empty() ? "" : " (" + ch.detail + ")") + ";";
        } else if (!worst || r > ratio || std::isnan(r)) {
          worst = &ch;
          ratio = r;
        }
      }
      if (checks.empty()) {
        pass = false;
        summary = " no checks ran";
      }
      if (pass && worst) {
        char buf[160];
        std::snprintf(buf, sizeof buf, " %zu checks, tightest %s %.2e <= %.0e", checks.size(),
                      worst->name.c_str(), worst->max_residual, worst->tolerance);
        summary = buf;
      }
    } catch (const std::exception& e) {
      pass = false;
      summary = std::string(" error: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %2d %s:%s [%.1fs]\n", pass ? "PASS" : "FAIL", c.id, c.title, summary.c_str(), secs);
    std::fflush(stdout);
    failures += pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
