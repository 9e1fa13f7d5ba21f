#include "skewtor/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "skewtor/parallel.hpp"
#include "skewtor/random.hpp"
#include "skewtor/theorem.hpp"

namespace skewtor {

using ojson = nlohmann::ordered_json;

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

ojson matrix_json(const Matrix& m) {
  ojson rows = ojson::array();
  for (int i = 0; i < m.dim(); ++i) {
    ojson row = ojson::array();
    for (int j = 0; j < m.dim(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

ojson header(const RunConfig& c, const char* command) {
  ojson j;
  j["schema"] = kSchemaVersion;
  j["command"] = command;
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  return j;
}

ojson geometry_json(const GeometryBundle& b) {
  ojson p = ojson::object();
  for (const auto& [k, v] : b.params) p[k] = v;
  return ojson{{"name", b.name}, {"params", p}};
}

ojson check_json(const Check& c) {
  ojson j;
  j["name"] = c.name;
  j["anchor"] = c.anchor;
  j["points"] = c.points;
  j["max_residual"] = c.max_residual;
  j["tolerance"] = c.tolerance;
  j["pass"] = c.pass;
  if (!c.detail.empty()) j["detail"] = c.detail;
  return j;
}

std::string point_string(const Point& x) {
  std::string s;
  for (std::size_t i = 0; i < x.size(); ++i) s += (i ? " " : "") + num(x[i]);
  return s;
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("'" + path + "' is not valid JSON: " + e.what());
  }
}

GeometryBundle resolve(const GeometrySpec& spec) { return make_geometry(spec.name, spec.params); }

std::vector<SymTensorField> directions_for(const RunConfig& c, FieldFactory& fac,
                                           const QuadratureGrid& grid) {
  const GeometryBundle& b = fac.bundle();
  std::vector<SymTensorField> out;
  for (int k = 0; k < c.directions; ++k) {
    if (c.direction_kind == "random") {
      out.push_back(fac.sym_tensor(0.5));
    } else if (c.direction_kind == "volume-neutral") {
      out.push_back(volume_neutral_direction(*b.metric, fac.scalar_field(0.3, 1.0), grid, c.threads));
    } else {
      out.push_back(conformal_direction(*b.metric, fac.scalar_field(0.3, 1.0)));
    }
  }
  return out;
}

ojson result_json(const Family& f, const SolverResult& r) {
  ojson j;
  j["seed"] = r.seed;
  ojson p = ojson::object();
  for (std::size_t i = 0; i < r.params.size(); ++i) p[f.param_names[i]] = r.params[i];
  j["params"] = p;
  j["converged"] = r.converged;
  j["iterations"] = r.iterations;
  j["residual"] = r.residual;
  j["certified_residual"] = r.certified_residual;
  j["det_gap"] = r.det_gap;
  j["scal_nabla"] = r.scal_nabla;
  j["torsion_norm_sq"] = r.torsion_norm_sq;
  if (!r.message.empty()) j["message"] = r.message;
  return j;
}

}  // namespace

void RunConfig::validate() const {
  if (order < 4) throw ConfigError("--order must be at least 4, got " + std::to_string(order));
  if (tol && !(*tol > 0.0)) throw ConfigError("--tol must be positive");
  for (double s : fd.steps)
    if (!(s > 0.0)) throw ConfigError("finite-difference steps must be positive");
  if (format != "json" && format != "csv")
    throw ConfigError("--format must be json or csv, got '" + format + "'");
  if (threads < 1) throw ConfigError("--threads must be positive");
  if (points < 1) throw ConfigError("--points must be positive");
  if (directions < 1) throw ConfigError("--directions must be positive");
  if (direction_kind != "random" && direction_kind != "volume-neutral" &&
      direction_kind != "conformal")
    throw ConfigError("--direction-kind must be random, volume-neutral or conformal");
}

GeometrySpec parse_geometry_spec(const nlohmann::json& j) {
  const nlohmann::json& g = j.contains("geometry") ? j["geometry"] : j;
  if (!g.is_object() || !g.contains("name") || !g["name"].is_string())
    throw ConfigError("geometry spec: expected {\"geometry\": {\"name\": ..., \"params\": {...}}}");
  GeometrySpec s;
  s.name = g["name"].get<std::string>();
  if (g.contains("params")) {
    if (!g["params"].is_object()) throw ConfigError("geometry spec: 'params' must be an object");
    for (const auto& [k, v] : g["params"].items()) {
      if (!v.is_number()) throw ConfigError("geometry spec: parameter '" + k + "' is not a number");
      s.params[k] = v.get<double>();
    }
  }
  return s;
}

GeometrySpec load_geometry_spec(const std::string& path) {
  const nlohmann::json j = read_json_file(path);
  try {
    return parse_geometry_spec(j);
  } catch (const std::exception& e) {
    throw ConfigError("'" + path + "': " + e.what());
  }
}

SolveSpec parse_solve_spec(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("solve spec: expected a JSON object");
  SolveSpec s;
  if (!j.contains("algebra")) throw ConfigError("solve spec: missing key 'algebra'");
  const nlohmann::json& a = j["algebra"];
  if (a.is_string()) {
    s.algebra_name = a.get<std::string>();
    if (s.algebra_name == "su2") {
      s.algebra = LieAlgebraData::su2();
    } else if (s.algebra_name == "su2_plus_su2") {
      s.algebra = LieAlgebraData::su2_plus_su2();
    } else if (s.algebra_name.rfind("abelian", 0) == 0 && s.algebra_name.size() > 7) {
      s.algebra = LieAlgebraData::abelian(std::stoi(s.algebra_name.substr(7)));
    } else {
      throw ConfigError("solve spec: unknown algebra '" + s.algebra_name +
                        "'; available: su2 su2_plus_su2 abelianN, or {\"n\", \"c\"}");
    }
  } else if (a.is_object()) {
    s.algebra_name = "custom";
    if (!a.contains("n") || !a["n"].is_number_integer())
      throw ConfigError("solve spec: algebra needs an integer 'n'");
    const int n = a["n"].get<int>();
    if (n < 1 || n > kMaxParams) throw ConfigError("solve spec: algebra dimension out of range");
    std::vector<std::array<double, 4>> entries;
    if (a.contains("c")) {
      for (const auto& e : a["c"]) {
        if (!e.is_array() || e.size() != 4)
          throw ConfigError("solve spec: each structure constant is [i, j, k, value]");
        std::array<double, 4> v{};
        for (int m = 0; m < 4; ++m) v[m] = e[m].get<double>();
        for (int m = 0; m < 3; ++m)
          if (v[m] < 0 || v[m] >= n || v[m] != std::floor(v[m]))
            throw ConfigError("solve spec: structure constant index out of range");
        entries.push_back(v);
      }
    }
    s.algebra = LieAlgebraData::from_entries(n, entries);
  } else {
    throw ConfigError("solve spec: 'algebra' must be a name or an object");
  }

  const std::string family = j.value("family", s.algebra.dim == 3 ? "su2_diagonal" : "diagonal");
  if (family == "su2_diagonal") {
    s.family = su2_diagonal_family();
  } else if (family == "su2_berger") {
    s.family = su2_berger_family();
  } else if (family == "su2_pair") {
    s.family = su2_pair_family(true);
  } else if (family == "su2_pair_single") {
    s.family = su2_pair_family(false);
  } else if (family == "diagonal") {
    s.family = generic_diagonal_family(s.algebra.dim);
  } else {
    throw ConfigError("solve spec: unknown family '" + family +
                      "'; available: su2_diagonal su2_berger su2_pair su2_pair_single diagonal");
  }
  if (s.family.dim != s.algebra.dim)
    throw ConfigError("solve spec: family '" + family + "' has dimension " +
                      std::to_string(s.family.dim) + ", algebra has " +
                      std::to_string(s.algebra.dim));
  s.seeds = j.value("seeds", 10);
  if (s.seeds < 1) throw ConfigError("solve spec: 'seeds' must be positive");

  if (j.contains("continuation")) {
    const nlohmann::json& c = j["continuation"];
    ContinuationSpec cs;
    const std::string param = c.value("param", "");
    const auto& names = s.family.param_names;
    const auto it = std::find(names.begin(), names.end(), param);
    if (it == names.end()) throw ConfigError("solve spec: continuation parameter '" + param + "' is not in the family");
    cs.index = static_cast<int>(it - names.begin());
    cs.values = c.value("values", std::vector<double>{});
    cs.start = c.value("start", std::vector<double>{});
    if (cs.values.empty()) throw ConfigError("solve spec: continuation needs 'values'");
    if (static_cast<int>(cs.start.size()) != s.family.size())
      throw ConfigError("solve spec: continuation 'start' needs " + std::to_string(s.family.size()) +
                        " entries");
    s.continuation = cs;
  }
  return s;
}

SolveSpec load_solve_spec(const std::string& path) {
  const nlohmann::json j = read_json_file(path);
  try {
    return parse_solve_spec(j);
  } catch (const std::exception& e) {
    throw ConfigError("'" + path + "': " + e.what());
  }
}

std::string render(const Output& out, const std::string& format) {
  if (format == "json") return out.json.dump(2) + "\n";
  std::ostringstream os;
  for (std::size_t i = 0; i < out.csv_header.size(); ++i)
    os << (i ? "," : "") << csv_field(out.csv_header[i]);
  os << '\n';
  for (const auto& row : out.csv_rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_field(row[i]);
    os << '\n';
  }
  return os.str();
}

void write_output(const RunConfig& config, const Output& out) {
  const std::string text = render(out, config.format);
  if (config.out_path.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream f(config.out_path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + config.out_path + "'");
  f << text;
  if (!f) throw std::runtime_error("write to '" + config.out_path + "' failed");
}

//--------------------------------------------------------------------------------------------------

std::vector<Check> verify_checks(const RunConfig& c, const GeometryBundle& b,
                                 const VerifyHooks& hooks) {
  const double id_tol = c.tol.value_or(1e-9);
  const std::uint64_t s = c.seed;
  const std::vector<RandomInput> in = random_inputs(b, s, 5, c.points, c.directions);
  FieldFactory fac(b, s + 1);
  const std::vector<Point> pts = fac.points(c.points);
  const QuadratureGrid grid = build_grid(b.chart, c.order);
  const int n = b.chart.dim;

  std::vector<Check> out;
  out.push_back(check_ricci_relation(in, id_tol, hooks.ricci_route, c.threads));
  out.push_back(check_scalar_identity(in, id_tol, c.threads));
  out.push_back(check_s_trace(in, std::min(id_tol, 1e-10), c.threads));
  out.push_back(check_metricity(in, std::min(id_tol, 1e-10), c.threads));
  out.push_back(check_codiff_agreement(in, id_tol, c.threads));
  out.push_back(check_d_squared(b, s + 2, c.points, 1e-10));
  {
    const TorsionValidation v = validate_torsion(*b.metric, b.torsion, pts);
    out.push_back(make_check("torsion-skew", "g(T(X, Y), Z) is a 3-form", pts.size(),
                             v.max_violation, kTorsionAntisymmetryTol));
  }
  for (RateKind k : {RateKind::kVolumeElement, RateKind::kTorsionNorm, RateKind::kScalarG,
                     RateKind::kScalarNabla})
    out.push_back(check_rate(in, k, 1e-5, c.fd, c.threads));
  out.push_back(check_conformal_rates(b, pts, 1e-7));
  out.push_back(check_frame_rate(s + 3, c.points, 1e-12));
  out.push_back(check_inv_sqrt_rate(s + 4, std::min(c.points, 10), 1e-7));
  out.push_back(check_isometry_pair(s + 5, c.points, 1e-10));

  out.push_back(check_volume(b, grid, 1e-8, c.threads));
  {
    FieldFactory f2(b, s + 6);
    out.push_back(check_laplacian_integral(*in.front().g, f2.scalar_field(0.0, 1.0), grid, 1e-7,
                                           c.threads));
  }
  out.push_back(check_reference_values(b, pts, 1e-8));
  if (b.refs.parallel_torsion)
    for (Check& p : check_parallel_torsion(b, pts)) out.push_back(std::move(p));
  if (b.refs.nabla_einstein) {
    out.push_back(check_einstein(b, pts, kEinsteinTol));
    FieldFactory f3(b, s + 7);
    std::vector<SymTensorField> dirs;
    for (int k = 0; k < c.directions; ++k) dirs.push_back(f3.sym_tensor(0.5));
    out.push_back(check_theorem(b, dirs, grid, 1e-6, c.threads));
    std::vector<SymTensorField> neutral;
    for (int k = 0; k < std::min(c.directions, 3); ++k)
      neutral.push_back(
          volume_neutral_direction(*b.metric, f3.scalar_field(0.3, 1.0), grid, c.threads));
    out.push_back(check_null_direction(b, neutral, grid, 1e-6, 1e-8, c.threads));
    const double lambda = (0.5 - 1.0 / n) * b.refs.scal_nabla;
    out.push_back(check_gradient_norm(b, pts, lambda, 1e-9));
  }
  {
    FieldFactory f4(b, s + 8);
    std::vector<SymTensorField> dirs{f4.sym_tensor(0.3), f4.sym_tensor(0.3)};
    out.push_back(check_gradient(*in.front().g, in.front().t, dirs, 0.25, grid, 1e-5, c.threads));
  }
  if (b.invariant) out.push_back(check_cross_validation(b, pts, 1e-8));
  return out;
}

Output run_verify(const RunConfig& c, const GeometrySpec& spec, const VerifyHooks& hooks) {
  c.validate();
  const GeometryBundle b = resolve(spec);
  const std::vector<Check> checks = verify_checks(c, b, hooks);
  Output out;
  out.json = header(c, "verify");
  out.json["geometry"] = geometry_json(b);
  out.json["order"] = c.order;
  out.json["checks"] = ojson::array();
  out.csv_header = {"name", "anchor", "points", "max_residual", "tolerance", "pass", "detail"};
  for (const Check& ch : checks) {
    out.json["checks"].push_back(check_json(ch));
    out.csv_rows.push_back({ch.name, ch.anchor, std::to_string(ch.points), num(ch.max_residual),
                            num(ch.tolerance), ch.pass ? "true" : "false", ch.detail});
    out.pass = out.pass && ch.pass;
  }
  out.json["pass"] = out.pass;
  return out;
}

Output run_curvature(const RunConfig& c, const GeometrySpec& spec) {
  c.validate();
  const GeometryBundle b = resolve(spec);
  FieldFactory fac(b, c.seed);
  const std::vector<Point> pts = fac.points(c.points);
  const double tol = c.tol.value_or(kRicciRouteTol);
  std::vector<std::optional<CurvatureReport>> reports(pts.size());
  std::vector<std::string> errors(pts.size());
  parallel_for(pts.size(), c.threads, [&](std::size_t i) {
    try {
      reports[i] = curvature_report(*b.metric, b.torsion, pts[i], tol);
    } catch (const RicciRouteMismatch& e) {
      errors[i] = e.what();
    }
  });

  Output out;
  out.json = header(c, "curvature");
  out.json["geometry"] = geometry_json(b);
  out.json["points"] = ojson::array();
  out.csv_header = {"point", "scal_riemannian", "torsion_norm_sq", "scal_nabla",
                    "einstein_deviation", "ricci_skew_max"};
  for (std::size_t i = 0; i < pts.size(); ++i) {
    ojson p;
    p["x"] = pts[i];
    if (!reports[i]) {
      p["error"] = errors[i];
      out.pass = false;
      out.json["points"].push_back(p);
      out.csv_rows.push_back({point_string(pts[i]), "", "", "", "", ""});
      continue;
    }
    const CurvatureReport& r = *reports[i];
    p["scal_riemannian"] = r.scal_riemannian;
    p["torsion_norm_sq"] = r.torsion_norm_sq;
    p["scal_nabla"] = r.scal_nabla;
    p["einstein_deviation"] = einstein_deviation(r);
    p["ricci_sym"] = matrix_json(r.ricci_sym);
    p["ricci_skew"] = matrix_json(r.ricci_skew);
    p["ricci_riemannian"] = matrix_json(r.ricci_riemannian);
    p["s_tensor"] = matrix_json(r.s_tensor);
    p["codiff_torsion"] = matrix_json(r.codiff_torsion);
    out.json["points"].push_back(p);
    out.csv_rows.push_back({point_string(pts[i]), num(r.scal_riemannian), num(r.torsion_norm_sq),
                            num(r.scal_nabla), num(einstein_deviation(r)),
                            num(max_abs(r.ricci_skew))});
  }
  out.json["pass"] = out.pass;
  return out;
}

Output run_variation(const RunConfig& c, const GeometrySpec& spec) {
  c.validate();
  const GeometryBundle b = resolve(spec);
  const double tol = c.tol.value_or(1e-5);
  FieldFactory fac(b, c.seed);
  const std::vector<Point> pts = fac.points(c.points);
  std::vector<SymTensorField> dirs;
  std::vector<FdSchedule> sched;
  for (int k = 0; k < c.directions; ++k) {
    dirs.push_back(fac.sym_tensor(0.5));
    sched.push_back(clamp_schedule(c.fd, certify_curve(*b.metric, dirs.back(), pts).epsilon));
  }
  const MetricField& g = *b.metric;
  const TorsionField& t = b.torsion;
  std::vector<std::vector<VariationReport>> rows(pts.size());
  parallel_for(pts.size(), c.threads, [&](std::size_t i) {
    const Point& x = pts[i];
    const RateContext ctx(g, t, x);
    for (std::size_t d = 0; d < dirs.size(); ++d) {
      const SymTensorField& h = dirs[d];
      const Matrix hv = h.value_at(x);
      rows[i].push_back(make_report(
          "volume_element", x, ctx.volume_element_rate(hv),
          richardson_derivative([&](double s) { return log_volume_element(g, h, s, x); }, sched[d])));
      rows[i].push_back(make_report(
          "torsion_norm", x, ctx.torsion_norm_rate(hv),
          richardson_derivative([&](double s) { return torsion_norm_along(g, t, h, s, x); },
                                sched[d])));
      rows[i].push_back(make_report(
          "scal_riemannian", x, ctx.scalar_g_rate(h),
          richardson_derivative([&](double s) { return scalar_g_along(g, h, s, x); }, sched[d])));
      rows[i].push_back(make_report(
          "scal_nabla", x, ctx.scalar_nabla_rate(h),
          richardson_derivative([&](double s) { return scalar_nabla_along(g, t, h, s, x); },
                                sched[d])));
    }
  });

  Output out;
  out.json = header(c, "variation");
  out.json["geometry"] = geometry_json(b);
  out.json["tolerance"] = tol;
  out.json["rows"] = ojson::array();
  out.csv_header = {"quantity", "point", "direction", "analytic", "fd", "abs_residual",
                    "rel_residual", "pass"};
  double worst = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t k = 0; k < rows[i].size(); ++k) {
      const VariationReport& r = rows[i][k];
      const std::size_t dir = k / 4;
      const bool ok = std::isfinite(r.rel_residual) && r.rel_residual <= tol;
      out.pass = out.pass && ok;
      worst = std::max(worst, r.rel_residual);
      ojson j;
      j["quantity"] = r.quantity;
      j["point"] = r.point;
      j["direction"] = dir;
      j["analytic"] = r.analytic;
      j["fd"] = r.fd;
      j["abs_residual"] = r.abs_residual;
      j["rel_residual"] = r.rel_residual;
      j["steps"] = r.steps;
      out.json["rows"].push_back(j);
      out.csv_rows.push_back({r.quantity, point_string(r.point), std::to_string(dir),
                              num(r.analytic), num(r.fd), num(r.abs_residual),
                              num(r.rel_residual), ok ? "true" : "false"});
    }
  out.json["max_rel_residual"] = worst;
  out.json["pass"] = out.pass;
  return out;
}

Output run_theorem(const RunConfig& c, const GeometrySpec& spec) {
  c.validate();
  const GeometryBundle b = resolve(spec);
  const double tol = c.tol.value_or(1e-6);
  const QuadratureGrid grid = build_grid(b.chart, c.order);
  FieldFactory fac(b, c.seed);
  const std::vector<SymTensorField> dirs = directions_for(c, fac, grid);
  const TheoremReport r = ville_theorem_check(*b.metric, b.torsion, dirs, grid, c.threads);

  Output out;
  out.json = header(c, "theorem");
  out.json["geometry"] = geometry_json(b);
  out.json["order"] = c.order;
  out.json["direction_kind"] = c.direction_kind;
  out.json["anchor"] = "int d/dt Scal^nabla dV = -(2 Scal^nabla / n) d/dt Vol";
  out.json["scal_nabla"] = r.diagnostics.scal_mean;
  std::size_t worst = 0;
  for (std::size_t k = 0; k < r.directions.size(); ++k)
    if (r.directions[k].residual > r.directions[worst].residual) worst = k;
  out.json["lhs"] = r.directions[worst].lhs;
  out.json["rhs"] = r.directions[worst].rhs;
  out.json["residual"] = r.directions[worst].residual;
  out.json["tolerance"] = tol;
  out.json["diagnostics"] = ojson{{"max_einstein_deviation", r.diagnostics.max_einstein_deviation},
                                  {"scal_mean", r.diagnostics.scal_mean},
                                  {"scal_std", r.diagnostics.scal_std},
                                  {"max_ricci_route_gap", r.diagnostics.max_ricci_route_gap},
                                  {"nodes", r.diagnostics.nodes}};
  out.json["rows"] = ojson::array();
  out.csv_header = {"direction", "lhs", "rhs", "residual", "scal_nabla", "vol_rate", "rate_min",
                    "rate_max", "pass"};
  for (std::size_t k = 0; k < r.directions.size(); ++k) {
    const TheoremResult& d = r.directions[k];
    const bool ok = std::isfinite(d.residual) && d.residual <= tol;
    out.pass = out.pass && ok;
    out.json["rows"].push_back(ojson{{"direction", k},
                                     {"lhs", d.lhs},
                                     {"rhs", d.rhs},
                                     {"residual", d.residual},
                                     {"scal_nabla", d.scal_nabla},
                                     {"vol_rate", d.vol_rate},
                                     {"rate_min", d.rate_min},
                                     {"rate_max", d.rate_max},
                                     {"pass", ok}});
    out.csv_rows.push_back({std::to_string(k), num(d.lhs), num(d.rhs), num(d.residual),
                            num(d.scal_nabla), num(d.vol_rate), num(d.rate_min), num(d.rate_max),
                            ok ? "true" : "false"});
  }
  out.json["pass"] = out.pass;
  return out;
}

Output run_solve(const RunConfig& c, const SolveSpec& spec) {
  c.validate();
  SolverConfig sc;
  if (c.tol) sc.tol = *c.tol;
  const Campaign camp = run_campaign(spec.algebra, spec.family,
                                     seed_grid(spec.family, spec.seeds, c.seed), sc, c.threads);
  Output out;
  out.json = header(c, "solve");
  out.json["algebra"] = spec.algebra_name;
  out.json["family"] = spec.family.name;
  out.json["param_names"] = spec.family.param_names;
  out.json["tolerance"] = sc.tol;
  out.json["anchor"] = "Ric_S^nabla = (Scal^nabla / n) g";
  out.json["results"] = ojson::array();
  for (const SeedOutcome& o : camp.outcomes) {
    if (o.result) {
      out.json["results"].push_back(result_json(spec.family, *o.result));
    } else {
      out.json["results"].push_back(ojson{{"seed", o.seed}, {"error", o.error}});
    }
  }
  out.json["distinct"] = ojson::array();
  for (const SolverResult& r : camp.distinct) out.json["distinct"].push_back(result_json(spec.family, r));
  out.pass = !camp.distinct.empty();

  std::vector<std::string> hdr{"row"};
  for (const auto& p : spec.family.param_names) hdr.push_back(p);
  for (const char* k : {"converged", "residual", "certified_residual", "scal_nabla", "torsion_norm_sq"})
    hdr.push_back(k);
  out.csv_header = hdr;
  auto csv_row = [&](const std::string& label, const SolverResult& r) {
    std::vector<std::string> row{label};
    for (double v : r.params) row.push_back(num(v));
    row.push_back(r.converged ? "true" : "false");
    row.push_back(num(r.residual));
    row.push_back(num(r.certified_residual));
    row.push_back(num(r.scal_nabla));
    row.push_back(num(r.torsion_norm_sq));
    return row;
  };

  if (spec.continuation) {
    const ContinuationSpec& cs = *spec.continuation;
    const auto rows =
        continuation(spec.algebra, spec.family, cs.index, cs.values, cs.start, sc);
    out.json["continuation"] = ojson{{"param", spec.family.param_names[cs.index]},
                                     {"rows", ojson::array()}};
    for (const ContinuationRow& r : rows) {
      ojson j = result_json(spec.family, r.result);
      j["value"] = r.value;
      out.json["continuation"]["rows"].push_back(j);
      out.csv_rows.push_back(csv_row(num(r.value), r.result));
    }
  } else {
    for (std::size_t k = 0; k < camp.outcomes.size(); ++k)
      if (camp.outcomes[k].result) out.csv_rows.push_back(csv_row(std::to_string(k), *camp.outcomes[k].result));
  }
  out.json["pass"] = out.pass;
  return out;
}

}  // namespace skewtor
