#include "skewtor/zoo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

namespace skewtor {

namespace {

constexpr double kPi = std::numbers::pi;

template <typename X>
using Scalar = std::remove_cv_t<typename X::element_type>;

using Params = std::map<std::string, double>;

double param(const Params& p, const std::string& key, double fallback) {
  const auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

void require_known(const std::string& name, const Params& p, std::set<std::string> allowed) {
  for (const auto& [k, v] : p) {
    if (!allowed.count(k)) {
      std::ostringstream os;
      os << name << ": unknown parameter '" << k << "' (accepted:";
      for (const auto& a : allowed) os << ' ' << a;
      os << ')';
      throw GeometryError(os.str());
    }
    if (!std::isfinite(v)) throw GeometryError(name + ": parameter '" + k + "' is not finite");
  }
}

void require_positive(const std::string& name, const std::string& key, double v) {
  if (!(v > 0.0))
    throw GeometryError(name + ": parameter '" + key + "' must be positive, got " +
                        std::to_string(v));
}

Tensor<double> volume_form3(int n, double c) {
  Tensor<double> w(n, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) w(i, j, k) = c * levi_civita3(i, j, k);
  return w;
}

// Lowered 3-form f(x) * eps_ijk on the first three coordinates, raised by g.
template <typename Density>
TorsionField density_torsion(std::shared_ptr<const MetricField> g, Density density) {
  const Chart chart = g->chart();
  const int n = chart.dim;
  FormField w(chart, 3, [n, density](auto x) {
    using S = Scalar<decltype(x)>;
    const S f = density(x);
    Tensor<S> out(n, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) {
          const int e = levi_civita3(i, j, k);
          if (e != 0) out(i, j, k) = f * static_cast<double>(e);
        }
    return out;
  });
  return raised_form(std::move(g), w);
}

TensorField constant_coframe(const Chart& chart) {
  const int n = chart.dim;
  return TensorField(chart, 2, [n](auto x) {
    using S = Scalar<decltype(x)>;
    Tensor<S> s(n, 2);
    for (int i = 0; i < n; ++i) s(i, i) = S(1.0);
    return s;
  });
}

TensorField euler_coframe(const Chart& chart) {
  return TensorField(chart, 2, [](auto x) {
    using S = Scalar<decltype(x)>;
    return zoo::maurer_cartan<S>(x);
  });
}

GeometryBundle torus(const std::string& name, int dim, const Params& p) {
  require_known(name, p, {"c", "period"});
  const double c = param(p, "c", 0.0);
  const double period = param(p, "period", 2.0 * kPi);
  require_positive(name, "period", period);

  GeometryBundle b;
  b.name = name;
  b.params = {{"c", c}, {"period", period}};
  b.kind = ChartKind::kTorus;
  b.chart = torus_chart(dim, period);
  b.metric = std::make_shared<const MetricField>(b.chart, [dim](auto x) {
    using S = Scalar<decltype(x)>;
    Tensor<S> g(dim, 2);
    for (int i = 0; i < dim; ++i) g(i, i) = S(1.0);
    return g;
  });
  b.torsion = density_torsion(b.metric, [c](auto x) {
    using S = Scalar<decltype(x)>;
    return S(c);
  });
  b.frame_metric = identity_matrix(dim);
  b.coframe = constant_coframe(b.chart);
  b.invariant = InvariantData{LieAlgebraData::abelian(dim),
                              InvariantStructure{identity_matrix(dim), volume_form3(dim, c)}};

  b.refs.scal_riemannian = 0.0;
  b.refs.torsion_norm_sq = c * c;
  b.refs.scal_nabla = -1.5 * c * c;
  b.refs.volume = std::pow(period, dim);
  // S = 2c^2 on the first three axes only when dim = 4.
  b.refs.nabla_einstein = dim == 3 || c == 0.0;
  b.refs.parallel_torsion = true;
  return b;
}

GeometryBundle round_s3(const Params& p) {
  const std::string name = "round_s3";
  require_known(name, p, {"r", "c"});
  const double r = param(p, "r", 1.0);
  const double c = param(p, "c", 0.0);
  require_positive(name, "r", r);

  GeometryBundle b;
  b.name = name;
  b.params = {{"r", r}, {"c", c}};
  b.kind = ChartKind::kEulerS3;
  b.chart = euler_s3_chart();
  const double q = 0.25 * r * r;
  // (r^2/4) (dtheta^2 + dphi^2 + dpsi^2 + 2 cos(theta) dphi dpsi)
  b.metric = std::make_shared<const MetricField>(b.chart, [q](auto x) {
    using S = Scalar<decltype(x)>;
    using std::cos;
    Tensor<S> g(3, 2);
    g(0, 0) = S(q);
    g(1, 1) = S(q);
    g(2, 2) = S(q);
    const S off = cos(x[0]) * q;
    g(1, 2) = off;
    g(2, 1) = off;
    return g;
  });
  // vol_g = (r/2)^3 sin(theta) dtheta ^ dphi ^ dpsi
  const double k = c * std::pow(0.5 * r, 3);
  b.torsion = density_torsion(b.metric, [k](auto x) {
    using std::sin;
    return sin(x[0]) * k;
  });
  b.frame_metric = q * identity_matrix(3);
  b.coframe = euler_coframe(b.chart);
  b.invariant = InvariantData{LieAlgebraData::su2(),
                              InvariantStructure{b.frame_metric, volume_form3(3, k)}};

  b.refs.scal_riemannian = 6.0 / (r * r);
  b.refs.torsion_norm_sq = c * c;
  b.refs.scal_nabla = b.refs.scal_riemannian - 1.5 * c * c;
  b.refs.volume = 2.0 * kPi * kPi * r * r * r;
  b.refs.nabla_einstein = true;
  b.refs.parallel_torsion = true;
  return b;
}

GeometryBundle su2_invariant(const Params& p) {
  const std::string name = "su2_invariant";
  require_known(name, p, {"a", "b", "c", "lambda"});
  const double a = param(p, "a", 1.0);
  const double bb = param(p, "b", 1.0);
  const double cc = param(p, "c", 1.0);
  const double lambda = param(p, "lambda", 0.0);
  require_positive(name, "a", a);
  require_positive(name, "b", bb);
  require_positive(name, "c", cc);

  GeometryBundle b;
  b.name = name;
  b.params = {{"a", a}, {"b", bb}, {"c", cc}, {"lambda", lambda}};
  b.kind = ChartKind::kEulerS3;
  b.chart = euler_s3_chart();
  b.frame_metric = diagonal_matrix({a, bb, cc});
  const std::array<double, 3> diag{a, bb, cc};
  b.metric = std::make_shared<const MetricField>(b.chart, [diag](auto x) {
    using S = Scalar<decltype(x)>;
    Tensor<S> f(3, 2);
    for (int i = 0; i < 3; ++i) f(i, i) = S(diag[i]);
    return zoo::from_frame(zoo::maurer_cartan<S>(x), f);
  });
  // lambda sigma^1 ^ sigma^2 ^ sigma^3 = lambda det(sigma) dtheta ^ dphi ^ dpsi
  b.torsion = density_torsion(b.metric, [lambda](auto x) {
    using std::sin;
    return sin(x[0]) * lambda;
  });
  b.coframe = euler_coframe(b.chart);
  b.invariant = InvariantData{LieAlgebraData::su2(),
                              InvariantStructure{b.frame_metric, volume_form3(3, lambda)}};

  // Milnor's frame: [e2, e3] = l1 e1 etc. for the orthonormal e_i = E_i / sqrt(a_i).
  const double l1 = std::sqrt(a / (bb * cc));
  const double l2 = std::sqrt(bb / (a * cc));
  const double l3 = std::sqrt(cc / (a * bb));
  const double half = 0.5 * (l1 + l2 + l3);
  const double m1 = half - l1;
  const double m2 = half - l2;
  const double m3 = half - l3;
  const double r1 = 2.0 * m2 * m3;
  const double r2 = 2.0 * m1 * m3;
  const double r3 = 2.0 * m1 * m2;
  const double vol_density = a * bb * cc;
  b.refs.scal_riemannian = r1 + r2 + r3;
  b.refs.torsion_norm_sq = lambda * lambda / vol_density;
  b.refs.scal_nabla = b.refs.scal_riemannian - 1.5 * b.refs.torsion_norm_sq;
  b.refs.volume = 16.0 * kPi * kPi * std::sqrt(vol_density);
  const double spread = std::max({r1, r2, r3}) - std::min({r1, r2, r3});
  b.refs.nabla_einstein = spread <= 1e-12 * (1.0 + std::abs(r1));
  b.refs.parallel_torsion = true;
  return b;
}

}  // namespace

int levi_civita3(int i, int j, int k) {
  if (i == j || j == k || i == k) return 0;
  return ((j - i + 3) % 3 == 1) ? 1 : -1;
}

Chart euler_s3_chart() {
  return Chart::box({0.0, 0.0, 0.0}, {kPi, 2.0 * kPi, 4.0 * kPi}, {false, true, true});
}

Chart torus_chart(int dim, double period) {
  return Chart::box(std::vector<double>(dim, 0.0), std::vector<double>(dim, period),
                    std::vector<bool>(dim, true));
}

std::vector<std::string> geometry_names() {
  return {"round_s3", "flat_torus3", "flat_torus4", "su2_invariant"};
}

GeometryBundle make_geometry(const std::string& name, const std::map<std::string, double>& params) {
  if (name == "round_s3") return round_s3(params);
  if (name == "flat_torus3") return torus(name, 3, params);
  if (name == "flat_torus4") return torus(name, 4, params);
  if (name == "su2_invariant") return su2_invariant(params);
  std::ostringstream os;
  os << "unknown geometry '" << name << "'; available:";
  for (const auto& n : geometry_names()) os << ' ' << n;
  throw GeometryError(os.str());
}

}  // namespace skewtor
