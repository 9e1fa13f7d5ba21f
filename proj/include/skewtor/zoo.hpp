// Example geometries with closed-form reference values.
//
//   round_s3      (r, c)          unit-normalised round sphere of radius r, T = c vol_g
//   flat_torus3   (c, period)     flat 3-torus, T = c dx1^dx2^dx3
//   flat_torus4   (c, period)     flat 4-torus, T = c dx1^dx2^dx3
//   su2_invariant (a, b, c, lambda)
//                                 left-invariant metric diag(a, b, c) on SU(2) in the
//                                 Maurer-Cartan basis, T = lambda e^123 (lowered)
//
// Both S^3 bundles use the Euler-angle chart (theta, phi, psi) on
// (0, pi) x [0, 2 pi) x [0, 4 pi), which covers SU(2) up to a null set.

#ifndef SKEWTOR_ZOO_HPP_
#define SKEWTOR_ZOO_HPP_

#include <cmath>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "skewtor/fields.hpp"
#include "skewtor/lie.hpp"

namespace skewtor {

enum class ChartKind { kTorus, kEulerS3 };

struct ReferenceValues {
  double scal_riemannian = 0.0;
  double torsion_norm_sq = 0.0;
  double scal_nabla = 0.0;
  double volume = 0.0;
  bool nabla_einstein = false;
  bool parallel_torsion = false;
};

// Left-invariant data when the bundle lives on the SU(2) chart.
struct InvariantData {
  LieAlgebraData algebra;
  InvariantStructure structure;
};

struct GeometryBundle {
  std::string name;
  std::map<std::string, double> params;
  ChartKind kind = ChartKind::kTorus;
  Chart chart;
  std::shared_ptr<const MetricField> metric;
  TorsionField torsion;
  ReferenceValues refs;
  // Metric in the global frame used by the random-field generator (dx on tori,
  // the Maurer-Cartan forms on S^3); constant in that frame.
  Matrix frame_metric;
  // sigma(a, i): the global coframe in chart coordinates (dx on tori).
  TensorField coframe;
  std::optional<InvariantData> invariant;
};

std::vector<std::string> geometry_names();

// Throws GeometryError for unknown names or invalid params.
GeometryBundle make_geometry(const std::string& name,
                             const std::map<std::string, double>& params = {});

Chart euler_s3_chart();
Chart torus_chart(int dim, double period);

int levi_civita3(int i, int j, int k);

namespace zoo {

// sigma(a, i): the Maurer-Cartan forms of SU(2) in Euler coordinates, with
// d sigma^a = -1/2 eps_abc sigma^b ^ sigma^c, i.e. [E_a, E_b] = eps_abc E_c.
template <typename S>
Tensor<S> maurer_cartan(std::span<const S> x) {
  using std::cos;
  using std::sin;
  const S st = sin(x[0]);
  const S ct = cos(x[0]);
  const S sp = sin(x[2]);
  const S cp = cos(x[2]);
  Tensor<S> s(3, 2);
  s(0, 0) = sp;
  s(0, 1) = -(cp * st);
  s(1, 0) = cp;
  s(1, 1) = sp * st;
  s(2, 1) = ct;
  s(2, 2) = S(1.0);
  return s;
}

// Unit quaternion (a point of S^3 in R^4) for Euler coordinates.
template <typename S>
std::array<S, 4> quaternion(std::span<const S> x) {
  using std::cos;
  using std::sin;
  const S half_t = x[0] * 0.5;
  const S sum = (x[1] + x[2]) * 0.5;
  const S diff = (x[1] - x[2]) * 0.5;
  const S c = cos(half_t);
  const S s = sin(half_t);
  return {c * cos(sum), c * sin(sum), s * cos(diff), s * sin(diff)};
}

// sum_ab f_ab sigma^a_i sigma^b_j for a frame-component matrix f.
template <typename S>
Tensor<S> from_frame(const Tensor<S>& sigma, const Tensor<S>& f) {
  const int n = sigma.dim();
  Tensor<S> out(n, 2);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const S& fab = f(a, b);
      for (int i = 0; i < n; ++i) {
        const S t = fab * sigma(a, i);
        for (int j = 0; j < n; ++j) out(i, j) += t * sigma(b, j);
      }
    }
  return out;
}

}  // namespace zoo

}  // namespace skewtor

#endif  // SKEWTOR_ZOO_HPP_
