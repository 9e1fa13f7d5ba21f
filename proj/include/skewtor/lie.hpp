// Left-invariant geometry from Lie algebra structure constants.
//
// With [E_i, E_j] = c^k_ij E_k, left-invariant tensors have constant
// components in the basis {E_i}, so the whole curvature stack reduces to
// algebra on the structure constants, the metric and the torsion 3-form.

#ifndef SKEWTOR_LIE_HPP_
#define SKEWTOR_LIE_HPP_

#include <stdexcept>
#include <string>
#include <vector>

#include "skewtor/curvature.hpp"
#include "skewtor/tensor.hpp"

namespace skewtor {

class LieAlgebraError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LieAlgebraData {
  int dim = 0;
  Tensor<double> c;  // c(k, i, j) = c^k_ij, antisymmetric in (i, j)

  static LieAlgebraData abelian(int n);
  static LieAlgebraData su2();             // c^k_ij = eps_ijk
  static LieAlgebraData su2_plus_su2();    // two commuting copies
  // Entries (i, j, k, value) set c^k_ij = value and c^k_ji = -value.
  static LieAlgebraData from_entries(int n, const std::vector<std::array<double, 4>>& entries);

  double jacobi_violation() const;
  // Throws LieAlgebraError if the Jacobi identity fails beyond tol.
  void require_jacobi(double tol = 1e-12) const;
};

struct InvariantStructure {
  Matrix metric;       // SPD on the algebra
  Tensor<double> torsion;  // lowered, fully antisymmetric: T(E_i, E_j, E_k)

  void validate(double tol = 1e-12) const;
};

namespace lie {

// g(nabla_X Y, Z) = 1/2 {g([X,Y],Z) - g([Y,Z],X) + g([Z,X],Y)}
template <typename S>
Tensor<S> koszul(const Tensor<double>& c, const Tensor<S>& ginv, const Tensor<S>& g) {
  const int n = g.dim();
  Tensor<S> br(n, 3);  // br(i, j, l) = g([E_i, E_j], E_l)
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) {
        S s(0.0);
        for (int m = 0; m < n; ++m)
          if (c(m, i, j) != 0.0) s += g(m, l) * c(m, i, j);
        br(i, j, l) = s;
      }
  Tensor<S> low(n, 3);
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) low(l, i, j) = (br(i, j, l) - br(j, l, i) + br(l, i, j)) * 0.5;
  Tensor<S> gam(n, 3);
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) gam(k, i, j) += ginv(k, l) * low(l, i, j);
  return gam;
}

// R(E_i, E_j) E_k for a left-invariant connection (non-commuting frame).
template <typename S>
Tensor<S> riemann_up(const Tensor<double>& c, const Tensor<S>& conn) {
  const int n = conn.dim();
  Tensor<S> r(n, 4);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          S s(0.0);
          for (int m = 0; m < n; ++m) {
            s += conn(m, j, k) * conn(l, i, m) - conn(m, i, k) * conn(l, j, m);
            if (c(m, i, j) != 0.0) s -= conn(l, m, k) * c(m, i, j);
          }
          r(i, j, k, l) = s;
        }
    }
  return r;
}

template <typename S>
PointCurvature<S> invariant_curvature(const Tensor<double>& c, const Tensor<S>& g,
                                      const Tensor<S>& w) {
  const int n = g.dim();
  PointCurvature<S> pc;
  pc.g = g;
  pc.ginv = inverse(g);
  pc.christoffel = koszul(c, pc.ginv, g);
  const Tensor<S> t_up = engine::raise_torsion(pc.ginv, w);
  pc.connection = engine::add_scaled(pc.christoffel, t_up, 0.5);
  pc.r_low = engine::lower_last(riemann_up(c, pc.connection), g);
  pc.ricci = engine::ricci(pc.r_low, pc.ginv);
  pc.ricci_riemannian =
      engine::ricci(engine::lower_last(riemann_up(c, pc.christoffel), g), pc.ginv);
  pc.w = w;
  pc.s = engine::s_tensor(w, pc.ginv);
  pc.torsion_norm_sq = engine::torsion_norm_sq(w, pc.ginv);
  const Tensor<S> zero_dw(n, 4);
  pc.codiff = engine::negative_trace_first_two(
      engine::covariant_derivative(pc.christoffel, w, zero_dw), pc.ginv);
  pc.scal_riemannian = trace_with(pc.ginv, pc.ricci_riemannian);
  pc.scal_nabla = trace_with(pc.ginv, pc.ricci);
  return pc;
}

// Ric_S - (Scal^nabla / n) g in the Cholesky orthonormal frame, packed as the
// upper triangle with off-diagonals weighted by sqrt(2) so that the Euclidean
// norm equals the Frobenius norm.
template <typename S>
std::vector<S> einstein_residual_vector(const PointCurvature<S>& pc) {
  const int n = pc.g.dim();
  Tensor<S> a(n, 2);
  const S scal_over_n = pc.scal_nabla * (1.0 / n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      a(i, j) = (pc.ricci(i, j) + pc.ricci(j, i)) * 0.5 - scal_over_n * pc.g(i, j);
  const Tensor<S> e = cholesky_frame(pc.g);
  const Tensor<S> af = matmul(transpose(e), matmul(a, e));
  std::vector<S> out;
  out.reserve(n * (n + 1) / 2);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) out.push_back(i == j ? af(i, j) : af(i, j) * std::sqrt(2.0));
  return out;
}

}  // namespace lie

Tensor<double> koszul_levi_civita(const LieAlgebraData& c, const Matrix& g);

CurvatureReport invariant_curvature_report(const LieAlgebraData& c, const InvariantStructure& s);

// |Ric_S - (Scal^nabla/n) g| in the g-orthonormal frame, computed by full
// g^{-1} contractions (independent of the packed residual vector).
double einstein_residual(const LieAlgebraData& c, const InvariantStructure& s);

}  // namespace skewtor

#endif  // SKEWTOR_LIE_HPP_
