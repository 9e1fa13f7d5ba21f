// Pointwise tensor calculus shared by the chart and algebraic engines.
//
// Index layout:
//   connection  G(k, i, j)       nabla_{d_i} d_j = G^k_ij d_k
//   torsion     T(k, i, j)       T(d_i, d_j) = T^k_ij d_k
//   3-form      W(i, j, k)       W(d_i, d_j, d_k)
//   curvature   Rup(i, j, k, l)  l-th component of R(d_i, d_j) d_k
//               R(i, j, k, l)    g(R(d_i, d_j) d_k, d_l)
//   derivative  dX(m, ...)       d/dx^m of X(...)
//
// Every routine is generic over the scalar V (double, Dual, ParamDual).

#ifndef SKEWTOR_ENGINE_HPP_
#define SKEWTOR_ENGINE_HPP_

#include <array>
#include <vector>

#include "skewtor/tensor.hpp"

namespace skewtor::engine {

// d/dx^m g^ij = -g^ia (d_m g_ab) g^bj
template <typename V>
Tensor<V> inverse_derivative(const Tensor<V>& ginv, const Tensor<V>& dg) {
  const int n = ginv.dim();
  Tensor<V> out(n, 3);
  for (int m = 0; m < n; ++m)
    for (int i = 0; i < n; ++i)
      for (int b = 0; b < n; ++b) {
        V t(0.0);
        for (int a = 0; a < n; ++a) t += ginv(i, a) * dg(m, a, b);
        for (int j = 0; j < n; ++j) out(m, i, j) -= t * ginv(b, j);
      }
  return out;
}

// Levi-Civita coefficients from first partials of g.
template <typename V>
Tensor<V> christoffel(const Tensor<V>& ginv, const Tensor<V>& dg) {
  const int n = ginv.dim();
  Tensor<V> low(n, 3);  // low(l, i, j) = 1/2 (d_i g_jl + d_j g_il - d_l g_ij)
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        low(l, i, j) = (dg(i, j, l) + dg(j, i, l) - dg(l, i, j)) * 0.5;
  Tensor<V> gam(n, 3);
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) {
      const V& gkl = ginv(k, l);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) gam(k, i, j) += gkl * low(l, i, j);
    }
  return gam;
}

// d_m Gamma^k_ij; needs second partials of g.
template <typename V>
Tensor<V> christoffel_derivative(const Tensor<V>& ginv, const Tensor<V>& dg,
                                 const Tensor<V>& ddg) {
  const int n = ginv.dim();
  const Tensor<V> dginv = inverse_derivative(ginv, dg);
  Tensor<V> low(n, 3);
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        low(l, i, j) = (dg(i, j, l) + dg(j, i, l) - dg(l, i, j)) * 0.5;
  Tensor<V> out(n, 4);
  for (int m = 0; m < n; ++m)
    for (int l = 0; l < n; ++l)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          const V dlow = (ddg(m, i, j, l) + ddg(m, j, i, l) - ddg(m, l, i, j)) * 0.5;
          const V& lo = low(l, i, j);
          for (int k = 0; k < n; ++k) out(m, k, i, j) += dginv(m, k, l) * lo + ginv(k, l) * dlow;
        }
  return out;
}

// G + s T, elementwise (same layout).
template <typename V>
Tensor<V> add_scaled(const Tensor<V>& a, const Tensor<V>& b, double s) {
  Tensor<V> r = a;
  for (std::size_t k = 0; k < r.size(); ++k) r.at_flat(k) += b.at_flat(k) * s;
  return r;
}

// Curvature of a connection on coordinate fields (commuting frame).
template <typename V>
Tensor<V> riemann_up(const Tensor<V>& conn, const Tensor<V>& dconn) {
  const int n = conn.dim();
  Tensor<V> r(n, 4);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          V s = dconn(i, l, j, k) - dconn(j, l, i, k);
          for (int m = 0; m < n; ++m) s += conn(m, j, k) * conn(l, i, m) - conn(m, i, k) * conn(l, j, m);
          r(i, j, k, l) = s;
        }
    }
  return r;
}

template <typename V>
Tensor<V> lower_last(const Tensor<V>& rup, const Tensor<V>& g) {
  const int n = g.dim();
  Tensor<V> r(n, 4);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int m = 0; m < n; ++m) {
          const V& v = rup(i, j, k, m);
          for (int l = 0; l < n; ++l) r(i, j, k, l) += v * g(m, l);
        }
  return r;
}

// Ric(X, Y) = sum_i R(X, e_i, e_i, Y)
template <typename V>
Tensor<V> ricci(const Tensor<V>& r_low, const Tensor<V>& ginv) {
  const int n = ginv.dim();
  Tensor<V> ric(n, 2);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      V s(0.0);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) s += ginv(i, j) * r_low(a, i, j, b);
      ric(a, b) = s;
    }
  return ric;
}

template <typename V>
Tensor<V> lower_torsion(const Tensor<V>& g, const Tensor<V>& t) {
  const int n = g.dim();
  Tensor<V> w(n, 3);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        V s(0.0);
        for (int l = 0; l < n; ++l) s += g(k, l) * t(l, i, j);
        w(i, j, k) = s;
      }
  return w;
}

template <typename V>
Tensor<V> raise_torsion(const Tensor<V>& ginv, const Tensor<V>& w) {
  const int n = ginv.dim();
  Tensor<V> t(n, 3);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        V s(0.0);
        for (int l = 0; l < n; ++l) s += ginv(k, l) * w(i, j, l);
        t(k, i, j) = s;
      }
  return t;
}

// d_m (g_kl T^l_ij)
template <typename V>
Tensor<V> lower_torsion_derivative(const Tensor<V>& g, const Tensor<V>& dg, const Tensor<V>& t,
                                   const Tensor<V>& dt) {
  const int n = g.dim();
  Tensor<V> dw(n, 4);
  for (int m = 0; m < n; ++m)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          V s(0.0);
          for (int l = 0; l < n; ++l) s += dg(m, k, l) * t(l, i, j) + g(k, l) * dt(m, l, i, j);
          dw(m, i, j, k) = s;
        }
  return dw;
}

// S(X, Y) = sum_{i,j} T(e_i, X, e_j) T(e_i, Y, e_j)
template <typename V>
Tensor<V> s_tensor(const Tensor<V>& w, const Tensor<V>& ginv) {
  const int n = ginv.dim();
  // u(j, a, k) = g^ji w(i, a, k)
  Tensor<V> u(n, 3);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const V& gji = ginv(j, i);
      for (int a = 0; a < n; ++a)
        for (int k = 0; k < n; ++k) u(j, a, k) += gji * w(i, a, k);
    }
  // v(j, a, l) = u(j, a, k) g^kl
  Tensor<V> v(n, 3);
  for (int j = 0; j < n; ++j)
    for (int a = 0; a < n; ++a)
      for (int k = 0; k < n; ++k) {
        const V& ujak = u(j, a, k);
        for (int l = 0; l < n; ++l) v(j, a, l) += ujak * ginv(k, l);
      }
  Tensor<V> s(n, 2);
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) {
      V acc(0.0);
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) acc += v(j, a, l) * w(j, b, l);
      s(a, b) = acc;
      s(b, a) = acc;
    }
  return s;
}

// |T|^2 = (1/3!) sum_{i,j} g(T(e_i, e_j), T(e_i, e_j))
template <typename V>
V torsion_norm_sq(const Tensor<V>& w, const Tensor<V>& ginv) {
  const int n = ginv.dim();
  Tensor<V> cur = w;
  // raise all three slots
  for (int slot = 0; slot < 3; ++slot) {
    Tensor<V> next(n, 3);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          V s(0.0);
          for (int a = 0; a < n; ++a) {
            if (slot == 0) s += ginv(i, a) * cur(a, j, k);
            if (slot == 1) s += ginv(j, a) * cur(i, a, k);
            if (slot == 2) s += ginv(k, a) * cur(i, j, a);
          }
          next(i, j, k) = s;
        }
    cur = std::move(next);
  }
  V acc(0.0);
  for (std::size_t k = 0; k < w.size(); ++k) acc += w.at_flat(k) * cur.at_flat(k);
  return acc * (1.0 / 6.0);
}

//--------------------------------------------------------------------------------------------------
// Covariant derivatives of covariant tensors

inline void decode_index(std::size_t flat, int n, int rank, std::array<int, 8>& idx) {
  for (int r = rank - 1; r >= 0; --r) {
    idx[r] = static_cast<int>(flat % static_cast<std::size_t>(n));
    flat /= static_cast<std::size_t>(n);
  }
}

inline std::size_t encode_index(const std::array<int, 8>& idx, int n, int rank) {
  std::size_t k = 0;
  for (int r = 0; r < rank; ++r) k = k * static_cast<std::size_t>(n) + static_cast<std::size_t>(idx[r]);
  return k;
}

// (nabla_i F)(J) = d_i F_J - sum_s conn(m, i, j_s) F(J with j_s -> m); output index (i, J).
template <typename V>
Tensor<V> covariant_derivative(const Tensor<V>& conn, const Tensor<V>& f, const Tensor<V>& df) {
  const int n = conn.dim();
  const int p = f.rank();
  const std::size_t size = f.size();
  Tensor<V> out(n, p + 1);
  std::array<int, 8> idx{};
  for (int i = 0; i < n; ++i)
    for (std::size_t k = 0; k < size; ++k) {
      V s = df.at_flat(i * size + k);
      decode_index(k, n, p, idx);
      for (int slot = 0; slot < p; ++slot) {
        const int js = idx[slot];
        std::array<int, 8> jdx = idx;
        for (int m = 0; m < n; ++m) {
          jdx[slot] = m;
          s -= conn(m, i, js) * f.at_flat(encode_index(jdx, n, p));
        }
      }
      out.at_flat(i * size + k) = s;
    }
  return out;
}

// (D w)_{j0..jp} = sum_s (-1)^s (nabla_{j_s} w)_{j0..^js..jp}; zero form when p + 1 > n.
template <typename V>
Tensor<V> alternate_derivative(const Tensor<V>& nabla_w) {
  const int n = nabla_w.dim();
  const int q = nabla_w.rank();  // = p + 1
  Tensor<V> out(n, q);
  if (q > n) return out;
  std::array<int, 8> idx{};
  std::array<int, 8> rest{};
  for (std::size_t k = 0; k < out.size(); ++k) {
    decode_index(k, n, q, idx);
    V s(0.0);
    for (int slot = 0; slot < q; ++slot) {
      rest[0] = idx[slot];
      int r = 1;
      for (int t = 0; t < q; ++t)
        if (t != slot) rest[r++] = idx[t];
      const V& v = nabla_w.at_flat(encode_index(rest, n, q));
      if (slot % 2 == 0)
        s += v;
      else
        s -= v;
    }
    out.at_flat(k) = s;
  }
  return out;
}

// -(g^ab) X(a, b, J) : codifferential of forms and divergence of symmetric tensors.
template <typename V>
Tensor<V> negative_trace_first_two(const Tensor<V>& x, const Tensor<V>& ginv) {
  const int n = ginv.dim();
  const int q = x.rank();
  Tensor<V> out(n, q - 2);
  const std::size_t size = out.size();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const V& gab = ginv(a, b);
      for (std::size_t k = 0; k < size; ++k)
        out.at_flat(k) -= gab * x.at_flat((a * n + b) * size + k);
    }
  return out;
}

// Laplacian with the nonnegative convention, Delta f = d*df.
template <typename V>
V laplacian(const Tensor<V>& ginv, const Tensor<V>& gam, std::span<const V> df,
            const Tensor<V>& ddf) {
  const int n = ginv.dim();
  V s(0.0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      V hab = ddf(a, b);
      for (int k = 0; k < n; ++k) hab -= gam(k, a, b) * df[k];
      s -= ginv(a, b) * hab;
    }
  return s;
}

}  // namespace skewtor::engine

#endif  // SKEWTOR_ENGINE_HPP_
