// Dense hypercubic arrays (every index runs over 0..n-1) and the small
// generic linear algebra used by the jet-typed curvature engines.

#ifndef SKEWTOR_TENSOR_HPP_
#define SKEWTOR_TENSOR_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "skewtor/jet.hpp"

namespace skewtor {

template <typename V>
class Tensor {
 public:
  Tensor() = default;
  Tensor(int dim, int rank, const V& fill = V(0.0)) : dim_(dim), rank_(rank) {
    if (dim < 0 || rank < 0) throw std::invalid_argument("tensor: negative dimension or rank");
    std::size_t size = 1;
    for (int r = 0; r < rank; ++r) size *= static_cast<std::size_t>(dim);
    data_.assign(size, fill);
  }

  int dim() const { return dim_; }
  int rank() const { return rank_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  template <typename... I>
  V& operator()(I... idx) {
    return data_[offset(idx...)];
  }
  template <typename... I>
  const V& operator()(I... idx) const {
    return data_[offset(idx...)];
  }

  V& at_flat(std::size_t k) { return data_[k]; }
  const V& at_flat(std::size_t k) const { return data_[k]; }
  std::span<V> flat() { return data_; }
  std::span<const V> flat() const { return data_; }

 private:
  template <typename... I>
  std::size_t offset(I... idx) const {
    std::size_t k = 0;
    ((k = k * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(idx)), ...);
    return k;
  }

  int dim_ = 0;
  int rank_ = 0;
  std::vector<V> data_;
};

using Matrix = Tensor<double>;

inline Matrix identity_matrix(int n) {
  Matrix m(n, 2);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

inline Matrix diagonal_matrix(std::initializer_list<double> d) {
  Matrix m(static_cast<int>(d.size()), 2);
  int i = 0;
  for (double v : d) {
    m(i, i) = v;
    ++i;
  }
  return m;
}

template <typename V>
Tensor<V> matmul(const Tensor<V>& a, const Tensor<V>& b) {
  const int n = a.dim();
  Tensor<V> r(n, 2);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      const V& aik = a(i, k);
      for (int j = 0; j < n; ++j) r(i, j) += aik * b(k, j);
    }
  return r;
}

template <typename V>
Tensor<V> transpose(const Tensor<V>& a) {
  const int n = a.dim();
  Tensor<V> r(n, 2);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r(i, j) = a(j, i);
  return r;
}

// Gauss-Jordan with partial pivoting on the value part. The pivot sequence is
// locally constant, so derivative slots of jet entries stay exact.
template <typename V>
Tensor<V> inverse(const Tensor<V>& a) {
  const int n = a.dim();
  Tensor<V> m = a;
  Tensor<V> inv(n, 2);
  for (int i = 0; i < n; ++i) inv(i, i) = V(1.0);
  for (int col = 0; col < n; ++col) {
    int piv = col;
    double best = std::abs(value_of(m(col, col)));
    for (int r = col + 1; r < n; ++r) {
      const double v = std::abs(value_of(m(r, col)));
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (best == 0.0) throw std::domain_error("inverse: singular matrix");
    if (piv != col) {
      for (int j = 0; j < n; ++j) {
        std::swap(m(piv, j), m(col, j));
        std::swap(inv(piv, j), inv(col, j));
      }
    }
    const V scale = V(1.0) / m(col, col);
    for (int j = 0; j < n; ++j) {
      m(col, j) = m(col, j) * scale;
      inv(col, j) = inv(col, j) * scale;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const V f = m(r, col);
      if (value_of(f) == 0.0 && f.dim() == 0) continue;
      for (int j = 0; j < n; ++j) {
        m(r, j) -= f * m(col, j);
        inv(r, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

template <>
inline Tensor<double> inverse(const Tensor<double>& a) {
  const int n = a.dim();
  Tensor<double> m = a;
  Tensor<double> inv = identity_matrix(n);
  for (int col = 0; col < n; ++col) {
    int piv = col;
    double best = std::abs(m(col, col));
    for (int r = col + 1; r < n; ++r)
      if (std::abs(m(r, col)) > best) {
        best = std::abs(m(r, col));
        piv = r;
      }
    if (best == 0.0) throw std::domain_error("inverse: singular matrix");
    if (piv != col)
      for (int j = 0; j < n; ++j) {
        std::swap(m(piv, j), m(col, j));
        std::swap(inv(piv, j), inv(col, j));
      }
    const double scale = 1.0 / m(col, col);
    for (int j = 0; j < n; ++j) {
      m(col, j) *= scale;
      inv(col, j) *= scale;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = m(r, col);
      if (f == 0.0) continue;
      for (int j = 0; j < n; ++j) {
        m(r, j) -= f * m(col, j);
        inv(r, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

// Determinant by elimination with partial pivoting.
template <typename V>
V determinant(const Tensor<V>& a) {
  const int n = a.dim();
  Tensor<V> m = a;
  V det(1.0);
  for (int col = 0; col < n; ++col) {
    int piv = col;
    double best = std::abs(value_of(m(col, col)));
    for (int r = col + 1; r < n; ++r) {
      const double v = std::abs(value_of(m(r, col)));
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (best == 0.0) return V(0.0);
    if (piv != col) {
      for (int j = 0; j < n; ++j) std::swap(m(piv, j), m(col, j));
      det = -det;
    }
    det = det * m(col, col);
    for (int r = col + 1; r < n; ++r) {
      const V f = m(r, col) / m(col, col);
      for (int j = col; j < n; ++j) m(r, j) -= f * m(col, j);
    }
  }
  return det;
}

class NotPositiveDefinite : public std::domain_error {
 public:
  NotPositiveDefinite(int pivot, double value)
      : std::domain_error("matrix is not positive definite: Cholesky pivot " +
                          std::to_string(pivot) + " = " + std::to_string(value)),
        pivot_(pivot),
        value_(value) {}
  int pivot() const { return pivot_; }
  double pivot_value() const { return value_; }

 private:
  int pivot_;
  double value_;
};

// Lower Cholesky factor L with G = L L^T. Throws NotPositiveDefinite naming the
// failing pivot.
template <typename V>
Tensor<V> cholesky_lower(const Tensor<V>& g) {
  using std::sqrt;
  const int n = g.dim();
  Tensor<V> l(n, 2);
  for (int j = 0; j < n; ++j) {
    V d = g(j, j);
    for (int k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    const double dv = value_of(d);
    if (!(dv > 0.0) || !std::isfinite(dv)) throw NotPositiveDefinite(j, dv);
    l(j, j) = sqrt(d);
    for (int i = j + 1; i < n; ++i) {
      V s = g(i, j);
      for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }
  return l;
}

// E = L^{-T}: columns are g-orthonormal, E^T G E = I.
template <typename V>
Tensor<V> cholesky_frame(const Tensor<V>& g) {
  const Tensor<V> l = cholesky_lower(g);
  const int n = g.dim();
  // Solve L^T E = I by back substitution, column by column.
  Tensor<V> e(n, 2);
  for (int c = 0; c < n; ++c) {
    for (int i = n - 1; i >= 0; --i) {
      V s(i == c ? 1.0 : 0.0);
      for (int k = i + 1; k < n; ++k) s -= l(k, i) * e(k, c);
      e(i, c) = s / l(i, i);
    }
  }
  return e;
}

template <typename V>
V trace_with(const Tensor<V>& ginv, const Tensor<V>& m) {
  V t(0.0);
  const int n = m.dim();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) t += ginv(i, j) * m(i, j);
  return t;
}

// (a, b)_g = a_ij b_kl g^ik g^jl
template <typename V>
V inner_with(const Tensor<V>& ginv, const Tensor<V>& a, const Tensor<V>& b) {
  const Tensor<V> ga = matmul(ginv, a);
  const Tensor<V> gb = matmul(ginv, b);
  V t(0.0);
  const int n = a.dim();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) t += ga(i, j) * gb(j, i);
  return t;
}

// Components of a covariant tensor in the basis given by the columns of E.
inline Tensor<double> change_basis(const Tensor<double>& t, const Matrix& e) {
  const int n = t.dim();
  Tensor<double> cur = t;
  // contract one slot at a time
  for (int slot = 0; slot < t.rank(); ++slot) {
    Tensor<double> next(n, t.rank());
    const std::size_t total = cur.size();
    std::size_t stride = 1;
    for (int r = slot + 1; r < t.rank(); ++r) stride *= static_cast<std::size_t>(n);
    for (std::size_t k = 0; k < total; ++k) {
      const std::size_t a = (k / stride) % static_cast<std::size_t>(n);
      const std::size_t base = k - a * stride;
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += cur.at_flat(base + i * stride) * e(i, static_cast<int>(a));
      next.at_flat(k) = s;
    }
    cur = std::move(next);
  }
  return cur;
}

inline double frobenius(const Tensor<double>& t) {
  double s = 0.0;
  for (double v : t.flat()) s += v * v;
  return std::sqrt(s);
}

inline double max_abs(const Tensor<double>& t) {
  double m = 0.0;
  for (double v : t.flat()) m = std::max(m, std::abs(v));
  return m;
}

inline Tensor<double> operator-(const Tensor<double>& a, const Tensor<double>& b) {
  Tensor<double> r = a;
  for (std::size_t k = 0; k < r.size(); ++k) r.at_flat(k) -= b.at_flat(k);
  return r;
}

inline Tensor<double> operator+(const Tensor<double>& a, const Tensor<double>& b) {
  Tensor<double> r = a;
  for (std::size_t k = 0; k < r.size(); ++k) r.at_flat(k) += b.at_flat(k);
  return r;
}

inline Tensor<double> operator*(double s, const Tensor<double>& a) {
  Tensor<double> r = a;
  for (double& v : r.flat()) v *= s;
  return r;
}

}  // namespace skewtor

#endif  // SKEWTOR_TENSOR_HPP_
