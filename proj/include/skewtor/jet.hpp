// Forward-mode derivative scalars.
//
// Jet1<N>    value + gradient (first order), over double.
// Jet2<T, N> value + gradient + symmetric hessian, over T (double or Jet1).
//
// A jet of dimension 0 is a constant: it combines with jets of any
// dimension. Two jets of distinct nonzero dimension cannot be combined.

#ifndef SKEWTOR_JET_HPP_
#define SKEWTOR_JET_HPP_

#include <array>
#include <type_traits>
#include <cmath>
#include <stdexcept>
#include <string>

namespace skewtor {

inline constexpr int kMaxChartDim = 4;
inline constexpr int kMaxParams = 12;

class JetDimensionError : public std::invalid_argument {
 public:
  JetDimensionError(int a, int b)
      : std::invalid_argument("jet dimension mismatch: " + std::to_string(a) + " vs " +
                              std::to_string(b)) {}
};

namespace detail {

inline int merge_dim(int a, int b) {
  if (a == 0) return b;
  if (b == 0 || a == b) return a;
  throw JetDimensionError(a, b);
}

inline void check_dim(int n, int cap) {
  if (n < 0 || n > cap)
    throw std::invalid_argument("jet dimension " + std::to_string(n) + " exceeds capacity " +
                                std::to_string(cap));
}

}  // namespace detail

inline double value_of(double x) { return x; }

//--------------------------------------------------------------------------------------------------
// First-order jet

template <int N>
class Jet1 {
 public:
  Jet1() = default;
  Jet1(double v) : value_(v) {}  // NOLINT(google-explicit-constructor): constants promote

  static Jet1 variable(double v, int n, int i) {
    Jet1 r(v);
    detail::check_dim(n, N);
    r.n_ = n;
    r.grad_[i] = 1.0;
    return r;
  }
  static Jet1 with_gradient(double v, int n) {
    Jet1 r(v);
    detail::check_dim(n, N);
    r.n_ = n;
    return r;
  }

  int dim() const { return n_; }
  double value() const { return value_; }
  double d(int i) const { return grad_[i]; }
  double& d(int i) { return grad_[i]; }

  Jet1& operator+=(const Jet1& o) {
    n_ = detail::merge_dim(n_, o.n_);
    value_ += o.value_;
    for (int i = 0; i < n_; ++i) grad_[i] += o.grad_[i];
    return *this;
  }
  Jet1& operator-=(const Jet1& o) {
    n_ = detail::merge_dim(n_, o.n_);
    value_ -= o.value_;
    for (int i = 0; i < n_; ++i) grad_[i] -= o.grad_[i];
    return *this;
  }
  Jet1& operator*=(const Jet1& o) {
    n_ = detail::merge_dim(n_, o.n_);
    for (int i = 0; i < n_; ++i) grad_[i] = grad_[i] * o.value_ + value_ * o.grad_[i];
    value_ *= o.value_;
    return *this;
  }
  Jet1& operator/=(const Jet1& o) {
    if (o.value_ == 0.0) throw std::domain_error("jet division by zero value");
    n_ = detail::merge_dim(n_, o.n_);
    const double inv = 1.0 / o.value_;
    value_ *= inv;
    for (int i = 0; i < n_; ++i) grad_[i] = (grad_[i] - value_ * o.grad_[i]) * inv;
    return *this;
  }
  Jet1 operator-() const {
    Jet1 r = *this;
    r.value_ = -r.value_;
    for (int i = 0; i < n_; ++i) r.grad_[i] = -r.grad_[i];
    return r;
  }

  // f(u) with f(u0) = f0, f'(u0) = f1.
  Jet1 chain(double f0, double f1) const {
    Jet1 r(f0);
    r.n_ = n_;
    for (int i = 0; i < n_; ++i) r.grad_[i] = f1 * grad_[i];
    return r;
  }

 private:
  int n_ = 0;
  double value_ = 0.0;
  std::array<double, N> grad_{};
};

template <int N> Jet1<N> operator+(Jet1<N> a, const Jet1<N>& b) { return a += b; }
template <int N> Jet1<N> operator-(Jet1<N> a, const Jet1<N>& b) { return a -= b; }
template <int N> Jet1<N> operator*(Jet1<N> a, const Jet1<N>& b) { return a *= b; }
template <int N> Jet1<N> operator/(Jet1<N> a, const Jet1<N>& b) { return a /= b; }
template <int N> Jet1<N> operator+(Jet1<N> a, double b) { return a += Jet1<N>(b); }
template <int N> Jet1<N> operator+(double a, Jet1<N> b) { return b += Jet1<N>(a); }
template <int N> Jet1<N> operator-(Jet1<N> a, double b) { return a -= Jet1<N>(b); }
template <int N> Jet1<N> operator-(double a, const Jet1<N>& b) { return Jet1<N>(a) -= b; }
template <int N> Jet1<N> operator*(Jet1<N> a, double b) { return a *= Jet1<N>(b); }
template <int N> Jet1<N> operator*(double a, Jet1<N> b) { return b *= Jet1<N>(a); }
template <int N> Jet1<N> operator/(Jet1<N> a, double b) { return a /= Jet1<N>(b); }
template <int N> Jet1<N> operator/(double a, const Jet1<N>& b) { return Jet1<N>(a) /= b; }

template <int N> double value_of(const Jet1<N>& x) { return x.value(); }

template <int N> Jet1<N> sin(const Jet1<N>& x) {
  return x.chain(std::sin(x.value()), std::cos(x.value()));
}
template <int N> Jet1<N> cos(const Jet1<N>& x) {
  return x.chain(std::cos(x.value()), -std::sin(x.value()));
}
template <int N> Jet1<N> exp(const Jet1<N>& x) {
  const double e = std::exp(x.value());
  return x.chain(e, e);
}
template <int N> Jet1<N> log(const Jet1<N>& x) {
  if (x.value() <= 0.0) throw std::domain_error("jet log of non-positive value");
  return x.chain(std::log(x.value()), 1.0 / x.value());
}
template <int N> Jet1<N> sqrt(const Jet1<N>& x) {
  if (x.value() <= 0.0) throw std::domain_error("jet sqrt of non-positive value");
  const double s = std::sqrt(x.value());
  return x.chain(s, 0.5 / s);
}

//--------------------------------------------------------------------------------------------------
// Second-order jet

template <typename T, int N>
class Jet2 {
 public:
  static constexpr int kHessSize = N * (N + 1) / 2;

  Jet2() : value_(0.0) { grad_.fill(T(0.0)); hess_.fill(T(0.0)); }
  Jet2(double v) : value_(v) {  // NOLINT(google-explicit-constructor)
    grad_.fill(T(0.0));
    hess_.fill(T(0.0));
  }
  explicit Jet2(const T& v)
    requires(!std::is_same_v<T, double>)
      : value_(v) {
    grad_.fill(T(0.0));
    hess_.fill(T(0.0));
  }

  // Coordinate variable x_i at v. For nested jets, pass v as an inner variable.
  static Jet2 variable(const T& v, int n, int i) {
    detail::check_dim(n, N);
    Jet2 r(v);
    r.n_ = n;
    r.grad_[i] = T(1.0);
    return r;
  }
  static Jet2 constant(double v, int n) {
    detail::check_dim(n, N);
    Jet2 r(v);
    r.n_ = n;
    return r;
  }

  int dim() const { return n_; }
  const T& value() const { return value_; }
  T& value() { return value_; }
  const T& grad(int i) const { return grad_[i]; }
  T& grad(int i) { return grad_[i]; }
  const T& hess(int i, int j) const { return hess_[hidx(i, j)]; }
  T& hess(int i, int j) { return hess_[hidx(i, j)]; }
  void set_dim(int n) {
    detail::check_dim(n, N);
    n_ = n;
  }

  Jet2& operator+=(const Jet2& o) {
    n_ = detail::merge_dim(n_, o.n_);
    value_ += o.value_;
    for (int i = 0; i < n_; ++i) grad_[i] += o.grad_[i];
    for (int k = 0; k < hsize(); ++k) hess_[k] += o.hess_[k];
    return *this;
  }
  Jet2& operator-=(const Jet2& o) {
    n_ = detail::merge_dim(n_, o.n_);
    value_ -= o.value_;
    for (int i = 0; i < n_; ++i) grad_[i] -= o.grad_[i];
    for (int k = 0; k < hsize(); ++k) hess_[k] -= o.hess_[k];
    return *this;
  }
  Jet2& operator*=(const Jet2& o) {
    n_ = detail::merge_dim(n_, o.n_);
    for (int i = 0; i < n_; ++i) {
      for (int j = i; j < n_; ++j) {
        T& h = hess_[hidx(i, j)];
        h = h * o.value_ + value_ * o.hess_[hidx(i, j)] + grad_[i] * o.grad_[j] +
            grad_[j] * o.grad_[i];
      }
    }
    for (int i = 0; i < n_; ++i) grad_[i] = grad_[i] * o.value_ + value_ * o.grad_[i];
    value_ = value_ * o.value_;
    return *this;
  }
  Jet2& operator/=(const Jet2& o) {
    if (value_of(o.value_) == 0.0) throw std::domain_error("jet division by zero value");
    const T inv = T(1.0) / o.value_;
    return *this *= o.chain(inv, -(inv * inv), T(2.0) * inv * inv * inv);
  }
  Jet2 operator-() const {
    Jet2 r = *this;
    r.value_ = -r.value_;
    for (int i = 0; i < n_; ++i) r.grad_[i] = -r.grad_[i];
    for (int k = 0; k < hsize(); ++k) r.hess_[k] = -r.hess_[k];
    return r;
  }

  // f(u) with f(u0) = f0, f'(u0) = f1, f''(u0) = f2.
  Jet2 chain(const T& f0, const T& f1, const T& f2) const {
    Jet2 r(f0);
    r.n_ = n_;
    for (int i = 0; i < n_; ++i) {
      r.grad_[i] = f1 * grad_[i];
      for (int j = i; j < n_; ++j)
        r.hess_[hidx(i, j)] = f1 * hess_[hidx(i, j)] + f2 * grad_[i] * grad_[j];
    }
    return r;
  }

 private:
  static int hidx(int i, int j) {
    if (i > j) std::swap(i, j);
    return i * N - i * (i - 1) / 2 + (j - i);
  }
  int hsize() const { return n_ == 0 ? 0 : hidx(n_ - 1, n_ - 1) + 1; }

  int n_ = 0;
  T value_;
  std::array<T, N> grad_;
  std::array<T, kHessSize> hess_;
};

template <typename T, int N> Jet2<T, N> operator+(Jet2<T, N> a, const Jet2<T, N>& b) { return a += b; }
template <typename T, int N> Jet2<T, N> operator-(Jet2<T, N> a, const Jet2<T, N>& b) { return a -= b; }
template <typename T, int N> Jet2<T, N> operator*(Jet2<T, N> a, const Jet2<T, N>& b) { return a *= b; }
template <typename T, int N> Jet2<T, N> operator/(Jet2<T, N> a, const Jet2<T, N>& b) { return a /= b; }
template <typename T, int N> Jet2<T, N> operator+(Jet2<T, N> a, double b) { return a += Jet2<T, N>(b); }
template <typename T, int N> Jet2<T, N> operator+(double a, Jet2<T, N> b) { return b += Jet2<T, N>(a); }
template <typename T, int N> Jet2<T, N> operator-(Jet2<T, N> a, double b) { return a -= Jet2<T, N>(b); }
template <typename T, int N> Jet2<T, N> operator-(double a, const Jet2<T, N>& b) { return Jet2<T, N>(a) -= b; }
template <typename T, int N> Jet2<T, N> operator/(Jet2<T, N> a, double b) { return a /= Jet2<T, N>(b); }
template <typename T, int N> Jet2<T, N> operator/(double a, const Jet2<T, N>& b) { return Jet2<T, N>(a) /= b; }

// Scaling by a plain double touches every slot once.
template <typename T, int N> Jet2<T, N> operator*(Jet2<T, N> a, double b) {
  Jet2<T, N> r = a.chain(a.value() * b, T(b), T(0.0));
  return r;
}
template <typename T, int N> Jet2<T, N> operator*(double a, const Jet2<T, N>& b) { return b * a; }

template <typename T, int N> double value_of(const Jet2<T, N>& x) { return value_of(x.value()); }

template <typename T, int N> Jet2<T, N> sin(const Jet2<T, N>& x) {
  using std::cos;
  using std::sin;
  const T s = sin(x.value());
  const T c = cos(x.value());
  return x.chain(s, c, -s);
}
template <typename T, int N> Jet2<T, N> cos(const Jet2<T, N>& x) {
  using std::cos;
  using std::sin;
  const T s = sin(x.value());
  const T c = cos(x.value());
  return x.chain(c, -s, -c);
}
template <typename T, int N> Jet2<T, N> exp(const Jet2<T, N>& x) {
  using std::exp;
  const T e = exp(x.value());
  return x.chain(e, e, e);
}
template <typename T, int N> Jet2<T, N> log(const Jet2<T, N>& x) {
  using std::log;
  if (value_of(x.value()) <= 0.0) throw std::domain_error("jet log of non-positive value");
  const T inv = T(1.0) / x.value();
  return x.chain(log(x.value()), inv, -(inv * inv));
}
template <typename T, int N> Jet2<T, N> sqrt(const Jet2<T, N>& x) {
  using std::sqrt;
  if (value_of(x.value()) <= 0.0) throw std::domain_error("jet sqrt of non-positive value");
  const T s = sqrt(x.value());
  const T inv = T(1.0) / s;
  return x.chain(s, T(0.5) * inv, T(-0.25) * inv * inv * inv);
}

// Integer power by repeated squaring; valid for every scalar type here.
template <typename S> S ipow(S base, int k) {
  if (k < 0) return S(1.0) / ipow(base, -k);
  S result(1.0);
  while (k > 0) {
    if (k & 1) result = result * base;
    base = base * base;
    k >>= 1;
  }
  return result;
}

using Dual = Jet1<kMaxChartDim>;
using Jet = Jet2<double, kMaxChartDim>;
using Jet3 = Jet2<Dual, kMaxChartDim>;
using ParamDual = Jet1<kMaxParams>;

}  // namespace skewtor

#endif  // SKEWTOR_JET_HPP_
