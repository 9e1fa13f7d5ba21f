#include "skewtor/spd.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace skewtor {

Matrix symmetrized(const Matrix& a) {
  const int n = a.dim();
  Matrix r(n, 2);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r(i, j) = 0.5 * (a(i, j) + a(j, i));
  return r;
}

SpdMatrix::SpdMatrix(const Matrix& m) : m_(symmetrized(m)) {
  if (m.rank() != 2) throw std::invalid_argument("SpdMatrix: expected a matrix");
  for (double v : m_.flat())
    if (!std::isfinite(v)) throw std::domain_error("SpdMatrix: non-finite entry");
  (void)cholesky_lower(m_);
}

// Extended precision keeps E^T G E - I near 1e-13 up to condition number 1e6;
// in double the factorization error alone is about eps * cond(G).
Matrix spd_cholesky_frame(const SpdMatrix& g) {
  const int n = g.dim();
  std::vector<long double> l(n * n, 0.0L);
  for (int j = 0; j < n; ++j) {
    long double d = g(j, j);
    for (int k = 0; k < j; ++k) d -= l[j * n + k] * l[j * n + k];
    l[j * n + j] = std::sqrt(d);
    for (int i = j + 1; i < n; ++i) {
      long double s = g(i, j);
      for (int k = 0; k < j; ++k) s -= l[i * n + k] * l[j * n + k];
      l[i * n + j] = s / l[j * n + j];
    }
  }
  // E = L^{-T} is upper triangular; solve L^T E = I column by column.
  Matrix e(n, 2);
  for (int c = 0; c < n; ++c) {
    std::vector<long double> x(n, 0.0L);
    for (int i = c; i >= 0; --i) {
      long double s = i == c ? 1.0L : 0.0L;
      for (int k = i + 1; k <= c; ++k) s -= l[k * n + i] * x[k];
      x[i] = s / l[i * n + i];
    }
    for (int i = 0; i <= c; ++i) e(i, c) = static_cast<double>(x[i]);
  }
  return e;
}

SymmetricEigen symmetric_eigen(const Matrix& m) {
  const int n = m.dim();
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = 0.5 * (m(i, j) + m(j, i));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
  if (solver.info() != Eigen::Success) throw std::runtime_error("symmetric_eigen: no convergence");
  SymmetricEigen out;
  out.values.resize(n);
  out.vectors = Matrix(n, 2);
  for (int k = 0; k < n; ++k) {
    out.values[k] = solver.eigenvalues()(k);
    Eigen::VectorXd v = solver.eigenvectors().col(k);
    for (int i = 0; i < n; ++i) {
      if (v(i) != 0.0) {
        if (v(i) < 0.0) v = -v;
        break;
      }
    }
    for (int i = 0; i < n; ++i) out.vectors(i, k) = v(i);
  }
  return out;
}

SpdMatrix spd_inv_sqrt(const SpdMatrix& b) {
  const SymmetricEigen eig = symmetric_eigen(b.matrix());
  const int n = b.dim();
  Matrix r(n, 2);
  for (int k = 0; k < n; ++k) {
    if (!(eig.values[k] > 0.0)) throw NotPositiveDefinite(k, eig.values[k]);
    const double s = 1.0 / std::sqrt(eig.values[k]);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) r(i, j) += s * eig.vectors(i, k) * eig.vectors(j, k);
  }
  return SpdMatrix(r);
}

}  // namespace skewtor
