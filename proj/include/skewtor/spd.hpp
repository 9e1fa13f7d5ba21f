// Symmetric positive definite matrices: frames and inverse square roots.

#ifndef SKEWTOR_SPD_HPP_
#define SKEWTOR_SPD_HPP_

#include "skewtor/tensor.hpp"

namespace skewtor {

// A symmetric positive definite matrix. Construction symmetrizes the input and
// certifies positivity by a Cholesky factorization.
class SpdMatrix {
 public:
  explicit SpdMatrix(const Matrix& m);

  int dim() const { return m_.dim(); }
  const Matrix& matrix() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }

 private:
  Matrix m_;
};

// E with E^T G E = I, E = L^{-T} for the lower Cholesky factor L of G.
Matrix spd_cholesky_frame(const SpdMatrix& g);

struct SymmetricEigen {
  std::vector<double> values;  // ascending
  Matrix vectors;              // columns; first nonzero component of each is positive
};

// Symmetric eigendecomposition with deterministic ordering and sign convention.
SymmetricEigen symmetric_eigen(const Matrix& m);

// R = B^{-1/2}: symmetric positive definite with R B R = I.
SpdMatrix spd_inv_sqrt(const SpdMatrix& b);

// Symmetric part (A + A^T)/2.
Matrix symmetrized(const Matrix& a);

}  // namespace skewtor

#endif  // SKEWTOR_SPD_HPP_
