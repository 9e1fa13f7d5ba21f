#include "skewtor/lie.hpp"

#include <cmath>
#include <sstream>

#include "skewtor/spd.hpp"
#include "skewtor/zoo.hpp"

namespace skewtor {

LieAlgebraData LieAlgebraData::abelian(int n) {
  if (n < 1) throw LieAlgebraError("algebra dimension must be positive");
  return LieAlgebraData{n, Tensor<double>(n, 3)};
}

LieAlgebraData LieAlgebraData::su2() {
  LieAlgebraData a{3, Tensor<double>(3, 3)};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) a.c(k, i, j) = levi_civita3(i, j, k);
  return a;
}

LieAlgebraData LieAlgebraData::su2_plus_su2() {
  LieAlgebraData a{6, Tensor<double>(6, 3)};
  for (int block = 0; block < 2; ++block)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k)
          a.c(3 * block + k, 3 * block + i, 3 * block + j) = levi_civita3(i, j, k);
  return a;
}

LieAlgebraData LieAlgebraData::from_entries(int n,
                                            const std::vector<std::array<double, 4>>& entries) {
  LieAlgebraData a = abelian(n);
  for (const auto& e : entries) {
    const int i = static_cast<int>(e[0]);
    const int j = static_cast<int>(e[1]);
    const int k = static_cast<int>(e[2]);
    if (i < 0 || j < 0 || k < 0 || i >= n || j >= n || k >= n ||
        static_cast<double>(i) != e[0] || static_cast<double>(j) != e[1] ||
        static_cast<double>(k) != e[2])
      throw LieAlgebraError("structure constant index out of range");
    if (i == j && e[3] != 0.0) throw LieAlgebraError("structure constants must satisfy c^k_ii = 0");
    a.c(k, i, j) = e[3];
    a.c(k, j, i) = -e[3];
  }
  return a;
}

double LieAlgebraData::jacobi_violation() const {
  const int n = dim;
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double s = 0.0;
          for (int m = 0; m < n; ++m)
            s += c(m, i, j) * c(l, m, k) + c(m, j, k) * c(l, m, i) + c(m, k, i) * c(l, m, j);
          worst = std::max(worst, std::abs(s));
        }
  return worst;
}

void LieAlgebraData::require_jacobi(double tol) const {
  const double v = jacobi_violation();
  if (!(v <= tol)) {
    std::ostringstream os;
    os << "structure constants violate the Jacobi identity (max residual " << v << ")";
    throw LieAlgebraError(os.str());
  }
}

void InvariantStructure::validate(double tol) const {
  (void)SpdMatrix(metric);
  const int n = metric.dim();
  if (torsion.dim() != n || torsion.rank() != 3)
    throw LieAlgebraError("torsion must be an n x n x n array");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (std::abs(torsion(i, j, k) + torsion(j, i, k)) > tol ||
            std::abs(torsion(i, j, k) + torsion(i, k, j)) > tol)
          throw LieAlgebraError("torsion is not fully antisymmetric");
}

Tensor<double> koszul_levi_civita(const LieAlgebraData& c, const Matrix& g) {
  c.require_jacobi();
  (void)SpdMatrix(g);
  return lie::koszul(c.c, inverse(g), g);
}

CurvatureReport invariant_curvature_report(const LieAlgebraData& c, const InvariantStructure& s) {
  c.require_jacobi();
  s.validate();
  if (s.metric.dim() != c.dim) throw LieAlgebraError("structure and algebra dimensions differ");
  return assemble_report({}, lie::invariant_curvature(c.c, s.metric, s.torsion));
}

double einstein_residual(const LieAlgebraData& c, const InvariantStructure& s) {
  const CurvatureReport r = invariant_curvature_report(c, s);
  const int n = c.dim;
  Matrix a(n, 2);
  const Matrix& ric = r.basis.ricci;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      a(i, j) = 0.5 * (ric(i, j) + ric(j, i)) - r.scal_nabla / n * s.metric(i, j);
  const double sq = inner_with(inverse(s.metric), a, a);
  return std::sqrt(std::max(sq, 0.0));
}

}  // namespace skewtor
