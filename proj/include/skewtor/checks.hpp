// Named residual checks over randomized and zoo inputs. Each check reports the
// worst residual it saw against a fixed tolerance. The verify command and the
// acceptance suite are both compositions of these.

#ifndef SKEWTOR_CHECKS_HPP_
#define SKEWTOR_CHECKS_HPP_

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "skewtor/curvature.hpp"
#include "skewtor/quadrature.hpp"
#include "skewtor/variation.hpp"
#include "skewtor/zoo.hpp"

namespace skewtor {

struct Check {
  std::string name;
  std::string anchor;  // the identity being checked, as a formula
  std::size_t points = 0;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string detail;
};

// pass iff the residual is finite and at most tol.
Check make_check(std::string name, std::string anchor, std::size_t points, double residual,
                 double tol);

// One randomized (g, T) pair with sample points and directions on a zoo chart.
struct RandomInput {
  std::shared_ptr<const MetricField> g;
  TorsionField t;
  std::vector<Point> points;
  std::vector<SymTensorField> directions;
};

std::vector<RandomInput> random_inputs(const GeometryBundle& bundle, std::uint64_t seed,
                                       int fields, int points, int directions);

// Route (b) of the Ricci tensor, Ric^g - S/4 - (d*T)/2, in coordinates.
using RicciRoute = std::function<Matrix(const PointCurvature<double>&)>;
Matrix ricci_relation_route(const PointCurvature<double>& pc);

//--------------------------------------------------------------------------------------------------
// Pointwise algebraic identities

Check check_ricci_relation(const std::vector<RandomInput>& in, double tol,
                           const RicciRoute& route = ricci_relation_route, int threads = 1);
Check check_scalar_identity(const std::vector<RandomInput>& in, double tol, int threads = 1);
Check check_s_trace(const std::vector<RandomInput>& in, double tol, int threads = 1);
Check check_metricity(const std::vector<RandomInput>& in, double tol, int threads = 1);
Check check_codiff_agreement(const std::vector<RandomInput>& in, double tol, int threads = 1);
Check check_d_squared(const GeometryBundle& bundle, std::uint64_t seed, int count, double tol);

//--------------------------------------------------------------------------------------------------
// Variations against Richardson finite differences

enum class RateKind { kVolumeElement, kTorsionNorm, kScalarG, kScalarNabla };

Check check_rate(const std::vector<RandomInput>& in, RateKind kind, double tol,
                 const FdSchedule& schedule = {}, int threads = 1);
// h = 2g: volume-element rate n, torsion-norm rate -2|T|^2, Scal^g rate -2 Scal^g.
Check check_conformal_rates(const GeometryBundle& bundle, const std::vector<Point>& points,
                            double tol);

// frame_curve_rate against g_t(e_i(t), e_j(t)) = delta_ij and -1/2 H.
Check check_frame_rate(std::uint64_t seed, int samples, double tol);
// Richardson FD of (I + tH)^{-1/2} at 0 against -1/2 H.
Check check_inv_sqrt_rate(std::uint64_t seed, int samples, double tol);
Check check_isometry_pair(std::uint64_t seed, int samples, double tol);

//--------------------------------------------------------------------------------------------------
// Integrals

Check check_volume(const GeometryBundle& bundle, const QuadratureGrid& grid, double tol,
                   int threads = 1);
Check check_laplacian_integral(const MetricField& g, const FormField& f,
                               const QuadratureGrid& grid, double tol, int threads = 1);

//--------------------------------------------------------------------------------------------------
// Zoo bundles

// Scal^g, |T|^2 and Scal^nabla against the bundle's closed forms.
Check check_reference_values(const GeometryBundle& bundle, const std::vector<Point>& points,
                             double tol);
Check check_einstein(const GeometryBundle& bundle, const std::vector<Point>& points, double tol);

struct ParallelTolerances {
  double codiff = 1e-8;
  double sigma = 1e-8;
  double nabla_t = 1e-8;
  double div_g = 1e-7;
};
// d*T, dT - 2 sigma_T, nabla T and Div G^nabla on a bundle flagged parallel.
std::vector<Check> check_parallel_torsion(const GeometryBundle& bundle,
                                          const std::vector<Point>& points,
                                          const ParallelTolerances& tol = {});

// Relative residual |lhs - rhs| / (1 + |rhs|) over the directions.
Check check_theorem(const GeometryBundle& bundle, const std::vector<SymTensorField>& directions,
                    const QuadratureGrid& grid, double tol, int threads = 1);
// Volume-neutral directions: |lhs| within tol, and the pointwise rate either
// vanishes below zero_tol or takes both signs.
Check check_null_direction(const GeometryBundle& bundle, const std::vector<SymTensorField>& directions,
                           const QuadratureGrid& grid, double tol, double zero_tol = 1e-8,
                           int threads = 1);

// FD of the functional against the integrated gradient pairing, relative.
Check check_gradient(const MetricField& g, const TorsionField& t,
                     const std::vector<SymTensorField>& directions, double lambda,
                     const QuadratureGrid& grid, double tol, int threads = 1);
// Frobenius norm of G^nabla - Lambda g in an orthonormal frame.
Check check_gradient_norm(const GeometryBundle& bundle, const std::vector<Point>& points,
                          double lambda, double tol);

Check check_cross_validation(const GeometryBundle& bundle, const std::vector<Point>& points,
                             double tol);

}  // namespace skewtor

#endif  // SKEWTOR_CHECKS_HPP_
