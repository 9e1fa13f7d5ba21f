// Command drivers behind the skewtor tool: input specs, the five commands,
// and JSON / CSV rendering. Every document carries "schema": 1 and the seed.

#ifndef SKEWTOR_REPORT_HPP_
#define SKEWTOR_REPORT_HPP_

#include <json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "skewtor/checks.hpp"
#include "skewtor/solver.hpp"

namespace skewtor {

inline constexpr int kSchemaVersion = 1;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  std::string geometry_path;
  int order = 16;
  FdSchedule fd;
  // Overrides the command's primary tolerance: pointwise identities (verify),
  // the relative residual (variation, theorem), solver convergence (solve).
  std::optional<double> tol;
  std::uint64_t seed = 7;
  std::string out_path;  // empty writes to stdout
  std::string format = "json";
  int threads = 1;
  int points = 20;
  int directions = 10;
  std::string direction_kind = "random";  // random | volume-neutral | conformal

  void validate() const;
};

struct GeometrySpec {
  std::string name;
  std::map<std::string, double> params;
};

// {"geometry": {"name": ..., "params": {...}}}, or the inner object itself.
GeometrySpec parse_geometry_spec(const nlohmann::json& j);
GeometrySpec load_geometry_spec(const std::string& path);

struct ContinuationSpec {
  int index = 0;
  std::vector<double> values;
  std::vector<double> start;
};

struct SolveSpec {
  std::string algebra_name;
  LieAlgebraData algebra;
  Family family;
  int seeds = 10;
  std::optional<ContinuationSpec> continuation;
};

// {"algebra": "su2" | {"n": 3, "c": [[i, j, k, value], ...]}, "family": ...,
//  "seeds": 10, "continuation": {"param": "a", "values": [...], "start": [...]}}
// Indices are 0-based; each entry sets c^k_ij = value = -c^k_ji.
SolveSpec parse_solve_spec(const nlohmann::json& j);
SolveSpec load_solve_spec(const std::string& path);

struct Output {
  nlohmann::ordered_json json;
  std::vector<std::string> csv_header;
  std::vector<std::vector<std::string>> csv_rows;
  bool pass = true;
};

std::string render(const Output& out, const std::string& format);
// Writes to config.out_path, or stdout when empty.
void write_output(const RunConfig& config, const Output& out);

struct VerifyHooks {
  RicciRoute ricci_route = ricci_relation_route;
};

std::vector<Check> verify_checks(const RunConfig& config, const GeometryBundle& bundle,
                                 const VerifyHooks& hooks = {});
Output run_verify(const RunConfig& config, const GeometrySpec& spec, const VerifyHooks& hooks = {});
Output run_curvature(const RunConfig& config, const GeometrySpec& spec);
Output run_variation(const RunConfig& config, const GeometrySpec& spec);
// Throws TheoremPreconditionError when the bundle is not nabla-Einstein with
// constant Scal^nabla.
Output run_theorem(const RunConfig& config, const GeometrySpec& spec);
Output run_solve(const RunConfig& config, const SolveSpec& spec);

}  // namespace skewtor

#endif  // SKEWTOR_REPORT_HPP_
