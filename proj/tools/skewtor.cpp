// skewtor: verification suites, curvature and variation reports, theorem
// checks and solver campaigns for metric connections with skew torsion.
//
// Exit status: 0 when every check passes, 1 when a check fails, 2 on bad
// input, unmet hypotheses, or I/O errors.

#include <CLI11.hpp>

#include <iostream>

#include "skewtor/parallel.hpp"
#include "skewtor/report.hpp"
#include "skewtor/theorem.hpp"

namespace {

using skewtor::RunConfig;

void add_common(CLI::App* sub, RunConfig& c, int& threads, double& fd_step, double& tol) {
  sub->add_option("--geometry", c.geometry_path, "geometry or structure-constant spec (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  sub->add_option("--order", c.order, "quadrature nodes per axis")->capture_default_str();
  sub->add_option("--seed", c.seed, "random seed")->capture_default_str();
  sub->add_option("--tol", tol, "override the primary tolerance");
  sub->add_option("--out", c.out_path, "output file (default stdout)");
  sub->add_option("--format", c.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  sub->add_option("--threads", threads, "worker threads (default SKEWTOR_THREADS, else 1)");
  sub->add_option("--points", c.points, "random sample points")->capture_default_str();
  sub->add_option("--directions", c.directions, "random variation directions")
      ->capture_default_str();
  sub->add_option("--fd-step", fd_step, "largest finite-difference step; halved twice")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"skewtor: metric connections with skew torsion"};
  app.require_subcommand(1);
  RunConfig config;
  int threads = 0;
  double fd_step = 1e-3;
  double tol = 0.0;

  CLI::App* verify = app.add_subcommand("verify", "run every identity check on a geometry");
  CLI::App* curvature = app.add_subcommand("curvature", "curvature report at random points");
  CLI::App* variation = app.add_subcommand("variation", "first variations against finite differences");
  CLI::App* theorem = app.add_subcommand("theorem", "integrated scalar-rate identity on a nabla-Einstein geometry");
  CLI::App* solve = app.add_subcommand("solve", "nabla-Einstein search on a Lie algebra");
  for (CLI::App* sub : {verify, curvature, variation, theorem, solve})
    add_common(sub, config, threads, fd_step, tol);
  theorem->add_option("--direction-kind", config.direction_kind, "random, volume-neutral or conformal")
      ->check(CLI::IsMember({"random", "volume-neutral", "conformal"}))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    config.command = app.get_subcommands().front()->get_name();
    config.threads = skewtor::resolve_threads(threads);
    config.fd.steps = {fd_step, fd_step / 2.0, fd_step / 4.0};
    if (app.get_subcommands().front()->count("--tol") > 0) config.tol = tol;
    config.validate();

    skewtor::Output out;
    if (config.command == "solve") {
      out = skewtor::run_solve(config, skewtor::load_solve_spec(config.geometry_path));
    } else {
      const skewtor::GeometrySpec spec = skewtor::load_geometry_spec(config.geometry_path);
      if (config.command == "verify") out = skewtor::run_verify(config, spec);
      else if (config.command == "curvature") out = skewtor::run_curvature(config, spec);
      else if (config.command == "variation") out = skewtor::run_variation(config, spec);
      else out = skewtor::run_theorem(config, spec);
    }
    skewtor::write_output(config, out);
    return out.pass ? 0 : 1;
  } catch (const skewtor::TheoremPreconditionError& e) {
    std::cerr << "skewtor: hypothesis not satisfied: " << e.what() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "skewtor: " << e.what() << '\n';
  }
  return 2;
}
