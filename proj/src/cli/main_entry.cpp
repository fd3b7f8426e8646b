#include <ostream>

#include <CLI11.hpp>

#include "pmstar/cli.hpp"

namespace pmstar::cli {
namespace {

void add_common(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--seed", cfg.seed, "Run seed")->capture_default_str();
  cmd->add_option("--json", cfg.json_path, "Write the JSON report to a file ('-' for stdout)");
}

void add_trials(CLI::App* cmd, RunConfig& cfg, std::size_t fallback) {
  cfg.trials = fallback;
  cmd->add_option("--trials", cfg.trials, "Sampled trials per check")->capture_default_str();
}

}  // namespace

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Probabilistic metric spaces over matrix C*-algebras"};
  app.name("pmstar");
  app.require_subcommand(1);
  RunConfig cfg;

  auto* axioms = app.add_subcommand("check-axioms", "Metric, d.d.f and PM axiom suites");
  add_common(axioms, cfg);
  axioms->add_option("--space", cfg.space, "trace or ratio")->capture_default_str();

  auto* demo = app.add_subcommand("pm-demo", "Distribution values, neighbourhoods, sequences");
  add_common(demo, cfg);

  auto* fixed = app.add_subcommand("fixed-point", "Picard solve for an affine contraction");
  add_common(fixed, cfg);
  fixed->add_option("--alpha", cfg.alpha, "Offsets a1,a2")->delimiter(',');
  fixed->add_option("--lambda", cfg.lambda, "Rates l1,l2 in (0,1)")->delimiter(',');
  fixed->add_option("--start", cfg.start, "Start point x,y")->delimiter(',');
  fixed->add_option("--lambda-stop", cfg.lambda_stop)->capture_default_str();
  fixed->add_option("--metric-tol", cfg.metric_tol)->capture_default_str();
  fixed->add_option("--max-iter", cfg.max_iter)->capture_default_str();

  auto* fred = app.add_subcommand("fredholm", "Fredholm system of the second kind");
  fred->require_subcommand(1);
  auto* solve = fred->add_subcommand("solve", "Solve a problem described by a JSON file");
  add_common(solve, cfg);
  solve->add_option("problem", cfg.problem_path, "Problem file")->required();
  solve->add_option("--method", cfg.method, "picard, direct or both")->capture_default_str();
  solve->add_option("--tol", cfg.tol)->capture_default_str();
  solve->add_option("--max-iter", cfg.max_iter)->capture_default_str();

  auto* hadzic = app.add_subcommand("hadzic", "Equicontinuity of t-norm iterates at 1");
  add_common(hadzic, cfg);
  hadzic->add_option("--tnorm", cfg.tnorm, "min or product")->capture_default_str();
  hadzic->add_option("--eps", cfg.eps, "Comma-separated epsilons")->delimiter(',');
  hadzic->add_option("--nmax", cfg.n_max)->capture_default_str();

  add_trials(axioms, cfg, 2000);
  std::size_t demo_trials = 200;
  std::size_t fixed_trials = 1000;
  std::size_t solve_trials = 200;
  demo->add_option("--trials", demo_trials)->capture_default_str();
  fixed->add_option("--trials", fixed_trials)->capture_default_str();
  solve->add_option("--trials", solve_trials)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : static_cast<int>(ExitCode::UsageError);
  }

  if (axioms->parsed()) {
    cfg.command = "check-axioms";
  } else if (demo->parsed()) {
    cfg.command = "pm-demo";
    cfg.trials = demo_trials;
  } else if (fixed->parsed()) {
    cfg.command = "fixed-point";
    cfg.trials = fixed_trials;
  } else if (solve->parsed()) {
    cfg.command = "fredholm";
    cfg.trials = solve_trials;
  } else {
    cfg.command = "hadzic";
  }
  return run(cfg, out, err);
}

}  // namespace pmstar::cli
