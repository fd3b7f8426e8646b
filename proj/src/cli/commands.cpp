#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "pmstar/cli.hpp"
#include "pmstar/cmetric.hpp"
#include "pmstar/contraction.hpp"
#include "pmstar/ddf.hpp"
#include "pmstar/pmspace.hpp"
#include "pmstar/random.hpp"
#include "pmstar/simd/kernels.hpp"
#include "pmstar/tnorm.hpp"

namespace pmstar::cli {
namespace {

// Human-readable lines move to err when the JSON report takes stdout.
std::ostream& text_stream(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return cfg.json_path && *cfg.json_path == "-" ? err : out;
}

using nlohmann::json;
using Clock = std::chrono::steady_clock;

std::string status_of(const CheckResult& c) {
  if (!c.ok()) return "fail";
  if (c.trials > 0 && c.passed() == 0) return "skip";
  return "pass";
}

std::string fmt(double v, int precision = 10) {
  std::ostringstream os;
  os << std::setprecision(precision) << v;
  return os.str();
}

/// Collects checks and command-specific results for one run.
class Session {
 public:
  Session(std::string command, json config)
      : command_(std::move(command)), config_(std::move(config)), start_(Clock::now()) {}

  void add(const std::string& prefix, const CheckResult& c) {
    CheckResult named = c;
    named.name = prefix.empty() ? c.name : prefix + "." + c.name;
    checks_.push_back(std::move(named));
  }
  void add(const std::string& prefix, const AxiomReport& r) {
    for (const auto& c : r.checks) add(prefix, c);
  }
  /// Single-trial check with an explicit failure description.
  void add_verdict(const std::string& name, bool pass, const std::string& why,
                   std::map<std::string, double> margins = {}) {
    CheckResult c(name);
    c.record(pass, [&] { return why; });
    c.margins = std::move(margins);
    checks_.push_back(std::move(c));
  }
  json& results() { return results_; }

  bool ok() const {
    for (const auto& c : checks_) {
      if (!c.ok()) return false;
    }
    return true;
  }

  int finish(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const double wall_ms =
        std::chrono::duration<double, std::milli>(Clock::now() - start_).count();
    json report;
    report["command"] = command_;
    report["config"] = config_;
    report["ok"] = ok();
    report["checks"] = json::array();
    for (const auto& c : checks_) {
      json j;
      j["name"] = c.name;
      j["status"] = status_of(c);
      j["trials"] = c.trials;
      j["failures"] = c.failures;
      j["skipped"] = c.skipped;
      j["counterexample"] = c.counterexample ? json(*c.counterexample) : json(nullptr);
      j["margins"] = c.margins;
      if (!c.note.empty()) j["note"] = c.note;
      report["checks"].push_back(std::move(j));
    }
    if (!results_.is_null()) report["results"] = results_;
    report["wall_time_ms"] = wall_ms;
    const std::string digest = report_digest(report);
    report["digest"] = digest;

    std::ostream& summary = text_stream(cfg, out, err);
    for (const auto& c : checks_) {
      summary << std::left << std::setw(5) << status_of(c) << ' ' << c.name << " ("
              << c.trials << " trials)";
      if (!c.note.empty()) summary << " [" << c.note << "]";
      summary << '\n';
      if (c.counterexample) summary << "      counterexample: " << *c.counterexample << '\n';
    }
    summary << "result: " << (ok() ? "pass" : "fail") << '\n';
    summary << "digest: " << digest << '\n';

    if (cfg.json_path) {
      if (*cfg.json_path == "-") {
        out << report.dump(2) << '\n';
      } else {
        std::ofstream file(*cfg.json_path);
        if (!file) {
          err << "error: cannot write report to " << *cfg.json_path << '\n';
          return static_cast<int>(ExitCode::UsageError);
        }
        file << report.dump(2) << '\n';
      }
    }
    return static_cast<int>(ok() ? ExitCode::Ok : ExitCode::CheckFailed);
  }

 private:
  std::string command_;
  json config_;
  Clock::time_point start_;
  std::vector<CheckResult> checks_;
  json results_;
};

json base_config(const RunConfig& cfg) {
  json j;
  j["seed"] = cfg.seed;
  j["trials"] = cfg.trials;
  return j;
}

PointShrinker<PointR2> point_shrinker() {
  return [](const PointR2& p, double s) { return scale_toward_origin(p, s); };
}

PointSampler<PointR2> point_sampler() {
  return [](Rng& g) { return random_point(g); };
}

ConeSampler cone_sampler(double scale = 10.0) {
  return [scale](Rng& g) { return random_positive(g, 2, scale); };
}

PMSpace<PointR2> space_named(const std::string& name) {
  if (name == "trace") return make_trace_pm(make_diag_metric());
  if (name == "ratio") return make_ratio_pm(make_diag_metric());
  throw ConfigError("--space: expected 'trace' or 'ratio', got '" + name + "'");
}

void require_trials(const RunConfig& cfg) {
  if (cfg.trials < 1) throw ConfigError("--trials: must be >= 1");
}

int run_check_axioms(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  require_trials(cfg);
  const auto space = space_named(cfg.space);
  json config = base_config(cfg);
  config["space"] = cfg.space;
  Session s("check-axioms", config);

  Rng metric_rng(derive_seed(cfg.seed, "metric"));
  s.add("metric", check_metric_axioms(space.metric, point_sampler(), cfg.trials, metric_rng,
                                      point_shrinker()));

  Rng ddf_rng(derive_seed(cfg.seed, "ddf"));
  const auto kernel = space.kernel(PointR2{0.0, 0.0}, PointR2{1.0, 1.0});
  s.add("ddf", check_ddf_axioms(kernel, cone_sampler(), cfg.trials, ddf_rng));

  Rng pm_rng(derive_seed(cfg.seed, "pm"));
  s.add("pm", verify_pm_axioms(space, point_sampler(), cone_sampler(), cfg.trials, pm_rng));
  return s.finish(cfg, out, err);
}

int run_pm_demo(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  require_trials(cfg);
  const auto space = make_trace_pm(make_diag_metric());
  Session s("pm-demo", base_config(cfg));
  const PointR2 p{0.0, 0.0};
  const PointR2 q{1.0, 2.0};

  json values = json::array();
  for (double t : {0.25, 0.5, 1.0, 2.0, 4.0, 8.0}) {
    const auto c = PositiveElement::identity(2).scaled(t);
    values.push_back({{"t", t}, {"F", space(p, q, c)}});
  }
  s.results()["distribution"] = {{"p", to_string(p)}, {"q", to_string(q)}, {"values", values}};

  Rng rng(derive_seed(cfg.seed, "points"));
  std::vector<PointR2> cloud;
  for (std::size_t i = 0; i < std::min<std::size_t>(cfg.trials, 200); ++i) {
    cloud.push_back(random_point(rng, 2.0));
  }
  const NeighborhoodSpec<PointR2> spec{p, PositiveElement::identity(2), 0.5};
  s.results()["neighborhood_size"] = neighborhood(space, spec, cloud).size();

  const auto witness = hausdorff_witness(space, p, q, cloud);
  s.add_verdict("hausdorff", witness.has_value(),
                "no disjoint neighbourhoods of " + to_string(p) + " and " + to_string(q));
  if (witness) {
    s.results()["hausdorff"] = {{"t", witness->around_p.t.matrix()(0, 0)},
                                {"lambda", witness->around_p.lambda}};
  }

  std::vector<PointR2> seq;
  for (int n = 0; n <= 60; ++n) seq.push_back({std::ldexp(1.0, -n), 0.0});
  const std::vector<PositiveElement> grid{PositiveElement::identity(2).scaled(0.01),
                                          PositiveElement::identity(2)};
  for (double lambda : {0.1, 0.01, 0.001}) {
    const auto tail = convergence_tail_index(space, seq, PointR2{}, grid, lambda);
    const std::string name = "converges[lambda=" + fmt(lambda) + "]";
    bool pass = tail.has_value();
    if (pass) pass = sequence_converges(space, seq, PointR2{}, {grid, lambda, *tail});
    s.add_verdict(name, pass, "2^-n sequence not accepted at lambda = " + fmt(lambda));
    if (tail) s.results()["tail_index"][fmt(lambda)] = *tail;
  }

  std::vector<PointR2> alternating;
  for (int n = 0; n < 40; ++n) alternating.push_back(n % 2 ? PointR2{1.0, 0.0} : PointR2{});
  const bool cauchy = sequence_cauchy(space, alternating, {grid, 0.1, 0});
  s.add_verdict("alternating_not_cauchy", !cauchy, "alternating sequence accepted as Cauchy");
  return s.finish(cfg, out, err);
}

PointR2 pair_of(const std::vector<double>& v, const std::string& flag) {
  if (v.size() != 2) throw ConfigError(flag + ": expected two comma-separated values");
  return {v[0], v[1]};
}

int run_fixed_point(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  require_trials(cfg);
  const PointR2 alpha = pair_of(cfg.alpha, "--alpha");
  const PointR2 lambda = pair_of(cfg.lambda, "--lambda");
  const PointR2 start = pair_of(cfg.start, "--start");
  std::optional<AffineMap2> map;
  try {
    map.emplace(alpha.x, alpha.y, lambda.x, lambda.y);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("--alpha/--lambda: ") + e.what());
  }

  json config = base_config(cfg);
  config["alpha"] = cfg.alpha;
  config["lambda"] = cfg.lambda;
  config["start"] = cfg.start;
  config["lambda_stop"] = cfg.lambda_stop;
  config["metric_tol"] = cfg.metric_tol;
  config["max_iter"] = cfg.max_iter;
  Session s("fixed-point", config);

  const auto space = make_trace_pm(make_diag_metric());
  const PointMap<PointR2> f = [m = *map](const PointR2& p) { return m(p); };
  PicardOptions opts;
  opts.lambda_stop = cfg.lambda_stop;
  opts.metric_tol = cfg.metric_tol;
  opts.max_iter = cfg.max_iter;

  const PointR2 exact = map->fixed_point();
  try {
    const auto run = picard_solve(space, f, start, opts);
    const PointR2 fp = run.fixed_point();
    const double err_sup = std::max(std::fabs(fp.x - exact.x), std::fabs(fp.y - exact.y));
    s.add_verdict("picard.converged", run.converged,
                  "no convergence after " + std::to_string(run.steps) + " steps (residual " +
                      fmt(run.residual, 17) + ")",
                  {{"residual", run.residual}, {"steps", static_cast<double>(run.steps)}});
    s.add_verdict("picard.closed_form", err_sup < 1e-8,
                  "iterate " + to_string(fp) + " differs from " + to_string(exact),
                  {{"sup_error", err_sup}});
    s.results()["fixed_point"] = {fp.x, fp.y};
    s.results()["steps"] = run.steps;
    text_stream(cfg, out, err) << "fixed point: (" << fmt(fp.x) << ", " << fmt(fp.y) << ") after " << run.steps
        << " steps\n";

    if (run.converged) {
      Rng urng(derive_seed(cfg.seed, "uniqueness"));
      const PointSampler<PointR2> starts = [](Rng& g) { return random_point(g, 100.0); };
      const auto u = uniqueness_probe(space, f, fp, starts, 20, urng, opts);
      s.add_verdict("uniqueness", u.unique, u.counterexample.value_or(""),
                    {{"max_deviation", u.max_deviation}});
    }
  } catch (const DivergenceError& e) {
    s.add_verdict("picard.converged", false, e.what());
  }

  Rng crng(derive_seed(cfg.seed, "contraction"));
  const ContractionConstant lam(map->lambda_matrix());
  s.add("", verify_a_contraction(space, f, lam, point_sampler(), cone_sampler(), cfg.trials,
                                 crng));
  return s.finish(cfg, out, err);
}

fredholm::Problem load_problem(const RunConfig& cfg) {
  if (cfg.problem) return *cfg.problem;
  std::ifstream in(cfg.problem_path);
  if (!in) throw ConfigError(cfg.problem_path + ": cannot open problem file");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_fredholm_config(buf.str());
  } catch (const ConfigError& e) {
    throw ConfigError(cfg.problem_path + ": " + e.what());
  }
}

int run_fredholm(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  require_trials(cfg);
  if (cfg.method != "picard" && cfg.method != "direct" && cfg.method != "both") {
    throw ConfigError("--method: expected picard, direct or both");
  }
  if (!(cfg.tol > 0.0)) throw ConfigError("--tol: must be positive");
  const fredholm::Problem prob = load_problem(cfg);

  json config = base_config(cfg);
  config["problem"] = cfg.problem_path;
  config["method"] = cfg.method;
  config["tol"] = cfg.tol;
  config["max_iter"] = cfg.max_iter;
  config["m"] = prob.m;
  config["interval"] = {prob.a, prob.b};
  Session s("fredholm", config);

  const auto cond = fredholm::check_contraction_condition(prob);
  CheckResult cc("condition");
  cc.record(cond.passes, [&] { return "kappa = " + fmt(cond.kappa, 17) + " exceeds 1"; });
  cc.margins = {{"kappa", cond.kappa}, {"kernel_norm", cond.kernel_norm}};
  if (cond.degenerate) cc.note = "degenerate: exact solution phi = g";
  s.add("", cc);
  s.results()["kappa"] = cond.kappa;

  const auto sys = fredholm::discretize(prob);
  s.results()["nodes"] = sys.nodes;
  std::optional<fredholm::Solution> picard;
  std::optional<fredholm::Solution> direct;

  if (cfg.method != "direct") {
    try {
      picard = fredholm::picard_iterate(sys, cfg.tol, cfg.max_iter);
      s.add_verdict("picard", picard->converged,
                    "max_iter " + std::to_string(cfg.max_iter) + " exhausted",
                    {{"iterations", static_cast<double>(picard->iterations)},
                     {"residual", picard->residual}});
      s.results()["picard"] = {{"phi1", picard->phi1},
                               {"phi2", picard->phi2},
                               {"iterations", picard->iterations}};
    } catch (const DivergenceError& e) {
      s.add_verdict("picard", false, e.what());
    }
  }
  if (cfg.method != "picard") {
    try {
      direct = fredholm::direct_solve(sys);
      s.add_verdict("direct", true, "", {{"residual", direct->residual}});
      s.results()["direct"] = {{"phi1", direct->phi1}, {"phi2", direct->phi2}};
    } catch (const AlgebraError& e) {
      s.add_verdict("direct", false, e.what());
    }
  }
  if (picard && direct && picard->converged) {
    const double gap = simd::max_abs_diff(picard->stacked(), direct->stacked());
    s.add_verdict("agreement", gap <= 1e-8, "picard and direct differ by " + fmt(gap, 17),
                  {{"sup_gap", gap}});
  }
  if (cond.passes) {
    Rng rng(derive_seed(cfg.seed, "d-contraction"));
    s.add("", fredholm::verify_d_contraction(prob, cfg.trials, rng));
  }

  const auto& shown = direct ? direct : picard;
  if (shown) {
    std::ostream& text = text_stream(cfg, out, err);
    text << "solution (" << to_string(shown->method) << ", m = " << sys.m << "):\n";
    const std::size_t stride = std::max<std::size_t>(1, (sys.m - 1) / 10);
    for (std::size_t i = 0; i < sys.m; i += stride) {
      text << "  x = " << std::setw(12) << fmt(sys.nodes[i], 6) << "  phi1 = " << std::setw(14)
          << fmt(shown->phi1[i]) << "  phi2 = " << fmt(shown->phi2[i]) << '\n';
    }
  }
  return s.finish(cfg, out, err);
}

int run_hadzic(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  TNorm t;
  if (cfg.tnorm == "min") {
    t = make_t_min();
  } else if (cfg.tnorm == "product") {
    t = make_t_prod();
  } else {
    throw ConfigError("--tnorm: expected 'min' or 'product'");
  }
  if (cfg.n_max < 1) throw ConfigError("--nmax: must be >= 1");
  if (cfg.eps.empty()) throw ConfigError("--eps: at least one value required");
  for (double e : cfg.eps) {
    if (!(e > 0.0 && e < 1.0)) throw ConfigError("--eps: values must lie in (0, 1)");
  }

  json config;
  config["tnorm"] = cfg.tnorm;
  config["eps"] = cfg.eps;
  config["nmax"] = cfg.n_max;
  Session s("hadzic", config);
  const auto report = hadzic_check(t, cfg.eps, cfg.n_max);
  s.results()["scope"] = report.scope;
  for (const auto& e : report.entries) {
    std::ostringstream why;
    if (!e.delta) {
      why << "T^" << *e.witness_n << "(" << std::setprecision(17) << *e.witness_a
          << ") = " << *e.witness_value << " <= 1 - " << e.epsilon;
    }
    std::map<std::string, double> margins;
    if (e.delta) margins["delta"] = *e.delta;
    s.add_verdict("eps=" + fmt(e.epsilon), e.delta.has_value(), why.str(), margins);
  }
  return s.finish(cfg, out, err);
}

}  // namespace

std::string report_digest(const json& report) {
  json copy = report;
  if (copy.is_object()) {
    copy.erase("wall_time_ms");
    copy.erase("digest");
  }
  const std::string text = copy.dump(2);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    if (cfg.command == "check-axioms") return run_check_axioms(cfg, out, err);
    if (cfg.command == "pm-demo") return run_pm_demo(cfg, out, err);
    if (cfg.command == "fixed-point") return run_fixed_point(cfg, out, err);
    if (cfg.command == "fredholm") return run_fredholm(cfg, out, err);
    if (cfg.command == "hadzic") return run_hadzic(cfg, out, err);
    throw ConfigError("unknown command '" + cfg.command + "'");
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::UsageError);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::UsageError);
  }
}

}  // namespace pmstar::cli
