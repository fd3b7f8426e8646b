// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
// failure. argv[1] is the path of the pmstar binary.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "pmstar/cmetric.hpp"
#include "pmstar/contraction.hpp"
#include "pmstar/ddf.hpp"
#include "pmstar/fredholm.hpp"
#include "pmstar/pmspace.hpp"
#include "pmstar/random.hpp"
#include "pmstar/symcone.hpp"
#include "pmstar/tnorm.hpp"

using namespace pmstar;

namespace {

constexpr std::uint64_t kSeed = 42;

struct Verdict {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double elapsed_s(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string num(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

PointSampler<PointR2> points(double box = 10.0) {
  return [box](Rng& g) { return random_point(g, box); };
}

ConeSampler cone() {
  return [](Rng& g) { return random_positive(g, 2, 10.0); };
}

Rng rng_for(const char* label) { return Rng(derive_seed(kSeed, label)); }

std::size_t total_failures(const AxiomReport& r) {
  std::size_t n = 0;
  for (const auto& c : r.checks) n += c.failures;
  return n;
}

Verdict metric_axioms() {
  const auto t0 = Clock::now();
  Rng rng = rng_for("acceptance-metric");
  const auto r = check_metric_axioms(make_diag_metric(), points(), 2000, rng);
  const double secs = elapsed_s(t0);
  bool trials_ok = true;
  for (const auto& c : r.checks) trials_ok = trials_ok && c.trials == 2000;
  return {r.ok() && trials_ok && r.checks.size() == 4 && secs < 1.0,
          std::to_string(total_failures(r)) + " counterexamples, " + num(secs) + " s"};
}

Verdict ddf_axioms() {
  const auto t0 = Clock::now();
  Rng rng = rng_for("acceptance-ddf");
  DdfCheckOptions opts;
  opts.monotone_tol = 1e-12;
  opts.ray_tol = 1e-6;
  opts.limit_scale = 1e4;
  opts.limit_threshold = 0.999;
  const auto r = check_ddf_axioms(make_exp_trace(), cone(), 2000, rng, opts);
  const double secs = elapsed_s(t0);
  const auto* theta = r.find("theta");
  const auto* mono = r.find("monotone");
  const auto* limit = r.find("cone_limit");
  const auto* ray = r.find("left_continuity");
  const bool pass = r.ok() && theta && theta->margins.at("value") == 0.0 && mono &&
                    mono->trials == 2000 && limit && limit->margins.at("value") > 0.999 && ray &&
                    exp_trace(PositiveElement::identity(2).scaled(1e4)) > 0.999 && secs < 1.0;
  return {pass, "F(theta) = " + num(theta ? theta->margins.at("value") : NAN) +
                    ", F(1e4 e) = " + num(limit ? limit->margins.at("value") : NAN) + ", " +
                    num(secs) + " s"};
}

Verdict pm_axioms() {
  std::string detail;
  bool pass = true;
  for (const auto& space : {make_trace_pm(make_diag_metric()), make_ratio_pm(make_diag_metric())}) {
    Rng rng = rng_for("acceptance-pm");
    PmCheckOptions opts;
    opts.tol = 1e-12;
    const auto r = verify_pm_axioms(space, points(), cone(), 2000, rng, opts);
    pass = pass && r.ok() && space.tnorm.name == "min";
    detail += space.name + " " + std::to_string(total_failures(r)) + " failures; ";
  }
  const auto metric = make_diag_metric();
  const PMSpace<PointR2> broken{
      "inverted", metric, make_t_min(),
      [metric](const PointR2& p, const PointR2& q, const PositiveElement& c) {
        if (p == q) return h0(c);
        return exp_trace(c.scaled(trace(metric(p, q).matrix())));
      }};
  Rng rng = rng_for("acceptance-pm-broken");
  const auto r = verify_pm_axioms(broken, points(), cone(), 2000, rng);
  const auto* tri = r.find("triangle");
  const bool caught = tri && tri->failures > 0 && tri->counterexample.has_value();
  detail += caught ? "inverted kernel refuted" : "inverted kernel not refuted";
  return {pass && caught, detail};
}

// Checks loewner_leq(a^-1 t a^-1, ||a^-1||^2 t) directly on random general
// a with minEig(a) >= 1.05.
Verdict shrinking() {
  Rng rng = rng_for("acceptance-shrink");
  int violations = 0;
  int norm_violations = 0;
  double worst = INFINITY;
  for (int i = 0; i < 1000; ++i) {
    const SymMatrix a = random_with_spectrum(rng, 2, 1.05, 5.0);
    const auto t = random_nonzero_positive(rng, 2, 5.0);
    const SymMatrix ainv = inverse(a);
    const double ninv = op_norm(ainv);
    const SymMatrix lhs = congruence(ainv, t.matrix());
    const SymMatrix rhs = t.matrix() * (ninv * ninv);
    const double margin = spectrum(rhs - lhs).min();
    worst = std::min(worst, margin);
    if (margin < -1e-9 || !loewner_leq(lhs, rhs)) ++violations;
    if (!(ninv < 1.0)) ++norm_violations;
  }
  return {violations == 0 && norm_violations == 0,
          std::to_string(violations) + "/1000 Loewner violations (worst margin " + num(worst) +
              "), " + std::to_string(norm_violations) + " norm violations"};
}

Verdict fixed_point() {
  const auto space = make_trace_pm(make_diag_metric());
  const AffineMap2 f(1.0, 3.0, 0.5, 0.25);
  const PointMap<PointR2> map = [f](const PointR2& p) { return f(p); };
  const PointR2 star{2.0, 4.0};
  Rng rng = rng_for("acceptance-fixed-point");
  std::size_t max_steps = 0;
  double max_err = 0.0;
  bool bound_ok = true;
  bool all_converged = true;
  for (int i = 0; i < 50; ++i) {
    const PointR2 p0 = random_point(rng, 100.0);
    const auto run = picard_solve(space, map, p0);
    all_converged = all_converged && run.converged;
    max_steps = std::max(max_steps, run.steps);
    const PointR2 p = run.fixed_point();
    max_err = std::max({max_err, std::fabs(p.x - star.x), std::fabs(p.y - star.y)});
    const double d0 = op_norm(diag_metric(p0, star).matrix());
    for (std::size_t n = 0; n < run.iterates.size(); ++n) {
      const double dn = op_norm(diag_metric(run.iterates[n], star).matrix());
      if (dn > std::pow(0.5, static_cast<double>(n)) * d0 + 1e-9) bound_ok = false;
    }
  }
  Rng urng = rng_for("acceptance-uniqueness");
  const auto u = uniqueness_probe(space, map, star, points(100.0), 50, urng);
  return {all_converged && max_err <= 1e-8 && max_steps <= 200 && u.unique && bound_ok,
          "max error " + num(max_err) + ", max steps " + std::to_string(max_steps) +
              ", unique " + (u.unique ? "yes" : "no") + ", error bound " +
              (bound_ok ? "holds" : "violated")};
}

Verdict a_contraction() {
  const auto space = make_trace_pm(make_diag_metric());
  const AffineMap2 f(1.0, 3.0, 0.5, 0.25);
  const PointMap<PointR2> map = [f](const PointR2& p) { return f(p); };
  const ContractionConstant a(f.lambda_matrix());
  Rng rng = rng_for("acceptance-contraction");
  const auto r = verify_a_contraction(space, map, a, points(), cone(), 1000, rng);
  return {r.ok() && r.checks.front().trials == 1000,
          std::to_string(total_failures(r)) + " counterexamples in 1000 trials"};
}

Verdict hadzic() {
  const std::vector<double> eps{0.5, 0.1, 0.01, 0.001};
  const auto m = hadzic_check(make_t_min(), eps, 10000);
  bool min_ok = m.ok();
  for (const auto& e : m.entries) min_ok = min_ok && e.delta && *e.delta == e.epsilon;
  const std::vector<double> half{0.5};
  const auto p = hadzic_check(make_t_prod(), half, 10000);
  const auto& e = p.entries.front();
  bool witness = !p.ok() && e.witness_a && e.witness_n;
  if (witness) {
    witness = std::pow(*e.witness_a, static_cast<double>(*e.witness_n + 1)) <= 0.5 + 1e-12;
  }
  return {min_ok && witness, std::string("min delta = eps ") + (min_ok ? "yes" : "no") +
                                 ", product witness " + (witness ? "found" : "missing")};
}

fredholm::Problem constant_problem(double k, std::size_t m) {
  fredholm::Problem p;
  p.m = m;
  for (auto& kern : p.kernels) kern = fredholm::constant_kernel(k);
  p.sources = {fredholm::constant_source(1.0), fredholm::constant_source(1.0)};
  return p;
}

Verdict fredholm_equivalence() {
  const auto t0 = Clock::now();
  const auto prob = constant_problem(0.2, 41);
  const auto cond = fredholm::check_contraction_condition(prob);
  const auto sys = fredholm::discretize(prob);
  const auto pic = fredholm::picard_iterate(sys, 1e-10, 10000);
  const auto dir = fredholm::direct_solve(sys);
  const double secs = elapsed_s(t0);
  const auto x = pic.stacked();
  const auto y = dir.stacked();
  double gap = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) gap = std::max(gap, std::fabs(x[i] - y[i]));
  // step_n <= kappa^(n-1) step_1, so the stop rule fires by this count.
  const auto bound = static_cast<std::size_t>(
      std::floor(std::log(1e-10 / pic.initial_step) / std::log(cond.kappa)) + 2);
  return {std::fabs(cond.kappa - 0.8) < 1e-12 && pic.converged && gap <= 1e-8 &&
              pic.iterations <= bound && secs < 1.0,
          "kappa " + num(cond.kappa) + ", gap " + num(gap) + ", iterations " +
              std::to_string(pic.iterations) + " <= " + std::to_string(bound) + ", " +
              num(secs) + " s"};
}

Verdict manufactured() {
  std::vector<double> errs;
  for (std::size_t m : {11u, 21u, 41u, 81u}) {
    fredholm::Problem p;
    p.m = m;
    const double c[4] = {0.2, 0.1, 0.1, 0.3};
    for (std::size_t k = 0; k < 4; ++k) p.kernels[k] = fredholm::separable_kernel(c[k]);
    p.sources = {fredholm::poly_source({0.0, 1.0 - c[0] / 3.0 - c[1] / 2.0}),
                 fredholm::poly_source({1.0, -(c[2] / 3.0 + c[3] / 2.0)})};
    const auto sys = fredholm::discretize(p);
    const auto sol = fredholm::direct_solve(sys);
    double err = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      err = std::max({err, std::fabs(sol.phi1[i] - sys.nodes[i]), std::fabs(sol.phi2[i] - 1.0)});
    }
    errs.push_back(err);
  }
  bool pass = true;
  std::string orders;
  for (std::size_t i = 0; i + 1 < errs.size(); ++i) {
    const double order = std::log2(errs[i] / errs[i + 1]);
    pass = pass && order >= 1.8 && order <= 2.2;
    orders += (i ? ", " : "") + num(order);
  }
  return {pass, "orders " + orders};
}

Verdict d_contraction() {
  std::mt19937_64 rng(derive_seed(kSeed, "acceptance-d-contraction"));
  const auto r = fredholm::verify_d_contraction(constant_problem(0.2, 41), 500, rng);
  bool rejected = false;
  try {
    (void)fredholm::verify_d_contraction(constant_problem(0.3, 41), 500, rng);
  } catch (const std::invalid_argument&) {
    rejected = true;
  }
  return {r.ok() && r.checks.front().trials == 500 && rejected,
          std::to_string(total_failures(r)) + " counterexamples at kappa 0.8, kappa 1.2 " +
              (rejected ? "rejected" : "accepted")};
}

Verdict sequences() {
  const auto space = make_trace_pm(make_diag_metric());
  const std::vector<PositiveElement> grid{PositiveElement::identity(2).scaled(0.01),
                                          PositiveElement::identity(2)};
  std::vector<PointR2> seq;
  for (int n = 0; n <= 60; ++n) seq.push_back({std::ldexp(1.0, -n), 0.0});
  bool pass = true;
  std::string tails;
  for (double lambda : {0.1, 0.01, 0.001}) {
    const auto tail = convergence_tail_index(space, seq, PointR2{}, grid, lambda);
    pass = pass && tail && sequence_converges(space, seq, PointR2{}, {grid, lambda, *tail});
    tails += (tails.empty() ? "" : ", ") + (tail ? std::to_string(*tail) : std::string("none"));
  }
  std::vector<PointR2> alternating;
  for (int n = 0; n < 40; ++n) alternating.push_back(n % 2 ? PointR2{1.0, 0.0} : PointR2{});
  const bool rejected = !sequence_cauchy(space, alternating, {grid, 0.1, 0}) &&
                        !cauchy_tail_index(space, alternating, grid, 0.1).has_value();
  return {pass && rejected, "tail indices " + tails + ", alternating " +
                                (rejected ? "rejected" : "accepted")};
}

struct Run {
  int code = -1;
  std::string out;
};

Run spawn(const std::string& cmd) {
  Run r;
  FILE* pipe = popen((cmd + " 2>/dev/null").c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string digest_of(const std::string& text) {
  const auto pos = text.find("digest: ");
  return pos == std::string::npos ? std::string() : text.substr(pos + 8, 16);
}

Verdict cli_determinism(const std::string& binary) {
  if (binary.empty()) return {false, "no binary path given"};
  const std::string cmd =
      "\"" + binary + "\" check-axioms --space trace --trials 2000 --seed 42";
  const Run a = spawn(cmd);
  const Run b = spawn(cmd);
  const std::string da = digest_of(a.out);
  const std::string db = digest_of(b.out);
  return {a.code == 0 && b.code == 0 && !da.empty() && da == db,
          "exit " + std::to_string(a.code) + "/" + std::to_string(b.code) + ", digests " + da +
              " " + db};
}

}  // namespace

int main(int argc, char** argv) {
  const std::string binary = argc > 1 ? argv[1] : "";
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"metric axioms", metric_axioms},
      {"d.d.f axioms", ddf_axioms},
      {"PM axioms", pm_axioms},
      {"shrinking inequality", shrinking},
      {"fixed point", fixed_point},
      {"a-contraction", a_contraction},
      {"Hadzic diagnostic", hadzic},
      {"Fredholm Picard vs direct", fredholm_equivalence},
      {"manufactured solution", manufactured},
      {"D-contraction", d_contraction},
      {"sequence diagnostics", sequences},
      {"CLI determinism", [&binary] { return cli_determinism(binary); }},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    if (!v.pass) ++failed;
    std::cout << (v.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << ": " << criteria[i].first
              << " (" << v.detail << ")\n";
  }
  std::cout << criteria.size() - failed << "/" << criteria.size() << " criteria pass\n";
  return failed == 0 ? 0 : 1;
}
