#include <doctest.h>

#include <stdexcept>

#include "pmstar/cmetric.hpp"
#include "pmstar/random.hpp"

using namespace pmstar;

namespace {

PointSampler<PointR2> points() {
  return [](Rng& g) { return random_point(g); };
}

PointShrinker<PointR2> shrinker() {
  return [](const PointR2& p, double s) { return scale_toward_origin(p, s); };
}

}  // namespace

TEST_CASE("diag_metric evaluates coordinate gaps") {
  CHECK(diag_metric({1.0, 2.0}, {1.0, 2.0}).is_theta());
  CHECK(diag_metric({1.0, 2.0}, {1.0, 2.0}).matrix() == SymMatrix::zero(2));
  CHECK(diag_metric({0.0, 0.0}, {3.0, 4.0}).matrix() == SymMatrix::diag({3.0, 4.0}));

  Rng rng(1);
  for (int i = 0; i < 500; ++i) {
    const PointR2 p = random_point(rng);
    const PointR2 q = random_point(rng);
    CHECK(diag_metric(p, q).matrix() == diag_metric(q, p).matrix());
    CHECK((diag_metric(p, q).matrix() == SymMatrix::zero(2)) == (p == q));
  }
}

TEST_CASE("diag_metric is theta exactly on equal points") {
  CHECK_FALSE(diag_metric({0.0, 0.0}, {0.0, 1e-300}).matrix() == SymMatrix::zero(2));
  CHECK(diag_metric({-0.0, 0.0}, {0.0, 0.0}).matrix() == SymMatrix::zero(2));
}

TEST_CASE("diag_metric passes every axiom on sampled triples") {
  Rng rng(2);
  const auto report = check_metric_axioms(make_diag_metric(), points(), 1000, rng, shrinker());
  CHECK(report.ok());
  REQUIRE(report.checks.size() == 4);
  for (const auto& c : report.checks) {
    CAPTURE(c.name);
    CHECK(c.trials == 1000);
    CHECK_FALSE(c.counterexample.has_value());
  }
  CHECK(report.find("triangle")->margins.at("min_slack_eigenvalue") >= -1e-12);
}

TEST_CASE("a signed coordinate gap is caught as asymmetric") {
  CStarMetric<PointR2> broken{"signed", 2, [](const PointR2& p, const PointR2& q) {
                                return SymMatrix::diag({p.x - q.x, 0.0});
                              }};
  Rng rng(3);
  const auto report = check_metric_axioms(broken, points(), 200, rng, shrinker());
  CHECK_FALSE(report.ok());
  const CheckResult* sym = report.find("symmetry");
  REQUIRE(sym != nullptr);
  CHECK(sym->failures > 0);
  REQUIRE(sym->counterexample.has_value());
  CHECK(sym->counterexample->find("d(x,y) != d(y,x)") != std::string::npos);
  CHECK(sym->counterexample->find("shrunk") != std::string::npos);
  CHECK_FALSE(report.find("positivity")->ok());
}

TEST_CASE("trial count must be positive") {
  Rng rng(4);
  CHECK_THROWS_AS(check_metric_axioms(make_diag_metric(), points(), 0, rng),
                  std::invalid_argument);
}

TEST_CASE("function-pair metric uses summed sup-norm gaps") {
  const FunctionPair a{{0.0, 1.0, 2.0}, {1.0, 1.0, 1.0}};
  const FunctionPair b{{0.5, 1.0, 1.0}, {1.0, 3.0, 1.0}};
  // sup |u_a - u_b| = 1, sup |v_a - v_b| = 2
  CHECK(function_pair_metric(a, b).matrix() == SymMatrix::diag({3.0, 3.0}));
  CHECK(function_pair_metric(a, a).is_theta());
  CHECK_THROWS(function_pair_metric(a, FunctionPair{{0.0}, {0.0}}));

  Rng rng(5);
  const PointSampler<FunctionPair> pairs = [](Rng& g) {
    FunctionPair p;
    for (int i = 0; i < 9; ++i) {
      p.u.push_back(uniform(g, -3.0, 3.0));
      p.v.push_back(uniform(g, -3.0, 3.0));
    }
    return p;
  };
  const auto report = check_metric_axioms(make_function_pair_metric(), pairs, 500, rng);
  CHECK(report.ok());
}

TEST_CASE("point helpers") {
  CHECK(to_string(PointR2{2.0, 4.0}) == "(2, 4)");
  CHECK(is_finite(PointR2{1.0, 2.0}));
  CHECK_FALSE(is_finite(PointR2{1.0, INFINITY}));
  const PointR2 s = scale_toward_origin({2.0, -4.0}, 0.5);
  CHECK(s == PointR2{1.0, -2.0});
}
