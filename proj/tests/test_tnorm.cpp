#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "pmstar/tnorm.hpp"

using namespace pmstar;

namespace {

const std::vector<double> kEps{0.5, 0.1, 0.01, 0.001};

std::vector<double> grid101() {
  std::vector<double> g;
  for (int i = 0; i <= 100; ++i) g.push_back(i / 100.0);
  return g;
}

}  // namespace

TEST_CASE("minimum t-norm values") {
  CHECK(t_min(0.3, 0.7) == 0.3);
  CHECK(t_min(0.42, 1.0) == 0.42);
  CHECK(t_min(0.0, 0.8) == 0.0);
  CHECK_THROWS_AS(t_min(-0.1, 0.5), std::domain_error);
  CHECK_THROWS_AS(t_min(0.5, 1.5), std::domain_error);
}

TEST_CASE("product t-norm values") {
  CHECK(t_prod(0.5, 0.5) == 0.25);
  CHECK(t_prod(0.42, 1.0) == 0.42);
  CHECK(t_prod(1.0, 1.0) == 1.0);
  CHECK_THROWS_AS(t_prod(NAN, 0.5), std::domain_error);
}

TEST_CASE("t-norm axioms on the 101 x 101 grid") {
  const auto g = grid101();
  for (const TNorm& t : {make_t_min(), make_t_prod()}) {
    CAPTURE(t.name);
    // Rounded products may differ by an ulp under reassociation.
    const double assoc_tol = t.form == IterateForm::Min ? 0.0 : 2.3e-16;
    int unit = 0, commut = 0, assoc = 0, mono = 0;
    for (double a : g) {
      if (t(a, 1.0) != a) ++unit;
      for (double b : g) {
        if (t(a, b) != t(b, a)) ++commut;
        for (double c : g) {
          if (std::fabs(t(t(a, b), c) - t(a, t(b, c))) > assoc_tol) ++assoc;
          if (b <= c && t(a, b) > t(a, c)) ++mono;
        }
      }
    }
    CHECK(unit == 0);
    CHECK(commut == 0);
    CHECK(assoc == 0);
    CHECK(mono == 0);
  }
}

TEST_CASE("iterates") {
  CHECK(iterate(make_t_min(), 0.37, 1) == 0.37);
  CHECK(iterate(make_t_min(), 0.37, 1000000) == 0.37);
  CHECK(iterate(make_t_prod(), 0.9, 3) == doctest::Approx(0.6561).epsilon(1e-14));
  for (std::int64_t n : {1, 2, 17, 1000}) {
    CHECK(iterate(make_t_min(), 1.0, n) == 1.0);
    CHECK(iterate(make_t_prod(), 1.0, n) == 1.0);
  }
  CHECK_THROWS_AS(iterate(make_t_min(), 0.5, 0), std::invalid_argument);

  // The closed form matches direct folding.
  const TNorm generic_prod{"product-generic", &t_prod};
  for (double a : {0.1, 0.5, 0.9, 0.999}) {
    for (std::int64_t n : {1, 2, 5, 30}) {
      CHECK(iterate(make_t_prod(), a, n) ==
            doctest::Approx(iterate(generic_prod, a, n)).epsilon(1e-12));
    }
  }
}

TEST_CASE("iterates do not increase in n") {
  const TNorm generic_min{"min-generic", &t_min};
  for (const TNorm& t : {make_t_min(), make_t_prod(), generic_min}) {
    for (double a : grid101()) {
      double prev = iterate(t, a, 1);
      for (std::int64_t n = 2; n <= 50; ++n) {
        const double v = iterate(t, a, n);
        CHECK(v <= prev);
        prev = v;
      }
    }
  }
}

TEST_CASE("minimum is equicontinuous at one with delta = epsilon") {
  for (std::int64_t n_max : {std::int64_t{10000}, std::int64_t{1000000}}) {
    const auto r = hadzic_check(make_t_min(), kEps, n_max);
    CHECK(r.ok());
    CHECK(r.scope == "all n (closed form)");
    REQUIRE(r.entries.size() == kEps.size());
    for (const auto& e : r.entries) {
      REQUIRE(e.delta.has_value());
      CHECK(*e.delta == e.epsilon);
    }
  }
}

TEST_CASE("folded minimum agrees with the closed form") {
  const TNorm generic_min{"min-generic", &t_min};
  const auto r = hadzic_check(generic_min, kEps, 2000);
  CHECK(r.ok());
  CHECK(r.scope == "n <= nMax");
  for (const auto& e : r.entries) CHECK(*e.delta == e.epsilon);
}

TEST_CASE("product has a failure witness") {
  const std::vector<double> eps{0.5};
  const auto r = hadzic_check(make_t_prod(), eps, 10000);
  CHECK_FALSE(r.ok());
  const auto& e = r.entries.front();
  CHECK_FALSE(e.delta.has_value());
  REQUIRE(e.witness_a.has_value());
  REQUIRE(e.witness_n.has_value());
  CHECK(*e.witness_a < 1.0);
  // Recompute a^(n+1) independently of the library.
  const double value = std::pow(*e.witness_a, static_cast<double>(*e.witness_n + 1));
  CHECK(value <= 0.5 + 1e-12);
  CHECK(*e.witness_value == doctest::Approx(value).epsilon(1e-9));
}

TEST_CASE("folded product fails within a finite horizon") {
  const TNorm generic_prod{"product-generic", &t_prod};
  const std::vector<double> eps{0.5};
  const auto r = hadzic_check(generic_prod, eps, 10000);
  // Within n <= 1e4 some delta still certifies; the horizon is what differs.
  REQUIRE(r.entries.front().delta.has_value());
  const double delta = *r.entries.front().delta;
  CHECK(std::pow(1.0 - delta * 20.0 / 21.0, 10001.0) > 0.5);
  CHECK(std::pow(1.0 - 2.0 * delta * 20.0 / 21.0, 10001.0) <= 0.5);
}

TEST_CASE("hadzic_check preconditions") {
  CHECK_THROWS_AS(hadzic_check(make_t_min(), kEps, 0), std::invalid_argument);
  const std::vector<double> bad{1.5};
  CHECK_THROWS_AS(hadzic_check(make_t_min(), bad, 10), std::invalid_argument);
}
