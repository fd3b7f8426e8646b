#pragma once

// C*-algebra-valued metrics d : X x X -> A_+ and a sample-based checker for
// the metric axioms in the Loewner order.

#include <cmath>
#include <concepts>
#include <cstddef>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "pmstar/report.hpp"
#include "pmstar/symcone.hpp"

namespace pmstar {

struct PointR2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const PointR2&, const PointR2&) = default;
};

std::string to_string(const PointR2& p);
bool is_finite(const PointR2& p);
/// s * p, i.e. p moved toward the origin for s in [0, 1].
PointR2 scale_toward_origin(const PointR2& p, double s);

/// A pair of functions sampled on a common node grid: a point of
/// C([a,b]) x C([a,b]) after discretisation.
struct FunctionPair {
  std::vector<double> u;
  std::vector<double> v;

  friend bool operator==(const FunctionPair&, const FunctionPair&) = default;
};

std::string to_string(const FunctionPair& p);
bool is_finite(const FunctionPair& p);
FunctionPair scale_toward_origin(const FunctionPair& p, double s);

/// Anything a metric, a PM*-space or the fixed-point solver can act on.
template <class P>
concept MetricPoint = std::equality_comparable<P> && requires(const P& p) {
  { to_string(p) } -> std::convertible_to<std::string>;
  { is_finite(p) } -> std::same_as<bool>;
};

/// Evaluation capability d(p, q). `raw` may be any symmetric-matrix valued
/// function; `operator()` certifies that the value lies in the cone.
template <MetricPoint P>
struct CStarMetric {
  std::string name;
  std::size_t algebra_dim = 2;
  std::function<SymMatrix(const P&, const P&)> raw;

  PositiveElement operator()(const P& p, const P& q) const {
    return PositiveElement::certify(raw(p, q));
  }
};

/// diag(|p.x - q.x|, |p.y - q.y|) on R^2.
PositiveElement diag_metric(const PointR2& p, const PointR2& q);
CStarMetric<PointR2> make_diag_metric();

/// diag(s, s) with s = ||u1 - u2||_inf + ||v1 - v2||_inf over the nodes.
PositiveElement function_pair_metric(const FunctionPair& p, const FunctionPair& q);
CStarMetric<FunctionPair> make_function_pair_metric();

template <class P>
using PointSampler = std::function<P(std::mt19937_64&)>;

/// Moves every point of a witness toward the origin by the factor s.
template <class P>
using PointShrinker = std::function<P(const P&, double)>;

inline constexpr int kShrinkSteps = 20;

namespace detail {

/// Bisects s in (0, 1] toward the smallest factor for which `fails(s)` still
/// holds, starting from fails(1) == true.
template <class Fails>
double shrink_factor(Fails&& fails) {
  double lo = 0.0;
  double hi = 1.0;
  for (int i = 0; i < kShrinkSteps; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (fails(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

inline bool symmetric_equal(const SymMatrix& a, const SymMatrix& b) {
  const double scale = 1.0 + std::max(a.max_abs_entry(), b.max_abs_entry());
  return (a - b).max_abs_entry() <= 1e-12 * scale;
}

inline bool numerically_theta(const SymMatrix& m) {
  const double n = op_norm(m);
  return n <= positivity_tolerance(n);
}

}  // namespace detail

/// Checks positivity, identity of indiscernibles, symmetry and the Loewner
/// triangle inequality d(x,y) <= d(x,z) + d(z,y) on `trials` sampled
/// triples. Failing triples are shrunk toward the origin when a shrinker is
/// supplied. Throws std::invalid_argument for trials == 0.
template <MetricPoint P>
AxiomReport check_metric_axioms(const CStarMetric<P>& d, const PointSampler<P>& sampler,
                                std::size_t trials, std::mt19937_64& rng,
                                const PointShrinker<P>& shrink = {}) {
  if (trials == 0) throw std::invalid_argument("check_metric_axioms: trials must be >= 1");

  CheckResult positivity{"positivity"};
  CheckResult identity{"identity"};
  CheckResult symmetry{"symmetry"};
  CheckResult triangle{"triangle"};

  auto witness = [&](auto&& fails, const std::vector<P>& pts, const std::string& what) {
    std::ostringstream os;
    os << what << " at";
    for (const auto& p : pts) os << ' ' << to_string(p);
    if (shrink) {
      auto scaled = [&](double s) {
        std::vector<P> out;
        for (const auto& p : pts) out.push_back(shrink(p, s));
        return out;
      };
      const double s = detail::shrink_factor([&](double f) { return fails(scaled(f)); });
      os << "; shrunk (factor " << s << ") to";
      for (const auto& p : scaled(s)) os << ' ' << to_string(p);
    }
    return os.str();
  };

  for (std::size_t t = 0; t < trials; ++t) {
    const P x = sampler(rng);
    const P y = sampler(rng);
    const P z = sampler(rng);

    {
      auto fails = [&](const std::vector<P>& p) { return !is_positive(d.raw(p[0], p[1])); };
      const std::vector<P> pts{x, y};
      const SymMatrix dxy = d.raw(x, y);
      const bool pass = is_positive(dxy);
      positivity.record(pass, [&] {
        return witness(fails, pts, "d(x,y) = " + to_string(dxy) + " not positive");
      });
      positivity.track_min("min_eigenvalue", spectrum(dxy).min());
    }
    {
      auto fails = [&](const std::vector<P>& p) {
        if (!detail::numerically_theta(d.raw(p[0], p[0]))) return true;
        return !(p[0] == p[1]) && detail::numerically_theta(d.raw(p[0], p[1]));
      };
      const std::vector<P> pts{x, y};
      identity.record(!fails(pts), [&] {
        return witness(fails, pts, "d(x,x) != theta or d(x,y) = theta with x != y");
      });
    }
    {
      auto fails = [&](const std::vector<P>& p) {
        return !detail::symmetric_equal(d.raw(p[0], p[1]), d.raw(p[1], p[0]));
      };
      const std::vector<P> pts{x, y};
      symmetry.record(!fails(pts), [&] { return witness(fails, pts, "d(x,y) != d(y,x)"); });
    }
    {
      auto slack_of = [&](const std::vector<P>& p) {
        return d.raw(p[0], p[2]) + d.raw(p[2], p[1]) - d.raw(p[0], p[1]);
      };
      auto fails = [&](const std::vector<P>& p) { return !is_positive(slack_of(p)); };
      const std::vector<P> pts{x, y, z};
      const SymMatrix slack = slack_of(pts);
      triangle.record(is_positive(slack), [&] {
        return witness(fails, pts, "d(x,z) + d(z,y) - d(x,y) not positive");
      });
      triangle.track_min("min_slack_eigenvalue", spectrum(slack).min());
    }
  }

  return AxiomReport{d.name, {positivity, identity, symmetry, triangle}};
}

}  // namespace pmstar
