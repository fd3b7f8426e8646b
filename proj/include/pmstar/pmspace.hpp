#pragma once

// Menger PM*-spaces (X, A, F, T): a C*-metric, a t-norm and a pairwise
// distribution F_{p,q} on the positive cone. Includes the two trace-based
// constructions over an arbitrary C*-metric, a sample-based axiom checker,
// strong (t, lambda)-neighbourhoods on finite point sets and sequence
// diagnostics.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "pmstar/cmetric.hpp"
#include "pmstar/ddf.hpp"
#include "pmstar/report.hpp"
#include "pmstar/symcone.hpp"
#include "pmstar/tnorm.hpp"

namespace pmstar {

template <MetricPoint P>
struct PMSpace {
  std::string name;
  CStarMetric<P> metric;
  TNorm tnorm;
  std::function<double(const P&, const P&, const PositiveElement&)> distribution;

  /// F_{p,q}(C).
  double operator()(const P& p, const P& q, const PositiveElement& c) const {
    return distribution(p, q, c);
  }

  /// F_{p,q} as a standalone d.d.f.
  DdfKernel kernel(const P& p, const P& q) const {
    return {name + " F(" + to_string(p) + ", " + to_string(q) + ")",
            [fn = distribution, p, q](const PositiveElement& c) { return fn(p, q, c); }};
  }
};

/// F_{p,q} = H0 for p = q, otherwise C -> exp_trace(C / tr d(p,q)), with T = min.
/// Throws AlgebraError when p != q but tr d(p,q) is not strictly positive.
template <MetricPoint P>
PMSpace<P> make_trace_pm(CStarMetric<P> metric) {
  auto fn = [metric](const P& p, const P& q, const PositiveElement& c) {
    if (p == q) return h0(c);
    if (c.is_theta()) return 0.0;
    const double scale = trace(metric(p, q).matrix());
    if (!(scale > 0.0) || !std::isfinite(scale)) {
      throw AlgebraError("trace PM: tr d(p,q) must be positive for distinct points " +
                         to_string(p) + ", " + to_string(q));
    }
    return -std::expm1(-trace(c.matrix()) / scale);
  };
  return {"trace[" + metric.name + "]", std::move(metric), make_t_min(), std::move(fn)};
}

/// F_{p,q}(C) = tr C / tr(C + d(p,q)), 0 at theta, with T = min. At p = q
/// this coincides with H0.
template <MetricPoint P>
PMSpace<P> make_ratio_pm(CStarMetric<P> metric) {
  auto fn = [metric](const P& p, const P& q, const PositiveElement& c) {
    if (c.is_theta()) return 0.0;
    const double tc = trace(c.matrix());
    return tc / (tc + trace(metric(p, q).matrix()));
  };
  return {"ratio[" + metric.name + "]", std::move(metric), make_t_min(), std::move(fn)};
}

struct PmCheckOptions {
  double tol = 1e-12;
  /// Identity for p != q is refuted by probing t = 2^-k e, k = 0..probe_steps.
  int probe_steps = 60;
};

/// Checks (i) F_{p,q}(t) = 1 for all t > theta iff p = q, (ii) symmetry and
/// (iii) the Menger triangle F_{p,q}(A+B) >= T(F_{p,r}(A), F_{r,q}(B)).
template <MetricPoint P>
AxiomReport verify_pm_axioms(const PMSpace<P>& space, const PointSampler<P>& points,
                             const ConeSampler& cone, std::size_t trials,
                             std::mt19937_64& rng, const PmCheckOptions& opts = {}) {
  if (trials == 0) throw std::invalid_argument("verify_pm_axioms: trials must be >= 1");

  CheckResult identity{"identity"};
  CheckResult symmetry{"symmetry"};
  CheckResult triangle{"triangle"};

  auto fmt = [](auto&&... parts) {
    std::ostringstream os;
    os.precision(17);
    (os << ... << parts);
    return os.str();
  };

  for (std::size_t t = 0; t < trials; ++t) {
    const P p = points(rng);
    const P q = points(rng);
    const P r = points(rng);
    const PositiveElement a = cone(rng);
    const PositiveElement b = cone(rng);
    const std::size_t n = a.dim();

    // (i): F_{p,p}(C) = 1 on non-theta C, and some probe refutes F_{p,q} = 1.
    {
      bool pass = true;
      std::string why;
      if (!a.is_theta()) {
        const double v = space(p, p, a);
        if (std::fabs(v - 1.0) > opts.tol) {
          pass = false;
          why = fmt("F(p,p)(C) = ", v, " != 1 at p = ", to_string(p), ", C = ",
                    to_string(a.matrix()));
        }
      }
      if (pass && !(p == q)) {
        bool refuted = false;
        for (int k = 0; k <= opts.probe_steps && !refuted; ++k) {
          const auto probe = PositiveElement::identity(n).scaled(std::ldexp(1.0, -k));
          refuted = space(p, q, probe) < 1.0 - opts.tol;
        }
        if (!refuted) {
          pass = false;
          why = fmt("F(p,q) = 1 on every probe for distinct p = ", to_string(p),
                    ", q = ", to_string(q));
        }
      }
      identity.record(pass, [&] { return why; });
    }
    {
      const double pq = space(p, q, a);
      const double qp = space(q, p, a);
      const double gap = std::fabs(pq - qp);
      symmetry.record(gap <= opts.tol, [&] {
        return fmt("F(p,q)(C) = ", pq, " vs F(q,p)(C) = ", qp, " at p = ", to_string(p),
                   ", q = ", to_string(q), ", C = ", to_string(a.matrix()));
      });
      symmetry.track_max("max_gap", gap);
    }
    {
      const double lhs = space(p, q, a + b);
      const double fpr = space(p, r, a);
      const double frq = space(r, q, b);
      const double rhs = space.tnorm(fpr, frq);
      triangle.record(lhs >= rhs - opts.tol, [&] {
        return fmt("F(p,q)(A+B) = ", lhs, " < T(F(p,r)(A), F(r,q)(B)) = T(", fpr, ", ",
                   frq, ") = ", rhs, " at p = ", to_string(p), ", q = ", to_string(q),
                   ", r = ", to_string(r), ", A = ", to_string(a.matrix()),
                   ", B = ", to_string(b.matrix()));
      });
      triangle.track_min("min_slack", lhs - rhs);
    }
  }
  return AxiomReport{space.name, {identity, symmetry, triangle}};
}

/// Strong (t, lambda)-neighbourhood parameters around `center`.
template <MetricPoint P>
struct NeighborhoodSpec {
  P center;
  PositiveElement t;
  double lambda;

  void validate() const {
    if (t.is_theta()) throw std::invalid_argument("neighborhood: t must be strictly positive");
    if (!(lambda > 0.0 && lambda < 1.0)) {
      throw std::invalid_argument("neighborhood: lambda must lie in (0, 1)");
    }
  }
};

/// { q in points : F_{center,q}(t) > 1 - lambda }, in input order. The
/// centre is always a member; it is prepended when absent from `points`.
template <MetricPoint P>
std::vector<P> neighborhood(const PMSpace<P>& space, const NeighborhoodSpec<P>& spec,
                            const std::vector<P>& points) {
  spec.validate();
  std::vector<P> out;
  if (std::find(points.begin(), points.end(), spec.center) == points.end()) {
    out.push_back(spec.center);
  }
  for (const auto& q : points) {
    if (space(spec.center, q, spec.t) > 1.0 - spec.lambda) out.push_back(q);
  }
  return out;
}

/// N_p(t1, l1) is a subset of N_p(t2, l2) on the finite set. Requires
/// t1 <= t2 in the Loewner order and l1 <= l2.
template <MetricPoint P>
bool check_neighborhood_monotone(const PMSpace<P>& space, const P& p,
                                 const PositiveElement& t1, const PositiveElement& t2,
                                 double l1, double l2, const std::vector<P>& points) {
  if (!loewner_leq(t1.matrix(), t2.matrix())) {
    throw std::invalid_argument("check_neighborhood_monotone: t1 <= t2 required");
  }
  if (!(l1 <= l2)) throw std::invalid_argument("check_neighborhood_monotone: l1 <= l2 required");
  const auto small = neighborhood(space, NeighborhoodSpec<P>{p, t1, l1}, points);
  const auto large = neighborhood(space, NeighborhoodSpec<P>{p, t2, l2}, points);
  return std::all_of(small.begin(), small.end(), [&](const P& q) {
    return std::find(large.begin(), large.end(), q) != large.end();
  });
}

template <MetricPoint P>
struct HausdorffWitness {
  NeighborhoodSpec<P> around_p;
  NeighborhoodSpec<P> around_q;
};

/// Searches t = 2^-k e (k = 0..40) and lambda = 2^-j (j = 1..40) for
/// neighbourhoods of p and q that are disjoint on `points`.
template <MetricPoint P>
std::optional<HausdorffWitness<P>> hausdorff_witness(const PMSpace<P>& space, const P& p,
                                                     const P& q,
                                                     const std::vector<P>& points) {
  if (p == q) throw std::invalid_argument("hausdorff_witness: p and q must differ");
  const std::size_t n = space.metric.algebra_dim;
  for (int k = 0; k <= 40; ++k) {
    const auto t = PositiveElement::identity(n).scaled(std::ldexp(1.0, -k));
    for (int j = 1; j <= 40; ++j) {
      const double lambda = std::ldexp(1.0, -j);
      NeighborhoodSpec<P> sp{p, t, lambda};
      NeighborhoodSpec<P> sq{q, t, lambda};
      const auto np = neighborhood(space, sp, points);
      const auto nq = neighborhood(space, sq, points);
      const bool disjoint = std::none_of(np.begin(), np.end(), [&](const P& x) {
        return std::find(nq.begin(), nq.end(), x) != nq.end();
      });
      if (disjoint) return HausdorffWitness<P>{sp, sq};
    }
  }
  return std::nullopt;
}

/// Probe grid, threshold and tail index M_{t,lambda} for sequence checks.
/// Terms with index n > tail_index (0-based) are examined.
struct SequenceDiagnostics {
  std::vector<PositiveElement> t_grid;
  double lambda = 0.1;
  std::size_t tail_index = 0;

  void validate() const {
    if (t_grid.empty()) throw std::invalid_argument("sequence diagnostics: empty t grid");
    for (const auto& t : t_grid) {
      if (t.is_theta()) {
        throw std::invalid_argument("sequence diagnostics: grid entries must be > theta");
      }
    }
    if (!(lambda > 0.0 && lambda < 1.0)) {
      throw std::invalid_argument("sequence diagnostics: lambda must lie in (0, 1)");
    }
  }
};

template <MetricPoint P>
bool sequence_converges(const PMSpace<P>& space, const std::vector<P>& seq, const P& limit,
                        const SequenceDiagnostics& diag) {
  diag.validate();
  if (seq.size() <= diag.tail_index) {
    throw std::invalid_argument("sequence_converges: sequence shorter than the tail index");
  }
  for (const auto& t : diag.t_grid) {
    for (std::size_t n = diag.tail_index + 1; n < seq.size(); ++n) {
      if (!(space(limit, seq[n], t) > 1.0 - diag.lambda)) return false;
    }
  }
  return true;
}

template <MetricPoint P>
bool sequence_cauchy(const PMSpace<P>& space, const std::vector<P>& seq,
                     const SequenceDiagnostics& diag) {
  diag.validate();
  if (seq.size() <= diag.tail_index) {
    throw std::invalid_argument("sequence_cauchy: sequence shorter than the tail index");
  }
  for (const auto& t : diag.t_grid) {
    for (std::size_t n = diag.tail_index + 1; n < seq.size(); ++n) {
      for (std::size_t m = n + 1; m < seq.size(); ++m) {
        if (!(space(seq[n], seq[m], t) > 1.0 - diag.lambda)) return false;
      }
    }
  }
  return true;
}

/// Smallest M such that every term past M lies in N_limit(t, lambda) for all
/// t in the grid, leaving at least one term in the tail. Nullopt when the
/// final term already fails.
template <MetricPoint P>
std::optional<std::size_t> convergence_tail_index(const PMSpace<P>& space,
                                                  const std::vector<P>& seq, const P& limit,
                                                  const std::vector<PositiveElement>& t_grid,
                                                  double lambda) {
  SequenceDiagnostics{t_grid, lambda, 0}.validate();
  if (seq.size() < 2) return std::nullopt;
  std::size_t m = 0;
  for (std::size_t n = seq.size(); n-- > 1;) {
    const bool inside = std::all_of(t_grid.begin(), t_grid.end(), [&](const auto& t) {
      return space(limit, seq[n], t) > 1.0 - lambda;
    });
    if (!inside) {
      m = n;
      break;
    }
  }
  if (m + 1 >= seq.size()) return std::nullopt;
  return m;
}

/// Smallest M such that every pair of distinct terms past M satisfies the
/// Cauchy bound, leaving at least two terms in the tail.
template <MetricPoint P>
std::optional<std::size_t> cauchy_tail_index(const PMSpace<P>& space, const std::vector<P>& seq,
                                             const std::vector<PositiveElement>& t_grid,
                                             double lambda) {
  SequenceDiagnostics{t_grid, lambda, 0}.validate();
  if (seq.size() < 3) return std::nullopt;
  std::size_t m = 0;
  for (std::size_t n = 1; n < seq.size(); ++n) {
    for (std::size_t k = n + 1; k < seq.size(); ++k) {
      for (const auto& t : t_grid) {
        if (!(space(seq[n], seq[k], t) > 1.0 - lambda)) {
          m = std::max(m, n);
          break;
        }
      }
    }
  }
  if (m + 2 >= seq.size()) return std::nullopt;
  return m;
}

}  // namespace pmstar
