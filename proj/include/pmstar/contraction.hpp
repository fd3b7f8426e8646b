#pragma once

// a-contractions on PM*-spaces: F_{fp,fq}(t) >= F_{p,q}(a* t a) with a > e.
// Provides the contraction-constant certificate, the shrink certificate
// a^-1 t a^-1 <= ||a^-1||^2 t, the Picard solver with its dual stop rule
// and a multi-start uniqueness probe.

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
#include "pmstar/pmspace.hpp"
#include "pmstar/report.hpp"
#include "pmstar/symcone.hpp"

namespace pmstar {

/// Symmetric a with spectrum bounded below by 1 + strict_margin, so that
/// a > e strictly and ||a^-1|| < 1.
class ContractionConstant {
 public:
  static constexpr double kStrictMargin = 1e-6;

  /// Throws AlgebraError when min eig(a) < 1 + kStrictMargin.
  explicit ContractionConstant(SymMatrix a);

  const SymMatrix& a() const { return a_; }
  const SymMatrix& a_inverse() const { return a_inv_; }
  double min_eigenvalue() const { return min_eig_; }
  /// op_norm(a^-1) = 1 / min eig(a).
  double inverse_norm() const { return inv_norm_; }

 private:
  SymMatrix a_;
  SymMatrix a_inv_;
  double min_eig_;
  double inv_norm_;
};

/// f(x, y) = (alpha1 + lambda1 x, alpha2 + lambda2 y) with 0 < lambda_i < 1.
class AffineMap2 {
 public:
  AffineMap2(double alpha1, double alpha2, double lambda1, double lambda2);

  PointR2 operator()(const PointR2& p) const {
    return {alpha1_ + lambda1_ * p.x, alpha2_ + lambda2_ * p.y};
  }
  /// max(lambda1, lambda2).
  double rate() const { return std::max(lambda1_, lambda2_); }
  /// diag(1/sqrt(rate), 1/sqrt(rate)), which exceeds e.
  SymMatrix lambda_matrix() const;
  /// (alpha1 / (1 - lambda1), alpha2 / (1 - lambda2)).
  PointR2 fixed_point() const;

  double alpha1() const { return alpha1_; }
  double alpha2() const { return alpha2_; }
  double lambda1() const { return lambda1_; }
  double lambda2() const { return lambda2_; }

 private:
  double alpha1_, alpha2_, lambda1_, lambda2_;
};

template <class P>
using PointMap = std::function<P(const P&)>;

/// Checks F_{fp,fq}(t) >= F_{p,q}(a^T t a) - tol on sampled pairs and
/// positive t for any symmetric a. verify_a_contraction is the certified
/// entry point; this form also serves constants that sit too close to e
/// for ContractionConstant.
template <MetricPoint P>
CheckResult check_congruence_contraction(const PMSpace<P>& space, const PointMap<P>& f,
                                         const SymMatrix& a, const PointSampler<P>& points,
                                         const ConeSampler& cone, std::size_t trials,
                                         std::mt19937_64& rng, double tol = 1e-12) {
  if (trials == 0) throw std::invalid_argument("contraction check: trials must be >= 1");
  CheckResult out{"a-contraction"};
  for (std::size_t i = 0; i < trials; ++i) {
    const P p = points(rng);
    const P q = points(rng);
    const PositiveElement t = cone(rng);
    const P fp = f(p);
    const P fq = f(q);
    const double lhs = space(fp, fq, t);
    const auto ata = PositiveElement::certify(congruence(a, t.matrix()));
    const double rhs = space(p, q, ata);
    out.record(lhs >= rhs - tol, [&] {
      std::ostringstream os;
      os.precision(17);
      os << "F(fp,fq)(t) = " << lhs << " < F(p,q)(a t a) = " << rhs
         << " at p = " << to_string(p) << ", q = " << to_string(q)
         << ", t = " << to_string(t.matrix());
      return os.str();
    });
    out.track_min("min_slack", lhs - rhs);
  }
  return out;
}

template <MetricPoint P>
AxiomReport verify_a_contraction(const PMSpace<P>& space, const PointMap<P>& f,
                                 const ContractionConstant& a, const PointSampler<P>& points,
                                 const ConeSampler& cone, std::size_t trials,
                                 std::mt19937_64& rng, double tol = 1e-12) {
  return AxiomReport{
      space.name,
      {check_congruence_contraction(space, f, a.a(), points, cone, trials, rng, tol)}};
}

struct CertReport {
  /// min eig(||a^-1||^2 t - a^-1 t a^-1); non-negative up to roundoff.
  double loewner_slack = 0.0;
  /// 1 - ||a^-1||, strictly positive for a certified constant.
  double norm_gap = 0.0;
  /// tr(t - a^-1 t a^-1) >= (1 - ||a^-1||^2) tr t > 0, which makes the
  /// shrink strict.
  double trace_gap = 0.0;
  bool holds = false;
};

/// Verifies a^-1 t a^-1 <= ||a^-1||^2 t and ||a^-1|| < 1. Requires t > theta.
CertReport shrink_certificate(const ContractionConstant& a, const PositiveElement& t);

/// Raised when an iterate stops being finite.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, std::size_t step)
      : std::runtime_error(what), step_(step) {}
  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

struct PicardOptions {
  std::optional<PositiveElement> t_ref;  // identity of the algebra when unset
  double lambda_stop = 1e-6;
  double metric_tol = 1e-10;
  std::size_t max_iter = 10000;
};

template <class P>
struct PicardTrace {
  std::vector<P> iterates;
  /// F_{p_n, p_{n+1}}(t_ref) per step.
  std::vector<double> cert_values;
  /// op_norm d(p_n, p_{n+1}) per step.
  std::vector<double> metric_steps;
  bool converged = false;
  /// Index n of the pair (p_n, p_{n+1}) at which the stop rule fired.
  std::size_t steps = 0;
  /// op_norm d(p*, f(p*)) at the returned point.
  double residual = 0.0;

  const P& fixed_point() const { return iterates.back(); }
};

/// Iterates p_{n+1} = f(p_n) until F_{p_n,p_{n+1}}(t_ref) > 1 - lambda_stop
/// and op_norm d(p_n, p_{n+1}) < metric_tol both hold. Convergence also
/// requires the residual op_norm d(p*, f(p*)) < 10 metric_tol. Throws
/// DivergenceError on a non-finite iterate; exhausting max_iter returns
/// converged = false.
template <MetricPoint P>
PicardTrace<P> picard_solve(const PMSpace<P>& space, const PointMap<P>& f, const P& p0,
                            const PicardOptions& opts = {}) {
  const PositiveElement t_ref =
      opts.t_ref ? *opts.t_ref : PositiveElement::identity(space.metric.algebra_dim);
  if (t_ref.is_theta()) throw std::invalid_argument("picard_solve: tRef must be > theta");
  if (!(opts.lambda_stop > 0.0 && opts.lambda_stop < 1.0)) {
    throw std::invalid_argument("picard_solve: lambdaStop must lie in (0, 1)");
  }
  if (opts.max_iter < 1) throw std::invalid_argument("picard_solve: maxIter must be >= 1");
  if (!is_finite(p0)) throw DivergenceError("picard_solve: non-finite start point", 0);

  PicardTrace<P> trace_out;
  trace_out.iterates.push_back(p0);
  for (std::size_t n = 0; n < opts.max_iter; ++n) {
    const P& cur = trace_out.iterates.back();
    P next = f(cur);
    if (!is_finite(next)) {
      throw DivergenceError("picard_solve: iterate " + std::to_string(n + 1) +
                                " is not finite",
                            n + 1);
    }
    const double cert = space(cur, next, t_ref);
    const double step = op_norm(space.metric(cur, next).matrix());
    trace_out.cert_values.push_back(cert);
    trace_out.metric_steps.push_back(step);
    trace_out.iterates.push_back(std::move(next));
    if (cert > 1.0 - opts.lambda_stop && step < opts.metric_tol) {
      const P& fixed = trace_out.iterates.back();
      trace_out.steps = n;
      trace_out.residual = op_norm(space.metric(fixed, f(fixed)).matrix());
      trace_out.converged = trace_out.residual < 10.0 * opts.metric_tol;
      return trace_out;
    }
  }
  trace_out.steps = opts.max_iter;
  const P& last = trace_out.iterates.back();
  trace_out.residual = op_norm(space.metric(last, f(last)).matrix());
  return trace_out;
}

struct UniquenessReport {
  bool unique = true;
  std::size_t trials = 0;
  /// trials == 0: the verdict holds vacuously.
  bool vacuous = false;
  std::size_t converged_runs = 0;
  /// Largest op_norm d(endpoint, fixedPoint) over converged runs.
  double max_deviation = 0.0;
  std::optional<std::string> counterexample;
};

/// Runs picard_solve from `trials` sampled starts and reports whether all of
/// them converge to `fixed_point` within 10 metric_tol. The candidate must
/// itself pass the residual check.
template <MetricPoint P>
UniquenessReport uniqueness_probe(const PMSpace<P>& space, const PointMap<P>& f,
                                  const P& fixed_point, const PointSampler<P>& starts,
                                  std::size_t trials, std::mt19937_64& rng,
                                  const PicardOptions& opts = {}) {
  const double tol = 10.0 * opts.metric_tol;
  const double residual = op_norm(space.metric(fixed_point, f(fixed_point)).matrix());
  if (!(residual < tol)) {
    throw std::invalid_argument("uniqueness_probe: candidate " + to_string(fixed_point) +
                                " is not a fixed point (residual " +
                                std::to_string(residual) + ")");
  }
  UniquenessReport report;
  report.trials = trials;
  report.vacuous = trials == 0;
  for (std::size_t i = 0; i < trials; ++i) {
    const P start = starts(rng);
    std::ostringstream os;
    os.precision(17);
    try {
      const auto run = picard_solve(space, f, start, opts);
      if (!run.converged) {
        os << "no convergence from " << to_string(start);
      } else {
        ++report.converged_runs;
        const double dev = op_norm(space.metric(run.fixed_point(), fixed_point).matrix());
        report.max_deviation = std::max(report.max_deviation, dev);
        if (dev < tol) continue;
        os << "start " << to_string(start) << " reaches " << to_string(run.fixed_point())
           << " (distance " << dev << ")";
      }
    } catch (const DivergenceError& e) {
      os << "divergence from " << to_string(start) << ": " << e.what();
    }
    report.unique = false;
    if (!report.counterexample) report.counterexample = os.str();
  }
  return report;
}

}  // namespace pmstar
