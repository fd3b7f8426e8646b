#include "pmstar/symcone.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "pmstar/simd/kernels.hpp"

namespace pmstar {
namespace {

constexpr double kSymmetryTol = 1e-12;
constexpr double kPositivityRel = 1e-10;
constexpr double kJacobiTol = 1e-14;
constexpr double kSingularRel = 1e-12;
constexpr int kMaxSweeps = 100;

void require_same_dim(const SymMatrix& a, const SymMatrix& b, const char* what) {
  if (a.dim() != b.dim()) {
    throw AlgebraError(std::string(what) + ": dimension mismatch (" +
                       std::to_string(a.dim()) + " vs " + std::to_string(b.dim()) +
                       ")");
  }
}

double norm_of(const Spectrum& s) {
  return std::max(std::fabs(s.min()), std::fabs(s.max()));
}

}  // namespace

SymMatrix::SymMatrix(std::size_t n) : n_(n), a_(n * n, 0.0) {
  if (n == 0) throw AlgebraError("SymMatrix: dimension must be at least 1");
}

SymMatrix::SymMatrix(std::size_t n, std::vector<double> entries)
    : n_(n), a_(std::move(entries)) {
  if (n == 0) throw AlgebraError("SymMatrix: dimension must be at least 1");
  if (a_.size() != n * n) {
    throw AlgebraError("SymMatrix: expected " + std::to_string(n * n) +
                       " entries, got " + std::to_string(a_.size()));
  }
  for (double v : a_) {
    if (!std::isfinite(v)) throw AlgebraError("SymMatrix: non-finite entry");
  }
  const double tol = kSymmetryTol * (1.0 + max_abs_entry());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double& upper = a_[i * n + j];
      double& lower = a_[j * n + i];
      if (std::fabs(upper - lower) > tol) {
        std::ostringstream msg;
        msg << "SymMatrix: not symmetric at (" << i << ", " << j << "): " << upper
            << " vs " << lower;
        throw AlgebraError(msg.str());
      }
      const double avg = 0.5 * (upper + lower);
      upper = avg;
      lower = avg;
    }
  }
}

SymMatrix SymMatrix::identity(std::size_t n) {
  SymMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m.a_[i * n + i] = 1.0;
  return m;
}

SymMatrix SymMatrix::diag(std::span<const double> d) {
  SymMatrix m(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (!std::isfinite(d[i])) throw AlgebraError("SymMatrix: non-finite entry");
    m.a_[i * d.size() + i] = d[i];
  }
  return m;
}

SymMatrix SymMatrix::diag(std::initializer_list<double> d) {
  return diag(std::span<const double>(d.begin(), d.size()));
}

SymMatrix SymMatrix::from_rows(
    std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t n = rows.size();
  std::vector<double> e;
  e.reserve(n * n);
  for (const auto& r : rows) {
    if (r.size() != n) throw AlgebraError("SymMatrix: rows must form a square");
    e.insert(e.end(), r.begin(), r.end());
  }
  return SymMatrix(n, std::move(e));
}

double SymMatrix::max_abs_entry() const { return simd::max_abs(a_); }

double SymMatrix::frobenius_norm() const { return std::sqrt(simd::dot(a_, a_)); }

SymMatrix& SymMatrix::operator+=(const SymMatrix& o) {
  require_same_dim(*this, o, "SymMatrix +");
  simd::axpy(1.0, o.a_, a_);
  return *this;
}

SymMatrix& SymMatrix::operator-=(const SymMatrix& o) {
  require_same_dim(*this, o, "SymMatrix -");
  simd::axpy(-1.0, o.a_, a_);
  return *this;
}

SymMatrix& SymMatrix::operator*=(double s) {
  if (!std::isfinite(s)) throw AlgebraError("SymMatrix: non-finite scale");
  for (double& v : a_) v *= s;
  return *this;
}

EigenDecomposition eigen_decompose(const SymMatrix& m) {
  const std::size_t n = m.dim();
  std::vector<double> w(m.entries().begin(), m.entries().end());
  // Eigenvectors accumulate as rows so each rotation touches two
  // contiguous rows.
  std::vector<double> vt(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) vt[i * n + i] = 1.0;

  auto row = [n](std::vector<double>& buf, std::size_t i) {
    return std::span<double>(buf).subspan(i * n, n);
  };

  const double scale = m.frobenius_norm();
  for (int sweep = 0; sweep < kMaxSweeps && scale > 0.0; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j) off += w[i * n + j] * w[i * n + j];
      }
    }
    if (std::sqrt(off) <= kJacobiTol * scale) break;

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = w[p * n + q];
        if (apq == 0.0) continue;
        const double app = w[p * n + p];
        const double aqq = w[q * n + q];
        const double theta = (aqq - app) / (2.0 * apq);
        double t;
        if (std::fabs(theta) > 1e150) {
          t = 0.5 / theta;
        } else {
          t = (theta >= 0.0 ? 1.0 : -1.0) /
              (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        }
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        simd::rotate(row(w, p), row(w, q), c, s);
        w[p * n + p] = app - t * apq;
        w[q * n + q] = aqq + t * apq;
        w[p * n + q] = 0.0;
        w[q * n + p] = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          w[k * n + p] = w[p * n + k];
          w[k * n + q] = w[q * n + k];
        }
        simd::rotate(row(vt, p), row(vt, q), c, s);
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return w[a * n + a] < w[b * n + b];
  });

  EigenDecomposition out;
  out.dim = n;
  out.values.resize(n);
  out.vectors.resize(n * n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t src = order[k];
    out.values[k] = w[src * n + src];
    std::copy_n(vt.begin() + static_cast<std::ptrdiff_t>(src * n), n,
                out.vectors.begin() + static_cast<std::ptrdiff_t>(k * n));
  }
  return out;
}

Spectrum spectrum(const SymMatrix& m) { return Spectrum{eigen_decompose(m).values}; }

double op_norm(const SymMatrix& m) { return norm_of(spectrum(m)); }

double trace(const SymMatrix& m) {
  double s = 0.0;
  for (std::size_t i = 0; i < m.dim(); ++i) s += m(i, i);
  return s;
}

double positivity_tolerance(double op_norm_value) {
  return kPositivityRel * (1.0 + op_norm_value);
}

double positivity_tolerance(const SymMatrix& m) {
  return positivity_tolerance(op_norm(m));
}

std::optional<PositiveElement> PositiveElement::try_certify(const SymMatrix& m) {
  const Spectrum s = spectrum(m);
  const double norm = norm_of(s);
  if (s.min() < -positivity_tolerance(norm)) return std::nullopt;
  return PositiveElement(m, s.min(), norm);
}

PositiveElement PositiveElement::certify(const SymMatrix& m) {
  const Spectrum s = spectrum(m);
  const double norm = norm_of(s);
  if (s.min() < -positivity_tolerance(norm)) {
    std::ostringstream msg;
    msg << "not a positive element: minimum eigenvalue " << s.min();
    throw AlgebraError(msg.str());
  }
  return PositiveElement(m, s.min(), norm);
}

PositiveElement PositiveElement::zero(std::size_t n) {
  return PositiveElement(SymMatrix::zero(n), 0.0, 0.0);
}

PositiveElement PositiveElement::identity(std::size_t n) {
  return PositiveElement(SymMatrix::identity(n), 1.0, 1.0);
}

bool PositiveElement::is_theta() const { return norm_ <= positivity_tolerance(norm_); }

PositiveElement PositiveElement::scaled(double s) const {
  if (!(s >= 0.0) || !std::isfinite(s)) {
    throw AlgebraError("PositiveElement: scale must be finite and non-negative");
  }
  return PositiveElement(m_ * s, min_eig_ * s, norm_ * s);
}

PositiveElement operator+(const PositiveElement& a, const PositiveElement& b) {
  SymMatrix sum = a.m_ + b.m_;
  const Spectrum s = spectrum(sum);
  // The cone is closed under addition; roundoff below zero is not re-judged.
  return PositiveElement(std::move(sum), s.min(), norm_of(s));
}

std::string to_string(LoewnerRelation r) {
  switch (r) {
    case LoewnerRelation::Equal:
      return "Equal";
    case LoewnerRelation::LessEq:
      return "LessEq";
    case LoewnerRelation::GreaterEq:
      return "GreaterEq";
    case LoewnerRelation::Incomparable:
      return "Incomparable";
  }
  return "Incomparable";
}

bool is_positive(const SymMatrix& m) {
  const Spectrum s = spectrum(m);
  return s.min() >= -positivity_tolerance(norm_of(s));
}

bool loewner_leq(const SymMatrix& a, const SymMatrix& b) {
  require_same_dim(a, b, "loewner_leq");
  return is_positive(b - a);
}

LoewnerRelation loewner_compare(const SymMatrix& a, const SymMatrix& b) {
  const bool leq = loewner_leq(a, b);
  const bool geq = loewner_leq(b, a);
  if (leq && geq) return LoewnerRelation::Equal;
  if (leq) return LoewnerRelation::LessEq;
  if (geq) return LoewnerRelation::GreaterEq;
  return LoewnerRelation::Incomparable;
}

PositiveElement sqrt_psd(const PositiveElement& p) {
  const EigenDecomposition e = eigen_decompose(p.matrix());
  const double tol = positivity_tolerance(p.norm());
  for (double v : e.values) {
    if (v < -tol) throw AlgebraError("sqrt_psd: input is not positive");
  }
  // Eigenvalues in [-posTol, 0) sit on the cone boundary up to roundoff.
  return PositiveElement::certify(
      spectral_apply(e, [](double v) { return v > 0.0 ? std::sqrt(v) : 0.0; }));
}

PositiveElement abs_element(const SymMatrix& m) {
  // For symmetric M, (M^T M)^{1/2} = (M^2)^{1/2} has eigenvalues |lambda|
  // on the same eigenvectors.
  const EigenDecomposition e = eigen_decompose(m);
  return PositiveElement::certify(
      spectral_apply(e, [](double v) { return std::fabs(v); }));
}

SymMatrix congruence(const SymMatrix& a, const SymMatrix& t) {
  require_same_dim(a, t, "congruence");
  const std::size_t n = a.dim();
  // ta_t(j, k) = (t a)(k, j) = <t.row(k), a.row(j)> since a is symmetric.
  std::vector<double> ta_t(n * n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) ta_t[j * n + k] = simd::dot(a.row(j), t.row(k));
  }
  std::vector<double> out(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      out[i * n + j] = simd::dot(
          a.row(i), std::span<const double>(ta_t).subspan(j * n, n));
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double avg = 0.5 * (out[i * n + j] + out[j * n + i]);
      out[i * n + j] = avg;
      out[j * n + i] = avg;
    }
  }
  return SymMatrix(n, std::move(out));
}

SymMatrix inverse(const SymMatrix& a) {
  const EigenDecomposition e = eigen_decompose(a);
  double norm = 0.0;
  double min_abs = std::numeric_limits<double>::infinity();
  for (double v : e.values) {
    norm = std::max(norm, std::fabs(v));
    min_abs = std::min(min_abs, std::fabs(v));
  }
  if (norm == 0.0 || min_abs <= kSingularRel * norm) {
    std::ostringstream msg;
    msg << "inverse: matrix is singular (min |eigenvalue| " << min_abs
        << ", norm " << norm << ")";
    throw AlgebraError(msg.str());
  }
  return spectral_apply(e, [](double v) { return 1.0 / v; });
}

SymMatrix power(const SymMatrix& a, unsigned k) {
  if (k == 0) return SymMatrix::identity(a.dim());
  if (k == 1) return a;
  const EigenDecomposition e = eigen_decompose(a);
  return spectral_apply(e, [k](double v) { return std::pow(v, static_cast<double>(k)); });
}

std::string to_string(const SymMatrix& m) {
  std::ostringstream os;
  os.precision(17);
  os << '[';
  for (std::size_t i = 0; i < m.dim(); ++i) {
    if (i) os << ", ";
    os << '[';
    for (std::size_t j = 0; j < m.dim(); ++j) {
      if (j) os << ", ";
      os << m(i, j);
    }
    os << ']';
  }
  os << ']';
  return os.str();
}

}  // namespace pmstar
