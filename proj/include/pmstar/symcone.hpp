#pragma once

// Concrete C*-algebra backend: real symmetric n x n matrices with the
// spectral notion of positivity and the Loewner order.

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace pmstar {

/// Thrown when an input violates a documented precondition of the algebra
/// (asymmetry, non-finite entries, dimension mismatch, non-positive input,
/// singular matrix).
class AlgebraError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Self-adjoint element of M_n(R): a real symmetric matrix, row-major.
class SymMatrix {
 public:
  /// Zero matrix of dimension n (n >= 1).
  explicit SymMatrix(std::size_t n);
  /// Validates dimension, finiteness and the symmetry tolerance
  /// |m_ij - m_ji| <= 1e-12 (1 + max |m|). Stored entries are symmetrised.
  SymMatrix(std::size_t n, std::vector<double> entries);

  static SymMatrix zero(std::size_t n) { return SymMatrix(n); }
  static SymMatrix identity(std::size_t n);
  static SymMatrix diag(std::span<const double> d);
  static SymMatrix diag(std::initializer_list<double> d);
  static SymMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t dim() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
  std::span<const double> entries() const { return a_; }
  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(a_).subspan(i * n_, n_);
  }
  double max_abs_entry() const;
  double frobenius_norm() const;

  SymMatrix& operator+=(const SymMatrix& o);
  SymMatrix& operator-=(const SymMatrix& o);
  SymMatrix& operator*=(double s);

  friend SymMatrix operator+(SymMatrix a, const SymMatrix& b) { return a += b; }
  friend SymMatrix operator-(SymMatrix a, const SymMatrix& b) { return a -= b; }
  friend SymMatrix operator*(SymMatrix a, double s) { return a *= s; }
  friend SymMatrix operator*(double s, SymMatrix a) { return a *= s; }
  friend bool operator==(const SymMatrix&, const SymMatrix&) = default;

 private:
  std::size_t n_;
  std::vector<double> a_;
};

/// Eigenvalues sorted ascending.
struct Spectrum {
  std::vector<double> eigenvalues;

  double min() const { return eigenvalues.front(); }
  double max() const { return eigenvalues.back(); }
};

/// Eigenpairs; `vectors` holds the unit eigenvectors as rows, in the same
/// order as the ascending eigenvalues.
struct EigenDecomposition {
  std::size_t dim = 0;
  std::vector<double> values;
  std::vector<double> vectors;

  std::span<const double> vector(std::size_t k) const {
    return std::span<const double>(vectors).subspan(k * dim, dim);
  }
};

/// Cyclic Jacobi rotations. Converges when the off-diagonal Frobenius mass
/// falls to 1e-14 ||M||_F. Deterministic sweep order.
EigenDecomposition eigen_decompose(const SymMatrix& m);

/// Reassembles sum_k f(lambda_k) v_k v_k^T.
template <class F>
SymMatrix spectral_apply(const EigenDecomposition& e, F&& f);

Spectrum spectrum(const SymMatrix& m);

/// max |eigenvalue|.
double op_norm(const SymMatrix& m);
double trace(const SymMatrix& m);

/// 1e-10 (1 + ||M||).
double positivity_tolerance(double op_norm_value);
double positivity_tolerance(const SymMatrix& m);

/// Element of the positive cone A_+; only obtainable through certification.
class PositiveElement {
 public:
  /// Throws AlgebraError when the minimum eigenvalue is below -posTol.
  static PositiveElement certify(const SymMatrix& m);
  static std::optional<PositiveElement> try_certify(const SymMatrix& m);
  static PositiveElement zero(std::size_t n);
  static PositiveElement identity(std::size_t n);

  const SymMatrix& matrix() const { return m_; }
  double min_eigenvalue() const { return min_eig_; }
  double norm() const { return norm_; }
  std::size_t dim() const { return m_.dim(); }

  /// Numerically indistinguishable from theta: ||C|| <= posTol.
  bool is_theta() const;

  /// s * C for s >= 0 stays in the cone without re-certification.
  PositiveElement scaled(double s) const;
  friend PositiveElement operator+(const PositiveElement& a, const PositiveElement& b);

 private:
  PositiveElement(SymMatrix m, double min_eig, double norm)
      : m_(std::move(m)), min_eig_(min_eig), norm_(norm) {}

  SymMatrix m_;
  double min_eig_;
  double norm_;
};

enum class LoewnerRelation { Equal, LessEq, GreaterEq, Incomparable };

std::string to_string(LoewnerRelation r);

bool is_positive(const SymMatrix& m);
/// A <= B  iff  B - A is positive.
bool loewner_leq(const SymMatrix& a, const SymMatrix& b);
LoewnerRelation loewner_compare(const SymMatrix& a, const SymMatrix& b);

PositiveElement sqrt_psd(const PositiveElement& p);
/// |M| = (M^T M)^{1/2}.
PositiveElement abs_element(const SymMatrix& m);
/// a^T t a, symmetrised.
SymMatrix congruence(const SymMatrix& a, const SymMatrix& t);
/// Spectral inverse; rejects min |lambda| <= 1e-12 ||a||.
SymMatrix inverse(const SymMatrix& a);
/// a^k for k >= 0, via the spectral decomposition.
SymMatrix power(const SymMatrix& a, unsigned k);

std::string to_string(const SymMatrix& m);

// ---------------------------------------------------------------------------

template <class F>
SymMatrix spectral_apply(const EigenDecomposition& e, F&& f) {
  const std::size_t n = e.dim;
  std::vector<double> out(n * n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const double w = f(e.values[k]);
    if (w == 0.0) continue;
    const auto v = e.vector(k);
    for (std::size_t i = 0; i < n; ++i) {
      const double wi = w * v[i];
      for (std::size_t j = 0; j < n; ++j) out[i * n + j] += wi * v[j];
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

}  // namespace pmstar
