#pragma once

// Dense complex vectors, the reference O(n^2) DFT, and incremental rank
// elimination shared by every other part of the library.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace sparsedft {

using Complex = std::complex<double>;
using Index = std::int64_t;

/// Thresholds applied to unit-normalized quantities.
struct TolerancePolicy {
  double zero_tol = 1e-9;      ///< magnitude at or below which an entry counts as zero
  double residual_tol = 1e-9;  ///< eigenvector, orthogonality and rank residual threshold

  /// Throws std::invalid_argument unless both values lie in (0, 1e-6].
  void validate() const;
};

/// Length-n complex vector, n >= 1, with finite entries at construction.
class DenseVector {
 public:
  /// Zero vector of dimension n.
  explicit DenseVector(std::size_t n);
  explicit DenseVector(std::vector<Complex> entries);

  /// Standard basis vector e_j.
  static DenseVector unit(std::size_t n, std::size_t j);

  std::size_t size() const noexcept { return entries_.size(); }

  Complex operator[](std::size_t j) const { return entries_[j]; }
  Complex& operator[](std::size_t j) { return entries_[j]; }

  std::span<const Complex> entries() const noexcept { return entries_; }
  std::span<Complex> entries() noexcept { return entries_; }

  double norm() const;
  bool all_finite() const;

  DenseVector& operator+=(const DenseVector& other);
  DenseVector& operator-=(const DenseVector& other);
  DenseVector& operator*=(Complex scale);

  friend DenseVector operator+(DenseVector lhs, const DenseVector& rhs) { return lhs += rhs; }
  friend DenseVector operator-(DenseVector lhs, const DenseVector& rhs) { return lhs -= rhs; }
  friend DenseVector operator*(Complex scale, DenseVector v) { return v *= scale; }
  friend DenseVector operator*(DenseVector v, Complex scale) { return v *= scale; }

  bool operator==(const DenseVector&) const = default;

 private:
  std::vector<Complex> entries_;
};

/// omega^e with omega = exp(-2 pi i / n); e is reduced mod n first.
Complex omega_pow(Index n, Index e);

/// Reference DFT straight from the matrix definition (D)_{jk} = omega^{jk} / sqrt(n).
/// This is the verification oracle; the fast transform shares no code with it.
DenseVector naive_dft(const DenseVector& v);

/// D^power v for power in 0..3.
DenseVector dft_pow(const DenseVector& v, int power);

/// sum_j x_j conj(y_j): linear in the first argument, conjugate-linear in the second.
Complex inner(const DenseVector& x, const DenseVector& y);

/// Max-magnitude difference between two vectors of equal length.
double max_abs_diff(const DenseVector& x, const DenseVector& y);

/// Incremental rank determination by modified Gram-Schmidt projection.
///
/// Holds an orthonormal basis for the span of every accepted vector. A
/// candidate is accepted iff its residual after projection has norm greater
/// than residual_tol times its own norm.
class EliminationState {
 public:
  explicit EliminationState(std::size_t dim);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t rank() const noexcept { return pivots_.size(); }
  const std::vector<DenseVector>& pivot_rows() const noexcept { return pivots_; }

  /// Returns true and grows the rank by one if v is independent of the pivots.
  bool try_extend(const DenseVector& v, const TolerancePolicy& tol);

 private:
  std::size_t dim_;
  std::vector<DenseVector> pivots_;
};

struct ExtendResult {
  bool accepted;
  EliminationState state;
};

/// Value-semantics form of EliminationState::try_extend.
ExtendResult try_extend_rank(EliminationState state, const DenseVector& v,
                             const TolerancePolicy& tol);

}  // namespace sparsedft
