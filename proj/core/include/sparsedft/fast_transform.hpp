#pragma once

// Change of basis to the sparse eigenbasis in O(n log n): correlations
// against every delta train of one stride are subsampled FFTs, and the
// correlations against F_k g follow from four of them per candidate.

#include "sparsedft/basis.hpp"

#include <memory>

namespace sparsedft {

/// Unitary mixed-radix FFT for a fixed length. Recurses on the smallest prime
/// factor; prime lengths fall back to the direct O(p^2) sum.
class FftPlan {
 public:
  explicit FftPlan(std::size_t n);

  std::size_t size() const noexcept { return n_; }

  /// out_j = n^{-1/2} sum_k exp(-2 pi i jk / n) in_k. in and out must not alias.
  void execute(std::span<const Complex> in, std::span<Complex> out) const;

 private:
  void transform(const Complex* in, std::size_t in_stride, Complex* out, std::size_t len,
                 std::size_t level, std::vector<Complex>& scratch) const;

  std::size_t n_;
  std::vector<std::size_t> factors_;
  std::vector<Complex> roots_;  // exp(-2 pi i e / n), e = 0..n-1
};

DenseVector fft(const DenseVector& v);

/// c(a, b) = inner(v, g_{d1}(a, b)) for 0 <= a < d1, 0 <= b < d2.
struct TrainCorrelations {
  Index stride = 1;    ///< d1
  Index cofactor = 1;  ///< d2
  std::vector<Complex> values;

  Complex at(Index a, Index b) const { return values[static_cast<std::size_t>(a * cofactor + b)]; }
};

/// One d2-point FFT per residue class a; O(n log d2) in total.
TrainCorrelations train_correlations(const DenseVector& v, Index stride);

/// inner(v, F_k g_{eta1}(a, b)) for every candidate label.
struct CorrelationTensor {
  Index n = 1;
  DivisorPair eta;
  std::vector<Complex> values;  ///< index (k * eta1 + a) * eta2 + b

  Complex at(int k, Index a, Index b) const {
    return values[static_cast<std::size_t>((k * eta.eta1 + a) * eta.eta2 + b)];
  }
};

CorrelationTensor analyze(const DenseVector& v);

/// Expansion coefficients in basis order: v = sum_j coefficients[j] * basis.vectors[j].dense.
struct CoefficientVector {
  Index n = 1;
  std::vector<Complex> coefficients;
};

/// Recovers expansion coefficients for one basis. For an orthogonal basis the
/// coefficients are the normalized correlations from analyze(). Otherwise each
/// class block (columns = basis vectors of class k) gets a column-pivoted
/// Householder QR at construction; a solve projects v onto each eigenspace
/// with FFTs, back-substitutes, and applies one step of iterative refinement.
/// The basis must outlive the solver.
///
/// Greedy bases for large prime n are exponentially ill-conditioned, so the
/// round trip degrades there; reciprocal_condition() reports how badly.
class CoefficientSolver {
 public:
  explicit CoefficientSolver(const EigenBasis& basis, const TolerancePolicy& tol = {});

  bool orthogonal() const noexcept { return orthogonal_; }
  /// Smallest |R_ii| / |R_00| over the class factorizations (1 when orthogonal).
  double reciprocal_condition() const noexcept { return rcond_; }
  CoefficientVector solve(const DenseVector& v) const;

 private:
  struct Factorization;

  CoefficientVector solve_once(const DenseVector& v) const;

  const EigenBasis* basis_;
  bool orthogonal_ = false;
  double rcond_ = 1.0;
  std::shared_ptr<const Factorization> factors_;
};

/// One-shot convenience over CoefficientSolver. Throws std::runtime_error if a
/// class block is exactly rank deficient, which a valid basis never produces.
CoefficientVector to_coefficients(const DenseVector& v, const EigenBasis& basis,
                                  const TolerancePolicy& tol = {});

/// sum_j c_j basis.vectors[j], accumulated term by term over the sparse train
/// sums rather than through a dense n x n product.
DenseVector synthesize(const CoefficientVector& c, const EigenBasis& basis);

}  // namespace sparsedft
