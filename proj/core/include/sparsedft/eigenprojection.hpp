#pragma once

// The spectral projectors F_k = (1/4) sum_j i^{jk} D^j applied to delta
// trains symbolically, producing sums of at most four trains.

#include "sparsedft/delta_train.hpp"

#include <vector>

namespace sparsedft {

/// Eigenvalue class k in 0..3; the DFT eigenvalue is i^{-k}.
class EigenClass {
 public:
  explicit EigenClass(int k);

  int k() const noexcept { return k_; }
  /// i^{-k}: 1, -i, -1, i for k = 0..3.
  Complex eigenvalue() const noexcept;

  bool operator==(const EigenClass&) const = default;

 private:
  int k_;
};

/// i^e for any integer e, exact.
Complex i_pow(int e) noexcept;

struct TrainTerm {
  Complex coefficient;
  ModulatedDeltaTrain train;
};

/// A weighted sum of at most four delta trains sharing one dimension.
class TrainSum {
 public:
  static constexpr std::size_t kMaxTerms = 4;

  explicit TrainSum(Index n);

  Index n() const noexcept { return n_; }
  const std::vector<TrainTerm>& terms() const noexcept { return terms_; }

  void add(Complex coefficient, const ModulatedDeltaTrain& train);

 private:
  Index n_;
  std::vector<TrainTerm> terms_;
};

/// F_k g as the four-term sum (1/4) i^{jk} D^j g, j = 0..3.
TrainSum project(EigenClass k, const ModulatedDeltaTrain& g);

DenseVector densify_sum(const TrainSum& s);

/// Sum of the term supports; an upper bound on the dense support.
Index support_bound(const TrainSum& s);

/// True if terms sharing a label cancel exactly (to zero_tol) after merging
/// their coefficient * phase weights. Distinct labels are not compared.
bool cancels_symbolically(const TrainSum& s, const TolerancePolicy& tol);

/// ||D v - i^{-k} v|| / ||v||. Throws std::invalid_argument for ||v|| <= zero_tol.
double verify_eigenvector(const DenseVector& v, EigenClass k, const TolerancePolicy& tol);

}  // namespace sparsedft
