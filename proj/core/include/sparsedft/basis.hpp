#pragma once

// Selection of a sparse DFT eigenbasis from the projected delta trains
// F_k g_{eta1}(a, b), together with the audits that certify it.

#include "sparsedft/eigenprojection.hpp"

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sparsedft {

/// Eigenspace dimensions of the n-point DFT, indexed by class k.
struct MultiplicityTable {
  Index n = 1;
  std::array<Index, 4> by_class{};

  Index total() const noexcept { return by_class[0] + by_class[1] + by_class[2] + by_class[3]; }
};

/// Dimension of each eigenspace as a function of n mod 4.
MultiplicityTable multiplicities(Index n);

struct Candidate {
  EigenClass k;
  Index a;
  Index b;
  TrainSum sum;
};

/// All 4n candidates F_k g_{eta1}(a, b), ordered by k, then a, then b.
std::vector<Candidate> enumerate_candidates(Index n);

struct BasisVectorRecord {
  EigenClass k;
  Index a;
  Index b;
  TrainSum sum;       ///< unnormalized F_k g_{eta1}(a, b)
  double scale;       ///< norm of densify_sum(sum); dense = densify_sum(sum) / scale
  DenseVector dense;  ///< unit norm
  Index support;      ///< entries with magnitude above zero_tol

  std::string label() const;
};

struct EigenBasis {
  Index n = 1;
  DivisorPair eta;
  std::vector<BasisVectorRecord> vectors;
  std::array<Index, 4> per_class_counts{};
  Index zero_candidates = 0;      ///< candidates skipped as numerically zero
  Index dependent_candidates = 0; ///< candidates rejected by the rank test
};

/// Thrown when a class cannot reach its eigenspace dimension. That cannot
/// happen for a correct projector, so it indicates a defect.
class BasisConstructionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Greedy-first selection: for each k, scan candidates in enumeration order,
/// keep those that raise the rank of the class, stop at the class dimension.
EigenBasis build_basis(Index n, const TolerancePolicy& tol = {});

/// Number of entries with magnitude strictly above zero_tol.
Index support_size(const DenseVector& v, double zero_tol);

struct SparsityAudit {
  Index n = 1;
  Index max_support = 0;
  Index min_support = 0;
  double lower_bound = 0.0;           ///< (eta1 + eta2) / 2, holds for every eigenvector
  Index upper_bound = 0;              ///< 2 (eta1 + eta2)
  double ratio = 0.0;                 ///< max_support / min_support
  double ratio_to_lower_bound = 0.0;  ///< max_support / lower_bound
  bool passed = false;
  std::vector<std::string> failures;  ///< one message per offending vector
};

SparsityAudit audit_sparsity(const EigenBasis& basis, const TolerancePolicy& tol = {});

/// Checks |supp v| |supp Dv| >= n and, for every pair of consecutive divisors
/// d1 < d2 with d1 <= |supp v| <= d2, |supp Dv| >= n (d1 + d2 - |supp v|) / (d1 d2).
/// Supports are measured on v / ||v||. Throws for a numerically zero v.
bool check_uncertainty(const DenseVector& v, const TolerancePolicy& tol = {});

struct GramWitness {
  std::size_t first;
  std::size_t second;
  Complex value;  ///< inner(basis[first], basis[second])
};

struct GramReport {
  Index n = 1;
  bool is_orthogonal = false;
  double max_offdiag = 0.0;
  double max_cross_class = 0.0;  ///< largest |inner| between different classes
  std::optional<GramWitness> witness;
};

/// Pairwise inner products of the dense basis vectors. When the basis is not
/// orthogonal the witness is the largest off-diagonal pair that is neither
/// orthogonal nor collinear.
GramReport gram_report(const EigenBasis& basis, const TolerancePolicy& tol = {});

struct SurveyRow {
  Index n = 1;
  DivisorPair eta;
  Index max_support = 0;
  double lower_bound = 0.0;
  bool is_orthogonal = false;
  std::optional<GramWitness> witness;
  std::string witness_labels;  ///< "label|label" when a witness exists
};

/// build_basis + gram_report for n = 2..max_n. With workers > 1 the values of
/// n are distributed across threads; rows are always returned in n order.
std::vector<SurveyRow> orthogonality_survey(Index max_n, const TolerancePolicy& tol = {},
                                            unsigned workers = 1);

}  // namespace sparsedft
