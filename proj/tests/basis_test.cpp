#include "sparsedft/basis.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <set>

namespace sparsedft {
namespace {

constexpr double kTol = 1e-9;

// Eigenvalue-ordered rows (lambda = 1, -1, -i, i) mapped to classes k = 0, 2, 1, 3.
std::array<Index, 4> by_class(Index one, Index minus_one, Index minus_i, Index plus_i) {
  return {one, minus_i, minus_one, plus_i};
}

TEST(Multiplicities, TableRows) {
  EXPECT_EQ(multiplicities(4).by_class, by_class(2, 1, 1, 0));
  EXPECT_EQ(multiplicities(5).by_class, by_class(2, 1, 1, 1));
  EXPECT_EQ(multiplicities(6).by_class, by_class(2, 2, 1, 1));
  EXPECT_EQ(multiplicities(7).by_class, by_class(2, 2, 2, 1));
  EXPECT_EQ(multiplicities(1).by_class, by_class(1, 0, 0, 0));
  EXPECT_THROW(multiplicities(0), std::invalid_argument);
}

TEST(Multiplicities, SumToNAndMatchDftTrace) {
  // tr(D) = sum_k dim(E_k) i^{-k} is checked against the naive DFT trace.
  for (Index n = 1; n <= 96; ++n) {
    const MultiplicityTable t = multiplicities(n);
    ASSERT_EQ(t.total(), n);
    Complex trace_from_table{};
    for (int k = 0; k < 4; ++k) trace_from_table += static_cast<double>(t.by_class[static_cast<std::size_t>(k)]) * EigenClass(k).eigenvalue();
    Complex trace{};
    for (Index j = 0; j < n; ++j) trace += naive_dft(DenseVector::unit(static_cast<std::size_t>(n), static_cast<std::size_t>(j)))[static_cast<std::size_t>(j)];
    ASSERT_NEAR(std::abs(trace - trace_from_table), 0.0, 1e-8) << "n=" << n;
  }
}

TEST(EnumerateCandidates, CountAndOrder) {
  const auto c4 = enumerate_candidates(4);
  ASSERT_EQ(c4.size(), 16u);
  EXPECT_EQ(c4.front().k.k(), 0);
  EXPECT_EQ(c4.front().a, 0);
  EXPECT_EQ(c4.front().b, 0);

  const auto c2 = enumerate_candidates(2);
  ASSERT_EQ(c2.size(), 8u);
  for (const Candidate& c : c2) {
    EXPECT_EQ(c.a, 0);
    EXPECT_EQ(c.sum.terms().front().train.stride(), 1);
  }

  const auto c9 = enumerate_candidates(9);
  ASSERT_EQ(c9.size(), 36u);
  for (std::size_t i = 1; i < c9.size(); ++i) {
    const auto key = [](const Candidate& c) { return std::tuple(c.k.k(), c.a, c.b); };
    EXPECT_LT(key(c9[i - 1]), key(c9[i]));
  }
}

TEST(BuildBasis, OneDimensional) {
  const EigenBasis basis = build_basis(1);
  ASSERT_EQ(basis.vectors.size(), 1u);
  EXPECT_EQ(basis.vectors[0].k.k(), 0);
  EXPECT_NEAR(std::abs(basis.vectors[0].dense[0] - Complex(1.0, 0.0)), 0.0, kTol);
}

TEST(BuildBasis, FourAndNine) {
  const EigenBasis b4 = build_basis(4);
  EXPECT_EQ(b4.vectors.size(), 4u);
  EXPECT_EQ(b4.per_class_counts, (std::array<Index, 4>{2, 1, 1, 0}));
  EXPECT_GT(b4.zero_candidates, 0);  // every F_3 candidate vanishes

  const EigenBasis b9 = build_basis(9);
  EXPECT_EQ(b9.vectors.size(), 9u);
  EXPECT_EQ(b9.per_class_counts, (std::array<Index, 4>{3, 2, 2, 2}));
  for (const auto& rec : b9.vectors) EXPECT_LE(rec.support, 12);
}

TEST(BuildBasis, InvariantsUpTo128) {
  const TolerancePolicy tol;
  for (Index n = 2; n <= 128; ++n) {
    const EigenBasis basis = build_basis(n, tol);
    ASSERT_EQ(static_cast<Index>(basis.vectors.size()), n);
    ASSERT_EQ(basis.per_class_counts, multiplicities(n).by_class);
    const double lower = 0.5 * static_cast<double>(basis.eta.eta1 + basis.eta.eta2);
    EliminationState rank(static_cast<std::size_t>(n));
    for (const BasisVectorRecord& rec : basis.vectors) {
      ASSERT_NEAR(rec.dense.norm(), 1.0, kTol);
      ASSERT_LE(verify_eigenvector(rec.dense, rec.k, tol), tol.residual_tol) << "n=" << n << " " << rec.label();
      ASSERT_GE(static_cast<double>(rec.support), lower - tol.zero_tol);
      ASSERT_LE(rec.support, 2 * (basis.eta.eta1 + basis.eta.eta2));
      ASSERT_TRUE(rank.try_extend(rec.dense, tol));
    }
    ASSERT_EQ(static_cast<Index>(rank.rank()), n);
    ASSERT_LE(gram_report(basis, tol).max_cross_class, tol.residual_tol);
  }
}

TEST(BuildBasis, Deterministic) {
  const EigenBasis first = build_basis(36);
  const EigenBasis second = build_basis(36);
  ASSERT_EQ(first.vectors.size(), second.vectors.size());
  for (std::size_t i = 0; i < first.vectors.size(); ++i) {
    EXPECT_EQ(first.vectors[i].label(), second.vectors[i].label());
    EXPECT_EQ(first.vectors[i].dense, second.vectors[i].dense);
  }
}

TEST(BuildBasis, RejectsBadInput) {
  EXPECT_THROW(build_basis(0), std::invalid_argument);
  EXPECT_THROW(build_basis(4, TolerancePolicy{0.0, 1e-9}), std::invalid_argument);
}

TEST(AuditSparsity, Examples) {
  const SparsityAudit a16 = audit_sparsity(build_basis(16));
  EXPECT_TRUE(a16.passed);
  EXPECT_GE(a16.min_support, 4);
  EXPECT_LE(a16.max_support, 16);
  EXPECT_DOUBLE_EQ(a16.lower_bound, 4.0);

  const SparsityAudit a4 = audit_sparsity(build_basis(4));
  EXPECT_TRUE(a4.passed);
  EXPECT_GE(a4.min_support, 2);
  EXPECT_LE(a4.max_support, 8);

  const SparsityAudit a2 = audit_sparsity(build_basis(2));
  EXPECT_DOUBLE_EQ(a2.lower_bound, 1.5);
  EXPECT_GE(a2.min_support, 2);
  EXPECT_LE(a2.ratio_to_lower_bound, 4.0);
}

TEST(AuditSparsity, ReportsOffendingVector) {
  EigenBasis basis = build_basis(9);
  // A single spike violates the lower bound (3 + 3) / 2.
  basis.vectors[2].dense = DenseVector::unit(9, 4);
  const SparsityAudit audit = audit_sparsity(basis);
  EXPECT_FALSE(audit.passed);
  ASSERT_FALSE(audit.failures.empty());
  EXPECT_NE(audit.failures.front().find(basis.vectors[2].label()), std::string::npos);
}

TEST(CheckUncertainty, Examples) {
  EXPECT_TRUE(check_uncertainty(DenseVector::unit(4, 0)));
  EXPECT_TRUE(check_uncertainty(DenseVector(std::vector<Complex>(4, 1.0))));
  EXPECT_THROW(check_uncertainty(DenseVector(4)), std::invalid_argument);
}

TEST(CheckUncertainty, HoldsForEveryBasisVector) {
  for (Index n = 2; n <= 64; ++n) {
    for (const BasisVectorRecord& rec : build_basis(n).vectors) {
      ASSERT_TRUE(check_uncertainty(rec.dense)) << "n=" << n << " " << rec.label();
    }
  }
}

TEST(CheckUncertainty, HoldsForRandomSparseVectors) {
  std::mt19937_64 rng(31);
  for (Index n : {6, 12, 18, 30, 36}) {
    std::uniform_int_distribution<Index> pick(0, n - 1);
    for (int trial = 0; trial < 50; ++trial) {
      DenseVector v(static_cast<std::size_t>(n));
      for (int s = 0; s < 1 + trial % 5; ++s) v[static_cast<std::size_t>(pick(rng))] = 1.0;
      ASSERT_TRUE(check_uncertainty(v));
    }
  }
}

TEST(GramReport, OrthogonalAndNot) {
  const TolerancePolicy tol;
  const GramReport g9 = gram_report(build_basis(9), tol);
  EXPECT_TRUE(g9.is_orthogonal);
  EXPECT_LE(g9.max_offdiag, tol.residual_tol);
  EXPECT_FALSE(g9.witness.has_value());

  EXPECT_TRUE(gram_report(build_basis(8), tol).is_orthogonal);

  const EigenBasis b12 = build_basis(12);
  const GramReport g12 = gram_report(b12, tol);
  EXPECT_FALSE(g12.is_orthogonal);
  ASSERT_TRUE(g12.witness.has_value());
  const double mag = std::abs(g12.witness->value);
  EXPECT_GT(mag, tol.residual_tol);
  EXPECT_LT(mag, 1.0 - tol.residual_tol);
  EXPECT_EQ(b12.vectors[g12.witness->first].k, b12.vectors[g12.witness->second].k);
  EXPECT_NEAR(std::abs(inner(b12.vectors[g12.witness->first].dense, b12.vectors[g12.witness->second].dense) -
                       g12.witness->value),
              0.0, kTol);
}

std::set<Index> orthogonal_set(const std::vector<SurveyRow>& rows) {
  std::set<Index> out;
  for (const SurveyRow& row : rows) {
    if (row.is_orthogonal) out.insert(row.n);
  }
  return out;
}

TEST(OrthogonalitySurvey, SmallRanges) {
  const auto rows10 = orthogonality_survey(10);
  ASSERT_EQ(rows10.size(), 9u);
  EXPECT_EQ(orthogonal_set(rows10), (std::set<Index>{2, 3, 4, 8, 9}));
  for (const SurveyRow& row : rows10) EXPECT_EQ(row.is_orthogonal, !row.witness.has_value());

  const auto rows3 = orthogonality_survey(3);
  ASSERT_EQ(rows3.size(), 2u);
  EXPECT_TRUE(rows3[0].is_orthogonal);
  EXPECT_TRUE(rows3[1].is_orthogonal);

  EXPECT_THROW(orthogonality_survey(1), std::invalid_argument);
}

TEST(OrthogonalitySurvey, ThreadedMatchesSequential) {
  const auto serial = orthogonality_survey(40, {}, 1);
  const auto threaded = orthogonality_survey(40, {}, 4);
  ASSERT_EQ(serial.size(), threaded.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    EXPECT_EQ(serial[i].n, threaded[i].n);
    EXPECT_EQ(serial[i].is_orthogonal, threaded[i].is_orthogonal);
    EXPECT_EQ(serial[i].max_support, threaded[i].max_support);
    EXPECT_EQ(serial[i].witness_labels, threaded[i].witness_labels);
  }
}

}  // namespace
}  // namespace sparsedft
