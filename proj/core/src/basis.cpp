#include "sparsedft/basis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

namespace sparsedft {

MultiplicityTable multiplicities(Index n) {
  if (n < 1) throw std::invalid_argument("multiplicities: n must be positive");
  const Index m = n / 4;
  MultiplicityTable table;
  table.n = n;
  // by_class[k] for eigenvalue i^{-k}: k = 0 -> 1, 1 -> -i, 2 -> -1, 3 -> i.
  switch (n % 4) {
    case 0: table.by_class = {m + 1, m, m, m - 1}; break;
    case 1: table.by_class = {m + 1, m, m, m}; break;
    case 2: table.by_class = {m + 1, m, m + 1, m}; break;
    default: table.by_class = {m + 1, m + 1, m + 1, m}; break;
  }
  return table;
}

std::vector<Candidate> enumerate_candidates(Index n) {
  const DivisorPair eta = eta_pair(n);
  std::vector<Candidate> out;
  out.reserve(static_cast<std::size_t>(4 * n));
  for (int k = 0; k < 4; ++k) {
    for (Index a = 0; a < eta.eta1; ++a) {
      for (Index b = 0; b < eta.eta2; ++b) {
        out.push_back({EigenClass(k), a, b, project(EigenClass(k), ModulatedDeltaTrain(n, eta.eta1, a, b))});
      }
    }
  }
  return out;
}

std::string BasisVectorRecord::label() const {
  return "k=" + std::to_string(k.k()) + ",a=" + std::to_string(a) + ",b=" + std::to_string(b);
}

Index support_size(const DenseVector& v, double zero_tol) {
  Index count = 0;
  for (const Complex& z : v.entries()) {
    if (std::abs(z) > zero_tol) ++count;
  }
  return count;
}

EigenBasis build_basis(Index n, const TolerancePolicy& tol) {
  if (n < 1) throw std::invalid_argument("build_basis: n must be positive");
  tol.validate();

  EigenBasis basis;
  basis.n = n;
  basis.eta = eta_pair(n);
  basis.vectors.reserve(static_cast<std::size_t>(n));
  const MultiplicityTable table = multiplicities(n);

  for (int k = 0; k < 4; ++k) {
    const EigenClass cls(k);
    const Index target = table.by_class[static_cast<std::size_t>(k)];
    EliminationState state(static_cast<std::size_t>(n));
    Index accepted = 0;

    for (Index a = 0; a < basis.eta.eta1 && accepted < target; ++a) {
      for (Index b = 0; b < basis.eta.eta2 && accepted < target; ++b) {
        TrainSum sum = project(cls, ModulatedDeltaTrain(n, basis.eta.eta1, a, b));
        if (cancels_symbolically(sum, tol)) {
          ++basis.zero_candidates;
          continue;
        }
        DenseVector dense = densify_sum(sum);
        const double scale = dense.norm();
        if (scale <= tol.residual_tol) {
          ++basis.zero_candidates;
          continue;
        }
        if (!state.try_extend(dense, tol)) {
          ++basis.dependent_candidates;
          continue;
        }
        dense *= Complex(1.0 / scale, 0.0);
        const Index support = support_size(dense, tol.zero_tol);
        basis.vectors.push_back({cls, a, b, std::move(sum), scale, std::move(dense), support});
        ++accepted;
      }
    }
    if (accepted != target) {
      throw BasisConstructionError("build_basis: class k=" + std::to_string(k) + " reached rank " +
                                   std::to_string(accepted) + " of " + std::to_string(target) +
                                   " for n=" + std::to_string(n));
    }
    basis.per_class_counts[static_cast<std::size_t>(k)] = accepted;
  }
  return basis;
}

SparsityAudit audit_sparsity(const EigenBasis& basis, const TolerancePolicy& tol) {
  SparsityAudit audit;
  audit.n = basis.n;
  audit.lower_bound = 0.5 * static_cast<double>(basis.eta.eta1 + basis.eta.eta2);
  audit.upper_bound = 2 * (basis.eta.eta1 + basis.eta.eta2);
  if (basis.vectors.empty()) {
    audit.failures.push_back("basis is empty");
    return audit;
  }

  audit.min_support = basis.vectors.front().support;
  for (const BasisVectorRecord& rec : basis.vectors) {
    const Index support = support_size(rec.dense, tol.zero_tol);
    audit.max_support = std::max(audit.max_support, support);
    audit.min_support = std::min(audit.min_support, support);
    if (static_cast<double>(support) < audit.lower_bound - tol.zero_tol) {
      audit.failures.push_back(rec.label() + ": support " + std::to_string(support) +
                               " below lower bound " + std::to_string(audit.lower_bound));
    }
    if (support > audit.upper_bound) {
      audit.failures.push_back(rec.label() + ": support " + std::to_string(support) +
                               " above upper bound " + std::to_string(audit.upper_bound));
    }
  }
  audit.ratio = audit.min_support > 0
                    ? static_cast<double>(audit.max_support) / static_cast<double>(audit.min_support)
                    : std::numeric_limits<double>::infinity();
  audit.ratio_to_lower_bound = static_cast<double>(audit.max_support) / audit.lower_bound;
  if (audit.ratio > 4.0) {
    audit.failures.push_back("max/min support ratio " + std::to_string(audit.ratio) + " exceeds 4");
  }
  if (audit.ratio_to_lower_bound > 4.0) {
    audit.failures.push_back("max support / lower bound ratio " +
                             std::to_string(audit.ratio_to_lower_bound) + " exceeds 4");
  }
  audit.passed = audit.failures.empty();
  return audit;
}

bool check_uncertainty(const DenseVector& v, const TolerancePolicy& tol) {
  const double scale = v.norm();
  if (!(scale > tol.zero_tol)) throw std::invalid_argument("check_uncertainty: vector is numerically zero");
  const DenseVector unit = (1.0 / scale) * v;
  const Index n = static_cast<Index>(v.size());
  const Index s = support_size(unit, tol.zero_tol);
  const Index s_hat = support_size(naive_dft(unit), tol.zero_tol);

  if (s * s_hat < n) return false;

  const std::vector<Index> divs = divisors(n);
  for (std::size_t i = 0; i + 1 < divs.size(); ++i) {
    const Index d1 = divs[i];
    const Index d2 = divs[i + 1];
    if (s < d1 || s > d2) continue;
    if (s_hat * d1 * d2 < n * (d1 + d2 - s)) return false;
  }
  return true;
}

GramReport gram_report(const EigenBasis& basis, const TolerancePolicy& tol) {
  GramReport report;
  report.n = basis.n;
  const auto& vecs = basis.vectors;
  double witness_mag = -1.0;
  for (std::size_t i = 0; i < vecs.size(); ++i) {
    for (std::size_t j = i + 1; j < vecs.size(); ++j) {
      const Complex value = inner(vecs[i].dense, vecs[j].dense);
      const double mag = std::abs(value);
      report.max_offdiag = std::max(report.max_offdiag, mag);
      if (vecs[i].k != vecs[j].k) report.max_cross_class = std::max(report.max_cross_class, mag);
      const bool neither = mag > tol.residual_tol && mag < 1.0 - tol.residual_tol;
      if (neither && mag > witness_mag) {
        witness_mag = mag;
        report.witness = GramWitness{i, j, value};
      }
    }
  }
  report.is_orthogonal = report.max_offdiag <= tol.residual_tol;
  if (report.is_orthogonal) report.witness.reset();
  return report;
}

namespace {

SurveyRow survey_one(Index n, const TolerancePolicy& tol) {
  const EigenBasis basis = build_basis(n, tol);
  const SparsityAudit audit = audit_sparsity(basis, tol);
  const GramReport gram = gram_report(basis, tol);
  SurveyRow row;
  row.n = n;
  row.eta = basis.eta;
  row.max_support = audit.max_support;
  row.lower_bound = audit.lower_bound;
  row.is_orthogonal = gram.is_orthogonal;
  row.witness = gram.witness;
  if (gram.witness) {
    row.witness_labels = basis.vectors[gram.witness->first].label() + "|" +
                         basis.vectors[gram.witness->second].label();
  }
  return row;
}

}  // namespace

std::vector<SurveyRow> orthogonality_survey(Index max_n, const TolerancePolicy& tol, unsigned workers) {
  if (max_n < 2) throw std::invalid_argument("orthogonality_survey: max_n must be at least 2");
  tol.validate();
  std::vector<SurveyRow> rows(static_cast<std::size_t>(max_n - 1));
  if (workers <= 1) {
    for (Index n = 2; n <= max_n; ++n) rows[static_cast<std::size_t>(n - 2)] = survey_one(n, tol);
    return rows;
  }

  // Each n writes its own slot, so the result does not depend on scheduling.
  std::atomic<Index> next{2};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (Index n = next++; n <= max_n; n = next++) {
      try {
        rows[static_cast<std::size_t>(n - 2)] = survey_one(n, tol);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  for (std::thread& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return rows;
}

}  // namespace sparsedft
