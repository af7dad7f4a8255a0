#include "sparsedft/eigenprojection.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace sparsedft {

EigenClass::EigenClass(int k) : k_(k) {
  if (k < 0 || k > 3) throw std::invalid_argument("EigenClass: k must be in 0..3, got " + std::to_string(k));
}

Complex EigenClass::eigenvalue() const noexcept { return i_pow(-k_); }

Complex i_pow(int e) noexcept {
  switch (((e % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

TrainSum::TrainSum(Index n) : n_(n) {
  if (n < 1) throw std::invalid_argument("TrainSum: n must be positive");
}

void TrainSum::add(Complex coefficient, const ModulatedDeltaTrain& train) {
  if (train.n() != n_) throw std::invalid_argument("TrainSum::add: dimension mismatch");
  if (terms_.size() == kMaxTerms) throw std::length_error("TrainSum::add: at most four terms");
  terms_.push_back({coefficient, train});
}

TrainSum project(EigenClass k, const ModulatedDeltaTrain& g) {
  TrainSum sum(g.n());
  ModulatedDeltaTrain power = g;
  for (int j = 0; j < 4; ++j) {
    sum.add(0.25 * i_pow(j * k.k()), power);
    power = dft_train(power);
  }
  return sum;
}

DenseVector densify_sum(const TrainSum& s) {
  DenseVector v(static_cast<std::size_t>(s.n()));
  for (const TrainTerm& term : s.terms()) {
    const ModulatedDeltaTrain& g = term.train;
    const Complex weight = term.coefficient * g.phase() / std::sqrt(static_cast<double>(g.cofactor()));
    for (Index j = g.offset(); j < g.n(); j += g.stride()) {
      v[static_cast<std::size_t>(j)] += weight * omega_pow(g.n(), -g.modulation() * j);
    }
  }
  return v;
}

Index support_bound(const TrainSum& s) {
  Index bound = 0;
  for (const TrainTerm& term : s.terms()) bound += term.train.support_size();
  return bound;
}

bool cancels_symbolically(const TrainSum& s, const TolerancePolicy& tol) {
  const auto& terms = s.terms();
  std::vector<bool> merged(terms.size(), false);
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (merged[i]) continue;
    Complex weight = terms[i].coefficient * terms[i].train.phase();
    for (std::size_t j = i + 1; j < terms.size(); ++j) {
      if (!merged[j] && terms[j].train.same_label(terms[i].train)) {
        weight += terms[j].coefficient * terms[j].train.phase();
        merged[j] = true;
      }
    }
    if (std::abs(weight) > tol.zero_tol) return false;
  }
  return true;
}

double verify_eigenvector(const DenseVector& v, EigenClass k, const TolerancePolicy& tol) {
  const double scale = v.norm();
  if (!(scale > tol.zero_tol)) {
    throw std::invalid_argument("verify_eigenvector: vector is numerically zero");
  }
  DenseVector residual = naive_dft(v);
  residual -= k.eigenvalue() * v;
  return residual.norm() / scale;
}

}  // namespace sparsedft
