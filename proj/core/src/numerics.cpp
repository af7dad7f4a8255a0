#include "sparsedft/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

namespace sparsedft {

void TolerancePolicy::validate() const {
  auto check = [](double value, const char* name) {
    if (!(value > 0.0 && value <= 1e-6)) {
      throw std::invalid_argument(std::string(name) + " must lie in (0, 1e-6], got " +
                                  std::to_string(value));
    }
  };
  check(zero_tol, "zero_tol");
  check(residual_tol, "residual_tol");
}

DenseVector::DenseVector(std::size_t n) : entries_(n) {
  if (n == 0) throw std::invalid_argument("DenseVector: dimension must be positive");
}

DenseVector::DenseVector(std::vector<Complex> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw std::invalid_argument("DenseVector: dimension must be positive");
  if (!all_finite()) throw std::invalid_argument("DenseVector: entries must be finite");
}

DenseVector DenseVector::unit(std::size_t n, std::size_t j) {
  if (j >= n) throw std::out_of_range("DenseVector::unit: index out of range");
  DenseVector v(n);
  v[j] = 1.0;
  return v;
}

double DenseVector::norm() const {
  // Scaled accumulation is unnecessary at the magnitudes used here.
  double sum = 0.0;
  for (const Complex& z : entries_) sum += std::norm(z);
  return std::sqrt(sum);
}

bool DenseVector::all_finite() const {
  for (const Complex& z : entries_) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

DenseVector& DenseVector::operator+=(const DenseVector& other) {
  if (other.size() != size()) throw std::invalid_argument("DenseVector: dimension mismatch");
  for (std::size_t j = 0; j < size(); ++j) entries_[j] += other.entries_[j];
  return *this;
}

DenseVector& DenseVector::operator-=(const DenseVector& other) {
  if (other.size() != size()) throw std::invalid_argument("DenseVector: dimension mismatch");
  for (std::size_t j = 0; j < size(); ++j) entries_[j] -= other.entries_[j];
  return *this;
}

DenseVector& DenseVector::operator*=(Complex scale) {
  for (Complex& z : entries_) z *= scale;
  return *this;
}

Complex omega_pow(Index n, Index e) {
  if (n <= 0) throw std::invalid_argument("omega_pow: n must be positive");
  Index r = e % n;
  if (r < 0) r += n;
  if (r == 0) return {1.0, 0.0};
  // Exact values at the quarter turns keep symbolic phases clean.
  if (4 * r == n) return {0.0, -1.0};
  if (2 * r == n) return {-1.0, 0.0};
  if (4 * r == 3 * n) return {0.0, 1.0};
  const double angle = -2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(n);
  return {std::cos(angle), std::sin(angle)};
}

DenseVector naive_dft(const DenseVector& v) {
  const std::size_t n = v.size();
  if (n == 0) throw std::invalid_argument("naive_dft: empty vector");
  std::vector<Complex> roots(n);
  for (std::size_t m = 0; m < n; ++m) roots[m] = omega_pow(static_cast<Index>(n), static_cast<Index>(m));

  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  DenseVector w(n);
  for (std::size_t j = 0; j < n; ++j) {
    Complex acc{0.0, 0.0};
    for (std::size_t k = 0; k < n; ++k) acc += roots[(j * k) % n] * v[k];
    w[j] = acc * scale;
  }
  return w;
}

DenseVector dft_pow(const DenseVector& v, int power) {
  if (power < 0 || power > 3) throw std::invalid_argument("dft_pow: power must be in 0..3");
  DenseVector w = v;
  for (int step = 0; step < power; ++step) w = naive_dft(w);
  return w;
}

Complex inner(const DenseVector& x, const DenseVector& y) {
  if (x.size() != y.size()) throw std::invalid_argument("inner: dimension mismatch");
  Complex acc{0.0, 0.0};
  for (std::size_t j = 0; j < x.size(); ++j) acc += x[j] * std::conj(y[j]);
  return acc;
}

double max_abs_diff(const DenseVector& x, const DenseVector& y) {
  if (x.size() != y.size()) throw std::invalid_argument("max_abs_diff: dimension mismatch");
  double worst = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) worst = std::max(worst, std::abs(x[j] - y[j]));
  return worst;
}

EliminationState::EliminationState(std::size_t dim) : dim_(dim) {
  if (dim == 0) throw std::invalid_argument("EliminationState: dimension must be positive");
}

bool EliminationState::try_extend(const DenseVector& v, const TolerancePolicy& tol) {
  if (v.size() != dim_) throw std::invalid_argument("try_extend: dimension mismatch");
  if (rank() == dim_) return false;
  const double scale = v.norm();
  if (scale == 0.0) return false;

  DenseVector residual = v;
  // Two MGS sweeps; one pass loses orthogonality once pivots pile up.
  for (int sweep = 0; sweep < 2; ++sweep) {
    for (const DenseVector& pivot : pivots_) {
      const Complex c = inner(residual, pivot);
      for (std::size_t j = 0; j < dim_; ++j) residual[j] -= c * pivot[j];
    }
  }
  const double rnorm = residual.norm();
  if (!(rnorm > tol.residual_tol * scale)) return false;
  residual *= Complex(1.0 / rnorm, 0.0);
  pivots_.push_back(std::move(residual));
  return true;
}

ExtendResult try_extend_rank(EliminationState state, const DenseVector& v,
                             const TolerancePolicy& tol) {
  const bool accepted = state.try_extend(v, tol);
  return {accepted, std::move(state)};
}

}  // namespace sparsedft
