#include "sparsedft/delta_train.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>

namespace sparsedft {
namespace {

Index mod(Index x, Index m) {
  Index r = x % m;
  return r < 0 ? r + m : r;
}

// Inverse of a modulo m for gcd(a, m) = 1.
Index inverse_mod(Index a, Index m) {
  if (m == 1) return 0;
  Index old_r = mod(a, m), r = m;
  Index old_s = 1, s = 0;
  while (r != 0) {
    const Index q = old_r / r;
    old_r -= q * r;
    std::swap(old_r, r);
    old_s -= q * s;
    std::swap(old_s, s);
  }
  return mod(old_s, m);
}

}  // namespace

DivisorPair eta_pair(Index n) {
  if (n < 1) throw std::invalid_argument("eta_pair: n must be positive");
  Index eta1 = 1;
  for (Index d = 1; d * d <= n; ++d) {
    if (n % d == 0) eta1 = d;
  }
  return {n, eta1, n / eta1};
}

std::vector<Index> divisors(Index n) {
  if (n < 1) throw std::invalid_argument("divisors: n must be positive");
  std::vector<Index> low, high;
  for (Index d = 1; d * d <= n; ++d) {
    if (n % d != 0) continue;
    low.push_back(d);
    if (d != n / d) high.push_back(n / d);
  }
  low.insert(low.end(), high.rbegin(), high.rend());
  return low;
}

ModulatedDeltaTrain::ModulatedDeltaTrain(Index n, Index stride, Index offset, Index modulation,
                                         Complex phase)
    : n_(n), stride_(stride) {
  if (n < 1) throw std::invalid_argument("ModulatedDeltaTrain: n must be positive");
  if (stride < 1 || n % stride != 0) {
    throw std::invalid_argument("ModulatedDeltaTrain: stride " + std::to_string(stride) +
                                " does not divide n = " + std::to_string(n));
  }
  if (!std::isfinite(phase.real()) || !std::isfinite(phase.imag())) {
    throw std::invalid_argument("ModulatedDeltaTrain: phase must be finite");
  }
  const Index d2 = n / stride;
  offset_ = mod(offset, stride);
  modulation_ = mod(modulation, d2);
  // modulation = modulation_ + q*d2 contributes omega^{-q d2 a} on the support.
  const Index q = (modulation - modulation_) / d2;
  phase_ = phase * omega_pow(n, mod(-q, stride) * d2 * offset_);
}

Complex ModulatedDeltaTrain::entry(Index j) const {
  if (j < 0 || j >= n_) throw std::out_of_range("ModulatedDeltaTrain::entry: index out of range");
  if (j % stride_ != offset_) return {0.0, 0.0};
  return phase_ * omega_pow(n_, -modulation_ * j) / std::sqrt(static_cast<double>(cofactor()));
}

ModulatedDeltaTrain ModulatedDeltaTrain::with_phase(Complex phase) const {
  return {n_, stride_, offset_, modulation_, phase};
}

DenseVector densify(const ModulatedDeltaTrain& g) {
  DenseVector v(static_cast<std::size_t>(g.n()));
  const double amplitude = 1.0 / std::sqrt(static_cast<double>(g.cofactor()));
  for (Index j = g.offset(); j < g.n(); j += g.stride()) {
    v[static_cast<std::size_t>(j)] = g.phase() * omega_pow(g.n(), -g.modulation() * j) * amplitude;
  }
  return v;
}

ModulatedDeltaTrain dft_train(const ModulatedDeltaTrain& g) {
  const Index a = g.offset();
  const Index b = g.modulation();
  return {g.n(), g.cofactor(), b, -a, g.phase() * omega_pow(g.n(), -a * b)};
}

ModulatedDeltaTrain dft_train_pow(const ModulatedDeltaTrain& g, int power) {
  if (power < 0 || power > 3) throw std::invalid_argument("dft_train_pow: power must be in 0..3");
  ModulatedDeltaTrain out = g;
  for (int step = 0; step < power; ++step) out = dft_train(out);
  return out;
}

Complex train_inner(const ModulatedDeltaTrain& g, const ModulatedDeltaTrain& h) {
  if (g.n() != h.n()) throw std::invalid_argument("train_inner: dimension mismatch");
  const Index n = g.n();
  const Index d = g.stride();
  const Index e = h.stride();
  const Index common = std::gcd(d, e);
  if (mod(h.offset() - g.offset(), common) != 0) return {0.0, 0.0};

  // j0 = g.offset + d*t solves j0 = h.offset (mod e).
  const Index period = std::lcm(d, e);
  const Index reduced_mod = e / common;
  const Index t =
      mod(((h.offset() - g.offset()) / common) * inverse_mod(d / common, reduced_mod), reduced_mod);
  const Index j0 = g.offset() + d * t;

  // Summand omega^{(b' - b) j} over j = j0 + period*s, s = 0..n/period-1.
  const Index delta = h.modulation() - g.modulation();
  if (mod(delta * period, n) != 0) return {0.0, 0.0};
  const double count = static_cast<double>(n / period);
  const double amplitude = 1.0 / std::sqrt(static_cast<double>(g.cofactor() * h.cofactor()));
  return g.phase() * std::conj(h.phase()) * omega_pow(n, delta * j0) * (count * amplitude);
}

}  // namespace sparsedft
