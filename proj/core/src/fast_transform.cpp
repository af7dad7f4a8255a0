#include "sparsedft/fast_transform.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace sparsedft {

FftPlan::FftPlan(std::size_t n) : n_(n) {
  if (n == 0) throw std::invalid_argument("FftPlan: length must be positive");
  std::size_t rest = n;
  for (std::size_t p = 2; p * p <= rest; ++p) {
    while (rest % p == 0) {
      factors_.push_back(p);
      rest /= p;
    }
  }
  if (rest > 1) factors_.push_back(rest);

  roots_.resize(n);
  for (std::size_t e = 0; e < n; ++e) {
    const double angle = -2.0 * std::numbers::pi * static_cast<double>(e) / static_cast<double>(n);
    roots_[e] = {std::cos(angle), std::sin(angle)};
  }
}

void FftPlan::execute(std::span<const Complex> in, std::span<Complex> out) const {
  if (in.size() != n_ || out.size() != n_) throw std::invalid_argument("FftPlan::execute: length mismatch");
  std::vector<Complex> scratch;
  transform(in.data(), 1, out.data(), n_, 0, scratch);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n_));
  for (Complex& z : out) z *= scale;
}

// Decimation in time: len = p * m, Y_r = DFT_m(in[r + p t]) is written to
// out[r m .. r m + m), then out[k1 + m k2] = sum_r W_p^{r k2} W_len^{r k1} Y_r[k1].
void FftPlan::transform(const Complex* in, std::size_t in_stride, Complex* out, std::size_t len,
                        std::size_t level, std::vector<Complex>& scratch) const {
  if (len == 1) {
    out[0] = in[0];
    return;
  }
  const std::size_t p = factors_[level];
  const std::size_t m = len / p;
  for (std::size_t r = 0; r < p; ++r) {
    transform(in + r * in_stride, in_stride * p, out + r * m, m, level + 1, scratch);
  }

  const std::size_t len_step = n_ / len;  // W_len^e = roots_[e * len_step]
  const std::size_t p_step = n_ / p;      // W_p^e = roots_[e * p_step]
  const std::size_t base = scratch.size();
  scratch.resize(base + p);
  Complex* twiddled = scratch.data() + base;
  for (std::size_t k1 = 0; k1 < m; ++k1) {
    for (std::size_t r = 0; r < p; ++r) {
      twiddled[r] = roots_[((r * k1) % len) * len_step] * out[r * m + k1];
    }
    for (std::size_t k2 = 0; k2 < p; ++k2) {
      Complex acc = twiddled[0];
      for (std::size_t r = 1; r < p; ++r) acc += roots_[((r * k2) % p) * p_step] * twiddled[r];
      out[k1 + m * k2] = acc;
    }
  }
  scratch.resize(base);
}

DenseVector fft(const DenseVector& v) {
  const FftPlan plan(v.size());
  DenseVector out(v.size());
  plan.execute(v.entries(), out.entries());
  return out;
}

TrainCorrelations train_correlations(const DenseVector& v, Index stride) {
  const Index n = static_cast<Index>(v.size());
  if (stride < 1 || n % stride != 0) {
    throw std::invalid_argument("train_correlations: stride " + std::to_string(stride) +
                                " does not divide n = " + std::to_string(n));
  }
  const Index cofactor = n / stride;
  TrainCorrelations result{stride, cofactor, std::vector<Complex>(static_cast<std::size_t>(n))};

  const FftPlan plan(static_cast<std::size_t>(cofactor));
  std::vector<Complex> gathered(static_cast<std::size_t>(cofactor));
  for (Index a = 0; a < stride; ++a) {
    for (Index t = 0; t < cofactor; ++t) gathered[static_cast<std::size_t>(t)] = v[static_cast<std::size_t>(a + stride * t)];
    std::span<Complex> row(result.values.data() + a * cofactor, static_cast<std::size_t>(cofactor));
    plan.execute(gathered, row);
    // <v, g(a, b)> = omega^{ab} (DFT_{d2} of the gathered samples)_b
    for (Index b = 0; b < cofactor; ++b) row[static_cast<std::size_t>(b)] *= omega_pow(n, a * b);
  }
  return result;
}

CorrelationTensor analyze(const DenseVector& v) {
  const Index n = static_cast<Index>(v.size());
  CorrelationTensor tensor;
  tensor.n = n;
  tensor.eta = eta_pair(n);
  const Index eta1 = tensor.eta.eta1;
  const Index eta2 = tensor.eta.eta2;

  const TrainCorrelations short_stride = train_correlations(v, eta1);
  const TrainCorrelations long_stride = eta1 == eta2 ? short_stride : train_correlations(v, eta2);
  auto lookup = [&](const ModulatedDeltaTrain& g) {
    // <v, p g> = conj(p) <v, g>
    const TrainCorrelations& table = g.stride() == eta1 ? short_stride : long_stride;
    return std::conj(g.phase()) * table.at(g.offset(), g.modulation());
  };

  // Correlations with D^j g for j = 0..3, shared by all four classes.
  tensor.values.resize(static_cast<std::size_t>(4 * n));
  std::array<Complex, 4> powers{};
  for (Index a = 0; a < eta1; ++a) {
    for (Index b = 0; b < eta2; ++b) {
      ModulatedDeltaTrain g(n, eta1, a, b);
      for (int j = 0; j < 4; ++j) {
        powers[static_cast<std::size_t>(j)] = lookup(g);
        g = dft_train(g);
      }
      for (int k = 0; k < 4; ++k) {
        Complex acc{0.0, 0.0};
        for (int j = 0; j < 4; ++j) acc += std::conj(0.25 * i_pow(j * k)) * powers[static_cast<std::size_t>(j)];
        tensor.values[static_cast<std::size_t>((k * eta1 + a) * eta2 + b)] = acc;
      }
    }
  }
  return tensor;
}

struct CoefficientSolver::Factorization {
  std::array<std::vector<std::size_t>, 4> members;
  std::array<Eigen::ColPivHouseholderQR<Eigen::MatrixXcd>, 4> qr;
};

CoefficientSolver::CoefficientSolver(const EigenBasis& basis, const TolerancePolicy& tol)
    : basis_(&basis) {
  tol.validate();
  if (static_cast<Index>(basis.vectors.size()) != basis.n) {
    throw std::invalid_argument("CoefficientSolver: basis has " + std::to_string(basis.vectors.size()) +
                                " vectors for n = " + std::to_string(basis.n));
  }
  auto factors = std::make_shared<Factorization>();
  for (std::size_t j = 0; j < basis.vectors.size(); ++j) {
    factors->members[static_cast<std::size_t>(basis.vectors[j].k.k())].push_back(j);
  }

  // Different classes are orthogonal, so only within-class overlaps matter.
  double max_offdiag = 0.0;
  for (const auto& idx : factors->members) {
    for (std::size_t i = 0; i < idx.size(); ++i) {
      for (std::size_t j = i + 1; j < idx.size(); ++j) {
        max_offdiag = std::max(max_offdiag, std::abs(inner(basis.vectors[idx[j]].dense, basis.vectors[idx[i]].dense)));
      }
    }
  }
  orthogonal_ = max_offdiag <= tol.residual_tol;
  if (!orthogonal_) {
    const auto rows = static_cast<Eigen::Index>(basis.n);
    for (std::size_t k = 0; k < 4; ++k) {
      const auto& idx = factors->members[k];
      if (idx.empty()) continue;
      Eigen::MatrixXcd block(rows, static_cast<Eigen::Index>(idx.size()));
      for (std::size_t c = 0; c < idx.size(); ++c) {
        const DenseVector& u = basis.vectors[idx[c]].dense;
        for (Eigen::Index r = 0; r < rows; ++r) block(r, static_cast<Eigen::Index>(c)) = u[static_cast<std::size_t>(r)];
      }
      auto& qr = factors->qr[k];
      qr.compute(block);
      const auto& R = qr.matrixQR();
      const double top = std::abs(R(0, 0));
      const double bottom = std::abs(R(R.cols() - 1, R.cols() - 1));
      if (!(bottom > 0.0)) {
        throw std::runtime_error("CoefficientSolver: class k=" + std::to_string(k) +
                                 " block is singular; the basis is corrupted");
      }
      rcond_ = std::min(rcond_, bottom / top);
    }
  }
  factors_ = std::move(factors);
}

CoefficientVector CoefficientSolver::solve_once(const DenseVector& v) const {
  const EigenBasis& basis = *basis_;
  CoefficientVector out{basis.n, std::vector<Complex>(basis.vectors.size())};
  if (orthogonal_) {
    // <v, u_j> where u_j = F_k g / scale_j.
    const CorrelationTensor tensor = analyze(v);
    for (std::size_t j = 0; j < basis.vectors.size(); ++j) {
      const BasisVectorRecord& rec = basis.vectors[j];
      out.coefficients[j] = tensor.at(rec.k.k(), rec.a, rec.b) / rec.scale;
    }
    return out;
  }

  // F_k v = (1/4) sum_j i^{jk} D^j v; the class blocks are solved independently.
  const FftPlan plan(v.size());
  std::array<DenseVector, 4> powers{v, v, v, v};
  for (std::size_t j = 1; j < 4; ++j) plan.execute(powers[j - 1].entries(), powers[j].entries());
  const auto rows = static_cast<Eigen::Index>(v.size());
  for (std::size_t k = 0; k < 4; ++k) {
    const auto& idx = factors_->members[k];
    if (idx.empty()) continue;
    Eigen::VectorXcd rhs(rows);
    for (Eigen::Index r = 0; r < rows; ++r) {
      Complex acc{0.0, 0.0};
      for (int j = 0; j < 4; ++j) {
        acc += 0.25 * i_pow(j * static_cast<int>(k)) * powers[static_cast<std::size_t>(j)][static_cast<std::size_t>(r)];
      }
      rhs(r) = acc;
    }
    const Eigen::VectorXcd solved = factors_->qr[k].solve(rhs);
    for (std::size_t i = 0; i < idx.size(); ++i) out.coefficients[idx[i]] = solved(static_cast<Eigen::Index>(i));
  }
  return out;
}

CoefficientVector CoefficientSolver::solve(const DenseVector& v) const {
  if (static_cast<Index>(v.size()) != basis_->n) {
    throw std::invalid_argument("CoefficientSolver::solve: vector has dimension " + std::to_string(v.size()) +
                                ", basis has n = " + std::to_string(basis_->n));
  }
  CoefficientVector c = solve_once(v);
  if (orthogonal_) return c;
  const DenseVector residual = v - synthesize(c, *basis_);
  const CoefficientVector correction = solve_once(residual);
  for (std::size_t j = 0; j < c.coefficients.size(); ++j) c.coefficients[j] += correction.coefficients[j];
  return c;
}

CoefficientVector to_coefficients(const DenseVector& v, const EigenBasis& basis, const TolerancePolicy& tol) {
  return CoefficientSolver(basis, tol).solve(v);
}

DenseVector synthesize(const CoefficientVector& c, const EigenBasis& basis) {
  if (c.coefficients.size() != basis.vectors.size()) {
    throw std::invalid_argument("synthesize: " + std::to_string(c.coefficients.size()) +
                                " coefficients for " + std::to_string(basis.vectors.size()) + " basis vectors");
  }
  DenseVector out(static_cast<std::size_t>(basis.n));
  for (std::size_t j = 0; j < basis.vectors.size(); ++j) {
    const BasisVectorRecord& rec = basis.vectors[j];
    if (c.coefficients[j] == Complex{}) continue;
    const Complex weight = c.coefficients[j] / rec.scale;
    for (const TrainTerm& term : rec.sum.terms()) {
      const ModulatedDeltaTrain& g = term.train;
      const Complex w = weight * term.coefficient * g.phase() / std::sqrt(static_cast<double>(g.cofactor()));
      for (Index i = g.offset(); i < g.n(); i += g.stride()) {
        out[static_cast<std::size_t>(i)] += w * omega_pow(g.n(), -g.modulation() * i);
      }
    }
  }
  return out;
}

}  // namespace sparsedft
