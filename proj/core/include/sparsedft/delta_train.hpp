#pragma once

// Modulated delta trains: vectors supported on one residue class mod a
// divisor of n, carrying a linear phase ramp. Kept symbolic (stride, offset,
// modulation, phase) so the DFT acts on them in O(1).

#include "sparsedft/numerics.hpp"

namespace sparsedft {

/// The divisors of n closest to sqrt(n) from below (eta1) and above (eta2).
struct DivisorPair {
  Index n = 1;
  Index eta1 = 1;
  Index eta2 = 1;

  bool is_square() const noexcept { return eta1 == eta2; }
  bool operator==(const DivisorPair&) const = default;
};

DivisorPair eta_pair(Index n);

/// Divisors of n in ascending order.
std::vector<Index> divisors(Index n);

/// phase * g_{d1}(a, b), where (g_{d1}(a, b))_j = omega^{-b j} / sqrt(n / d1)
/// when j = a (mod d1) and 0 otherwise.
///
/// The constructor accepts any integer offset and modulation and reduces
/// them to [0, d1) and [0, d2). Shifting the modulation by a multiple of d2
/// changes the vector by a unit factor, which is folded into the phase, so
/// the stored labels always describe the same vector that was requested.
class ModulatedDeltaTrain {
 public:
  ModulatedDeltaTrain(Index n, Index stride, Index offset, Index modulation,
                      Complex phase = {1.0, 0.0});

  Index n() const noexcept { return n_; }
  Index stride() const noexcept { return stride_; }        ///< d1
  Index cofactor() const noexcept { return n_ / stride_; }  ///< d2, also the support size
  Index offset() const noexcept { return offset_; }         ///< a in [0, d1)
  Index modulation() const noexcept { return modulation_; } ///< b in [0, d2)
  Complex phase() const noexcept { return phase_; }

  Index support_size() const noexcept { return cofactor(); }

  /// Coordinate j of the densified vector.
  Complex entry(Index j) const;

  /// Same (n, stride, offset, modulation); the phase may differ.
  bool same_label(const ModulatedDeltaTrain& other) const noexcept {
    return n_ == other.n_ && stride_ == other.stride_ && offset_ == other.offset_ &&
           modulation_ == other.modulation_;
  }

  ModulatedDeltaTrain with_phase(Complex phase) const;

 private:
  Index n_;
  Index stride_;
  Index offset_;
  Index modulation_;
  Complex phase_;
};

DenseVector densify(const ModulatedDeltaTrain& g);

/// D g in closed form: D g_{d1}(a, b) = omega^{-ab} g_{d2}(b, -a).
ModulatedDeltaTrain dft_train(const ModulatedDeltaTrain& g);

/// D^power g for power in 0..3.
ModulatedDeltaTrain dft_train_pow(const ModulatedDeltaTrain& g, int power);

/// inner(densify(g), densify(h)) without densifying. The supports intersect
/// in an arithmetic progression of stride lcm(d1, d1'), over which the
/// summand is a geometric sequence that sums to either 0 or its length.
Complex train_inner(const ModulatedDeltaTrain& g, const ModulatedDeltaTrain& h);

}  // namespace sparsedft
