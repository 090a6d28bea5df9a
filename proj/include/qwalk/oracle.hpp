#pragma once

#include <array>
#include <map>
#include <vector>

#include "qwalk/message.hpp"

namespace qwalk::oracle {

enum class Spin : std::size_t { up = 0, down = 1 };

using Spinor = std::array<Complex, 2>;
using ProbabilityMap = std::map<int, double>;

/// Walk state over occupied lattice sites; spin up moves to x-1 under the
/// shift operator, spin down to x+1.
class StateVector {
 public:
  StateVector() = default;

  /// amplitude * |site, spin>.
  static StateVector basis(int site, Spin spin, Complex amplitude = 1.0);

  void add(int site, Spin spin, Complex amplitude) {
    amplitudes_[site][static_cast<std::size_t>(spin)] += amplitude;
  }
  [[nodiscard]] Complex amplitude(int site, Spin spin) const;
  [[nodiscard]] const std::map<int, Spinor>& amplitudes() const noexcept { return amplitudes_; }

  [[nodiscard]] double norm_squared() const noexcept;
  /// Per-site probability summed over spin.
  [[nodiscard]] ProbabilityMap probabilities() const;

 private:
  std::map<int, Spinor> amplitudes_;
};

/// Applies a 2x2 coin at every site, then the shift.
[[nodiscard]] StateVector coin_and_shift(const StateVector& state, const std::array<Spinor, 2>& coin);

/// 2^-l C(l, (x+l)/2) on sites with x+l even.
[[nodiscard]] ProbabilityMap srw_distribution(int steps);

/// Exact evolution of the path-encoded network: S B |0,up> for the first step,
/// then S T per step with T = P2 B P1. Element l-1 holds p(x, l).
/// Valid for 1 <= levels <= 20.
[[nodiscard]] std::vector<ProbabilityMap> jeong_evolve(int levels, double phi1, double phi2);

/// Literal closed-form probabilities for 1 <= step <= 5.
[[nodiscard]] ProbabilityMap closed_form(int step, double phi2);

struct WalkResult {
  StateVector state;
  ProbabilityMap probabilities;
};

/// (S H)^steps applied to `initial`. The norm of `initial` is kept; no
/// renormalization happens.
[[nodiscard]] WalkResult hadamard_walk(int steps, const StateVector& initial);

/// Reference distributions for the polarization walk: no removal; removal of
/// x = +1 at t2 (keeps |-1,up>/sqrt2); removal of x = -1 (keeps |+1,down>/sqrt2);
/// and the sum of the two filtered cases.
struct RobensPanels {
  ProbabilityMap unfiltered;
  ProbabilityMap kept_minus;
  ProbabilityMap kept_plus;
  ProbabilityMap filtered_sum;
};
[[nodiscard]] RobensPanels robens_panels();

/// Half the L1 distance over the union of supports.
[[nodiscard]] double total_variation(const ProbabilityMap& a, const ProbabilityMap& b);

/// Largest per-site absolute difference over the union of supports.
[[nodiscard]] double max_abs_difference(const ProbabilityMap& a, const ProbabilityMap& b);

}  // namespace qwalk::oracle
