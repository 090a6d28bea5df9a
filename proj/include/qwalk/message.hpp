#pragma once

#include <complex>

namespace qwalk {

using Complex = std::complex<double>;

/// Two-component complex payload carried by a particle.
///
/// `h` and `v` are the horizontal and vertical polarization amplitudes. In
/// walk language h is spin up (moves to x-1) and v is spin down (moves to
/// x+1). Every message emitted by a unit has unit norm.
struct Message {
  Complex h{1.0, 0.0};
  Complex v{0.0, 0.0};

  [[nodiscard]] double norm_squared() const noexcept { return std::norm(h) + std::norm(v); }

  friend bool operator==(const Message&, const Message&) = default;
};

/// Multiplies the whole message by exp(i*phi).
[[nodiscard]] Message phase_shift(double phi, const Message& m) noexcept;

/// Applies H = [[1, 1], [1, -1]] / sqrt(2) to (h, v).
[[nodiscard]] Message hadamard_apply(const Message& m) noexcept;

}  // namespace qwalk
