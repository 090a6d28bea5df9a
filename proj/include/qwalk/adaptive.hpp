#pragma once

#include <array>
#include <cstdint>

#include "qwalk/message.hpp"
#include "qwalk/rng.hpp"

namespace qwalk {

enum class Port : std::uint8_t { zero = 0, one = 1 };

[[nodiscard]] constexpr std::size_t index(Port p) noexcept { return static_cast<std::size_t>(p); }
[[nodiscard]] constexpr Port other(Port p) noexcept { return p == Port::zero ? Port::one : Port::zero; }

/// Internal registers of an adaptive two-port unit.
///
/// `w` holds the relative arrival frequency of each input port; `y` holds the
/// exponentially averaged message per port in (port, polarization) order:
/// y[0] = y0h, y[1] = y0v, y[2] = y1h, y[3] = y1v. `gamma` is the memory of
/// the averages: 0 makes the unit memoryless, values near 1 make it slow.
struct AdaptiveState {
  std::array<double, 2> w{0.5, 0.5};
  std::array<Complex, 4> y{};
  double gamma = 0.95;

  [[nodiscard]] Complex yh(Port p) const noexcept { return y[2 * index(p)]; }
  [[nodiscard]] Complex yv(Port p) const noexcept { return y[2 * index(p) + 1]; }

  friend bool operator==(const AdaptiveState&, const AdaptiveState&) = default;
};

/// Register reset used at the start of every run: w = (1/2, 1/2), each y_k a
/// random unit-norm message drawn from `rng`.
[[nodiscard]] AdaptiveState initial_state(double gamma, RngStream& rng);

/// Uniformly distributed unit-norm message (Haar measure on C^2).
[[nodiscard]] Message random_unit_message(RngStream& rng);

/// Registers after a particle carrying `m` arrives on `port`.
[[nodiscard]] AdaptiveState adaptive_update(AdaptiveState s, Port port, const Message& m) noexcept;

/// 4x4 unitary acting on (port x polarization) amplitude vectors.
using PortUnitary = std::array<std::array<Complex, 4>, 4>;

/// M_BS (x) I_2 with M_BS = [[1, i], [i, 1]] / sqrt(2).
[[nodiscard]] const PortUnitary& beam_splitter_unitary();

/// h transmitted, v reflected with phase i:
/// out0h = in0h, out0v = i in1v, out1h = in1h, out1v = i in0v.
[[nodiscard]] const PortUnitary& polarizing_beam_splitter_unitary();

[[nodiscard]] bool is_unitary(const PortUnitary& u, double tolerance) noexcept;

struct Routing {
  Port port = Port::zero;
  Message message;
  double p_port0 = 0.0;  // normalized probability of leaving through port 0
};

/// Chooses the output port from the registers alone.
///
/// Forms v = (sqrt(w0) y0, sqrt(w1) y1), z = U v, p_k = |z_k|^2, and leaves
/// through port 0 iff u < p0 / (p0 + p1). The emitted message is z_k / |z_k|.
/// Throws DegenerateAmplitude when p0 + p1 < 1e-30.
[[nodiscard]] Routing route(const PortUnitary& u, const AdaptiveState& s, double deviate);

[[nodiscard]] inline Routing bs_route(const AdaptiveState& s, double deviate) {
  return route(beam_splitter_unitary(), s, deviate);
}

[[nodiscard]] inline Routing pbs_route(const AdaptiveState& s, double deviate) {
  return route(polarizing_beam_splitter_unitary(), s, deviate);
}

}  // namespace qwalk
