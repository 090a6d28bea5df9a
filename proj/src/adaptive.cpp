#include "qwalk/adaptive.hpp"

#include <cmath>
#include <numbers>

#include "qwalk/errors.hpp"

namespace qwalk {
namespace {

constexpr Complex kI{0.0, 1.0};

PortUnitary checked(PortUnitary u, const char* name) {
  if (!is_unitary(u, 1e-12)) {
    throw InvariantBreach(std::string(name) + " matrix is not unitary");
  }
  return u;
}

}  // namespace

Message random_unit_message(RngStream& rng) {
  // |h|^2 is uniform on [0, 1] for Haar-random states of C^2.
  const double p = rng.uniform();
  const double phase_h = 2.0 * std::numbers::pi * rng.uniform();
  const double phase_v = 2.0 * std::numbers::pi * rng.uniform();
  return {std::polar(std::sqrt(p), phase_h), std::polar(std::sqrt(1.0 - p), phase_v)};
}

AdaptiveState initial_state(double gamma, RngStream& rng) {
  AdaptiveState s;
  s.gamma = gamma;
  const Message y0 = random_unit_message(rng);
  const Message y1 = random_unit_message(rng);
  s.y = {y0.h, y0.v, y1.h, y1.v};
  return s;
}

AdaptiveState adaptive_update(AdaptiveState s, Port port, const Message& m) noexcept {
  const double g = s.gamma;
  const std::size_t k = index(port);
  const std::size_t o = index(other(port));
  s.w[k] = g * s.w[k] + (1.0 - g);
  s.w[o] = g * s.w[o];
  s.y[2 * k] = g * s.y[2 * k] + (1.0 - g) * m.h;
  s.y[2 * k + 1] = g * s.y[2 * k + 1] + (1.0 - g) * m.v;
  return s;
}

const PortUnitary& beam_splitter_unitary() {
  static const PortUnitary u = [] {
    const double s = 1.0 / std::sqrt(2.0);
    const Complex a{s, 0.0};
    const Complex b = kI * s;
    return checked(PortUnitary{{
                       {a, 0, b, 0},
                       {0, a, 0, b},
                       {b, 0, a, 0},
                       {0, b, 0, a},
                   }},
                   "beam splitter");
  }();
  return u;
}

const PortUnitary& polarizing_beam_splitter_unitary() {
  static const PortUnitary u = checked(PortUnitary{{
                                           {1, 0, 0, 0},
                                           {0, 0, 0, kI},
                                           {0, 0, 1, 0},
                                           {0, kI, 0, 0},
                                       }},
                                       "polarizing beam splitter");
  return u;
}

bool is_unitary(const PortUnitary& u, double tolerance) noexcept {
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t c = 0; c < 4; ++c) {
      Complex acc{};
      for (std::size_t k = 0; k < 4; ++k) acc += std::conj(u[k][r]) * u[k][c];
      const Complex expected = r == c ? Complex{1.0} : Complex{0.0};
      if (std::abs(acc - expected) > tolerance) return false;
    }
  }
  return true;
}

Routing route(const PortUnitary& u, const AdaptiveState& s, double deviate) {
  const double a0 = std::sqrt(s.w[0]);
  const double a1 = std::sqrt(s.w[1]);
  const std::array<Complex, 4> v{a0 * s.y[0], a0 * s.y[1], a1 * s.y[2], a1 * s.y[3]};

  std::array<Complex, 4> z{};
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t c = 0; c < 4; ++c) z[r] += u[r][c] * v[c];
  }

  const double p0 = std::norm(z[0]) + std::norm(z[1]);
  const double p1 = std::norm(z[2]) + std::norm(z[3]);
  const double total = p0 + p1;
  if (!(total >= 1e-30)) throw DegenerateAmplitude("adaptive splitter has no output amplitude");

  Routing out;
  out.p_port0 = p0 / total;
  out.port = deviate < out.p_port0 ? Port::zero : Port::one;
  const std::size_t k = 2 * index(out.port);
  const double scale = 1.0 / std::sqrt(out.port == Port::zero ? p0 : p1);
  out.message = {z[k] * scale, z[k + 1] * scale};
  return out;
}

}  // namespace qwalk
