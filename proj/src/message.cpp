#include "qwalk/message.hpp"

#include <cmath>

namespace qwalk {

Message phase_shift(double phi, const Message& m) noexcept {
  const Complex f = std::polar(1.0, phi);
  return {f * m.h, f * m.v};
}

Message hadamard_apply(const Message& m) noexcept {
  const double s = 1.0 / std::sqrt(2.0);
  return {s * (m.h + m.v), s * (m.h - m.v)};
}

}  // namespace qwalk
