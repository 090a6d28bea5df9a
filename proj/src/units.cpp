#include "qwalk/units.hpp"

#include "qwalk/detail/overloaded.hpp"

namespace qwalk {

using detail::overloaded;

std::map<int, double> Distribution::frequencies(std::uint64_t denominator) const {
  std::map<int, double> out;
  for (const auto& [site, n] : counts_) {
    out[site] = denominator == 0 ? 0.0 : static_cast<double>(n) / static_cast<double>(denominator);
  }
  return out;
}

int input_port_count(const UnitKind& u) noexcept {
  return std::visit(overloaded{
                        [](const Source&) { return 0; },
                        [](const BeamSplitter&) { return 2; },
                        [](const PolarizingBeamSplitter&) { return 2; },
                        [](const auto&) { return 1; },
                    },
                    u);
}

int output_port_count(const UnitKind& u) noexcept {
  return std::visit(overloaded{
                        [](const Detector&) { return 0; },
                        [](const BeamSplitter&) { return 2; },
                        [](const PolarizingBeamSplitter&) { return 2; },
                        [](const auto&) { return 1; },
                    },
                    u);
}

bool is_adaptive(const UnitKind& u) noexcept {
  return std::holds_alternative<BeamSplitter>(u) || std::holds_alternative<PolarizingBeamSplitter>(u);
}

}  // namespace qwalk
