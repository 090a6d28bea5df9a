#pragma once

#include <cstdint>
#include <map>
#include <variant>

#include "qwalk/adaptive.hpp"
#include "qwalk/rng.hpp"

namespace qwalk {

/// Detector counts keyed by lattice site.
class Distribution {
 public:
  void add(int site, std::uint64_t n = 1) { counts_[site] += n; }

  [[nodiscard]] std::uint64_t count(int site) const {
    const auto it = counts_.find(site);
    return it == counts_.end() ? 0 : it->second;
  }

  [[nodiscard]] std::uint64_t total() const noexcept {
    std::uint64_t t = 0;
    for (const auto& [site, n] : counts_) t += n;
    return t;
  }

  [[nodiscard]] const std::map<int, std::uint64_t>& counts() const noexcept { return counts_; }

  /// count / denominator per site. Runs with removal filters normalize by the
  /// number of emitted particles, not by the number detected.
  [[nodiscard]] std::map<int, double> frequencies(std::uint64_t denominator) const;
  [[nodiscard]] std::map<int, double> frequencies() const { return frequencies(total()); }

  Distribution& operator+=(const Distribution& rhs) {
    for (const auto& [site, n] : rhs.counts_) counts_[site] += n;
    return *this;
  }

  friend bool operator==(const Distribution&, const Distribution&) = default;

 private:
  std::map<int, std::uint64_t> counts_;
};

/// Counts the particle at `site`.
inline void detect(int site, Distribution& counts) { counts.add(site); }

struct Source {};

struct BeamSplitter {
  AdaptiveState state;
  RngStream rng;
};

struct PolarizingBeamSplitter {
  AdaptiveState state;
  RngStream rng;
};

/// Multiplies the whole message by exp(i*phi); sits on a single rail.
struct PhaseShifter {
  double phi = 0.0;
};

struct HadamardUnit {};

struct Detector {
  int site = 0;
};

using UnitKind =
    std::variant<Source, BeamSplitter, PolarizingBeamSplitter, PhaseShifter, HadamardUnit, Detector>;

[[nodiscard]] int input_port_count(const UnitKind& u) noexcept;
[[nodiscard]] int output_port_count(const UnitKind& u) noexcept;
[[nodiscard]] bool is_adaptive(const UnitKind& u) noexcept;

}  // namespace qwalk
