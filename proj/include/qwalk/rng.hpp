#pragma once

#include <cstdint>
#include <random>

namespace qwalk {

/// Mixes a master seed and an index into a child seed (splitmix64 finalizer).
[[nodiscard]] std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept;

/// Seeded source of uniform deviates in [0, 1).
///
/// The deviate is built from the top 53 bits of a 64-bit Mersenne Twister,
/// so a given seed yields the same sequence on every platform.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed = 0) : seed_(seed), engine_(seed) {}

  [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }

  double uniform() noexcept { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Independent child stream for sub-entity `index` (unit, replicate, ...).
  [[nodiscard]] RngStream substream(std::uint64_t index) const noexcept {
    return RngStream(derive_seed(seed_, index));
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace qwalk
