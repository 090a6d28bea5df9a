#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "qwalk/units.hpp"

namespace qwalk {

using UnitId = std::size_t;
using WireId = std::size_t;

/// Labeled positions where particles can be observed or absorbed.
enum class CutLabel : std::uint8_t { t1, t2, t3 };

/// Polarization carried by an annotated wire. `mixed` marks wires that carry
/// superpositions (after a combining splitter).
enum class Rail : std::uint8_t { h, v, mixed };

[[nodiscard]] std::string_view to_string(CutLabel label) noexcept;

struct Endpoint {
  UnitId unit = 0;
  Port port = Port::zero;
};

struct Wire {
  Endpoint from;
  Endpoint to;
};

struct CutAnnotation {
  CutLabel label = CutLabel::t1;
  WireId wire = 0;
  int site = 0;
  Rail rail = Rail::mixed;
};

/// Absorbs every particle crossing a wire annotated with (label, site).
struct RemovalFilter {
  CutLabel label = CutLabel::t2;
  int site = 0;
};

struct TapObservation {
  CutLabel label = CutLabel::t1;
  int site = 0;
  Message message;

  friend bool operator==(const TapObservation&, const TapObservation&) = default;
};

/// Trajectory summary of one particle. Exactly one of removed_at and
/// final_site is set.
struct RunRecord {
  std::uint64_t particle_index = 0;
  std::vector<TapObservation> taps;
  std::optional<CutLabel> removed_at;
  std::optional<int> final_site;

  [[nodiscard]] const TapObservation* tap(CutLabel label) const noexcept;

  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

/// Directed acyclic graph of processing units fed by a single source.
///
/// Each output port is wired to exactly one input port. Input ports may be
/// left open; adaptive units then simply never see arrivals on them.
class Network {
 public:
  UnitId add(UnitKind kind);
  /// Throws InvariantBreach on out-of-range or already used ports.
  WireId connect(Endpoint from, Endpoint to);
  void annotate(CutLabel label, WireId wire, int site, Rail rail);
  void set_source(UnitId id);

  [[nodiscard]] UnitId source() const;
  [[nodiscard]] const std::vector<UnitKind>& units() const noexcept { return units_; }
  [[nodiscard]] std::vector<UnitKind>& units() noexcept { return units_; }
  [[nodiscard]] const std::vector<Wire>& wires() const noexcept { return wires_; }
  [[nodiscard]] std::span<const CutAnnotation> annotations() const noexcept { return cuts_; }
  [[nodiscard]] std::span<const std::size_t> annotations_on(WireId wire) const noexcept {
    return cuts_by_wire_[wire];
  }
  [[nodiscard]] std::optional<WireId> output_wire(UnitId unit, Port port) const noexcept {
    return outputs_[unit][index(port)];
  }

  /// Sorted, de-duplicated detector sites.
  [[nodiscard]] std::vector<int> detector_sites() const;

  template <class Kind>
  [[nodiscard]] std::size_t count() const noexcept {
    std::size_t n = 0;
    for (const auto& u : units_) n += std::holds_alternative<Kind>(u) ? 1 : 0;
    return n;
  }

  /// Checks wiring completeness and acyclicity; throws InvariantBreach.
  void validate() const;

  /// Resets every adaptive unit: fresh registers and an RngStream derived
  /// from (master seed, unit index).
  void reset_registers(const RngStream& master);

 private:
  std::vector<UnitKind> units_;
  std::vector<std::array<std::optional<WireId>, 2>> outputs_;
  std::vector<std::array<bool, 2>> inputs_used_;
  std::vector<Wire> wires_;
  std::vector<CutAnnotation> cuts_;
  std::vector<std::vector<std::size_t>> cuts_by_wire_;
  std::optional<UnitId> source_;
};

/// Path-encoded walk: a bare 50:50 splitter at level 1, then at every level
/// l in 2..levels and site x in {-l+1, -l+3, ..., l-1} the triple
/// phase shifter (phi1, up rail) -> splitter -> phase shifter (phi2, down rail).
/// The up output of site x feeds site x-1, the down output feeds x+1.
/// Detectors sit at x in {-levels, -levels+2, ..., levels}, one per incoming rail.
[[nodiscard]] Network build_jeong(int levels, double phi1, double phi2, double gamma);

/// Polarization-encoded four-step Hadamard walk. Each step applies a Hadamard
/// unit on every occupied site, a splitting PBS (h to x-1, v to x+1) and a
/// combining PBS per target site. Cut points: t1 on the source wire, t2 on the
/// two wires leaving the first splitter (x = -1 h, x = +1 v), t3 on every
/// detector wire. Detectors at x in {-4, -2, 0, 2, 4}.
[[nodiscard]] Network build_robens(double gamma);

inline constexpr int kRobensSteps = 4;
inline constexpr int kMaxJeongLevels = 12;

struct TraversalEvent {
  std::uint64_t particle = 0;
  UnitId unit = 0;
  const UnitKind* kind = nullptr;  // state after the unit processed the particle
  Message message;                 // message leaving the unit (as arrived, for detectors)
};

using EventObserver = std::function<void(const TraversalEvent&)>;

struct RunOptions {
  std::vector<RemovalFilter> filters;
  bool taps_enabled = false;
  EventObserver observer;  // optional; called after every unit interaction
};

struct RunResult {
  Distribution counts;
  std::vector<RunRecord> records;  // empty unless taps are enabled
  std::uint64_t removed = 0;
  std::uint64_t emitted = 0;
};

/// Sends `n_particles` through `net`, one at a time. Registers are reset from
/// `rng` at the start and persist across all particles of the run.
RunResult run(Network& net, std::uint64_t n_particles, const RngStream& rng, const RunOptions& options);

inline RunResult run(Network& net, std::uint64_t n_particles, const RngStream& rng,
                     std::span<const RemovalFilter> filters = {}, bool taps_enabled = false) {
  return run(net, n_particles, rng,
             RunOptions{{filters.begin(), filters.end()}, taps_enabled, nullptr});
}

}  // namespace qwalk
