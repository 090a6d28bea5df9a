#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "qwalk/network.hpp"

namespace qwalk::lgi {

enum class Protocol : std::uint8_t { three_run, single_run };

[[nodiscard]] std::string_view to_string(Protocol p) noexcept;

struct Components {
  double q3_mean = 0.0;    // <Q(t3)>
  double q3q2_mean = 0.0;  // <Q(t3) Q(t2)> with Q(t2) = 1
  double p_plus = 0.0;     // P(x2 = +1; t2)
  double p_minus = 0.0;    // P(x2 = -1; t2)
};

/// K = 1 + <Q3 Q2> - <Q3>; K <= 1 for macrorealistic, non-invasively
/// measured trajectories.
struct LgiResult {
  double k = 0.0;
  double std_error = 0.0;  // over replicates; 0 for a single evaluation
  Protocol protocol = Protocol::three_run;
  Components components;
  std::size_t replicates = 1;
};

/// +1 if the particle ends at x > 0, otherwise -1.
[[nodiscard]] constexpr int q3_of_site(int x) noexcept { return x > 0 ? 1 : -1; }

/// Mean of Q(t3) over a count table. Throws EmptyRun for an empty table.
[[nodiscard]] double mean_q3(const Distribution& d);

/// Invasive protocol from three independent runs: no filter; the run keeping
/// x2 = -1 (absorbing +1 at t2); the run keeping x2 = +1 (absorbing -1).
/// `removed_minus` is the number absorbed in the kept_minus run, likewise for
/// plus. P(x2) pools both filtered runs: the particles at x2 = -1 are the
/// ones kept in the first and removed in the second.
[[nodiscard]] LgiResult k_three_run(const Distribution& unconditioned, const Distribution& kept_minus,
                                    const Distribution& kept_plus, std::uint64_t removed_minus,
                                    std::uint64_t removed_plus);

/// Non-invasive protocol: <Q3 Q2> from the t2 taps of one run, <Q3> from
/// `unconditioned`. Throws MissingTaps if a record has no t2 observation or
/// no final site.
[[nodiscard]] LgiResult k_single_run(std::span<const RunRecord> records, const Distribution& unconditioned);

struct ReplicateStats {
  double mean = 0.0;
  double std_error = 0.0;
};

/// Sample mean and standard error of the mean. Needs at least two values.
[[nodiscard]] ReplicateStats replicate_stats(std::span<const double> values);

/// Averages per-replicate results of one protocol. K is recomputed from the
/// averaged components; the standard error comes from the per-replicate K.
[[nodiscard]] LgiResult combine(std::span<const LgiResult> per_replicate);

/// The four simulations behind one replicate of both protocols.
struct ReplicateRuns {
  RunResult unconditioned;  // no filter, no taps
  RunResult kept_minus;     // absorbs x = +1 at t2
  RunResult kept_plus;      // absorbs x = -1 at t2
  RunResult tapped;         // no filter, t2 observed
};

/// Runs the four simulations with seeds derived from `stream`.
[[nodiscard]] ReplicateRuns simulate_replicate(double gamma, std::uint64_t particles, const RngStream& stream);

struct ExperimentConfig {
  double gamma = 0.95;
  std::uint64_t particles = 100000;
  std::size_t replicates = 10;
  std::uint64_t seed = 0;
  std::size_t threads = 0;  // 0 = hardware concurrency
};

struct Experiment {
  LgiResult three_run;
  LgiResult single_run;
  std::vector<LgiResult> three_run_replicates;
  std::vector<LgiResult> single_run_replicates;
};

/// Both protocols over `replicates` independent replicates, run in parallel.
/// Throws InsufficientReplicates for fewer than two replicates.
[[nodiscard]] Experiment run_experiment(const ExperimentConfig& config);

}  // namespace qwalk::lgi
