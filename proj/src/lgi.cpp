#include "qwalk/lgi.hpp"

#include <array>
#include <cmath>
#include <numeric>

#include "qwalk/errors.hpp"
#include "qwalk/parallel.hpp"

namespace qwalk::lgi {

std::string_view to_string(Protocol p) noexcept {
  return p == Protocol::three_run ? "three_run" : "single_run";
}

double mean_q3(const Distribution& d) {
  const std::uint64_t total = d.total();
  if (total == 0) throw EmptyRun("count table is empty");
  double sum = 0.0;
  for (const auto& [site, n] : d.counts()) sum += q3_of_site(site) * static_cast<double>(n);
  return sum / static_cast<double>(total);
}

LgiResult k_three_run(const Distribution& unconditioned, const Distribution& kept_minus,
                      const Distribution& kept_plus, std::uint64_t removed_minus,
                      std::uint64_t removed_plus) {
  const double q3 = mean_q3(unconditioned);
  const double q3_minus = mean_q3(kept_minus);
  const double q3_plus = mean_q3(kept_plus);

  const double at_minus = static_cast<double>(kept_minus.total() + removed_plus);
  const double at_plus = static_cast<double>(kept_plus.total() + removed_minus);
  const double p_minus = at_minus / (at_minus + at_plus);
  const double p_plus = 1.0 - p_minus;

  LgiResult r;
  r.protocol = Protocol::three_run;
  r.components = {q3, p_minus * q3_minus + p_plus * q3_plus, p_plus, p_minus};
  r.k = 1.0 + r.components.q3q2_mean - r.components.q3_mean;
  return r;
}

LgiResult k_single_run(std::span<const RunRecord> records, const Distribution& unconditioned) {
  if (records.empty()) throw EmptyRun("no run records");
  // Index 0 collects x2 = -1, index 1 collects x2 = +1.
  std::array<double, 2> q3_sum{};
  std::array<std::uint64_t, 2> n{};
  for (const auto& rec : records) {
    const TapObservation* t2 = rec.tap(CutLabel::t2);
    if (t2 == nullptr || !rec.final_site) {
      throw MissingTaps("record " + std::to_string(rec.particle_index) + " lacks a t2 observation");
    }
    const std::size_t k = t2->site > 0 ? 1 : 0;
    q3_sum[k] += q3_of_site(*rec.final_site);
    ++n[k];
  }
  const double total = static_cast<double>(n[0] + n[1]);
  const double p_minus = static_cast<double>(n[0]) / total;
  const double p_plus = 1.0 - p_minus;
  const double cond_minus = n[0] > 0 ? q3_sum[0] / static_cast<double>(n[0]) : 0.0;
  const double cond_plus = n[1] > 0 ? q3_sum[1] / static_cast<double>(n[1]) : 0.0;

  LgiResult r;
  r.protocol = Protocol::single_run;
  r.components = {mean_q3(unconditioned), p_minus * cond_minus + p_plus * cond_plus, p_plus, p_minus};
  r.k = 1.0 + r.components.q3q2_mean - r.components.q3_mean;
  return r;
}

ReplicateStats replicate_stats(std::span<const double> values) {
  if (values.size() < 2) {
    throw InsufficientReplicates("at least two replicates are needed for an error bar, got " +
                                 std::to_string(values.size()));
  }
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (const double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

LgiResult combine(std::span<const LgiResult> per_replicate) {
  std::vector<double> ks;
  ks.reserve(per_replicate.size());
  for (const auto& r : per_replicate) ks.push_back(r.k);
  const ReplicateStats stats = replicate_stats(ks);

  const double n = static_cast<double>(per_replicate.size());
  Components c;
  for (const auto& r : per_replicate) {
    c.q3_mean += r.components.q3_mean / n;
    c.q3q2_mean += r.components.q3q2_mean / n;
    c.p_minus += r.components.p_minus / n;
  }
  c.p_plus = 1.0 - c.p_minus;

  LgiResult out;
  out.protocol = per_replicate.front().protocol;
  out.components = c;
  out.k = 1.0 + c.q3q2_mean - c.q3_mean;
  out.std_error = stats.std_error;
  out.replicates = per_replicate.size();
  return out;
}

ReplicateRuns simulate_replicate(double gamma, std::uint64_t particles, const RngStream& stream) {
  Network net = build_robens(gamma);
  const std::array<RemovalFilter, 1> absorb_plus{{{CutLabel::t2, +1}}};
  const std::array<RemovalFilter, 1> absorb_minus{{{CutLabel::t2, -1}}};

  ReplicateRuns runs;
  runs.unconditioned = run(net, particles, stream.substream(0));
  runs.kept_minus = run(net, particles, stream.substream(1), absorb_plus);
  runs.kept_plus = run(net, particles, stream.substream(2), absorb_minus);
  runs.tapped = run(net, particles, stream.substream(3), {}, true);
  return runs;
}

Experiment run_experiment(const ExperimentConfig& config) {
  if (config.replicates < 2) {
    throw InsufficientReplicates("the LGI analysis needs at least two replicates, got " +
                                 std::to_string(config.replicates));
  }
  const RngStream master(config.seed);
  struct Pair {
    LgiResult three;
    LgiResult single;
  };
  const auto pairs = parallel_map(
      config.replicates,
      [&](std::size_t i) {
        const ReplicateRuns runs = simulate_replicate(config.gamma, config.particles, master.substream(i));
        return Pair{k_three_run(runs.unconditioned.counts, runs.kept_minus.counts, runs.kept_plus.counts,
                                runs.kept_minus.removed, runs.kept_plus.removed),
                    k_single_run(runs.tapped.records, runs.unconditioned.counts)};
      },
      config.threads);

  Experiment e;
  for (const auto& p : pairs) {
    e.three_run_replicates.push_back(p.three);
    e.single_run_replicates.push_back(p.single);
  }
  e.three_run = combine(e.three_run_replicates);
  e.single_run = combine(e.single_run_replicates);
  return e;
}

}  // namespace qwalk::lgi
