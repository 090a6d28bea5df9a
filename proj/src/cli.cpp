#include "qwalk/cli.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <unistd.h>

#include "qwalk/errors.hpp"
#include "qwalk/lgi.hpp"
#include "qwalk/network.hpp"
#include "qwalk/oracle.hpp"
#include "qwalk/parallel.hpp"

namespace qwalk::cli {
namespace {

using nlohmann::ordered_json;

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string scientific(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::optional<std::uint64_t> parse_u64(std::string_view s) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

ordered_json config_json(const RunConfig& c) {
  ordered_json j;
  j["mode"] = to_string(c.mode);
  j["steps"] = c.steps;
  j["phi1"] = c.phi1;
  j["phi2"] = c.phi2;
  j["particles"] = c.particles;
  j["gamma"] = c.gamma;
  j["seed"] = c.seed;
  j["replicates"] = c.resolved_replicates();
  j["removal"] = to_string(c.removal);
  j["taps"] = c.taps;
  j["format"] = to_string(c.format);
  return j;
}

/// One row per site in the union of the count table and the oracle support.
struct SitePanel {
  std::string name;
  std::string description;
  Distribution counts;
  std::uint64_t denominator = 0;
  std::optional<oracle::ProbabilityMap> oracle;
};

std::map<int, double> frequencies(const SitePanel& p) { return p.counts.frequencies(p.denominator); }

std::vector<int> panel_sites(const SitePanel& p, const std::vector<int>& detector_sites) {
  std::set<int> sites(detector_sites.begin(), detector_sites.end());
  for (const auto& [x, n] : p.counts.counts()) sites.insert(x);
  if (p.oracle) {
    for (const auto& [x, v] : *p.oracle) sites.insert(x);
  }
  return {sites.begin(), sites.end()};
}

double oracle_at(const oracle::ProbabilityMap& o, int site) {
  const auto it = o.find(site);
  return it == o.end() ? 0.0 : it->second;
}

CsvTable site_table(const SitePanel& p, const std::vector<int>& detector_sites) {
  CsvTable t{p.name, site_table_header(), {}};
  const auto freq = frequencies(p);
  for (const int x : panel_sites(p, detector_sites)) {
    const auto f = freq.find(x);
    t.rows.push_back({std::to_string(x), std::to_string(p.counts.count(x)),
                      fixed(f == freq.end() ? 0.0 : f->second, 6),
                      p.oracle ? fixed(oracle_at(*p.oracle, x), 10) : std::string{}});
  }
  return t;
}

ordered_json site_json(const SitePanel& p, const std::vector<int>& detector_sites) {
  ordered_json rows = ordered_json::array();
  const auto freq = frequencies(p);
  for (const int x : panel_sites(p, detector_sites)) {
    const auto f = freq.find(x);
    ordered_json r;
    r["site"] = x;
    r["count"] = p.counts.count(x);
    r["frequency"] = f == freq.end() ? 0.0 : f->second;
    r["oracle_probability"] = p.oracle ? ordered_json(oracle_at(*p.oracle, x)) : ordered_json(nullptr);
    rows.push_back(std::move(r));
  }
  ordered_json j;
  j["name"] = p.name;
  j["description"] = p.description;
  j["emitted"] = p.denominator;
  j["detected"] = p.counts.total();
  j["sites"] = std::move(rows);
  return j;
}

ordered_json comparison_json(const SitePanel& p) {
  ordered_json m;
  if (!p.oracle) return m;
  const auto f = frequencies(p);
  m["tv_distance"] = oracle::total_variation(f, *p.oracle);
  m["max_abs_difference"] = oracle::max_abs_difference(f, *p.oracle);
  return m;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

Distribution merged_jeong(const RunConfig& c, int levels, const RngStream& master) {
  const auto parts = parallel_map(
      c.resolved_replicates(),
      [&](std::size_t r) {
        Network net = build_jeong(levels, c.phi1, c.phi2, c.gamma);
        return run(net, c.particles, master.substream(r)).counts;
      },
      c.threads);
  Distribution total;
  for (const auto& d : parts) total += d;
  return total;
}

}  // namespace

std::string_view to_string(Mode m) noexcept {
  switch (m) {
    case Mode::jeong: return "jeong";
    case Mode::robens: return "robens";
    case Mode::lgi: return "lgi";
    case Mode::oracle: return "oracle";
    case Mode::compare: return "compare";
  }
  return "?";
}

std::string_view to_string(Removal r) noexcept {
  switch (r) {
    case Removal::none: return "none";
    case Removal::plus: return "plus";
    case Removal::minus: return "minus";
  }
  return "?";
}

std::string_view to_string(Format f) noexcept { return f == Format::csv ? "csv" : "json"; }

std::optional<Mode> parse_mode(std::string_view s) noexcept {
  for (const Mode m : {Mode::jeong, Mode::robens, Mode::lgi, Mode::oracle, Mode::compare}) {
    if (s == to_string(m)) return m;
  }
  return std::nullopt;
}

std::optional<Removal> parse_removal(std::string_view s) noexcept {
  for (const Removal r : {Removal::none, Removal::plus, Removal::minus}) {
    if (s == to_string(r)) return r;
  }
  return std::nullopt;
}

std::optional<Format> parse_format(std::string_view s) noexcept {
  if (s == "csv") return Format::csv;
  if (s == "json") return Format::json;
  return std::nullopt;
}

std::uint64_t resolve_seed(std::optional<std::string> flag, std::optional<std::string> env) {
  const auto parse = [](const std::string& text, const char* origin) -> std::uint64_t {
    if (text == "random") {
      std::random_device rd;
      return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    }
    if (const auto v = parse_u64(text)) return *v;
    throw ConfigError(std::string(origin) + " must be an unsigned 64-bit integer or 'random', got '" +
                      text + "'");
  };
  if (flag) return parse(*flag, "--seed");
  if (env && !env->empty()) return parse(*env, "QWALK_SEED");
  return kDefaultSeed;
}

void validate(const RunConfig& c) {
  require(c.particles >= 1, "--particles must be at least 1");
  require(c.gamma >= 0.0 && c.gamma < 1.0, "--gamma must lie in [0, 1)");
  require(c.steps >= 1, "--steps must be at least 1");
  require(std::isfinite(c.phi1) && std::isfinite(c.phi2), "phases must be finite");
  const std::size_t reps = c.resolved_replicates();
  require(reps >= 1, "--replicates must be at least 1");

  switch (c.mode) {
    case Mode::jeong:
    case Mode::compare:
      if (c.steps > kMaxJeongLevels) {
        throw InvalidLevels("--steps must not exceed " + std::to_string(kMaxJeongLevels) +
                            " for the path-encoded network");
      }
      require(c.removal == Removal::none && !c.taps,
              "--removal and --taps apply to the polarization network only");
      require(c.mode != Mode::compare || c.steps >= 2, "compare needs --steps >= 2");
      break;
    case Mode::robens:
      require(c.steps == kRobensSteps, "the polarization network has exactly 4 steps");
      require(!(c.taps && c.removal != Removal::none), "--taps selects the unfiltered tapped run; drop --removal");
      break;
    case Mode::lgi:
      require(c.steps == kRobensSteps, "the polarization network has exactly 4 steps");
      if (reps < 2) {
        throw InsufficientReplicates("lgi needs --replicates >= 2 for an error bar, got " +
                                     std::to_string(reps));
      }
      break;
    case Mode::oracle:
      if (c.steps > 20) throw InvalidLevels("--steps must not exceed 20 for the oracle");
      break;
  }
}

const std::vector<std::string>& site_table_header() {
  static const std::vector<std::string> header{"site", "count", "frequency", "oracle_probability"};
  return header;
}

Report cmd_jeong(const RunConfig& c) {
  const RngStream master(c.seed);
  const std::vector<int> sites = build_jeong(c.steps, c.phi1, c.phi2, c.gamma).detector_sites();
  SitePanel panel{"jeong", "path-encoded walk detector counts",
                  merged_jeong(c, c.steps, master), c.particles * c.resolved_replicates(),
                  oracle::jeong_evolve(c.steps, c.phi1, c.phi2).back()};

  Report r;
  r.document["config"] = config_json(c);
  r.document["results"] = site_json(panel, sites);
  r.document["metrics"] = comparison_json(panel);
  r.document["metrics"]["emitted"] = panel.denominator;
  r.tables.push_back(site_table(panel, sites));
  r.summary.push_back("jeong l=" + std::to_string(c.steps) + ": total-variation distance to oracle " +
                      fixed(r.document["metrics"]["tv_distance"].get<double>(), 5));
  return r;
}

Report cmd_robens(const RunConfig& c) {
  const RngStream master(c.seed);
  const auto panels_oracle = oracle::robens_panels();
  const std::array<RemovalFilter, 1> absorb_plus{{{CutLabel::t2, +1}}};
  const std::array<RemovalFilter, 1> absorb_minus{{{CutLabel::t2, -1}}};

  struct Replicate {
    Distribution a, b, c, e, f, tapped_total;
    std::uint64_t removed_b = 0, removed_c = 0;
  };
  const auto reps = parallel_map(
      c.resolved_replicates(),
      [&](std::size_t i) {
        const RngStream s = master.substream(i);
        Network net = build_robens(c.gamma);
        Replicate rep;
        rep.a = run(net, c.particles, s.substream(0)).counts;
        const RunResult tapped = run(net, c.particles, s.substream(0), {}, true);
        rep.tapped_total = tapped.counts;
        for (const auto& rec : tapped.records) {
          const TapObservation* t2 = rec.tap(CutLabel::t2);
          if (t2 == nullptr || !rec.final_site) throw InvariantBreach("tapped record lacks t2 or final site");
          detect(*rec.final_site, t2->site < 0 ? rep.e : rep.f);
        }
        const RunResult b = run(net, c.particles, s.substream(1), absorb_plus);
        const RunResult cc = run(net, c.particles, s.substream(2), absorb_minus);
        rep.b = b.counts;
        rep.removed_b = b.removed;
        rep.c = cc.counts;
        rep.removed_c = cc.removed;
        return rep;
      },
      c.threads);

  Replicate sum;
  bool non_invasive = true;
  for (const auto& rep : reps) {
    non_invasive = non_invasive && rep.a == rep.tapped_total;
    sum.a += rep.a;
    sum.b += rep.b;
    sum.c += rep.c;
    sum.e += rep.e;
    sum.f += rep.f;
    sum.tapped_total += rep.tapped_total;
    sum.removed_b += rep.removed_b;
    sum.removed_c += rep.removed_c;
  }
  Distribution d = sum.b;
  d += sum.c;
  Distribution ef = sum.e;
  ef += sum.f;

  const std::uint64_t n = c.particles * c.resolved_replicates();
  const std::vector<SitePanel> panels{
      {"a", "no removal at t2", sum.a, n, panels_oracle.unfiltered},
      {"b", "particles at x=+1 removed at t2", sum.b, n, panels_oracle.kept_minus},
      {"c", "particles at x=-1 removed at t2", sum.c, n, panels_oracle.kept_plus},
      {"d", "sum of b and c", d, n, panels_oracle.filtered_sum},
      {"e", "observed at x=-1 at t2, not removed", sum.e, n, std::nullopt},
      {"f", "observed at x=+1 at t2, not removed", sum.f, n, std::nullopt},
  };

  std::vector<std::string> selected;
  if (c.taps) {
    selected = {"e", "f"};
  } else if (c.removal == Removal::plus) {
    selected = {"b"};
  } else if (c.removal == Removal::minus) {
    selected = {"c"};
  } else {
    selected = {"a"};
  }

  const std::vector<int> sites = build_robens(c.gamma).detector_sites();
  Report r;
  r.document["config"] = config_json(c);
  ordered_json results;
  results["selected"] = selected;
  results["panels"] = ordered_json::array();
  ordered_json metrics;
  for (const auto& p : panels) {
    results["panels"].push_back(site_json(p, sites));
    if (p.oracle) metrics["panel_" + p.name] = comparison_json(p);
    if (std::find(selected.begin(), selected.end(), p.name) != selected.end()) {
      r.tables.push_back(site_table(p, sites));
    }
  }
  metrics["removed_b"] = sum.removed_b;
  metrics["removed_c"] = sum.removed_c;
  metrics["tap_non_invasive"] = non_invasive;
  metrics["tap_partition_exact"] = ef == sum.tapped_total;
  r.document["results"] = std::move(results);
  r.document["metrics"] = std::move(metrics);

  for (const auto& p : panels) {
    if (!p.oracle) continue;
    r.summary.push_back("panel " + p.name + " (" + p.description + "): total-variation distance " +
                        fixed(r.document["metrics"]["panel_" + p.name]["tv_distance"].get<double>(), 5));
  }
  r.summary.push_back(std::string("taps non-invasive: ") + (non_invasive ? "yes" : "NO"));
  return r;
}

Report cmd_lgi(const RunConfig& c) {
  lgi::ExperimentConfig ec;
  ec.gamma = c.gamma;
  ec.particles = c.particles;
  ec.replicates = c.resolved_replicates();
  ec.seed = c.seed;
  ec.threads = c.threads;
  const lgi::Experiment e = lgi::run_experiment(ec);

  const auto verdict = [](const lgi::LgiResult& res) {
    return res.k - 1.0 > 3.0 * res.std_error ? "violation" : "no violation";
  };
  const auto result_json = [&](const lgi::LgiResult& res, const std::vector<lgi::LgiResult>& per) {
    ordered_json j;
    j["protocol"] = lgi::to_string(res.protocol);
    j["K"] = res.k;
    j["stderr"] = res.std_error;
    j["Q3_mean"] = res.components.q3_mean;
    j["Q3Q2_mean"] = res.components.q3q2_mean;
    j["P_plus"] = res.components.p_plus;
    j["P_minus"] = res.components.p_minus;
    j["replicates"] = res.replicates;
    j["verdict"] = verdict(res);
    ordered_json ks = ordered_json::array();
    for (const auto& p : per) ks.push_back(p.k);
    j["replicate_K"] = std::move(ks);
    return j;
  };

  Report r;
  r.document["config"] = config_json(c);
  r.document["results"]["three_run"] = result_json(e.three_run, e.three_run_replicates);
  r.document["results"]["single_run"] = result_json(e.single_run, e.single_run_replicates);
  r.document["metrics"]["three_run_excess_in_stderr"] =
      e.three_run.std_error > 0 ? (e.three_run.k - 1.0) / e.three_run.std_error : 0.0;
  r.document["metrics"]["single_run_excess_in_stderr"] =
      e.single_run.std_error > 0 ? (e.single_run.k - 1.0) / e.single_run.std_error : 0.0;

  CsvTable t{"lgi",
             {"protocol", "K", "stderr", "Q3_mean", "Q3Q2_mean", "P_plus", "P_minus", "replicates", "verdict"},
             {}};
  for (const auto* res : {&e.three_run, &e.single_run}) {
    t.rows.push_back({std::string(lgi::to_string(res->protocol)), fixed(res->k, 6), fixed(res->std_error, 6),
                      fixed(res->components.q3_mean, 6), fixed(res->components.q3q2_mean, 6),
                      fixed(res->components.p_plus, 6), fixed(res->components.p_minus, 6),
                      std::to_string(res->replicates), verdict(*res)});
    r.summary.push_back(std::string(lgi::to_string(res->protocol)) + ": K = " + fixed(res->k, 4) + " +- " +
                        fixed(res->std_error, 4) + " (" + verdict(*res) + " of K <= 1)");
  }
  r.tables.push_back(std::move(t));
  return r;
}

Report cmd_oracle(const RunConfig& c) {
  const auto jeong = oracle::jeong_evolve(c.steps, c.phi1, c.phi2);
  const auto walk = oracle::hadamard_walk(c.steps, oracle::StateVector::basis(0, oracle::Spin::up));

  CsvTable t{"oracle", {"model", "step", "site", "probability"}, {}};
  const auto add_rows = [&](std::string_view model, int step, const oracle::ProbabilityMap& p) {
    ordered_json rows = ordered_json::array();
    for (const auto& [x, v] : p) {
      t.rows.push_back({std::string(model), std::to_string(step), std::to_string(x), fixed(v, 12)});
      rows.push_back({{"site", x}, {"probability", v}});
    }
    return rows;
  };

  Report r;
  r.document["config"] = config_json(c);
  ordered_json results;
  results["jeong"] = ordered_json::array();
  for (int l = 1; l <= c.steps; ++l) {
    results["jeong"].push_back(
        {{"step", l}, {"probabilities", add_rows("jeong", l, jeong[static_cast<std::size_t>(l - 1)])}});
  }
  results["hadamard_walk"] = {{"step", c.steps}, {"probabilities", add_rows("hadamard_walk", c.steps, walk.probabilities)}};

  ordered_json metrics;
  if (c.steps <= 5) {
    double worst = 0.0;
    results["closed_form"] = ordered_json::array();
    for (int l = 1; l <= c.steps; ++l) {
      const auto closed = oracle::closed_form(l, c.phi2);
      results["closed_form"].push_back({{"step", l}, {"probabilities", add_rows("closed_form", l, closed)}});
      worst = std::max(worst, oracle::max_abs_difference(closed, jeong[static_cast<std::size_t>(l - 1)]));
    }
    metrics["closed_form_max_abs_difference"] = worst;
    r.summary.push_back("max |jeong_evolve - closed form| over steps 1.." + std::to_string(c.steps) + ": " +
                        scientific(worst));
  }
  r.document["results"] = std::move(results);
  r.document["metrics"] = std::move(metrics);
  r.tables.push_back(std::move(t));
  return r;
}

Report cmd_compare(const RunConfig& c) {
  const RngStream master(c.seed);
  const auto exact = oracle::jeong_evolve(c.steps, c.phi1, c.phi2);

  Report r;
  r.document["config"] = config_json(c);
  r.document["results"] = ordered_json::array();
  ordered_json metrics;
  metrics["tv_distance"] = ordered_json::object();
  double worst = 0.0;
  for (int l = 2; l <= c.steps; ++l) {
    const std::vector<int> sites = build_jeong(l, c.phi1, c.phi2, c.gamma).detector_sites();
    SitePanel panel{"l" + std::to_string(l), "path-encoded walk after " + std::to_string(l) + " steps",
                    merged_jeong(c, l, master.substream(static_cast<std::uint64_t>(l))),
                    c.particles * c.resolved_replicates(), exact[static_cast<std::size_t>(l - 1)]};
    ordered_json entry = site_json(panel, sites);
    entry["step"] = l;
    r.document["results"].push_back(std::move(entry));
    const double tv = comparison_json(panel)["tv_distance"].get<double>();
    metrics["tv_distance"][panel.name] = tv;
    worst = std::max(worst, tv);
    r.tables.push_back(site_table(panel, sites));
    r.summary.push_back("l=" + std::to_string(l) + ": total-variation distance " + fixed(tv, 5));
  }
  metrics["max_tv_distance"] = worst;
  r.document["metrics"] = std::move(metrics);
  return r;
}

Report execute(const RunConfig& config) {
  validate(config);
  switch (config.mode) {
    case Mode::jeong: return cmd_jeong(config);
    case Mode::robens: return cmd_robens(config);
    case Mode::lgi: return cmd_lgi(config);
    case Mode::oracle: return cmd_oracle(config);
    case Mode::compare: return cmd_compare(config);
  }
  throw InvariantBreach("unknown mode");
}

std::string render_csv(const CsvTable& table) {
  std::string out;
  const auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(table.header);
  for (const auto& row : table.rows) line(row);
  return out;
}

std::string render_json(const Report& report) { return report.document.dump(2) + "\n"; }

void write_atomic(const std::filesystem::path& path, std::string_view contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw ConfigError("cannot open " + tmp.string() + " for writing");
    f.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!f) throw ConfigError("failed to write " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw ConfigError("cannot move output into place at " + path.string() + ": " + ec.message());
  }
}

std::vector<std::filesystem::path> emit(const Report& report, Format format,
                                        const std::optional<std::filesystem::path>& out) {
  std::vector<std::filesystem::path> written;
  if (format == Format::json) {
    const std::string text = render_json(report);
    if (out) {
      write_atomic(*out, text);
      written.push_back(*out);
    } else {
      std::cout << text;
    }
    return written;
  }

  if (!out) {
    for (const auto& t : report.tables) {
      if (report.tables.size() > 1) std::cout << "# " << t.name << '\n';
      std::cout << render_csv(t);
    }
    return written;
  }
  if (report.tables.size() == 1) {
    write_atomic(*out, render_csv(report.tables.front()));
    written.push_back(*out);
    return written;
  }
  for (const auto& t : report.tables) {
    std::filesystem::path p = out->parent_path() / (out->stem().string() + "_" + t.name + out->extension().string());
    write_atomic(p, render_csv(t));
    written.push_back(p);
  }
  return written;
}

}  // namespace qwalk::cli
