// qwalk: event-by-event quantum-walk simulator front end.

#include <cstdlib>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "qwalk/cli.hpp"
#include "qwalk/errors.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitInternal = 3;

}  // namespace

int main(int argc, char** argv) {
  using namespace qwalk::cli;

  CLI::App app{"Event-based simulation of quantum walks on adaptive processing-unit networks"};
  app.require_subcommand(1);

  RunConfig config;
  std::optional<std::string> seed_flag;
  std::optional<std::size_t> replicates;
  std::string removal = "none";
  std::string format = "csv";
  std::optional<std::string> out;
  bool quiet = false;

  app.add_option("--steps", config.steps, "Walk steps / network levels")->capture_default_str();
  app.add_option("--phi1", config.phi1, "Phase shift on the up rail (radians)")->capture_default_str();
  app.add_option("--phi2", config.phi2, "Phase shift on the down rail (radians)")->capture_default_str();
  app.add_option("--particles", config.particles, "Particles per run")->capture_default_str();
  app.add_option("--gamma", config.gamma, "Learning rate of the adaptive units, in [0, 1)")->capture_default_str();
  app.add_option("--seed", seed_flag, "Master seed (unsigned integer or 'random'); falls back to QWALK_SEED");
  app.add_option("--replicates", replicates, "Independent replicates (default 1, 10 for lgi)");
  app.add_option("--removal", removal, "Removal at t2 in the polarization network")
      ->check(CLI::IsMember({"none", "plus", "minus"}))
      ->capture_default_str();
  app.add_flag("--taps", config.taps, "Observe (without removing) particles at the cut points");
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  app.add_option("--out", out, "Output path (written atomically); stdout when omitted");
  app.add_option("--threads", config.threads, "Worker threads for replicates (0 = all cores)");
  app.add_flag("--quiet", quiet, "Suppress the summary on stderr");

  const std::map<std::string, std::string> modes{
      {"jeong", "Path-encoded walk network: counts, frequencies and oracle probabilities"},
      {"robens", "Polarization walk network: the six removal/observation panels"},
      {"lgi", "Leggett-Garg quantity K under the three-run and single-run protocols"},
      {"oracle", "Exact probabilities from state-vector evolution and closed forms"},
      {"compare", "Path-encoded walk against the oracle for steps 2..--steps"},
  };
  for (const auto& [name, description] : modes) {
    app.add_subcommand(name, description)->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    config.mode = *parse_mode(app.get_subcommands().front()->get_name());
    config.removal = *parse_removal(removal);
    config.format = *parse_format(format);
    config.replicates = replicates;
    const char* env = std::getenv("QWALK_SEED");
    config.seed = resolve_seed(seed_flag, env ? std::optional<std::string>(env) : std::nullopt);

    const Report report = execute(config);
    const auto files = emit(report, config.format, out ? std::optional<std::filesystem::path>(*out) : std::nullopt);
    if (!quiet) {
      for (const auto& line : report.summary) std::cerr << line << '\n';
      for (const auto& f : files) std::cerr << "wrote " << f.string() << '\n';
    }
  } catch (const qwalk::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return 0;
}
