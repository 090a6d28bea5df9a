#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace qwalk::cli {

enum class Mode { jeong, robens, lgi, oracle, compare };
enum class Removal { none, plus, minus };
enum class Format { csv, json };

/// Seed used when neither --seed nor QWALK_SEED is given.
inline constexpr std::uint64_t kDefaultSeed = 20190815;

struct RunConfig {
  Mode mode = Mode::jeong;
  int steps = 4;
  double phi1 = 1.5707963267948966;   // pi/2
  double phi2 = -1.5707963267948966;  // -pi/2
  std::uint64_t particles = 100000;
  double gamma = 0.95;
  std::uint64_t seed = kDefaultSeed;
  std::optional<std::size_t> replicates;  // unset: 1, or 10 for lgi
  Removal removal = Removal::none;
  bool taps = false;
  Format format = Format::csv;
  std::size_t threads = 0;  // execution detail, not echoed in reports

  [[nodiscard]] std::size_t resolved_replicates() const noexcept {
    return replicates.value_or(mode == Mode::lgi ? 10 : 1);
  }
};

[[nodiscard]] std::string_view to_string(Mode m) noexcept;
[[nodiscard]] std::string_view to_string(Removal r) noexcept;
[[nodiscard]] std::string_view to_string(Format f) noexcept;
[[nodiscard]] std::optional<Mode> parse_mode(std::string_view s) noexcept;
[[nodiscard]] std::optional<Removal> parse_removal(std::string_view s) noexcept;
[[nodiscard]] std::optional<Format> parse_format(std::string_view s) noexcept;

/// Resolves the seed: explicit value or "random", then the QWALK_SEED value
/// (same syntax), then kDefaultSeed. Throws ConfigError on malformed input.
[[nodiscard]] std::uint64_t resolve_seed(std::optional<std::string> flag, std::optional<std::string> env);

/// Throws ConfigError when a field is out of range for the selected mode.
void validate(const RunConfig& config);

/// Plain CSV table; `name` identifies it inside multi-table reports.
struct CsvTable {
  std::string name;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// Header of every site table: site,count,frequency,oracle_probability.
[[nodiscard]] const std::vector<std::string>& site_table_header();

struct Report {
  nlohmann::ordered_json document;  // {config, results, metrics}
  std::vector<CsvTable> tables;     // tables emitted in CSV mode
  std::vector<std::string> summary; // human-readable lines for stderr
};

[[nodiscard]] Report cmd_jeong(const RunConfig& config);
[[nodiscard]] Report cmd_robens(const RunConfig& config);
[[nodiscard]] Report cmd_lgi(const RunConfig& config);
[[nodiscard]] Report cmd_oracle(const RunConfig& config);
[[nodiscard]] Report cmd_compare(const RunConfig& config);

/// Validates and dispatches on config.mode.
[[nodiscard]] Report execute(const RunConfig& config);

[[nodiscard]] std::string render_csv(const CsvTable& table);
[[nodiscard]] std::string render_json(const Report& report);

/// Writes `contents` to a sibling temporary file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, std::string_view contents);

/// Writes the report in the configured format. Without `out`, everything goes
/// to stdout (CSV tables separated by "# <name>" lines when there are several).
/// With `out`, a JSON report or a single CSV table is written to `out`; several
/// CSV tables go to `<stem>_<name><ext>` next to it. Returns the files written.
std::vector<std::filesystem::path> emit(const Report& report, Format format,
                                        const std::optional<std::filesystem::path>& out);

}  // namespace qwalk::cli
