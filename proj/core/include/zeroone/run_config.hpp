#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "zeroone/experiments.hpp"

namespace zeroone {

struct ExperimentEntry {
  std::string name;
  std::string type;
  Json params;
  std::string path;  // "experiments[i]" for diagnostics
};

struct RunConfig {
  std::uint64_t seed = 0;
  std::string out = "zeroone-out";
  std::size_t n_reps = 10000;
  std::size_t atom_samples = 200000;
  Json matrices = Json::object();
  Json regions = Json::object();
  std::vector<ExperimentEntry> experiments;
};

/// Parses a run configuration. Syntax errors are reported as
/// "source:line:column: message", semantic ones with the offending field path;
/// both throw ConfigError.
RunConfig parse_config(const std::string& text, const std::string& source = "<config>");
RunConfig load_config(const std::string& path);

/// Resolves a matrix reference: a name from config.matrices, an inline array
/// of rows, {"rotation": angle}, {"diag": [..]}, {"conjugate": {"by": P, "of": M}}
/// (P M P^-1), or the built-in "shear".
Matrix resolve_matrix(const RunConfig& cfg, const Json& ref, const std::string& field);
Region resolve_region(const RunConfig& cfg, const Json& ref, const std::string& field);

struct RunBundle {
  std::uint64_t seed = 0;
  std::vector<ExperimentReport> reports;

  [[nodiscard]] bool all_pass() const;
  [[nodiscard]] Json to_json() const;
};

RunBundle run_experiments(const RunConfig& cfg, unsigned workers = 0);

enum class OutputFormat { Json, Csv };

/// report.json plus one two-column plot CSV per series under out/<experiment>/;
/// Csv adds summary.csv and full series tables.
void write_bundle(const RunBundle& bundle, const std::string& out_dir, OutputFormat format);

struct RunOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  OutputFormat format = OutputFormat::Json;
  unsigned workers = 0;
};

/// Loads, runs, and writes. Returns 0 iff every verdict is Pass.
int run_all(const std::string& config_path, const RunOverrides& overrides = {});

}  // namespace zeroone
