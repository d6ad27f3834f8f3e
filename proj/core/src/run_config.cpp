#include "zeroone/run_config.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "zeroone/errors.hpp"
#include "zeroone/rng.hpp"

namespace zeroone {
namespace {

[[noreturn]] void config_error(const std::string& field, const std::string& why) {
  throw Error(ErrorCode::ConfigError, field + ": " + why);
}

std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

std::uint64_t read_u64(const Json& j, const std::string& field) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0)) {
    config_error(field, "expected a non-negative integer");
  }
  return j.get<std::uint64_t>();
}

std::string read_string(const Json& j, const std::string& field) {
  if (!j.is_string()) config_error(field, "expected a string");
  return j.get<std::string>();
}

const Json& require(const Json& obj, const std::string& key, const std::string& path) {
  if (!obj.contains(key)) config_error(path + "." + key, "missing required field");
  return obj[key];
}

std::string safe_name(const std::string& name) {
  std::string out = name;
  for (auto& ch : out) {
    if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_' && ch != '-') ch = '_';
  }
  return out.empty() ? "experiment" : out;
}

const std::vector<std::string> kTypes{"mixing_curve", "tail_triviality_decay", "equivariance_check",
                                      "compact_invariant_demo"};

ExperimentOptions options_for(const RunConfig& cfg, const ExperimentEntry& e, std::size_t index, unsigned workers) {
  ExperimentOptions o;
  o.n_reps = e.params.contains("n_reps") ? read_u64(e.params["n_reps"], e.path + ".n_reps") : cfg.n_reps;
  o.atom_samples =
      e.params.contains("atom_samples") ? read_u64(e.params["atom_samples"], e.path + ".atom_samples") : cfg.atom_samples;
  o.seed = e.params.contains("seed") ? read_u64(e.params["seed"], e.path + ".seed") : mix64(cfg.seed ^ mix64(index));
  o.workers = workers;
  return o;
}

std::string f_name_of(const ExperimentEntry& e) {
  const std::string name = e.params.contains("f") ? read_string(e.params["f"], e.path + ".f") : "identity";
  try {
    (void)named_function(name);
  } catch (const Error&) {
    config_error(e.path + ".f", "unknown function \"" + name + "\" (identity, tanh, indicator_pos, clip1)");
  }
  return name;
}

std::vector<Matrix> generators_of(const RunConfig& cfg, const ExperimentEntry& e) {
  const Json& gens = require(e.params, "generators", e.path);
  if (!gens.is_array() || gens.empty()) config_error(e.path + ".generators", "expected a non-empty array");
  std::vector<Matrix> out;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    out.push_back(resolve_matrix(cfg, gens[i], e.path + ".generators[" + std::to_string(i) + "]"));
  }
  return out;
}

std::pair<long, long> m_range_of(const ExperimentEntry& e) {
  const Json& r = require(e.params, "m_range", e.path);
  if (!r.is_array() || r.size() != 2 || !r[0].is_number_integer() || !r[1].is_number_integer()) {
    config_error(e.path + ".m_range", "expected [lo, hi] integers");
  }
  const long lo = r[0].get<long>();
  const long hi = r[1].get<long>();
  if (hi < lo || hi - lo + 1 > 63) config_error(e.path + ".m_range", "need lo <= hi and at most 63 values");
  return {lo, hi};
}

std::vector<double> t_grid_of(const ExperimentEntry& e) {
  const Json& g = require(e.params, "t_grid", e.path);
  if (!g.is_array() || g.empty()) config_error(e.path + ".t_grid", "expected a non-empty array");
  std::vector<double> out;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!g[i].is_number() || !(g[i].get<double>() > 0.0)) {
      config_error(e.path + ".t_grid[" + std::to_string(i) + "]", "expected a positive number");
    }
    out.push_back(g[i].get<double>());
  }
  return out;
}

// Resolves every reference of an entry so errors surface before anything runs.
void validate_entry(const RunConfig& cfg, const ExperimentEntry& e) {
  if (e.type == "mixing_curve") {
    (void)resolve_matrix(cfg, require(e.params, "g", e.path), e.path + ".g");
    (void)resolve_region(cfg, require(e.params, "C", e.path), e.path + ".C");
    (void)m_range_of(e);
  } else if (e.type == "tail_triviality_decay") {
    (void)resolve_matrix(cfg, require(e.params, "g", e.path), e.path + ".g");
    (void)resolve_region(cfg, require(e.params, "C", e.path), e.path + ".C");
    (void)t_grid_of(e);
    (void)f_name_of(e);
  } else if (e.type == "equivariance_check") {
    (void)resolve_matrix(cfg, require(e.params, "g", e.path), e.path + ".g");
    (void)resolve_region(cfg, require(e.params, "C", e.path), e.path + ".C");
    (void)resolve_region(cfg, require(e.params, "B", e.path), e.path + ".B");
    (void)f_name_of(e);
  } else {
    (void)generators_of(cfg, e);
  }
  (void)options_for(cfg, e, 0, 0);
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorCode::InvalidArgument, "cannot write " + path.string());
  os << content;
}

}  // namespace

Matrix resolve_matrix(const RunConfig& cfg, const Json& ref, const std::string& field) {
  try {
    if (ref.is_string()) {
      const auto name = ref.get<std::string>();
      if (cfg.matrices.contains(name)) return resolve_matrix(cfg, cfg.matrices[name], "matrices." + name);
      if (name == "shear") return shear2();
      config_error(field, "unknown matrix \"" + name + "\"");
    }
    if (ref.is_object() && ref.contains("rotation")) {
      if (!ref["rotation"].is_number()) config_error(field + ".rotation", "expected an angle in radians");
      return rotation2(ref["rotation"].get<double>());
    }
    if (ref.is_object() && ref.contains("conjugate")) {
      const Json& c = ref["conjugate"];
      if (!c.is_object() || !c.contains("by") || !c.contains("of")) {
        config_error(field + ".conjugate", "expected {\"by\": P, \"of\": M}");
      }
      const Matrix p = resolve_matrix(cfg, c["by"], field + ".conjugate.by");
      const Matrix m = resolve_matrix(cfg, c["of"], field + ".conjugate.of");
      if (p.rows() != m.rows()) config_error(field + ".conjugate", "orders differ");
      Eigen::FullPivLU<Matrix> lu(p);
      if (!lu.isInvertible()) config_error(field + ".conjugate.by", "singular conjugator");
      return p * m * lu.inverse();
    }
    if (ref.is_object() && ref.contains("diag")) {
      const Json& d = ref["diag"];
      if (!d.is_array() || d.empty()) config_error(field + ".diag", "expected a non-empty array");
      Vector v(static_cast<Eigen::Index>(d.size()));
      for (std::size_t i = 0; i < d.size(); ++i) {
        if (!d[i].is_number()) config_error(field + ".diag", "expected numbers");
        v(static_cast<Eigen::Index>(i)) = d[i].get<double>();
      }
      return v.asDiagonal();
    }
    Matrix m = matrix_from_json(ref, field);
    require_square_finite(m, field.c_str());
    return m;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ConfigError) throw;
    config_error(field, e.what());
  }
}

Region resolve_region(const RunConfig& cfg, const Json& ref, const std::string& field) {
  try {
    if (ref.is_string()) {
      const auto name = ref.get<std::string>();
      if (!cfg.regions.contains(name)) config_error(field, "unknown region \"" + name + "\"");
      return region_from_json(cfg.regions[name], "regions." + name);
    }
    return region_from_json(ref, field);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ConfigError) throw;
    config_error(field, e.what());
  }
}

RunConfig parse_config(const std::string& text, const std::string& source) {
  Json root;
  try {
    root = Json::parse(text, nullptr, true, true);
  } catch (const nlohmann::json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    throw Error(ErrorCode::ConfigError,
                source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": malformed JSON (" + e.what() + ")");
  }
  if (!root.is_object()) config_error(source, "top level must be an object");

  RunConfig cfg;
  if (root.contains("seed")) cfg.seed = read_u64(root["seed"], "seed");
  if (root.contains("out")) cfg.out = read_string(root["out"], "out");
  if (root.contains("n_reps")) cfg.n_reps = read_u64(root["n_reps"], "n_reps");
  if (root.contains("atom_samples")) cfg.atom_samples = read_u64(root["atom_samples"], "atom_samples");
  if (root.contains("matrices")) {
    if (!root["matrices"].is_object()) config_error("matrices", "expected an object of named matrices");
    cfg.matrices = root["matrices"];
  }
  if (root.contains("regions")) {
    if (!root["regions"].is_object()) config_error("regions", "expected an object of named regions");
    cfg.regions = root["regions"];
  }
  for (const auto& [name, m] : cfg.matrices.items()) (void)resolve_matrix(cfg, m, "matrices." + name);
  for (const auto& [name, r] : cfg.regions.items()) (void)resolve_region(cfg, r, "regions." + name);

  if (root.contains("experiments")) {
    const Json& list = root["experiments"];
    if (!list.is_array()) config_error("experiments", "expected an array");
    for (std::size_t i = 0; i < list.size(); ++i) {
      ExperimentEntry e;
      e.path = "experiments[" + std::to_string(i) + "]";
      if (!list[i].is_object()) config_error(e.path, "expected an object");
      e.params = list[i];
      e.type = read_string(require(e.params, "type", e.path), e.path + ".type");
      if (std::find(kTypes.begin(), kTypes.end(), e.type) == kTypes.end()) {
        config_error(e.path + ".type", "unknown experiment type \"" + e.type + "\"");
      }
      e.name = e.params.contains("name") ? read_string(e.params["name"], e.path + ".name")
                                         : e.type + "_" + std::to_string(i);
      for (const auto& prev : cfg.experiments) {
        if (safe_name(prev.name) == safe_name(e.name)) config_error(e.path + ".name", "duplicate experiment name");
      }
      validate_entry(cfg, e);
      cfg.experiments.push_back(std::move(e));
    }
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorCode::ConfigError, path + ": cannot open config file");
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str(), path);
}

bool RunBundle::all_pass() const {
  return std::all_of(reports.begin(), reports.end(), [](const ExperimentReport& r) { return r.verdict == Verdict::Pass; });
}

Json RunBundle::to_json() const {
  Json list = Json::array();
  for (const auto& r : reports) list.push_back(r.to_json());
  return {{"seed", seed}, {"all_pass", all_pass()}, {"experiments", list}};
}

RunBundle run_experiments(const RunConfig& cfg, unsigned workers) {
  RunBundle bundle;
  bundle.seed = cfg.seed;
  for (std::size_t i = 0; i < cfg.experiments.size(); ++i) {
    const auto& e = cfg.experiments[i];
    const auto opts = options_for(cfg, e, i, workers);
    ExperimentReport rep;
    if (e.type == "mixing_curve") {
      const auto [lo, hi] = m_range_of(e);
      rep = mixing_curve(resolve_matrix(cfg, e.params["g"], e.path + ".g"), resolve_region(cfg, e.params["C"], e.path + ".C"),
                         lo, hi, opts);
    } else if (e.type == "tail_triviality_decay") {
      rep = tail_triviality_decay(resolve_matrix(cfg, e.params["g"], e.path + ".g"), f_name_of(e),
                                  resolve_region(cfg, e.params["C"], e.path + ".C"), t_grid_of(e), opts);
    } else if (e.type == "equivariance_check") {
      rep = equivariance_check(resolve_matrix(cfg, e.params["g"], e.path + ".g"),
                               resolve_region(cfg, e.params["C"], e.path + ".C"),
                               resolve_region(cfg, e.params["B"], e.path + ".B"), f_name_of(e), opts);
    } else {
      rep = compact_invariant_demo(generators_of(cfg, e), opts);
    }
    rep.label = e.name;
    bundle.reports.push_back(std::move(rep));
  }
  return bundle;
}

void write_bundle(const RunBundle& bundle, const std::string& out_dir, OutputFormat format) {
  namespace fs = std::filesystem;
  const fs::path root(out_dir);
  fs::create_directories(root);
  write_file(root / "report.json", bundle.to_json().dump(2) + "\n");
  std::string summary = "experiment,type,verdict\n";
  for (const auto& r : bundle.reports) {
    const fs::path dir = root / safe_name(r.label);
    fs::create_directories(dir);
    for (const auto& s : r.series) {
      write_file(dir / (safe_name(s.name) + ".csv"), ExperimentReport::plot_csv(s));
      if (format == OutputFormat::Csv) write_file(dir / (safe_name(s.name) + ".full.csv"), ExperimentReport::full_csv(s));
    }
    summary += r.label + "," + r.experiment + "," + to_string(r.verdict) + "\n";
  }
  if (format == OutputFormat::Csv) write_file(root / "summary.csv", summary);
}

int run_all(const std::string& config_path, const RunOverrides& overrides) {
  RunConfig cfg = load_config(config_path);
  if (overrides.seed) cfg.seed = *overrides.seed;
  if (overrides.out) cfg.out = *overrides.out;
  const auto bundle = run_experiments(cfg, overrides.workers);
  write_bundle(bundle, cfg.out, overrides.format);
  return bundle.all_pass() ? 0 : 1;
}

}  // namespace zeroone
