// zeroone: command-line front end for the matrix analysis, shrinking sets,
// noise simulation and experiment harness.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "zeroone/compact_groups.hpp"
#include "zeroone/errors.hpp"
#include "zeroone/experiments.hpp"
#include "zeroone/jordan.hpp"
#include "zeroone/levy_noise.hpp"
#include "zeroone/run_config.hpp"
#include "zeroone/serialization.hpp"
#include "zeroone/shrinking_sets.hpp"

namespace {

using zeroone::Json;

struct Globals {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::string format = "json";
  unsigned workers = 0;
};

std::optional<std::string> env(const char* name) {
  const char* v = std::getenv(name);
  if (v == nullptr || *v == '\0') return std::nullopt;
  return std::string(v);
}

// Precedence: flag > environment > config file.
std::uint64_t effective_seed(const Globals& g, const zeroone::RunConfig& cfg) {
  if (g.seed) return *g.seed;
  if (auto e = env("ZEROONE_SEED")) {
    try {
      return std::stoull(*e);
    } catch (const std::exception&) {
      throw zeroone::Error(zeroone::ErrorCode::ConfigError, "ZEROONE_SEED: expected an unsigned integer");
    }
  }
  return cfg.seed;
}

std::optional<std::string> effective_out(const Globals& g) {
  if (g.out) return g.out;
  return env("ZEROONE_OUT");
}

zeroone::RunConfig context(const Globals& g) {
  return g.config.empty() ? zeroone::RunConfig{} : zeroone::load_config(g.config);
}

// A JSON value, or a bare name looked up in the config.
Json parse_ref(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error&) {
    return text;
  }
}

std::vector<zeroone::Matrix> parse_generators(const zeroone::RunConfig& cfg, const std::vector<std::string>& args) {
  std::vector<zeroone::Matrix> gens;
  for (std::size_t i = 0; i < args.size(); ++i) {
    gens.push_back(zeroone::resolve_matrix(cfg, parse_ref(args[i]), "generator " + std::to_string(i)));
  }
  return gens;
}

void emit(const Globals& g, const std::string& stem, const Json& j, const std::string& csv = {}) {
  const bool as_csv = g.format == "csv" && !csv.empty();
  const std::string text = as_csv ? csv : j.dump(2) + "\n";
  std::cout << text;
  if (auto out = effective_out(g)) {
    std::filesystem::create_directories(*out);
    std::ofstream os(std::filesystem::path(*out) / (stem + (as_csv ? ".csv" : ".json")), std::ios::binary);
    os << text;
  }
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stod(item));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Zero-one law toolkit: Jordan forms, shrinking sets, Levy noise and mixing experiments"};
  app.require_subcommand(1);
  app.fallthrough();
  app.allow_extras();
  Globals g;
  app.add_option("--config", g.config, "Run configuration (JSON)");
  app.add_option("--seed", g.seed, "RNG seed (overrides ZEROONE_SEED and the config)");
  app.add_option("--out", g.out, "Output directory (overrides ZEROONE_OUT and the config)");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--workers", g.workers, "Worker threads (0 = all cores); results do not depend on it");

  std::string matrix_arg;
  auto* jordan = app.add_subcommand("jordan", "Real and complex Jordan forms of a matrix");
  jordan->add_option("matrix", matrix_arg, "Matrix as JSON rows, a config name, or shear")->required();

  auto* classify = app.add_subcommand("classify", "Noncompactness certificate of the cyclic group of a matrix");
  classify->add_option("matrix", matrix_arg, "Matrix")->required();

  std::vector<std::string> generator_args;
  int max_word_len = 6;
  // Generators and regions are read from the leftover arguments: CLI11 would
  // split a positional that looks like "[..]" at its commas.
  auto* witness = app.add_subcommand("witness", "Search words in GENERATORS... for an element with unbounded powers");
  witness->allow_extras();
  witness->add_option("--max-word-len", max_word_len, "Longest word to try");

  std::string haar_mode = "auto";
  auto* weyl = app.add_subcommand("weyl", "Conjugator into the orthogonal group for the group generated by GENERATORS...");
  weyl->allow_extras();
  weyl->add_option("--mode", haar_mode, "Haar averaging")->check(CLI::IsMember({"auto", "finite", "cesaro"}));

  auto* sets = app.add_subcommand("sets", "Shrinking families");
  sets->require_subcommand(1);
  auto* verify = sets->add_subcommand("verify", "Absorption and null-boundary checks for D_t");
  std::string t_grid = "0.2,0.5,1,2,5";
  std::size_t set_samples = 10000;
  long h_max = 200;
  std::string shape = "sector";
  verify->add_option("matrix", matrix_arg, "Witness matrix")->required();
  verify->add_option("--t-grid", t_grid, "Comma-separated t values; all pairs t1 < t2 are checked");
  verify->add_option("--samples", set_samples, "Samples per pair");
  verify->add_option("--h-max", h_max, "Largest power");
  verify->add_option("--shape", shape, "Block set shape")->check(CLI::IsMember({"sector", "cone"}));

  std::string noise_kind = "gaussian";
  double intensity = 1.0;
  double rate = 1.0;
  std::vector<std::string> region_args;
  std::uint64_t replicate = 0;
  std::size_t atom_samples = 200000;
  auto* simulate = app.add_subcommand("simulate", "One noise realization over REGIONS... (JSON or config names)");
  simulate->allow_extras();
  simulate->add_option("--noise", noise_kind, "Noise kind")->check(CLI::IsMember({"gaussian", "poisson", "deterministic"}));
  simulate->add_option("--intensity", intensity, "Poisson intensity");
  simulate->add_option("--rate", rate, "Deterministic rate");
  simulate->add_option("--replicate", replicate, "Replicate index");
  simulate->add_option("--atom-samples", atom_samples, "Monte Carlo samples for non-axis-aligned atoms");

  auto* experiment = app.add_subcommand("experiment", "Experiment harness");
  experiment->require_subcommand(1);
  auto* run = experiment->add_subcommand("run", "Run the configured experiments and write reports");

  CLI11_PARSE(app, argc, argv);
  {
    auto extras = app.remaining();
    CLI::App* sub = witness->parsed() ? witness : weyl->parsed() ? weyl : simulate->parsed() ? simulate : nullptr;
    for (auto* s : {witness, weyl, simulate}) {
      auto more = s->remaining();
      extras.insert(extras.end(), more.begin(), more.end());
    }
    const bool stray_option =
        std::any_of(extras.begin(), extras.end(), [](const std::string& a) { return a.rfind("--", 0) == 0; });
    if (sub == nullptr || stray_option) {
      if (!extras.empty()) return app.exit(CLI::ExtrasError(extras));
    } else {
      if (extras.empty()) return app.exit(CLI::RequiredError(sub == simulate ? "regions" : "generators"));
      (sub == simulate ? region_args : generator_args) = extras;
    }
  }

  try {
    if (run->parsed()) {
      if (g.config.empty()) throw zeroone::Error(zeroone::ErrorCode::ConfigError, "experiment run needs --config");
      zeroone::RunConfig cfg = zeroone::load_config(g.config);
      cfg.seed = effective_seed(g, cfg);
      if (auto out = effective_out(g)) cfg.out = *out;
      const auto bundle = zeroone::run_experiments(cfg, g.workers);
      zeroone::write_bundle(bundle, cfg.out, g.format == "csv" ? zeroone::OutputFormat::Csv : zeroone::OutputFormat::Json);
      for (const auto& r : bundle.reports) {
        std::cout << r.label << " (" << r.experiment << "): " << zeroone::to_string(r.verdict) << "\n";
      }
      std::cout << "reports written to " << cfg.out << "\n";
      return bundle.all_pass() ? 0 : 1;
    }

    const auto cfg = context(g);
    if (jordan->parsed()) {
      const auto a = zeroone::resolve_matrix(cfg, parse_ref(matrix_arg), "matrix");
      const auto real = zeroone::real_jordan_form(a);
      const auto cplx = zeroone::complex_jordan_form(a);
      emit(g, "jordan", {{"matrix", zeroone::to_json(a)}, {"real", zeroone::to_json(real)}, {"complex", zeroone::to_json(cplx)}});
    } else if (classify->parsed()) {
      const auto a = zeroone::resolve_matrix(cfg, parse_ref(matrix_arg), "matrix");
      const auto dec = zeroone::real_jordan_form(a);
      emit(g, "classify", {{"matrix", zeroone::to_json(a)},
                           {"certificate", zeroone::to_json(zeroone::classify_noncompact_blocks(dec))},
                           {"decomposition", zeroone::to_json(dec)}});
    } else if (witness->parsed()) {
      const auto gens = parse_generators(cfg, generator_args);
      const auto w = zeroone::find_noncompact_witness(gens, max_word_len);
      emit(g, "witness", w ? Json{{"found", true}, {"witness", zeroone::to_json(*w)}}
                           : Json{{"found", false}, {"note", "no witness up to the word length; inconclusive"}});
    } else if (weyl->parsed()) {
      const auto gens = parse_generators(cfg, generator_args);
      zeroone::HaarOptions opts;
      if (haar_mode == "cesaro") {
        opts.mode = zeroone::HaarMode::CesaroCyclic;
      } else if (haar_mode == "auto") {
        try {
          (void)zeroone::enumerate_finite_group(gens, opts.group_cap);
        } catch (const zeroone::Error& e) {
          if (e.code() != zeroone::ErrorCode::GroupTooLarge) throw;
          opts.mode = zeroone::HaarMode::CesaroCyclic;
        }
      }
      const auto h = zeroone::weyl_conjugator(gens, opts);
      emit(g, "weyl", {{"conjugator", zeroone::to_json(h)},
                       {"mode", opts.mode == zeroone::HaarMode::FiniteGroup ? "finite" : "cesaro"},
                       {"orthogonality_defect", zeroone::orthogonality_defect(gens, h)}});
    } else if (verify->parsed()) {
      const auto a = zeroone::resolve_matrix(cfg, parse_ref(matrix_arg), "matrix");
      const auto fam = zeroone::ShrinkingFamily::build(a, shape == "cone" ? zeroone::FamilyShape::Cone
                                                                          : zeroone::FamilyShape::Sector);
      const auto seed = effective_seed(g, cfg);
      const auto ts = parse_list(t_grid);
      Json rows = Json::array();
      std::string csv = zeroone::absorption_csv_header() + "\n";
      for (double t1 : ts) {
        for (double t2 : ts) {
          if (!(t1 < t2)) continue;
          const auto r = zeroone::absorption_lag(fam, t1, t2, set_samples, h_max, seed);
          csv += zeroone::absorption_csv_row(t1, t2, r) + "\n";
          rows.push_back({{"t1", t1}, {"t2", t2}, {"h0", r.h0 ? Json(*r.h0) : Json()}, {"violations", r.violations}});
        }
      }
      zeroone::Box box(static_cast<std::size_t>(fam.dim()), zeroone::Interval{-1.0, 1.0});
      const auto nb = zeroone::null_boundary_check(fam, set_samples, box, seed);
      emit(g, "sets_verify",
           {{"family", zeroone::to_json(fam)},
            {"absorption", rows},
            {"null_boundary", {{"frac_outside_union", nb.frac_outside_union},
                               {"frac_in_intersection", nb.frac_in_intersection},
                               {"samples", nb.samples}}}},
           csv);
    } else if (simulate->parsed()) {
      std::vector<zeroone::Region> regions;
      for (std::size_t i = 0; i < region_args.size(); ++i) {
        regions.push_back(zeroone::resolve_region(cfg, parse_ref(region_args[i]), "region " + std::to_string(i)));
      }
      zeroone::NoiseSpec spec = noise_kind == "poisson"         ? zeroone::NoiseSpec::poisson(intensity)
                                : noise_kind == "deterministic" ? zeroone::NoiseSpec::deterministic(rate)
                                                                : zeroone::NoiseSpec::gaussian();
      zeroone::RealizeOptions ro;
      ro.seed = effective_seed(g, cfg);
      ro.atoms = {atom_samples, ro.seed, g.workers};
      const auto real = zeroone::realize(spec, regions, ro, replicate);
      emit(g, "simulate", zeroone::to_json(real), spec.kind == zeroone::NoiseKind::Poisson ? "" : real.atoms.to_csv());
    }
  } catch (const zeroone::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
