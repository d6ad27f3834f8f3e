#include "zeroone/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "zeroone/compact_groups.hpp"
#include "zeroone/errors.hpp"
#include "zeroone/levy_noise.hpp"
#include "zeroone/rng.hpp"
#include "zeroone/stats.hpp"

namespace zeroone {
namespace {

constexpr double kAlpha = 0.01;
constexpr double kSigmas = 3.0;
constexpr std::uint64_t kMismatchStream = 0x4D49534DULL;  // "MISM"

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) { return mix64(seed ^ mix64(tag)); }

double combined(double a, double b) { return std::sqrt(a * a + b * b); }

// Replicates x regions matrix of Pi values, one row per replicate.
std::vector<std::vector<double>> sample_regions(const NoiseModel& model, std::size_t n_reps, unsigned workers) {
  std::vector<std::vector<double>> rows(n_reps);
  parallel_for(n_reps, [&](std::size_t r) { rows[r] = model.region_values(r); }, workers);
  return rows;
}

std::vector<double> column(const std::vector<std::vector<double>>& rows, std::size_t i) {
  std::vector<double> out(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) out[r] = rows[r][i];
  return out;
}

// Lambda of the atoms lying in every region whose bit is set in `mask`.
Estimate atoms_measure(const AtomTable& table, Signature mask) {
  Estimate e;
  double var = 0.0;
  for (const auto& a : table.atoms) {
    if ((a.signature & mask) != mask) continue;
    e.value += a.measure;
    var += a.std_err * a.std_err;
  }
  e.std_err = std::sqrt(var);
  e.exact = table.exact;
  return e;
}

Estimate region_volume(const Region& r, const ExperimentOptions& opts, std::uint64_t tag) {
  if (r.disjoint()) return volume(r, VolumeMethod::Exact);
  return volume(r, VolumeMethod::MonteCarlo, {opts.atom_samples, derive_seed(opts.seed, tag), opts.workers});
}

RealizeOptions realize_options(const ExperimentOptions& opts, std::uint64_t tag) {
  RealizeOptions ro;
  ro.seed = derive_seed(opts.seed, tag);
  ro.atoms = {opts.atom_samples, derive_seed(opts.seed, tag + 0x100), opts.workers};
  return ro;
}

bool is_signed_permutation(const Matrix& q, double tol) {
  const auto n = q.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    int row_hits = 0;
    int col_hits = 0;
    for (Eigen::Index k = 0; k < n; ++k) {
      const double rv = std::abs(q(i, k));
      const double cv = std::abs(q(k, i));
      if (rv > tol) {
        if (std::abs(rv - 1.0) > tol) return false;
        ++row_hits;
      }
      if (cv > tol) ++col_hits;
    }
    if (row_hits != 1 || col_hits != 1) return false;
  }
  return true;
}

Json matrices_json(const std::vector<Matrix>& ms) {
  Json out = Json::array();
  for (const auto& m : ms) out.push_back(to_json(m));
  return out;
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "Pass";
    case Verdict::Fail: return "Fail";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

const Series* ExperimentReport::find(const std::string& name) const {
  for (const auto& s : series) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

Json ExperimentReport::to_json() const {
  Json ser = Json::array();
  for (const auto& s : series) {
    Json pts = Json::array();
    for (const auto& p : s.points) {
      pts.push_back({{"parameter", p.parameter}, {"estimate", p.estimate}, {"stderr", p.std_err}, {"exact", p.exact}});
    }
    ser.push_back({{"name", s.name}, {"points", pts}});
  }
  return {{"experiment", experiment}, {"label", label},     {"inputs", inputs}, {"series", ser},
          {"verdict", to_string(verdict)}, {"criterion", criterion}, {"notes", notes}};
}

std::string ExperimentReport::plot_csv(const Series& s) {
  std::string out = "parameter,estimate\n";
  for (const auto& p : s.points) out += format_double(p.parameter) + "," + format_double(p.estimate) + "\n";
  return out;
}

std::string ExperimentReport::full_csv(const Series& s) {
  std::string out = "parameter,estimate,stderr,exact\n";
  for (const auto& p : s.points) {
    out += format_double(p.parameter) + "," + format_double(p.estimate) + "," + format_double(p.std_err) + "," +
           (p.exact ? "1" : "0") + "\n";
  }
  return out;
}

std::function<double(double)> named_function(const std::string& name) {
  if (name == "identity") return [](double x) { return x; };
  if (name == "tanh") return [](double x) { return std::tanh(x); };
  if (name == "indicator_pos") return [](double x) { return x > 0.0 ? 1.0 : 0.0; };
  if (name == "clip1") return [](double x) { return std::clamp(x, -1.0, 1.0); };
  throw Error(ErrorCode::InvalidArgument, "unknown function \"" + name + "\"");
}

Region staircase_disc(int strips) {
  if (strips < 2) throw Error(ErrorCode::InvalidArgument, "staircase disc needs at least two strips");
  std::vector<Piece> pieces;
  const double h = 2.0 / strips;
  for (int i = 0; i < strips; ++i) {
    const double y0 = -1.0 + h * i;
    const double y1 = y0 + h;
    const double far = std::max(std::abs(y0), std::abs(y1));
    const double w = std::sqrt(std::max(0.0, 1.0 - far * far));
    if (w <= 0.0) continue;
    pieces.emplace_back(Matrix::Identity(2, 2), Box{{-w, w}, {y0, y1}});
  }
  return Region(std::move(pieces), true);
}

ExperimentReport mixing_curve(const Matrix& g, const Region& c, long m_lo, long m_hi, const ExperimentOptions& opts) {
  require_square_finite(g, "g");
  require_measure_preserving(g, Tolerances{}.det_tol, "g");
  if (g.rows() != c.dim()) throw Error(ErrorCode::DimensionMismatch, "g does not act on the region's space");
  if (m_hi < m_lo || m_hi - m_lo + 1 > 63) throw Error(ErrorCode::InvalidArgument, "m range must hold 1..63 values");
  if (opts.n_reps < 3) throw Error(ErrorCode::InvalidArgument, "n_reps must be at least 3");

  std::vector<Region> family{c};
  for (long m = m_lo; m <= m_hi; ++m) family.push_back(transform(matrix_power(g, m), c));
  const NoiseModel model(NoiseSpec::gaussian(), family, realize_options(opts, 1));
  const auto rows = sample_regions(model, opts.n_reps, opts.workers);
  const auto base = column(rows, 0);

  ExperimentReport rep;
  rep.experiment = "mixing_curve";
  rep.inputs = {{"g", to_json(g)}, {"C", to_json(c)}, {"m_range", {m_lo, m_hi}}, {"n_reps", opts.n_reps},
                {"seed", opts.seed}, {"atom_samples", opts.atom_samples}};
  Series overlap{"overlap", {}};
  Series cov{"covariance", {}};
  const Estimate lambda_c = model.atoms().region_measures[0];
  bool within = true;
  for (long m = m_lo; m <= m_hi; ++m) {
    const auto i = static_cast<std::size_t>(m - m_lo + 1);
    const Estimate ov = atoms_measure(model.atoms(), Signature{1} | (Signature{1} << i));
    const auto other = column(rows, i);
    const double cv = covariance(base, other);
    const double se = covariance_stderr(base, other);
    overlap.points.push_back({static_cast<double>(m), ov.value, ov.std_err, ov.exact});
    cov.points.push_back({static_cast<double>(m), cv, se, false});
    if (std::abs(cv - ov.value) > kSigmas * combined(se, ov.std_err)) within = false;
  }
  rep.series = {overlap, cov};

  const bool compact = cyclic_closure_compact(g);
  const double threshold = 0.05 * lambda_c.value;
  bool shape_ok = true;
  std::string shape;
  if (!compact) {
    shape = "covariance at the largest m below 0.05*Lambda(C)";
    shape_ok = cov.points.back().estimate < threshold;
    for (const auto& p : overlap.points) {
      if (p.parameter > 0 && p.estimate < threshold) {
        rep.notes.push_back("overlap first below 0.05*Lambda(C) at m=" + std::to_string(static_cast<long>(p.parameter)));
        break;
      }
    }
  } else {
    bool invariant = true;
    double min_overlap = lambda_c.value;
    for (const auto& p : overlap.points) {
      const double tol = kSigmas * combined(p.std_err, lambda_c.std_err) + 1e-9 * lambda_c.value;
      if (std::abs(p.estimate - lambda_c.value) > tol) invariant = false;
      min_overlap = std::min(min_overlap, p.estimate);
    }
    if (invariant) {
      shape = "gC = C: covariance equals Lambda(C) within 3 sigma for every m";
      for (const auto& p : cov.points) {
        if (std::abs(p.estimate - lambda_c.value) > kSigmas * combined(p.std_err, lambda_c.std_err)) shape_ok = false;
      }
    } else {
      shape = "compact g: overlap stays at or above 0.05*Lambda(C)";
      shape_ok = min_overlap >= threshold;
    }
  }
  rep.inputs["compact"] = compact;
  rep.inputs["lambda_C"] = lambda_c.value;
  rep.criterion = "|covariance - overlap| <= 3 sigma for every m; " + shape;
  rep.verdict = within && shape_ok ? Verdict::Pass : Verdict::Fail;
  return rep;
}

SetApproximation approximate_family_set(const ShrinkingFamily& fam, double t, const Box& box, double reference,
                                        double rel_tol, std::size_t initial, std::size_t max_cells) {
  const int d = static_cast<int>(box.size());
  if (d != fam.dim()) throw Error(ErrorCode::DimensionMismatch, "box has the wrong dimension");
  if (!(box_volume(box) > 0.0)) throw Error(ErrorCode::InvalidArgument, "box must have positive volume");
  auto fits = [&](std::size_t n) {
    std::size_t cells = 1;
    for (int a = 0; a < d; ++a) {
      cells *= n;
      if (cells > max_cells) return false;
    }
    return true;
  };
  std::size_t n = std::max<std::size_t>(2, initial);
  while (!fits(n) && n > 2) n /= 2;

  const Matrix rows = fam.block_projection();
  for (;;) {
    std::vector<double> step(static_cast<std::size_t>(d));
    for (int a = 0; a < d; ++a) step[static_cast<std::size_t>(a)] = box[static_cast<std::size_t>(a)].length() / static_cast<double>(n);
    std::size_t cells = 1;
    std::size_t vertices = 1;
    for (int a = 0; a < d; ++a) {
      cells *= n;
      vertices *= n + 1;
    }
    // Block coordinates are affine in the grid index, so a grid point only
    // needs the image of the box corner plus per-axis increments.
    Vector lo(d);
    for (int a = 0; a < d; ++a) lo(a) = box[static_cast<std::size_t>(a)].lo;
    const Vector y0 = rows * lo;
    Matrix dy(rows.rows(), d);
    for (int a = 0; a < d; ++a) dy.col(a) = rows.col(a) * step[static_cast<std::size_t>(a)];

    auto point = [&](std::size_t flat, std::size_t extent, double offset) {
      Vector y = y0;
      for (int a = 0; a < d; ++a) {
        y += dy.col(a) * (static_cast<double>(flat % extent) + offset);
        flat /= extent;
      }
      return y;
    };

    std::vector<unsigned char> vmember(vertices);
    parallel_for(vertices, [&](std::size_t v) { vmember[v] = fam.block_contains(t, point(v, n + 1, 0.0)) ? 1 : 0; });
    std::vector<unsigned char> member(cells);
    std::vector<unsigned char> boundary(cells);
    parallel_for(cells, [&](std::size_t cidx) {
      const bool inside = fam.block_contains(t, point(cidx, n, 0.5));
      member[cidx] = inside ? 1 : 0;
      std::vector<std::size_t> idx(static_cast<std::size_t>(d));
      std::size_t rest = cidx;
      for (int a = 0; a < d; ++a) {
        idx[static_cast<std::size_t>(a)] = rest % n;
        rest /= n;
      }
      bool mixed = false;
      for (unsigned mask = 0; mask < (1U << static_cast<unsigned>(d)) && !mixed; ++mask) {
        std::size_t flat = 0;
        std::size_t stride = 1;
        for (int a = 0; a < d; ++a) {
          flat += (idx[static_cast<std::size_t>(a)] + ((mask >> static_cast<unsigned>(a)) & 1U)) * stride;
          stride *= n + 1;
        }
        if ((vmember[flat] != 0) != inside) mixed = true;
      }
      boundary[cidx] = mixed ? 1 : 0;
    });

    double cell_volume = 1.0;
    for (double s : step) cell_volume *= s;
    const auto boundary_cells = static_cast<double>(std::count(boundary.begin(), boundary.end(), 1));
    const double bound = boundary_cells * cell_volume;
    if (bound < rel_tol * reference) {
      std::vector<Piece> pieces;
      const auto d0 = static_cast<Eigen::Index>(d);
      for (std::size_t row = 0; row < cells / n; ++row) {
        std::size_t k = 0;
        while (k < n) {
          if (member[row * n + k] == 0) {
            ++k;
            continue;
          }
          std::size_t end = k;
          while (end < n && member[row * n + end] != 0) ++end;
          Box b(static_cast<std::size_t>(d));
          b[0] = {box[0].lo + step[0] * static_cast<double>(k), end == n ? box[0].hi : box[0].lo + step[0] * static_cast<double>(end)};
          std::size_t rest = row;
          for (int a = 1; a < d; ++a) {
            const std::size_t i = rest % n;
            rest /= n;
            const auto& iv = box[static_cast<std::size_t>(a)];
            b[static_cast<std::size_t>(a)] = {iv.lo + step[static_cast<std::size_t>(a)] * static_cast<double>(i),
                                              i + 1 == n ? iv.hi : iv.lo + step[static_cast<std::size_t>(a)] * static_cast<double>(i + 1)};
          }
          pieces.emplace_back(Matrix::Identity(d0, d0), std::move(b));
          k = end;
        }
      }
      if (pieces.empty()) {
        Box empty = box;
        for (auto& iv : empty) iv.hi = iv.lo;
        pieces.emplace_back(Matrix::Identity(d0, d0), std::move(empty));
      }
      return {Region(std::move(pieces), true), bound, n};
    }
    if (!fits(2 * n)) {
      throw Error(ErrorCode::ApproximationTooCoarse,
                  "grid approximation of D_t has error bound " + format_double(bound) + " at " + std::to_string(n) +
                      " cells per axis");
    }
    n *= 2;
  }
}

ExperimentReport tail_triviality_decay(const Matrix& g, const std::string& f_name, const Region& c,
                                       std::vector<double> t_grid, const ExperimentOptions& opts) {
  if (t_grid.empty()) throw Error(ErrorCode::InvalidArgument, "t_grid is empty");
  for (double t : t_grid) {
    if (!(t > 0.0) || !std::isfinite(t)) throw Error(ErrorCode::InvalidArgument, "t_grid values must be positive");
  }
  std::sort(t_grid.begin(), t_grid.end(), std::greater<>());
  t_grid.erase(std::unique(t_grid.begin(), t_grid.end()), t_grid.end());
  if (opts.n_reps < 3) throw Error(ErrorCode::InvalidArgument, "n_reps must be at least 3");

  const auto fam = ShrinkingFamily::build(g);
  const auto f = named_function(f_name);
  const Box box = c.bounding_box();
  const Estimate lambda_c = region_volume(c, opts, 2);

  // Reference Var(f(Pi(C))).
  const NoiseModel ref_model(NoiseSpec::gaussian(), {c}, realize_options(opts, 3));
  std::vector<double> fc(opts.n_reps);
  parallel_for(opts.n_reps, [&](std::size_t r) { fc[r] = f(ref_model.region_values(r)[0]); }, opts.workers);
  const double var_ref = variance(fc);
  const double var_ref_se = variance_stderr(fc);

  ExperimentReport rep;
  rep.experiment = "tail_triviality_decay";
  rep.inputs = {{"g", to_json(g)},         {"f", f_name},          {"C", to_json(c)},
                {"t_grid", t_grid},        {"n_reps", opts.n_reps}, {"seed", opts.seed},
                {"family", to_json(fam)},  {"box", to_json(box)},  {"atom_samples", opts.atom_samples}};
  Series cond{"conditional_variance", {}};
  Series overlap{"overlap", {}};
  Series approx{"approximation_error", {}};
  Series reference{"reference_variance", {{0.0, var_ref, var_ref_se, false}}};

  for (std::size_t k = 0; k < t_grid.size(); ++k) {
    const double t = t_grid[k];
    const auto set = approximate_family_set(fam, t, box, lambda_c.value);
    const NoiseModel model(NoiseSpec::gaussian(), {c, set.region}, realize_options(opts, 16 + k));
    ConditionalOptions co;
    co.samples = opts.n_reps;
    co.workers = opts.workers;
    const auto cs = conditional_expectation_gaussian(model, f, 0, 1, co);
    cond.points.push_back({t, variance(cs.values), variance_stderr(cs.values), false});
    overlap.points.push_back({t, cs.overlap.value, cs.overlap.std_err, cs.overlap.exact});
    approx.points.push_back({t, set.error_bound, 0.0, true});
  }
  rep.series = {cond, overlap, approx, reference};

  bool monotone = true;
  for (std::size_t k = 1; k < cond.points.size(); ++k) {
    const auto& prev = cond.points[k - 1];
    const auto& cur = cond.points[k];
    if (cur.estimate > prev.estimate + 2.0 * combined(cur.std_err, prev.std_err)) monotone = false;
  }
  const bool small = cond.points.back().estimate < 0.1 * var_ref;
  bool matches = true;
  rep.criterion = "conditional variance nonincreasing in decreasing t within 2 sigma; smallest-t value < 0.1*Var(f(Pi(C)))";
  if (f_name == "identity") {
    rep.criterion += "; |conditional variance - overlap| <= 3 sigma";
    for (std::size_t k = 0; k < cond.points.size(); ++k) {
      const double tol = kSigmas * combined(cond.points[k].std_err, overlap.points[k].std_err);
      if (std::abs(cond.points[k].estimate - overlap.points[k].estimate) > tol) matches = false;
    }
  }
  rep.verdict = monotone && small && matches ? Verdict::Pass : Verdict::Fail;
  return rep;
}

ExperimentReport equivariance_check(const Matrix& g, const Region& c, const Region& b, const std::string& f_name,
                                    const ExperimentOptions& opts) {
  require_square_finite(g, "g");
  require_measure_preserving(g, Tolerances{}.det_tol, "g");
  if (g.rows() != c.dim() || c.dim() != b.dim()) throw Error(ErrorCode::DimensionMismatch, "dimensions differ");
  const auto f = named_function(f_name);

  ConditionalOptions co;
  co.samples = opts.n_reps;
  co.workers = opts.workers;
  co.seed = derive_seed(opts.seed, 4);
  co.atoms = {opts.atom_samples, derive_seed(opts.seed, 5), opts.workers};
  const auto first = conditional_expectation_gaussian(f, c, b, co);
  co.seed = derive_seed(opts.seed, 6);
  co.atoms.seed = derive_seed(opts.seed, 7);
  const auto second = conditional_expectation_gaussian(f, transform(g, c), transform(g, b), co);

  const auto ks = ks_two_sample(first.values, second.values);
  const double tol = kSigmas * combined(first.overlap.std_err, second.overlap.std_err) +
                     1e-9 * (1.0 + std::abs(first.overlap.value));
  const bool overlap_ok = std::abs(first.overlap.value - second.overlap.value) <= tol;

  ExperimentReport rep;
  rep.experiment = "equivariance_check";
  rep.inputs = {{"g", to_json(g)}, {"C", to_json(c)},       {"B", to_json(b)},
                {"f", f_name},     {"n_reps", opts.n_reps}, {"seed", opts.seed}, {"atom_samples", opts.atom_samples}};
  rep.series = {
      {"overlap",
       {{0.0, first.overlap.value, first.overlap.std_err, first.overlap.exact},
        {1.0, second.overlap.value, second.overlap.std_err, second.overlap.exact}}},
      {"conditional_variance",
       {{0.0, variance(first.values), variance_stderr(first.values), false},
        {1.0, variance(second.values), variance_stderr(second.values), false}}},
      {"ks_statistic", {{0.0, ks.statistic, 0.0, true}}},
      {"ks_p_value", {{0.0, ks.p_value, 0.0, true}}},
  };
  rep.criterion = "two-sample KS p-value >= 0.01; |overlap(gC,gB) - overlap(C,B)| <= 3 sigma";
  rep.verdict = ks.p_value >= kAlpha && overlap_ok ? Verdict::Pass : Verdict::Fail;
  return rep;
}

ExperimentReport compact_invariant_demo(const std::vector<Matrix>& generators, const ExperimentOptions& opts) {
  if (generators.empty()) throw Error(ErrorCode::InvalidArgument, "at least one generator required");
  const auto d = generators.front().rows();
  for (const auto& gen : generators) {
    require_square_finite(gen, "generator");
    if (gen.rows() != d) throw Error(ErrorCode::DimensionMismatch, "generators of different order");
  }

  HaarOptions ho;
  try {
    (void)enumerate_finite_group(generators, ho.group_cap);
    ho.mode = HaarMode::FiniteGroup;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::GroupTooLarge || generators.size() != 1) throw;
    ho.mode = HaarMode::CesaroCyclic;
  }
  const Matrix h = weyl_conjugator(generators, ho);
  const Matrix h_inv = h.inverse();

  bool permutations = true;
  for (const auto& gen : generators) permutations = permutations && is_signed_permutation(h_inv * gen * h, 1e-9);
  Region u = Region::cube(static_cast<int>(d), -1.0, 1.0);
  double deficit = 0.0;
  std::string shape = "cube";
  if (!permutations && d == 2) {
    u = staircase_disc(64);
    deficit = std::numbers::pi - volume(u, VolumeMethod::Exact).value;
    shape = "staircase_disc";
  }
  const Region region = transform(h, u);
  const double lambda = volume(region, VolumeMethod::Exact).value;
  const double det_h = std::abs(h.determinant());

  ExperimentReport rep;
  rep.experiment = "compact_invariant_demo";
  rep.inputs = {{"generators", matrices_json(generators)},
                {"mode", ho.mode == HaarMode::FiniteGroup ? "finite" : "cesaro"},
                {"conjugator", to_json(h)},
                {"region_shape", shape},
                {"n_reps", opts.n_reps},
                {"seed", opts.seed}};

  Series measures{"measure", {}};
  Series mismatch{"mismatch_fraction", {}};
  bool invariant = true;
  const std::size_t n_points = 10000;
  for (std::size_t i = 0; i < generators.size(); ++i) {
    const Region moved = transform(generators[i], region);
    const double moved_volume = volume(moved, VolumeMethod::Exact).value;
    measures.points.push_back({static_cast<double>(i), moved_volume, 0.0, true});
    if (std::abs(moved_volume - lambda) > 1e-9 * lambda) invariant = false;

    Box box = region.bounding_box();
    const Box mb = moved.bounding_box();
    for (std::size_t a = 0; a < box.size(); ++a) {
      box[a].lo = std::min(box[a].lo, mb[a].lo);
      box[a].hi = std::max(box[a].hi, mb[a].hi);
    }
    CounterRng rng(opts.seed, {kMismatchStream, i});
    Vector x(d);
    std::size_t differ = 0;
    for (std::size_t k = 0; k < n_points; ++k) {
      for (Eigen::Index a = 0; a < d; ++a) x(a) = rng.uniform(box[static_cast<std::size_t>(a)].lo, box[static_cast<std::size_t>(a)].hi);
      if (region.contains(x) != moved.contains(x)) ++differ;
    }
    const double n = static_cast<double>(n_points);
    const double frac = static_cast<double>(differ) / n;
    const double q = std::min(1.0, 2.0 * det_h * deficit / box_volume(box));
    const double allowed = q + kSigmas * std::sqrt(std::max(q, 1.0 / n) * (1.0 - q) / n);
    mismatch.points.push_back({static_cast<double>(i), frac, std::sqrt(frac * (1.0 - frac) / n), false});
    if (frac > allowed) invariant = false;
  }

  const NoiseModel model(NoiseSpec::gaussian(), {region}, realize_options(opts, 8));
  std::vector<double> pi(opts.n_reps);
  parallel_for(opts.n_reps, [&](std::size_t r) { pi[r] = model.region_values(r)[0]; }, opts.workers);
  const double var = variance(pi);
  const double var_se = variance_stderr(pi);
  const bool positive = var - kSigmas * var_se > 0.0;

  rep.series = {measures, mismatch, {"variance", {{0.0, var, var_se, false}}}, {"region_measure", {{0.0, lambda, 0.0, true}}}};
  rep.criterion =
      "every generator preserves the measure of hU and its indicator up to the approximation bound; Var(Pi(hU)) > 3 sigma";
  rep.verdict = invariant && positive ? Verdict::Pass : Verdict::Fail;
  return rep;
}

}  // namespace zeroone
