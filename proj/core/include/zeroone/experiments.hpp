#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "zeroone/region.hpp"
#include "zeroone/serialization.hpp"
#include "zeroone/shrinking_sets.hpp"

namespace zeroone {

enum class Verdict { Pass, Fail, Inconclusive };

std::string to_string(Verdict v);

struct SeriesPoint {
  double parameter = 0.0;
  double estimate = 0.0;
  double std_err = 0.0;
  bool exact = false;
};

struct Series {
  std::string name;
  std::vector<SeriesPoint> points;
};

struct ExperimentReport {
  std::string experiment;
  std::string label;
  Json inputs = Json::object();
  std::vector<Series> series;
  Verdict verdict = Verdict::Inconclusive;
  std::string criterion;
  std::vector<std::string> notes;

  [[nodiscard]] const Series* find(const std::string& name) const;
  [[nodiscard]] Json to_json() const;
  /// Two-column plot data "parameter,estimate".
  [[nodiscard]] static std::string plot_csv(const Series& s);
  /// "parameter,estimate,stderr,exact".
  [[nodiscard]] static std::string full_csv(const Series& s);
};

/// Bounded test functions addressable by name from configs: identity, tanh,
/// indicator_pos, clip1.
std::function<double(double)> named_function(const std::string& name);

struct ExperimentOptions {
  std::size_t n_reps = 10000;
  std::uint64_t seed = 0;
  std::size_t atom_samples = 200000;
  unsigned workers = 0;
};

/// Cov(Pi(C), Pi(g^m C)) against Lambda(C n g^m C) for m in [m_lo, m_hi].
ExperimentReport mixing_curve(const Matrix& g, const Region& c, long m_lo, long m_hi, const ExperimentOptions& opts);

/// D_t n box as a union of grid cells classified at their centres. The grid
/// doubles from `initial` cells per axis until (boundary cells x cell volume)
/// drops below `rel_tol * reference`, else ApproximationTooCoarse.
struct SetApproximation {
  Region region;
  double error_bound = 0.0;
  std::size_t resolution = 0;
};
SetApproximation approximate_family_set(const ShrinkingFamily& fam, double t, const Box& box, double reference,
                                        double rel_tol = 0.01, std::size_t initial = 64,
                                        std::size_t max_cells = std::size_t{1} << 22);

/// Var(E[f(Pi(C)) | F_{D_t n box}]) along t_grid (visited in decreasing t).
ExperimentReport tail_triviality_decay(const Matrix& g, const std::string& f_name, const Region& c,
                                       std::vector<double> t_grid, const ExperimentOptions& opts);

/// Two-sample KS between conditional-expectation samples for (C, B) and (gC, gB).
ExperimentReport equivariance_check(const Matrix& g, const Region& c, const Region& b, const std::string& f_name,
                                    const ExperimentOptions& opts);

/// Weyl conjugator h of a compact group, invariance of h U for a cube or a
/// staircase disc U, and positivity of Var(Pi(h U)).
ExperimentReport compact_invariant_demo(const std::vector<Matrix>& generators, const ExperimentOptions& opts);

/// Union of 2n axis boxes inscribed in the unit disc.
Region staircase_disc(int strips);

}  // namespace zeroone
