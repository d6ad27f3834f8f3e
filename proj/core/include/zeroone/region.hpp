#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "zeroone/linalg.hpp"

namespace zeroone {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  [[nodiscard]] double length() const { return hi - lo; }
};

using Box = std::vector<Interval>;

double box_volume(const Box& box);

/// The parallelotope frame * box.
class Piece {
 public:
  Piece(Matrix frame, Box box);

  [[nodiscard]] const Matrix& frame() const { return frame_; }
  [[nodiscard]] const Box& box() const { return box_; }
  [[nodiscard]] int dim() const { return static_cast<int>(box_.size()); }

  [[nodiscard]] double volume() const;
  [[nodiscard]] bool contains(const Vector& x) const;
  [[nodiscard]] Box bounding_box() const;

  /// The same set as an axis-aligned box when the frame is a signed
  /// permutation times a diagonal (entries below tol * max|entry| are zero).
  [[nodiscard]] std::optional<Box> as_axis_box(double tol = 1e-12) const;

 private:
  Matrix frame_;
  Matrix inverse_;
  Box box_;
};

/// Finite union of parallelotopes. `disjoint` is a caller's promise that
/// the pieces do not overlap (up to null sets); exact volumes rely on it.
class Region {
 public:
  Region(std::vector<Piece> pieces, bool disjoint);

  static Region from_box(const Box& box);
  static Region cube(int dim, double lo, double hi);

  [[nodiscard]] int dim() const { return dim_; }
  [[nodiscard]] const std::vector<Piece>& pieces() const { return pieces_; }
  [[nodiscard]] bool disjoint() const { return disjoint_; }

  [[nodiscard]] bool contains(const Vector& x) const;
  [[nodiscard]] Box bounding_box() const;
  [[nodiscard]] bool axis_aligned() const;

 private:
  std::vector<Piece> pieces_;
  bool disjoint_ = true;
  int dim_ = 0;
};

/// A measured quantity with its standard error; exact values carry std_err 0.
struct Estimate {
  double value = 0.0;
  double std_err = 0.0;
  bool exact = false;
};

struct McOptions {
  std::size_t samples = 200000;
  std::uint64_t seed = 0;
  unsigned workers = 0;
};

enum class VolumeMethod { Exact, MonteCarlo };
enum class IntersectionMethod { AxisExact, MonteCarlo, Auto };

Estimate volume(const Region& region, VolumeMethod method, const McOptions& mc = {});

/// g * region, piece by piece. Throws SingularMatrix for non-invertible g.
Region transform(const Matrix& g, const Region& region);

Estimate intersection_volume(const Region& a, const Region& b, IntersectionMethod method, const McOptions& mc = {});

/// Stratified uniform sampling of `box`: strata_per_axis^d equal cells with
/// `per_stratum` points each. fn(point, stratum) sees every sample exactly
/// once; the point stream of stratum s depends only on (seed, s).
struct StratifiedPlan {
  std::size_t strata_per_axis = 1;
  std::size_t strata = 1;
  std::size_t per_stratum = 2;
};
StratifiedPlan stratified_plan(int dim, std::size_t samples);
void for_each_stratified_sample(const Box& box, const StratifiedPlan& plan, std::uint64_t seed,
                                const std::function<void(const Vector&, std::size_t)>& fn);

using Signature = std::uint64_t;

struct Atom {
  Signature signature = 0;
  double measure = 0.0;
  double std_err = 0.0;
  std::size_t samples = 0;  // sample points tagged with this signature (0 on the exact path)
};

/// Cells of the partition generated by a family of regions inside their
/// common bounding box. Bit i of a signature is set when the atom lies in
/// region i; signature 0 is the complement inside the bounding box.
struct AtomTable {
  int region_count = 0;
  int dim = 0;
  Box bounding_box;
  bool exact = false;
  std::vector<Atom> atoms;
  std::vector<Estimate> region_measures;

  [[nodiscard]] std::string signature_string(Signature s) const;
  [[nodiscard]] std::optional<std::size_t> find(Signature s) const;
  [[nodiscard]] std::string to_csv() const;
};

enum class AtomizeMethod { Auto, MonteCarlo };

/// Atoms of the family. Auto takes the exact coordinate-compression path when
/// every piece is axis-aligned and falls back to stratified Monte Carlo.
/// Atoms below 1e-9 of the bounding volume are dropped. At most 64 regions.
AtomTable atomize(std::span<const Region> regions, AtomizeMethod method, const McOptions& mc = {});

Signature signature_of(std::span<const Region> regions, const Vector& x);

}  // namespace zeroone
