#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "zeroone/jordan.hpp"
#include "zeroone/region.hpp"

namespace zeroone {

/// Block-level shape of D_t.
///
///   Sector: the last coordinate pair (y, z) of the block satisfies
///           Re(lambda * y * conj(z)) >= phi(t) |z|^2 with phi(t) = 1/t - t, where
///           lambda is the eigenvalue as the block acts on that coordinate
///           (eta for real blocks, conj(kappa) for pairs). One step of the
///           block adds exactly 1 to Re(lambda y / z), so these sets absorb.
///   Cone:   |<x, e_last>| <= rho ||x|| with rho = t / (1 + t).
///   Ball:   |x| <= eps with eps = t; always used for size-1 contracting blocks.
enum class FamilyShape { Sector, Cone, Ball };

std::string to_string(FamilyShape shape);

/// x in D_t  <=>  x^T Q x + c >= 0.
struct DefiningInequality {
  Matrix q;
  double c = 0.0;
};

class ShrinkingFamily {
 public:
  /// Selects the first tagged block in canonical order. Throws CompactClosure
  /// when the cyclic group of `a` is bounded. `shape` applies to blocks of size
  /// >= 2; size-1 blocks always get balls.
  static ShrinkingFamily build(const Matrix& a, FamilyShape shape = FamilyShape::Sector, const Tolerances& tol = {});

  [[nodiscard]] const Matrix& witness() const { return witness_; }
  [[nodiscard]] const Matrix& basis() const { return dec_.conjugator; }
  [[nodiscard]] const Matrix& basis_inverse() const { return basis_inverse_; }
  [[nodiscard]] const RealJordanDecomposition& decomposition() const { return dec_; }
  [[nodiscard]] std::size_t selected_block() const { return tag_.block; }
  [[nodiscard]] NoncompactCase case_tag() const { return tag_.which; }
  [[nodiscard]] FamilyShape shape() const { return shape_; }
  [[nodiscard]] int dim() const { return static_cast<int>(witness_.rows()); }
  [[nodiscard]] std::string param_map_name() const;

  /// Block-level parameter: rho, eps, or phi depending on the shape.
  [[nodiscard]] double block_parameter(double t) const;

  [[nodiscard]] bool contains(double t, const Vector& x) const;
  /// Membership from coordinates of the selected block only.
  [[nodiscard]] bool block_contains(double t, const Vector& y) const;

  [[nodiscard]] DefiningInequality defining_inequality(double t) const;

  /// Coordinates of the selected block in the Jordan basis.
  [[nodiscard]] Vector block_coordinates(const Vector& x) const;
  [[nodiscard]] const Matrix& block_matrix() const { return block_matrix_; }
  /// Rows of T^-1 that produce the selected block's coordinates.
  [[nodiscard]] Matrix block_projection() const { return basis_inverse_.middleRows(block_offset_, block_rows_); }

 private:
  ShrinkingFamily() = default;

  Matrix witness_;
  RealJordanDecomposition dec_;
  Matrix basis_inverse_;
  CaseTag tag_;
  FamilyShape shape_ = FamilyShape::Sector;
  Matrix block_matrix_;
  int block_offset_ = 0;
  int block_rows_ = 0;
};

struct AbsorptionResult {
  std::optional<long> h0;  // nullopt: not reached by h_max
  std::size_t violations = 0;
  std::size_t samples = 0;
};

/// Samples points of D_{t2} and iterates the selected block. h0 is the first h
/// at which every sample lies in D_{t1}; violations counts (sample, h) pairs
/// outside D_{t1} for h0 < h <= h_max. Cone and sector samples are unit
/// vectors of the block subspace drawn by rejection; ball samples are uniform
/// on [-eps2, eps2] (a disc for pairs) plus the boundary points.
AbsorptionResult absorption_lag(const ShrinkingFamily& fam, double t1, double t2, std::size_t n_samples, long h_max,
                                std::uint64_t seed);

struct NullBoundaryResult {
  double frac_outside_union = 0.0;
  double frac_in_intersection = 0.0;
  std::size_t samples = 0;
};

/// Fractions of uniform points of `box` outside D_{1e6} and inside D_{1e-6}.
NullBoundaryResult null_boundary_check(const ShrinkingFamily& fam, std::size_t n_samples, const Box& box,
                                       std::uint64_t seed, double t_small = 1e-6, double t_large = 1e6);

}  // namespace zeroone
