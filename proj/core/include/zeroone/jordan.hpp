#pragma once

#include <cstddef>
#include <vector>

#include "zeroone/linalg.hpp"

namespace zeroone {

/// A cluster of numerically coincident eigenvalues.
struct EigenCluster {
  Complex value;
  int algebraic_mult = 0;
  int geometric_mult = 0;
};

/// Eigenvalues of `a`, clustered, with algebraic and geometric multiplicities.
///
/// Raw eigenvalues join a cluster when the merged cluster's diameter stays
/// within max(cluster_tol, 2 (defect_eps max(1, ||A||))^(1/m)), m being the
/// merged size: a Jordan block of order m scatters its eigenvalue by roughly
/// the m-th root of the rounding error. Clusters whose mutual gap is under
/// max(10 cluster_tol, 4 r), r the radius at the merged size, are rejected
/// as IllConditioned. Non-real clusters
/// come in exact conjugate pairs.
std::vector<EigenCluster> eigen_spectrum(const Matrix& a, const Tolerances& tol = {});

struct ComplexJordanBlock {
  int size = 0;
  Complex eigenvalue;
};

struct ComplexJordanForm {
  ComplexMatrix conjugator;  // S with A = S J S^-1
  std::vector<ComplexJordanBlock> blocks;
  double residual = 0.0;

  [[nodiscard]] ComplexMatrix form() const;
};

ComplexJordanForm complex_jordan_form(const Matrix& a, const Tolerances& tol = {});

enum class BlockKind { RealBlock, ComplexPairBlock };

/// J_a(eta) for a real eigenvalue, or C_b(kappa) for a conjugate pair
/// represented by kappa with positive imaginary part.
struct RealJordanBlock {
  BlockKind kind = BlockKind::RealBlock;
  int size = 0;
  Complex eigen;

  [[nodiscard]] int rows() const { return kind == BlockKind::RealBlock ? size : 2 * size; }
  [[nodiscard]] Matrix matrix() const;
};

struct RealJordanDecomposition {
  Matrix conjugator;  // T with A = T K T^-1
  std::vector<RealJordanBlock> blocks;
  double residual = 0.0;

  [[nodiscard]] Matrix form() const;
  /// Row offset of block `index` inside the Jordan coordinates.
  [[nodiscard]] int offset(std::size_t index) const;
  [[nodiscard]] int order() const;
};

/// Real Jordan canonical form. Blocks are ordered real first by (|eta| desc,
/// size desc, eta desc), then conjugate pairs by (|kappa| desc, size desc,
/// arg asc).
RealJordanDecomposition real_jordan_form(const Matrix& a, const Tolerances& tol = {});

/// J_a(eta)^h x through the closed binomial expansion, without forming powers.
Vector jordan_block_power_apply(const RealJordanBlock& block, long h, const Vector& x);

enum class NoncompactCase { A, B, C, D };

char case_letter(NoncompactCase c);

struct CaseTag {
  NoncompactCase which = NoncompactCase::A;
  std::size_t block = 0;
};

struct NoncompactCertificate {
  std::vector<CaseTag> case_tags;
  bool compact = true;
};

/// Tags blocks of the forms that make the cyclic group unbounded:
///   A: J_a(eta),  a >= 2, |eta| = 1
///   B: C_b(kappa), b >= 2, |kappa| = 1
///   C: J_a(eta),  |eta| < 1
///   D: C_b(kappa), |kappa| < 1
NoncompactCertificate classify_noncompact_blocks(const RealJordanDecomposition& dec,
                                                 double unit_tol = Tolerances{}.unit_tol);

/// True iff {A^h : h in Z} is bounded, decided from the real Jordan form.
bool cyclic_closure_compact(const Matrix& a, const Tolerances& tol = {});

}  // namespace zeroone
