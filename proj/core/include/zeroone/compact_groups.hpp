#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "zeroone/linalg.hpp"

namespace zeroone {

/// A group element found by word enumeration, together with the word that
/// produced it. Letters are 2*i for generator i and 2*i+1 for its inverse.
struct Witness {
  Matrix element;
  std::vector<int> word;
};

/// Breadth-first search over reduced words of length <= max_word_len for an
/// element whose cyclic group is unbounded. std::nullopt is inconclusive: it
/// does not certify that the generated group is compact.
std::optional<Witness> find_noncompact_witness(const std::vector<Matrix>& generators, int max_word_len,
                                               const Tolerances& tol = {});

/// All elements of the finite group generated by `generators`, deduplicated
/// after rounding entries to 1e-9. Throws GroupTooLarge past `cap` elements.
std::vector<Matrix> enumerate_finite_group(const std::vector<Matrix>& generators, std::size_t cap = 10000);

enum class HaarMode { FiniteGroup, CesaroCyclic };

/// Weights for the cyclic average. Uniform is the plain Cesaro mean; Smooth
/// uses a C-infinity bump window, which converges super-polynomially for
/// quasi-periodic orbits.
enum class CesaroWeights { Uniform, Smooth };

struct HaarOptions {
  HaarMode mode = HaarMode::FiniteGroup;
  long initial_terms = 64;       // M at the first Cesaro step, doubled until converged
  long max_terms = 1L << 22;
  double conv_tol = 1e-12;        // relative; a stall below 1e-9 also ends the doubling
  CesaroWeights weights = CesaroWeights::Smooth;
  std::size_t group_cap = 10000;
  double growth_guard = 1e8;
};

struct HaarForm {
  Matrix form;       // symmetric positive definite S
  long terms = 0;    // group order (finite) or M (cyclic)
};

HaarForm haar_average_form(const std::vector<Matrix>& generators, const HaarOptions& opts = {});

/// Fixed-length cyclic average (1/W) sum_h w_h (A^h)^T A^h over h = 0..terms-1.
Matrix cyclic_average(const Matrix& a, long terms, CesaroWeights weights, double growth_guard = 1e8);

/// S^(-1/2) through the spectral decomposition of a symmetric positive definite S.
Matrix spd_sqrt_inverse(const Matrix& s);

/// h = S^(-1/2) for the Haar-averaged form; h^-1 g h is orthogonal for every
/// generator g, checked against `orth_tol`.
Matrix weyl_conjugator(const std::vector<Matrix>& generators, const HaarOptions& opts = {}, double orth_tol = 1e-8);

/// max over generators of ||(h^-1 g h)^T (h^-1 g h) - I||.
double orthogonality_defect(const std::vector<Matrix>& generators, const Matrix& h);

}  // namespace zeroone
