#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "zeroone/region.hpp"
#include "zeroone/rng.hpp"

namespace zeroone {

enum class NoiseKind { Gaussian, Poisson, Deterministic };

std::string to_string(NoiseKind kind);

/// Convolution semigroup mu_t: Normal(0, t), Poisson(intensity t), or the
/// point mass at rate * t.
struct NoiseSpec {
  NoiseKind kind = NoiseKind::Gaussian;
  double intensity = 1.0;  // Poisson
  double rate = 0.0;       // Deterministic

  static NoiseSpec gaussian() { return {}; }
  static NoiseSpec poisson(double intensity);
  static NoiseSpec deterministic(double rate);

  /// E exp(i u X) for X ~ mu_t.
  [[nodiscard]] Complex characteristic(double u, double t) const;
  /// One draw from mu_t.
  double sample(CounterRng& rng, double t) const;
};

struct RealizeOptions {
  McOptions atoms;             // atomization of the registered family
  std::uint64_t seed = 0;      // noise values
  std::optional<Box> window;   // Poisson simulation window; defaults to the family's bounding box
};

/// Noise values on a registered family. Gaussian and Deterministic noise
/// live on the atom partition; Poisson noise is a point pattern in a window.
struct NoiseRealization {
  NoiseSpec spec;
  std::vector<Region> regions;
  AtomTable atoms;                 // Gaussian / Deterministic
  std::vector<double> atom_values; // parallel to atoms.atoms
  std::vector<Vector> points;      // Poisson
  std::vector<Signature> point_signatures;
  std::optional<Piece> window;     // Poisson
  std::uint64_t seed = 0;
  std::uint64_t replicate = 0;

  /// Pi(regions[index]). Throws UnregisteredRegion for an out-of-range index
  /// and, for Poisson, when the region leaves the simulation window.
  [[nodiscard]] double value(std::size_t index) const;
  [[nodiscard]] std::vector<double> region_values() const;
};

/// Spec plus atom partition of a registered family, built once and sampled
/// per replicate. Replicate r draws from streams keyed by (seed, r, atom).
class NoiseModel {
 public:
  NoiseModel(NoiseSpec spec, std::vector<Region> regions, const RealizeOptions& opts = {});

  [[nodiscard]] const NoiseSpec& spec() const { return spec_; }
  [[nodiscard]] const std::vector<Region>& regions() const { return regions_; }
  [[nodiscard]] const AtomTable& atoms() const { return atoms_; }
  [[nodiscard]] const Box& window() const { return window_; }

  [[nodiscard]] NoiseRealization realize(std::uint64_t replicate) const;
  /// Atom values only (Gaussian / Deterministic), the cheap path for replicates.
  [[nodiscard]] std::vector<double> atom_values(std::uint64_t replicate) const;
  /// Pi of every registered region for one replicate.
  [[nodiscard]] std::vector<double> region_values(std::uint64_t replicate) const;

 private:
  NoiseSpec spec_;
  std::vector<Region> regions_;
  AtomTable atoms_;
  Box window_;
  std::uint64_t seed_ = 0;
};

NoiseRealization realize(const NoiseSpec& spec, std::vector<Region> regions, const RealizeOptions& opts = {},
                         std::uint64_t replicate = 0);

/// T_g for Poisson noise: every point p becomes g p and the window moves with
/// it, so the new Pi(B) is the old Pi(g^-1 B). Throws UnsupportedKind for the
/// other kinds and InvalidGenerator unless |det g| = 1.
NoiseRealization apply_transform(const Matrix& g, const NoiseRealization& real);

/// Gauss-Hermite nodes and weights for the weight exp(-x^2) (Golub-Welsch).
struct Quadrature {
  std::vector<double> nodes;
  std::vector<double> weights;
};
Quadrature gauss_hermite(int n);

struct ConditionalOptions {
  int quad_nodes = 32;
  std::size_t samples = 10000;
  std::uint64_t seed = 0;
  McOptions atoms;
  unsigned workers = 0;
};

struct ConditionalSamples {
  std::vector<double> values;  // E[f(Pi(C)) | F_B] per replicate
  Estimate overlap;            // Lambda(C n B)
  Estimate remainder;          // Lambda(C \ B)
};

/// Samples of G(v) = E f(v + Z), Z ~ Normal(0, Lambda(C \ B)), at the realized
/// v = Pi(C n B). G is evaluated by Gauss-Hermite quadrature and equals f(v)
/// when C \ B is null.
ConditionalSamples conditional_expectation_gaussian(const std::function<double(double)>& f, const Region& c,
                                                    const Region& b, const ConditionalOptions& opts = {});

/// Same on an existing model whose registered family holds C and B at the
/// given indices. Throws NonGaussian for other kinds.
ConditionalSamples conditional_expectation_gaussian(const NoiseModel& model, const std::function<double(double)>& f,
                                                    std::size_t c_index, std::size_t b_index,
                                                    const ConditionalOptions& opts = {});

}  // namespace zeroone
