#include "zeroone/levy_noise.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "zeroone/errors.hpp"
#include "zeroone/stats.hpp"

namespace zeroone {
namespace {

constexpr std::uint64_t kAtomValueStream = 0x41544F4DULL;  // "ATOM"
constexpr std::uint64_t kPointStream = 0x504F494EULL;      // "POIN"

bool in_piece(const Piece& piece, const Matrix& inverse, const Vector& x, double slack) {
  const Vector y = inverse * x;
  for (std::size_t i = 0; i < piece.box().size(); ++i) {
    const auto& iv = piece.box()[i];
    const double tol = slack * (1.0 + std::max(std::abs(iv.lo), std::abs(iv.hi)));
    const double v = y(static_cast<Eigen::Index>(i));
    if (v < iv.lo - tol || v > iv.hi + tol) return false;
  }
  return true;
}

// Every vertex of every piece of `region` lies in the window.
bool region_in_window(const Region& region, const Piece& window) {
  const Matrix inverse = window.frame().inverse();
  for (const auto& p : region.pieces()) {
    const int d = p.dim();
    Vector corner(d);
    for (unsigned mask = 0; mask < (1U << static_cast<unsigned>(d)); ++mask) {
      for (int i = 0; i < d; ++i) {
        const auto& iv = p.box()[static_cast<std::size_t>(i)];
        corner(i) = (mask >> static_cast<unsigned>(i)) & 1U ? iv.hi : iv.lo;
      }
      if (!in_piece(window, inverse, p.frame() * corner, 1e-9)) return false;
    }
  }
  return true;
}

void require_index(std::size_t index, std::size_t count) {
  if (index >= count) throw Error(ErrorCode::UnregisteredRegion, "region index is not registered");
}

}  // namespace

std::string to_string(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::Gaussian: return "gaussian";
    case NoiseKind::Poisson: return "poisson";
    case NoiseKind::Deterministic: return "deterministic";
  }
  return "unknown";
}

NoiseSpec NoiseSpec::poisson(double intensity) {
  if (!(intensity > 0.0) || !std::isfinite(intensity)) {
    throw Error(ErrorCode::InvalidArgument, "Poisson intensity must be positive");
  }
  return {NoiseKind::Poisson, intensity, 0.0};
}

NoiseSpec NoiseSpec::deterministic(double rate) {
  if (!std::isfinite(rate)) throw Error(ErrorCode::NonFiniteInput, "deterministic rate must be finite");
  return {NoiseKind::Deterministic, 1.0, rate};
}

Complex NoiseSpec::characteristic(double u, double t) const {
  switch (kind) {
    case NoiseKind::Gaussian: return std::exp(Complex(-0.5 * t * u * u, 0.0));
    case NoiseKind::Poisson: return std::exp(intensity * t * (std::exp(Complex(0.0, u)) - 1.0));
    case NoiseKind::Deterministic: return std::exp(Complex(0.0, u * rate * t));
  }
  return {1.0, 0.0};
}

double NoiseSpec::sample(CounterRng& rng, double t) const {
  switch (kind) {
    case NoiseKind::Gaussian: return std::sqrt(t) * rng.normal();
    case NoiseKind::Poisson: return static_cast<double>(rng.poisson(intensity * t));
    case NoiseKind::Deterministic: return rate * t;
  }
  return 0.0;
}

double NoiseRealization::value(std::size_t index) const {
  require_index(index, regions.size());
  const Signature bit = Signature{1} << index;
  if (spec.kind == NoiseKind::Poisson) {
    if (window && !region_in_window(regions[index], *window)) {
      throw Error(ErrorCode::UnregisteredRegion, "region leaves the simulation window");
    }
    std::size_t count = 0;
    for (auto s : point_signatures) count += (s & bit) != 0 ? 1 : 0;
    return static_cast<double>(count);
  }
  std::vector<double> parts;
  for (std::size_t a = 0; a < atoms.atoms.size(); ++a) {
    if ((atoms.atoms[a].signature & bit) != 0) parts.push_back(atom_values[a]);
  }
  return pairwise_sum(parts);
}

std::vector<double> NoiseRealization::region_values() const {
  std::vector<double> out(regions.size());
  for (std::size_t i = 0; i < regions.size(); ++i) out[i] = value(i);
  return out;
}

NoiseModel::NoiseModel(NoiseSpec spec, std::vector<Region> regions, const RealizeOptions& opts)
    : spec_(spec), regions_(std::move(regions)), seed_(opts.seed) {
  if (regions_.empty()) throw Error(ErrorCode::InvalidArgument, "noise needs at least one registered region");
  if (regions_.size() > 64) throw Error(ErrorCode::InvalidArgument, "at most 64 registered regions");
  if (spec_.kind == NoiseKind::Poisson) {
    Box bb = regions_.front().bounding_box();
    for (const auto& r : regions_) {
      if (r.dim() != regions_.front().dim()) throw Error(ErrorCode::DimensionMismatch, "regions of different dimension");
      const Box rb = r.bounding_box();
      for (std::size_t i = 0; i < bb.size(); ++i) {
        bb[i].lo = std::min(bb[i].lo, rb[i].lo);
        bb[i].hi = std::max(bb[i].hi, rb[i].hi);
      }
    }
    window_ = opts.window ? *opts.window : bb;
    for (const auto& iv : window_) {
      if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi)) throw Error(ErrorCode::UnboundedRegion, "unbounded window");
    }
    if (window_.size() != bb.size()) throw Error(ErrorCode::DimensionMismatch, "window has the wrong dimension");
    return;
  }
  atoms_ = atomize(regions_, AtomizeMethod::Auto, opts.atoms);
  window_ = atoms_.bounding_box;
}

std::vector<double> NoiseModel::atom_values(std::uint64_t replicate) const {
  if (spec_.kind == NoiseKind::Poisson) {
    throw Error(ErrorCode::UnsupportedKind, "Poisson noise is a point pattern, not atom values");
  }
  std::vector<double> out(atoms_.atoms.size());
  for (std::size_t a = 0; a < out.size(); ++a) {
    CounterRng rng(seed_, {kAtomValueStream, replicate, atoms_.atoms[a].signature});
    out[a] = spec_.sample(rng, atoms_.atoms[a].measure);
  }
  return out;
}

NoiseRealization NoiseModel::realize(std::uint64_t replicate) const {
  NoiseRealization out;
  out.spec = spec_;
  out.regions = regions_;
  out.seed = seed_;
  out.replicate = replicate;
  if (spec_.kind != NoiseKind::Poisson) {
    out.atoms = atoms_;
    out.atom_values = atom_values(replicate);
    return out;
  }
  const auto d = static_cast<Eigen::Index>(window_.size());
  out.window.emplace(Matrix::Identity(d, d), window_);
  CounterRng rng(seed_, {kPointStream, replicate});
  const auto n = rng.poisson(spec_.intensity * box_volume(window_));
  out.points.reserve(n);
  out.point_signatures.reserve(n);
  Vector x(d);
  for (std::uint64_t k = 0; k < n; ++k) {
    for (Eigen::Index i = 0; i < d; ++i) {
      const auto& iv = window_[static_cast<std::size_t>(i)];
      x(i) = rng.uniform(iv.lo, iv.hi);
    }
    out.points.push_back(x);
    out.point_signatures.push_back(signature_of(regions_, x));
  }
  return out;
}

std::vector<double> NoiseModel::region_values(std::uint64_t replicate) const {
  if (spec_.kind == NoiseKind::Poisson) return realize(replicate).region_values();
  const auto values = atom_values(replicate);
  std::vector<double> out(regions_.size());
  std::vector<double> parts;
  for (std::size_t i = 0; i < regions_.size(); ++i) {
    parts.clear();
    const Signature bit = Signature{1} << i;
    for (std::size_t a = 0; a < values.size(); ++a) {
      if ((atoms_.atoms[a].signature & bit) != 0) parts.push_back(values[a]);
    }
    out[i] = pairwise_sum(parts);
  }
  return out;
}

NoiseRealization realize(const NoiseSpec& spec, std::vector<Region> regions, const RealizeOptions& opts,
                         std::uint64_t replicate) {
  return NoiseModel(spec, std::move(regions), opts).realize(replicate);
}

NoiseRealization apply_transform(const Matrix& g, const NoiseRealization& real) {
  if (real.spec.kind != NoiseKind::Poisson) {
    throw Error(ErrorCode::UnsupportedKind, "only Poisson noise has a pointwise pushforward");
  }
  require_square_finite(g, "transform");
  require_measure_preserving(g, Tolerances{}.det_tol, "transform");
  if (!real.window || g.rows() != real.window->dim()) {
    throw Error(ErrorCode::DimensionMismatch, "transform order does not match the realization");
  }
  NoiseRealization out = real;
  out.window.emplace(g * real.window->frame(), real.window->box());
  for (std::size_t k = 0; k < out.points.size(); ++k) {
    out.points[k] = g * real.points[k];
    out.point_signatures[k] = signature_of(out.regions, out.points[k]);
  }
  return out;
}

Quadrature gauss_hermite(int n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "quadrature needs at least one node");
  Matrix jacobi = Matrix::Zero(n, n);
  for (int k = 1; k < n; ++k) jacobi(k - 1, k) = jacobi(k, k - 1) = std::sqrt(0.5 * k);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(jacobi);
  Quadrature q;
  q.nodes.resize(static_cast<std::size_t>(n));
  q.weights.resize(static_cast<std::size_t>(n));
  const double mass = std::sqrt(std::numbers::pi);
  for (int k = 0; k < n; ++k) {
    q.nodes[static_cast<std::size_t>(k)] = eig.eigenvalues()(k);
    const double v = eig.eigenvectors()(0, k);
    q.weights[static_cast<std::size_t>(k)] = mass * v * v;
  }
  return q;
}

ConditionalSamples conditional_expectation_gaussian(const NoiseModel& model, const std::function<double(double)>& f,
                                                    std::size_t c_index, std::size_t b_index,
                                                    const ConditionalOptions& opts) {
  if (model.spec().kind != NoiseKind::Gaussian) {
    throw Error(ErrorCode::NonGaussian, "conditional expectation needs Gaussian noise");
  }
  if (opts.quad_nodes < 8) throw Error(ErrorCode::InvalidArgument, "at least 8 quadrature nodes required");
  require_index(c_index, model.regions().size());
  require_index(b_index, model.regions().size());

  const Signature cbit = Signature{1} << c_index;
  const Signature bbit = Signature{1} << b_index;
  const auto& atoms = model.atoms().atoms;
  std::vector<std::size_t> overlap_atoms;
  ConditionalSamples out;
  double overlap_var = 0.0;
  double remainder_var = 0.0;
  for (std::size_t a = 0; a < atoms.size(); ++a) {
    if ((atoms[a].signature & cbit) == 0) continue;
    if ((atoms[a].signature & bbit) != 0) {
      overlap_atoms.push_back(a);
      out.overlap.value += atoms[a].measure;
      overlap_var += atoms[a].std_err * atoms[a].std_err;
    } else {
      out.remainder.value += atoms[a].measure;
      remainder_var += atoms[a].std_err * atoms[a].std_err;
    }
  }
  out.overlap.std_err = std::sqrt(overlap_var);
  out.remainder.std_err = std::sqrt(remainder_var);
  out.overlap.exact = out.remainder.exact = model.atoms().exact;

  const Quadrature q = gauss_hermite(opts.quad_nodes);
  const double spread = std::sqrt(2.0 * out.remainder.value);
  const double norm = 1.0 / std::sqrt(std::numbers::pi);
  out.values.resize(opts.samples);
  parallel_for(
      opts.samples,
      [&](std::size_t r) {
        const auto values = model.atom_values(r);
        double v = 0.0;
        for (auto a : overlap_atoms) v += values[a];
        if (out.remainder.value <= 0.0) {
          out.values[r] = f(v);
          return;
        }
        double acc = 0.0;
        for (std::size_t k = 0; k < q.nodes.size(); ++k) acc += q.weights[k] * f(v + spread * q.nodes[k]);
        out.values[r] = norm * acc;
      },
      opts.workers);
  return out;
}

ConditionalSamples conditional_expectation_gaussian(const std::function<double(double)>& f, const Region& c,
                                                    const Region& b, const ConditionalOptions& opts) {
  RealizeOptions ro;
  ro.atoms = opts.atoms;
  ro.seed = opts.seed;
  const NoiseModel model(NoiseSpec::gaussian(), {c, b}, ro);
  return conditional_expectation_gaussian(model, f, 0, 1, opts);
}

}  // namespace zeroone
