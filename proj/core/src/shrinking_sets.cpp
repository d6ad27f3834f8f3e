#include "zeroone/shrinking_sets.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "zeroone/errors.hpp"
#include "zeroone/rng.hpp"
#include "zeroone/stats.hpp"

namespace zeroone {
namespace {

constexpr std::uint64_t kAbsorbStream = 0x4142534FULL;  // "ABSO"
constexpr std::uint64_t kNullStream = 0x4E554C4CULL;    // "NULL"

// Relative slack so points on the boundary stay members after rounding.
constexpr double kSlack = 1e-12;

bool at_least(double lhs, double rhs) { return lhs >= rhs - kSlack * (std::abs(lhs) + std::abs(rhs)); }
constexpr std::size_t kChunks = 64;
constexpr long kMaxRejections = 10'000'000;

double sector_phi(double t) { return 1.0 / t - t; }

void require_positive_t(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw Error(ErrorCode::InvalidArgument, "set parameter t must be positive");
}

}  // namespace

std::string to_string(FamilyShape shape) {
  switch (shape) {
    case FamilyShape::Sector: return "sector";
    case FamilyShape::Cone: return "cone";
    case FamilyShape::Ball: return "ball";
  }
  return "unknown";
}

ShrinkingFamily ShrinkingFamily::build(const Matrix& a, FamilyShape shape, const Tolerances& tol) {
  require_square_finite(a, "witness");
  if (a.determinant() == 0.0) throw Error(ErrorCode::SingularMatrix, "witness is singular");
  ShrinkingFamily fam;
  fam.witness_ = a;
  fam.dec_ = real_jordan_form(a, tol);
  const auto cert = classify_noncompact_blocks(fam.dec_, tol.unit_tol);
  if (cert.compact) throw Error(ErrorCode::CompactClosure, "cyclic group of the witness has compact closure");
  if (cert.case_tags.empty()) {
    throw Error(ErrorCode::InvalidGenerator, "witness has no unipotent or contracting block (|det| != 1)");
  }
  fam.tag_ = cert.case_tags.front();
  const auto& block = fam.dec_.blocks[fam.tag_.block];
  fam.shape_ = block.size == 1 ? FamilyShape::Ball : shape;
  if (fam.shape_ == FamilyShape::Ball && block.size != 1) {
    throw Error(ErrorCode::InvalidArgument, "ball shape applies to size-1 blocks only");
  }
  fam.block_matrix_ = block.matrix();
  fam.block_offset_ = fam.dec_.offset(fam.tag_.block);
  fam.block_rows_ = block.rows();
  fam.basis_inverse_ = fam.dec_.conjugator.inverse();
  return fam;
}

std::string ShrinkingFamily::param_map_name() const {
  switch (shape_) {
    case FamilyShape::Sector: return "phi=1/t-t";
    case FamilyShape::Cone: return "rho=t/(1+t)";
    case FamilyShape::Ball: return "eps=t";
  }
  return "unknown";
}

double ShrinkingFamily::block_parameter(double t) const {
  require_positive_t(t);
  switch (shape_) {
    case FamilyShape::Sector: return sector_phi(t);
    case FamilyShape::Cone: return t / (1.0 + t);
    case FamilyShape::Ball: return t;
  }
  return t;
}

Vector ShrinkingFamily::block_coordinates(const Vector& x) const {
  if (x.size() != witness_.rows()) throw Error(ErrorCode::DimensionMismatch, "point has the wrong dimension");
  return basis_inverse_.middleRows(block_offset_, block_rows_) * x;
}

bool ShrinkingFamily::contains(double t, const Vector& x) const { return block_contains(t, block_coordinates(x)); }

bool ShrinkingFamily::block_contains(double t, const Vector& y) const {
  const double p = block_parameter(t);
  const auto& block = dec_.blocks[tag_.block];
  const bool pair = block.kind == BlockKind::ComplexPairBlock;
  const int r = block_rows_;
  switch (shape_) {
    case FamilyShape::Ball: {
      const double norm = pair ? std::hypot(y(0), y(1)) : std::abs(y(0));
      return norm <= p * (1.0 + kSlack);
    }
    case FamilyShape::Cone: {
      const double last = pair ? std::hypot(y(r - 2), y(r - 1)) : std::abs(y(r - 1));
      return last <= p * y.norm() * (1.0 + kSlack);
    }
    case FamilyShape::Sector: {
      if (!pair) {
        const double eta = block.eigen.real();
        return at_least(eta * y(r - 2) * y(r - 1), p * y(r - 1) * y(r - 1));
      }
      const Complex lambda = std::conj(block.eigen);
      const Complex prev(y(r - 4), y(r - 3));
      const Complex last(y(r - 2), y(r - 1));
      return at_least(std::real(lambda * prev * std::conj(last)), p * std::norm(last));
    }
  }
  return false;
}

DefiningInequality ShrinkingFamily::defining_inequality(double t) const {
  const double p = block_parameter(t);
  const auto& block = dec_.blocks[tag_.block];
  const bool pair = block.kind == BlockKind::ComplexPairBlock;
  const int r = block_rows_;
  Matrix qy = Matrix::Zero(r, r);
  double c = 0.0;
  switch (shape_) {
    case FamilyShape::Ball:
      qy = -Matrix::Identity(r, r);
      c = p * p;
      break;
    case FamilyShape::Cone:
      qy = p * p * Matrix::Identity(r, r);
      qy(r - 1, r - 1) -= 1.0;
      if (pair) qy(r - 2, r - 2) -= 1.0;
      break;
    case FamilyShape::Sector:
      if (!pair) {
        qy(r - 2, r - 1) = qy(r - 1, r - 2) = 0.5 * block.eigen.real();
        qy(r - 1, r - 1) = -p;
      } else {
        // Re(lambda z1 conj(z2)) with z1 = (u1, v1), z2 = (u2, v2), lambda = alpha + i beta.
        const double alpha = block.eigen.real();
        const double beta = -block.eigen.imag();
        const int u1 = r - 4, v1 = r - 3, u2 = r - 2, v2 = r - 1;
        qy(u1, u2) = qy(u2, u1) = 0.5 * alpha;
        qy(v1, v2) = qy(v2, v1) = 0.5 * alpha;
        qy(v1, u2) = qy(u2, v1) = -0.5 * beta;
        qy(u1, v2) = qy(v2, u1) = 0.5 * beta;
        qy(u2, u2) = qy(v2, v2) = -p;
      }
      break;
  }
  const Matrix rows = basis_inverse_.middleRows(block_offset_, block_rows_);
  return {rows.transpose() * qy * rows, c};
}

AbsorptionResult absorption_lag(const ShrinkingFamily& fam, double t1, double t2, std::size_t n_samples, long h_max,
                                std::uint64_t seed) {
  require_positive_t(t1);
  require_positive_t(t2);
  if (h_max < 0) throw Error(ErrorCode::InvalidArgument, "h_max must be non-negative");
  if (n_samples == 0) throw Error(ErrorCode::InvalidArgument, "absorption needs at least one sample");

  const Matrix& k = fam.block_matrix();
  const auto r = k.rows();
  const bool ball = fam.shape() == FamilyShape::Ball;
  const bool pair = r == 2 && ball;
  const double eps2 = ball ? fam.block_parameter(t2) : 0.0;
  const auto steps = static_cast<std::size_t>(h_max) + 1;

  const std::size_t chunks = std::min(kChunks, n_samples);
  std::vector<std::vector<std::size_t>> fails(chunks, std::vector<std::size_t>(steps, 0));

  parallel_for(chunks, [&](std::size_t c) {
    auto& local = fails[c];
    Vector y(r);
    for (std::size_t s = c; s < n_samples; s += chunks) {
      CounterRng rng(seed, {kAbsorbStream, s});
      if (ball) {
        if (s < 2) {
          y.setZero();
          y(0) = s == 0 ? eps2 : -eps2;
        } else if (pair) {
          const double rad = eps2 * std::sqrt(rng.uniform());
          const double ang = 2.0 * std::numbers::pi * rng.uniform();
          y << rad * std::cos(ang), rad * std::sin(ang);
        } else {
          y(0) = rng.uniform(-eps2, eps2);
        }
      } else {
        long tries = 0;
        do {
          if (++tries > kMaxRejections) {
            throw Error(ErrorCode::ConvergenceFailure, "rejection sampling of D_t2 did not accept");
          }
          for (Eigen::Index i = 0; i < r; ++i) y(i) = rng.normal();
          y /= y.norm();
        } while (!fam.block_contains(t2, y));
      }
      for (std::size_t h = 0; h < steps; ++h) {
        if (h > 0) y = k * y;
        if (!fam.block_contains(t1, y)) ++local[h];
      }
    }
  });

  std::vector<std::size_t> total(steps, 0);
  for (const auto& f : fails) {
    for (std::size_t h = 0; h < steps; ++h) total[h] += f[h];
  }
  AbsorptionResult out;
  out.samples = n_samples;
  const auto first = std::find(total.begin(), total.end(), std::size_t{0});
  if (first == total.end()) {
    out.violations = total.back();
    return out;
  }
  out.h0 = static_cast<long>(first - total.begin());
  for (auto it = first + 1; it != total.end(); ++it) out.violations += *it;
  return out;
}

NullBoundaryResult null_boundary_check(const ShrinkingFamily& fam, std::size_t n_samples, const Box& box,
                                       std::uint64_t seed, double t_small, double t_large) {
  if (static_cast<int>(box.size()) != fam.dim()) throw Error(ErrorCode::DimensionMismatch, "box has the wrong dimension");
  if (!(box_volume(box) > 0.0)) throw Error(ErrorCode::InvalidArgument, "box must have positive volume");
  const std::size_t chunks = std::max<std::size_t>(1, std::min(kChunks, n_samples));
  std::vector<std::size_t> outside(chunks, 0);
  std::vector<std::size_t> inside(chunks, 0);
  parallel_for(chunks, [&](std::size_t c) {
    CounterRng rng(seed, {kNullStream, c});
    Vector x(fam.dim());
    for (std::size_t s = c; s < n_samples; s += chunks) {
      for (std::size_t a = 0; a < box.size(); ++a) x(static_cast<Eigen::Index>(a)) = rng.uniform(box[a].lo, box[a].hi);
      const Vector y = fam.block_coordinates(x);
      if (!fam.block_contains(t_large, y)) ++outside[c];
      if (fam.block_contains(t_small, y)) ++inside[c];
    }
  });
  NullBoundaryResult out;
  out.samples = n_samples;
  if (n_samples == 0) return out;
  std::size_t o = 0;
  std::size_t i = 0;
  for (std::size_t c = 0; c < chunks; ++c) {
    o += outside[c];
    i += inside[c];
  }
  out.frac_outside_union = static_cast<double>(o) / static_cast<double>(n_samples);
  out.frac_in_intersection = static_cast<double>(i) / static_cast<double>(n_samples);
  return out;
}

}  // namespace zeroone
