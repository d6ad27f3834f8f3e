#include "zeroone/compact_groups.hpp"

#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <string>
#include <unordered_set>

#include "zeroone/errors.hpp"
#include "zeroone/jordan.hpp"

namespace zeroone {
namespace {

constexpr double kFloorTol = 1e-9;

// Hash key of a matrix rounded to a 1e-9 grid.
std::vector<std::int64_t> rounded_key(const Matrix& m) {
  std::vector<std::int64_t> key;
  key.reserve(static_cast<std::size_t>(m.size()) + 1);
  key.push_back(m.rows());
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) key.push_back(std::llround(m(i, j) * 1e9));
  }
  return key;
}

struct KeyHash {
  std::size_t operator()(const std::vector<std::int64_t>& key) const noexcept {
    std::uint64_t h = 1469598103934665603ULL;
    for (auto v : key) {
      h ^= static_cast<std::uint64_t>(v);
      h *= 1099511628211ULL;
    }
    return static_cast<std::size_t>(h);
  }
};

using SeenSet = std::unordered_set<std::vector<std::int64_t>, KeyHash>;

void check_generators(const std::vector<Matrix>& generators, double det_tol) {
  if (generators.empty()) throw Error(ErrorCode::InvalidArgument, "at least one generator is required");
  const auto d = generators.front().rows();
  for (const auto& g : generators) {
    if (g.rows() != d || g.cols() != d) throw Error(ErrorCode::DimensionMismatch, "generators differ in order");
    require_measure_preserving(g, det_tol, "generator");
  }
}

double bump(double t) { return (t <= 0.0 || t >= 1.0) ? 0.0 : std::exp(-1.0 / (t * (1.0 - t))); }

}  // namespace

std::optional<Witness> find_noncompact_witness(const std::vector<Matrix>& generators, int max_word_len,
                                               const Tolerances& tol) {
  check_generators(generators, tol.det_tol);
  std::vector<Matrix> alphabet;
  for (const auto& g : generators) {
    alphabet.push_back(g);
    alphabet.push_back(g.inverse());
  }
  const auto d = generators.front().rows();

  struct Node {
    Matrix element;
    std::vector<int> word;
  };
  SeenSet seen;
  seen.insert(rounded_key(Matrix::Identity(d, d)));
  std::deque<Node> frontier;
  frontier.push_back({Matrix::Identity(d, d), {}});

  while (!frontier.empty()) {
    Node node = std::move(frontier.front());
    frontier.pop_front();
    if (static_cast<int>(node.word.size()) >= max_word_len) continue;
    for (int letter = 0; letter < static_cast<int>(alphabet.size()); ++letter) {
      if (!node.word.empty() && (node.word.back() ^ 1) == letter) continue;  // not reduced
      Node next{node.element * alphabet[static_cast<std::size_t>(letter)], node.word};
      next.word.push_back(letter);
      if (!seen.insert(rounded_key(next.element)).second) continue;
      try {
        if (!cyclic_closure_compact(next.element, tol)) return Witness{next.element, next.word};
      } catch (const Error& e) {
        // Words whose spectrum sits on a clustering boundary are skipped.
        if (e.code() != ErrorCode::IllConditioned) throw;
      }
      frontier.push_back(std::move(next));
    }
  }
  return std::nullopt;
}

std::vector<Matrix> enumerate_finite_group(const std::vector<Matrix>& generators, std::size_t cap) {
  if (generators.empty()) throw Error(ErrorCode::InvalidArgument, "at least one generator is required");
  const auto d = generators.front().rows();
  std::vector<Matrix> elements{Matrix::Identity(d, d)};
  SeenSet seen{rounded_key(elements.front())};
  for (std::size_t next = 0; next < elements.size(); ++next) {
    for (const auto& g : generators) {
      Matrix product = elements[next] * g;
      if (seen.insert(rounded_key(product)).second) {
        elements.push_back(std::move(product));
        if (elements.size() > cap) {
          throw Error(ErrorCode::GroupTooLarge, "group enumeration exceeded " + std::to_string(cap) + " elements");
        }
      }
    }
  }
  return elements;
}

Matrix cyclic_average(const Matrix& a, long terms, CesaroWeights weights, double growth_guard) {
  const auto d = a.rows();
  Matrix acc = Matrix::Zero(d, d);
  Matrix p = Matrix::Identity(d, d);
  double total = 0.0;
  for (long h = 0; h < terms; ++h) {
    const double w = weights == CesaroWeights::Uniform
                         ? 1.0
                         : bump((static_cast<double>(h) + 0.5) / static_cast<double>(terms));
    acc.noalias() += w * (p.transpose() * p);
    total += w;
    p = p * a;
    if (p.cwiseAbs().maxCoeff() > growth_guard) {
      throw Error(ErrorCode::NotCompact, "powers exceed the growth guard at h = " + std::to_string(h + 1));
    }
  }
  Matrix s = acc / total;
  return 0.5 * (s + s.transpose());
}

HaarForm haar_average_form(const std::vector<Matrix>& generators, const HaarOptions& opts) {
  check_generators(generators, Tolerances{}.det_tol);
  const auto d = generators.front().rows();

  if (opts.mode == HaarMode::FiniteGroup) {
    const auto elements = enumerate_finite_group(generators, opts.group_cap);
    Matrix acc = Matrix::Zero(d, d);
    for (const auto& g : elements) acc.noalias() += g.transpose() * g;
    Matrix s = acc / static_cast<double>(elements.size());
    return {0.5 * (s + s.transpose()), static_cast<long>(elements.size())};
  }

  if (generators.size() != 1) {
    throw Error(ErrorCode::InvalidArgument, "cyclic averaging takes exactly one generator");
  }
  const Matrix& a = generators.front();
  bool compact = true;
  try {
    compact = cyclic_closure_compact(a);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::IllConditioned) throw;  // fall back on the growth guard
  }
  if (!compact) throw Error(ErrorCode::NotCompact, "generator has an unbounded cyclic group");

  long terms = opts.initial_terms;
  Matrix prev = cyclic_average(a, terms, opts.weights, opts.growth_guard);
  double last = std::numeric_limits<double>::infinity();
  while (terms < opts.max_terms) {
    terms *= 2;
    Matrix cur = cyclic_average(a, terms, opts.weights, opts.growth_guard);
    const double diff = op_norm(Matrix(cur - prev)) / op_norm(cur);
    if (diff <= opts.conv_tol) return {cur, terms};
    // Past the rounding floor the differences stop shrinking; keep the
    // earlier average once it is already tight.
    if (diff >= last && last <= kFloorTol) return {prev, terms / 2};
    last = diff;
    prev = std::move(cur);
  }
  throw Error(ErrorCode::ConvergenceFailure, "cyclic average did not settle within " + std::to_string(opts.max_terms) +
                                                 " terms");
}

Matrix spd_sqrt_inverse(const Matrix& s) {
  require_square_finite(s, "SPD matrix");
  if ((s - s.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, s.cwiseAbs().maxCoeff())) {
    throw Error(ErrorCode::NotSPD, "matrix is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(s);
  if (es.info() != Eigen::Success) throw Error(ErrorCode::ConvergenceFailure, "symmetric eigensolver failed");
  if (es.eigenvalues().minCoeff() <= 0.0) throw Error(ErrorCode::NotSPD, "matrix has a non-positive eigenvalue");
  const Vector inv_root = es.eigenvalues().cwiseSqrt().cwiseInverse();
  Matrix h = es.eigenvectors() * inv_root.asDiagonal() * es.eigenvectors().transpose();
  return 0.5 * (h + h.transpose());
}

double orthogonality_defect(const std::vector<Matrix>& generators, const Matrix& h) {
  const Matrix h_inv = h.inverse();
  double worst = 0.0;
  for (const auto& g : generators) {
    const Matrix q = h_inv * g * h;
    const Matrix e = q.transpose() * q - Matrix::Identity(q.rows(), q.cols());
    worst = std::max(worst, op_norm(e));
  }
  return worst;
}

Matrix weyl_conjugator(const std::vector<Matrix>& generators, const HaarOptions& opts, double orth_tol) {
  const HaarForm form = haar_average_form(generators, opts);
  // Scale S to unit spectral norm; h then has smallest eigenvalue 1.
  Matrix h = spd_sqrt_inverse(form.form / op_norm(form.form));
  const double defect = orthogonality_defect(generators, h);
  if (defect > orth_tol) {
    throw Error(ErrorCode::ConvergenceFailure,
                "conjugated generators miss orthogonality by " + std::to_string(defect));
  }
  return h;
}

}  // namespace zeroone
