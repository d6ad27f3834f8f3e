#include "zeroone/jordan.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <tuple>

#include "zeroone/errors.hpp"

namespace zeroone {
namespace {

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

double cluster_radius(int m, double scale, const Tolerances& tol) {
  return std::max(tol.cluster_tol, 2.0 * std::pow(tol.defect_eps * scale, 1.0 / m));
}

double diameter(const std::vector<Complex>& values) {
  double best = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    for (std::size_t j = i + 1; j < values.size(); ++j) {
      best = std::max(best, std::abs(values[i] - values[j]));
    }
  }
  return best;
}

double gap(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& x : a) {
    for (const auto& y : b) best = std::min(best, std::abs(x - y));
  }
  return best;
}

// Agglomerative clustering: repeatedly merge the pair whose union has the
// smallest diameter, as long as that diameter fits the size-aware radius.
std::vector<std::vector<Complex>> cluster_raw(const ComplexVector& raw, double scale,
                                              const Tolerances& tol) {
  std::vector<std::vector<Complex>> clusters;
  for (Eigen::Index i = 0; i < raw.size(); ++i) clusters.push_back({raw(i)});

  while (clusters.size() > 1) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t bi = 0;
    std::size_t bj = 0;
    for (std::size_t i = 0; i < clusters.size(); ++i) {
      for (std::size_t j = i + 1; j < clusters.size(); ++j) {
        auto merged = clusters[i];
        merged.insert(merged.end(), clusters[j].begin(), clusters[j].end());
        const int m = static_cast<int>(merged.size());
        const double excess = diameter(merged) / cluster_radius(m, scale, tol);
        if (excess < best) {
          best = excess;
          bi = i;
          bj = j;
        }
      }
    }
    if (best > 1.0) break;
    clusters[bi].insert(clusters[bi].end(), clusters[bj].begin(), clusters[bj].end());
    clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(bj));
  }

  for (std::size_t i = 0; i < clusters.size(); ++i) {
    for (std::size_t j = i + 1; j < clusters.size(); ++j) {
      const int m = static_cast<int>(clusters[i].size() + clusters[j].size());
      const double r = cluster_radius(m, scale, tol);
      const double g = gap(clusters[i], clusters[j]);
      // The size-aware term already overstates the scatter, so it gets a
      // narrower band than the fixed cluster_tol.
      if (g < std::max(10.0 * tol.cluster_tol, 4.0 * r)) {
        throw Error(ErrorCode::IllConditioned,
                    "eigenvalue gap " + std::to_string(g) + " is too close to the cluster radius " +
                        std::to_string(r));
      }
    }
  }
  return clusters;
}

template <typename Scalar>
Mat<Scalar> power(const Mat<Scalar>& n, int k) {
  Mat<Scalar> out = Mat<Scalar>::Identity(n.rows(), n.cols());
  for (int i = 0; i < k; ++i) out = out * n;
  return out;
}

// Orthonormal basis of the k-dimensional numerical null space of `m`
// (the right singular vectors of the k smallest singular values).
template <typename Scalar>
Mat<Scalar> smallest_right_singular(const Mat<Scalar>& m, int k, double min_ratio) {
  Eigen::JacobiSVD<Mat<Scalar>> svd(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const Eigen::Index n = m.cols();
  if (k < n && min_ratio > 0.0) {
    const double kept = sv(n - k - 1);
    const double dropped = sv(n - k);
    if (!(kept > min_ratio * dropped) || kept == 0.0) {
      throw Error(ErrorCode::IllConditioned, "no clear singular-value gap separating a " + std::to_string(k) +
                                                 "-dimensional generalized eigenspace");
    }
  }
  return svd.matrixV().rightCols(k);
}

// Kublanovskaya staircase: nullities of N^1, N^2, ... for a nilpotent N,
// each step deciding only the rank of a single restriction.
template <typename Scalar>
std::vector<int> staircase_nullities(const Mat<Scalar>& nilpotent, double tau) {
  const int m = static_cast<int>(nilpotent.rows());
  std::vector<int> out;
  Mat<Scalar> cur = nilpotent;
  int total = 0;
  while (total < m) {
    const int r = static_cast<int>(cur.rows());
    Eigen::JacobiSVD<Mat<Scalar>> svd(cur, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    int k = 0;
    for (int i = 0; i < r; ++i) {
      if (sv(i) <= tau) ++k;
    }
    if (k == 0) {
      throw Error(ErrorCode::IllConditioned, "restriction to the generalized eigenspace is not nilpotent");
    }
    if (!out.empty() && k > out.back() - (out.size() > 1 ? out[out.size() - 2] : 0)) {
      throw Error(ErrorCode::IllConditioned, "inconsistent Weyr characteristic in rank decisions");
    }
    total += k;
    out.push_back(total);
    if (total == m) break;
    Mat<Scalar> v(r, r);
    v << svd.matrixV().rightCols(k), svd.matrixV().leftCols(r - k);
    const Mat<Scalar> rotated = v.adjoint() * cur * v;
    cur = rotated.bottomRightCorner(r - k, r - k);
  }
  return out;
}

template <typename Scalar>
Mat<Scalar> orthonormal_columns(const Mat<Scalar>& w) {
  if (w.cols() == 0) return w;
  Eigen::JacobiSVD<Mat<Scalar>> svd(w, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > 1e-8 * sv(0)) ++rank;
  }
  return svd.matrixU().leftCols(rank);
}

template <typename Scalar>
void normalize_phase(Vec<Scalar>& v) {
  Eigen::Index arg = 0;
  const double peak = v.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) >= (1.0 - 1e-9) * peak) {
      arg = i;
      break;
    }
  }
  const Scalar unit = v(arg) / std::abs(v(arg));
  if constexpr (std::is_same_v<Scalar, double>) {
    v *= unit;  // unit is +-1
  } else {
    v *= std::conj(unit);
  }
}

struct Chain {
  Complex eigen;
  bool real = true;
  std::vector<ComplexVector> vectors;  // eigenvector first, top of chain last
};

struct ClusterAnalysis {
  Complex lambda;
  int algebraic = 0;
  bool real = true;
  std::vector<int> nullities;
  std::vector<Chain> chains;
};

template <typename Scalar>
ClusterAnalysis analyse_cluster(const Mat<Scalar>& a, Scalar lambda, int m, double scale,
                                const Tolerances& tol) {
  const Eigen::Index d = a.rows();
  const Mat<Scalar> id = Mat<Scalar>::Identity(d, d);

  Mat<Scalar> n = a - lambda * id;
  Mat<Scalar> basis = smallest_right_singular<Scalar>(power<Scalar>(n, m), m, 100.0);
  Mat<Scalar> restricted = basis.adjoint() * n * basis;
  // The trace of the restriction recovers the cluster eigenvalue to rounding accuracy.
  lambda += restricted.trace() / static_cast<double>(m);
  n = a - lambda * id;
  basis = smallest_right_singular<Scalar>(power<Scalar>(n, m), m, 100.0);
  restricted = basis.adjoint() * n * basis;

  ClusterAnalysis out;
  out.lambda = Complex(lambda);
  out.algebraic = m;
  out.real = std::is_same_v<Scalar, double>;
  out.nullities = staircase_nullities<Scalar>(restricted, tol.cluster_tol * scale);

  const int p = static_cast<int>(out.nullities.size());
  auto nullity = [&](int k) {
    if (k <= 0) return 0;
    if (k > p) return m;
    return out.nullities[static_cast<std::size_t>(k - 1)];
  };

  std::vector<Mat<Scalar>> kernel(static_cast<std::size_t>(p + 1));
  kernel[0] = Mat<Scalar>::Zero(m, 0);
  for (int k = 1; k <= p; ++k) {
    kernel[static_cast<std::size_t>(k)] =
        smallest_right_singular<Scalar>(power<Scalar>(restricted, k), nullity(k), 0.0);
  }

  std::vector<std::pair<Vec<Scalar>, int>> tops;
  for (int k = p; k >= 1; --k) {
    const int count = (nullity(k) - nullity(k - 1)) - (nullity(k + 1) - nullity(k));
    if (count < 0) throw Error(ErrorCode::IllConditioned, "negative Jordan block count");
    if (count == 0) continue;

    std::vector<Vec<Scalar>> spanning;
    const auto& lower = kernel[static_cast<std::size_t>(k - 1)];
    for (Eigen::Index c = 0; c < lower.cols(); ++c) spanning.push_back(lower.col(c));
    for (const auto& [v, s] : tops) spanning.push_back(power<Scalar>(restricted, s - k) * v);
    Mat<Scalar> w(m, static_cast<Eigen::Index>(spanning.size()));
    for (std::size_t c = 0; c < spanning.size(); ++c) w.col(static_cast<Eigen::Index>(c)) = spanning[c];
    const Mat<Scalar> wq = orthonormal_columns<Scalar>(w);

    const auto& upper = kernel[static_cast<std::size_t>(k)];
    Mat<Scalar> projected = upper;
    if (wq.cols() > 0) projected -= wq * (wq.adjoint() * upper);
    Eigen::JacobiSVD<Mat<Scalar>> svd(projected, Eigen::ComputeThinU);
    if (svd.singularValues().size() < count || svd.singularValues()(count - 1) < 0.5) {
      throw Error(ErrorCode::IllConditioned, "could not isolate new Jordan chain tops");
    }
    for (int c = 0; c < count; ++c) {
      Vec<Scalar> top = svd.matrixU().col(c);
      normalize_phase<Scalar>(top);
      tops.emplace_back(top, k);
    }
  }

  for (const auto& [top, size] : tops) {
    Chain chain;
    chain.eigen = out.lambda;
    chain.real = out.real;
    std::vector<Vec<Scalar>> rev;
    Vec<Scalar> v = basis * top;
    for (int j = 0; j < size; ++j) {
      rev.push_back(v);
      v = n * v;
    }
    for (auto it = rev.rbegin(); it != rev.rend(); ++it) {
      chain.vectors.push_back(it->template cast<Complex>());
    }
    out.chains.push_back(std::move(chain));
  }
  return out;
}

struct SpectrumAnalysis {
  std::vector<ClusterAnalysis> representatives;  // real clusters and upper-half-plane members of pairs
};

SpectrumAnalysis analyse_spectrum(const Matrix& a, const Tolerances& tol) {
  require_square_finite(a, "matrix");
  const double scale = std::max(1.0, op_norm(a));

  Eigen::EigenSolver<Matrix> es(a, false);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::ConvergenceFailure, "eigenvalue iteration did not converge");
  }
  const auto groups = cluster_raw(es.eigenvalues(), scale, tol);

  SpectrumAnalysis out;
  const ComplexMatrix ac = a.cast<Complex>();
  for (const auto& g : groups) {
    const int m = static_cast<int>(g.size());
    Complex mean = std::accumulate(g.begin(), g.end(), Complex(0.0, 0.0)) / static_cast<double>(m);
    const double r = cluster_radius(m, scale, tol);
    if (std::abs(mean.imag()) <= r) {
      out.representatives.push_back(analyse_cluster<double>(a, mean.real(), m, scale, tol));
    } else if (mean.imag() > 0.0) {
      out.representatives.push_back(analyse_cluster<Complex>(ac, mean, m, scale, tol));
    } else {
      // Lower half-plane clusters are the conjugates of upper ones; verify a partner exists.
      const bool paired = std::any_of(groups.begin(), groups.end(), [&](const auto& other) {
        if (other.size() != g.size()) return false;
        Complex om = std::accumulate(other.begin(), other.end(), Complex(0.0, 0.0)) /
                     static_cast<double>(other.size());
        return std::abs(om - std::conj(mean)) <= r;
      });
      if (!paired) throw Error(ErrorCode::IllConditioned, "non-real eigenvalue cluster without conjugate partner");
    }
  }
  return out;
}

struct BlockRecord {
  RealJordanBlock block;
  const Chain* chain = nullptr;
};

bool canonical_less(const RealJordanBlock& x, const RealJordanBlock& y) {
  if (x.kind != y.kind) return x.kind == BlockKind::RealBlock;
  const double ax = std::abs(x.eigen);
  const double ay = std::abs(y.eigen);
  if (ax != ay) return ax > ay;
  if (x.size != y.size) return x.size > y.size;
  if (x.kind == BlockKind::RealBlock) return x.eigen.real() > y.eigen.real();
  return std::arg(x.eigen) < std::arg(y.eigen);
}

std::vector<BlockRecord> canonical_blocks(const SpectrumAnalysis& spec) {
  std::vector<BlockRecord> records;
  for (const auto& cluster : spec.representatives) {
    for (const auto& chain : cluster.chains) {
      BlockRecord rec;
      rec.block.kind = cluster.real ? BlockKind::RealBlock : BlockKind::ComplexPairBlock;
      rec.block.size = static_cast<int>(chain.vectors.size());
      rec.block.eigen = cluster.real ? Complex(cluster.lambda.real(), 0.0) : cluster.lambda;
      rec.chain = &chain;
      records.push_back(rec);
    }
  }
  std::stable_sort(records.begin(), records.end(),
                   [](const BlockRecord& x, const BlockRecord& y) { return canonical_less(x.block, y.block); });
  return records;
}

template <typename M>
double relative_residual(const M& a, const M& s, const M& j) {
  Eigen::FullPivLU<M> lu(s);
  if (!lu.isInvertible()) throw Error(ErrorCode::IllConditioned, "Jordan basis is singular");
  const M diff = a - s * j * lu.inverse();
  const double na = op_norm(a);
  const double nd = op_norm(diff);
  return na > 0.0 ? nd / na : nd;
}

}  // namespace

std::vector<EigenCluster> eigen_spectrum(const Matrix& a, const Tolerances& tol) {
  const auto spec = analyse_spectrum(a, tol);
  std::vector<EigenCluster> out;
  for (const auto& c : spec.representatives) {
    const int geom = c.nullities.front();
    if (c.real) {
      out.push_back({Complex(c.lambda.real(), 0.0), c.algebraic, geom});
    } else {
      out.push_back({c.lambda, c.algebraic, geom});
      out.push_back({std::conj(c.lambda), c.algebraic, geom});
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const EigenCluster& x, const EigenCluster& y) {
    if (std::abs(x.value) != std::abs(y.value)) return std::abs(x.value) > std::abs(y.value);
    return x.value.imag() > y.value.imag();
  });
  return out;
}

ComplexMatrix ComplexJordanForm::form() const {
  const int d = std::accumulate(blocks.begin(), blocks.end(), 0,
                                [](int acc, const ComplexJordanBlock& b) { return acc + b.size; });
  ComplexMatrix j = ComplexMatrix::Zero(d, d);
  int off = 0;
  for (const auto& b : blocks) {
    for (int i = 0; i < b.size; ++i) {
      j(off + i, off + i) = b.eigenvalue;
      if (i + 1 < b.size) j(off + i, off + i + 1) = 1.0;
    }
    off += b.size;
  }
  return j;
}

ComplexJordanForm complex_jordan_form(const Matrix& a, const Tolerances& tol) {
  const auto spec = analyse_spectrum(a, tol);
  const auto records = canonical_blocks(spec);
  const Eigen::Index d = a.rows();

  ComplexJordanForm out;
  out.conjugator = ComplexMatrix::Zero(d, d);
  Eigen::Index col = 0;
  for (const auto& rec : records) {
    const auto& vecs = rec.chain->vectors;
    out.blocks.push_back({rec.block.size, rec.chain->eigen});
    for (const auto& v : vecs) out.conjugator.col(col++) = v;
    if (!rec.chain->real) {
      out.blocks.push_back({rec.block.size, std::conj(rec.chain->eigen)});
      for (const auto& v : vecs) out.conjugator.col(col++) = v.conjugate();
    }
  }
  if (col != d) throw Error(ErrorCode::IllConditioned, "Jordan chains do not span the space");
  out.residual = relative_residual<ComplexMatrix>(a.cast<Complex>(), out.conjugator, out.form());
  if (out.residual > tol.reconstruction_tol) {
    throw Error(ErrorCode::IllConditioned, "complex Jordan reconstruction residual " + std::to_string(out.residual));
  }
  return out;
}

Matrix RealJordanBlock::matrix() const {
  const int n = rows();
  Matrix m = Matrix::Zero(n, n);
  if (kind == BlockKind::RealBlock) {
    for (int i = 0; i < size; ++i) {
      m(i, i) = eigen.real();
      if (i + 1 < size) m(i, i + 1) = 1.0;
    }
    return m;
  }
  const double c = eigen.real();
  const double s = eigen.imag();
  for (int i = 0; i < size; ++i) {
    const int o = 2 * i;
    m(o, o) = c;
    m(o, o + 1) = s;
    m(o + 1, o) = -s;
    m(o + 1, o + 1) = c;
    if (i + 1 < size) {
      m(o, o + 2) = 1.0;
      m(o + 1, o + 3) = 1.0;
    }
  }
  return m;
}

int RealJordanDecomposition::order() const {
  return std::accumulate(blocks.begin(), blocks.end(), 0,
                         [](int acc, const RealJordanBlock& b) { return acc + b.rows(); });
}

int RealJordanDecomposition::offset(std::size_t index) const {
  int off = 0;
  for (std::size_t i = 0; i < index && i < blocks.size(); ++i) off += blocks[i].rows();
  return off;
}

Matrix RealJordanDecomposition::form() const {
  const int d = order();
  Matrix k = Matrix::Zero(d, d);
  int off = 0;
  for (const auto& b : blocks) {
    k.block(off, off, b.rows(), b.rows()) = b.matrix();
    off += b.rows();
  }
  return k;
}

RealJordanDecomposition real_jordan_form(const Matrix& a, const Tolerances& tol) {
  const auto spec = analyse_spectrum(a, tol);
  const auto records = canonical_blocks(spec);
  const Eigen::Index d = a.rows();

  RealJordanDecomposition out;
  out.conjugator = Matrix::Zero(d, d);
  Eigen::Index col = 0;
  for (const auto& rec : records) {
    out.blocks.push_back(rec.block);
    for (const auto& v : rec.chain->vectors) {
      if (rec.chain->real) {
        out.conjugator.col(col++) = v.real();
      } else {
        out.conjugator.col(col++) = v.real();
        out.conjugator.col(col++) = v.imag();
      }
    }
  }
  if (col != d) throw Error(ErrorCode::IllConditioned, "Jordan chains do not span the space");
  out.residual = relative_residual<Matrix>(a, out.conjugator, out.form());
  if (out.residual > tol.reconstruction_tol) {
    throw Error(ErrorCode::IllConditioned, "real Jordan reconstruction residual " + std::to_string(out.residual));
  }
  return out;
}

Vector jordan_block_power_apply(const RealJordanBlock& block, long h, const Vector& x) {
  if (block.kind != BlockKind::RealBlock) {
    throw Error(ErrorCode::InvalidArgument, "closed-form power applies to real Jordan blocks");
  }
  if (x.size() != block.size) {
    throw Error(ErrorCode::DimensionMismatch, "vector length " + std::to_string(x.size()) +
                                                  " does not match block size " + std::to_string(block.size));
  }
  if (h < 0) throw Error(ErrorCode::InvalidArgument, "power must be non-negative");

  const double eta = block.eigen.real();
  const int a = block.size;
  // coeff[j] = h (h-1) ... (h-j+1) / j! * eta^(h-j), the weight of N^j.
  std::vector<double> coeff(static_cast<std::size_t>(a), 0.0);
  double falling = 1.0;
  for (int j = 0; j < a; ++j) {
    if (j > 0) falling *= static_cast<double>(h - j + 1) / static_cast<double>(j);
    coeff[static_cast<std::size_t>(j)] = (j <= h) ? falling * std::pow(eta, static_cast<double>(h - j)) : 0.0;
  }
  Vector out = Vector::Zero(a);
  for (int l = 0; l < a; ++l) {
    double acc = 0.0;
    for (int i = l; i < a; ++i) acc += x(i) * coeff[static_cast<std::size_t>(i - l)];
    out(l) = acc;
  }
  return out;
}

char case_letter(NoncompactCase c) {
  switch (c) {
    case NoncompactCase::A: return 'A';
    case NoncompactCase::B: return 'B';
    case NoncompactCase::C: return 'C';
    case NoncompactCase::D: return 'D';
  }
  return '?';
}

NoncompactCertificate classify_noncompact_blocks(const RealJordanDecomposition& dec, double unit_tol) {
  NoncompactCertificate cert;
  bool all_unit_simple = true;
  for (std::size_t i = 0; i < dec.blocks.size(); ++i) {
    const auto& b = dec.blocks[i];
    const double modulus = std::abs(b.eigen);
    const bool on_circle = std::abs(modulus - 1.0) <= unit_tol;
    const bool inside = modulus < 1.0 - unit_tol;
    if (!on_circle || b.size != 1) all_unit_simple = false;
    if (b.kind == BlockKind::RealBlock) {
      if (on_circle && b.size >= 2) cert.case_tags.push_back({NoncompactCase::A, i});
      if (inside) cert.case_tags.push_back({NoncompactCase::C, i});
    } else {
      if (on_circle && b.size >= 2) cert.case_tags.push_back({NoncompactCase::B, i});
      if (inside) cert.case_tags.push_back({NoncompactCase::D, i});
    }
  }
  cert.compact = cert.case_tags.empty() && all_unit_simple;
  return cert;
}

bool cyclic_closure_compact(const Matrix& a, const Tolerances& tol) {
  require_square_finite(a, "matrix");
  if (std::abs(a.determinant()) == 0.0) throw Error(ErrorCode::SingularMatrix, "cyclic closure needs an invertible matrix");
  return classify_noncompact_blocks(real_jordan_form(a, tol), tol.unit_tol).compact;
}

}  // namespace zeroone
