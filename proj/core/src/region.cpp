#include "zeroone/region.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>

#include "zeroone/errors.hpp"
#include "zeroone/rng.hpp"
#include "zeroone/stats.hpp"

namespace zeroone {
namespace {

constexpr std::uint64_t kStrataStream = 0x5354524154ULL;  // "STRAT"
constexpr double kAtomFloor = 1e-9;
constexpr std::size_t kMaxExactCells = 20'000'000;

void check_box(const Box& box) {
  for (const auto& iv : box) {
    if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi)) {
      throw Error(ErrorCode::UnboundedRegion, "box interval has a non-finite endpoint");
    }
    if (iv.lo > iv.hi) throw Error(ErrorCode::InvalidArgument, "box interval has lo > hi");
  }
}

Box union_box(const Box& a, const Box& b) {
  Box out = a;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i].lo = std::min(out[i].lo, b[i].lo);
    out[i].hi = std::max(out[i].hi, b[i].hi);
  }
  return out;
}

Box family_bounding_box(std::span<const Region> regions) {
  if (regions.empty()) throw Error(ErrorCode::InvalidArgument, "empty region family");
  const int d = regions.front().dim();
  Box out = regions.front().bounding_box();
  for (const auto& r : regions) {
    if (r.dim() != d) throw Error(ErrorCode::DimensionMismatch, "regions of different dimension");
    out = union_box(out, r.bounding_box());
  }
  return out;
}

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

double box_volume(const Box& box) {
  double v = 1.0;
  for (const auto& iv : box) v *= iv.length();
  return v;
}

Piece::Piece(Matrix frame, Box box) : frame_(std::move(frame)), box_(std::move(box)) {
  require_square_finite(frame_, "piece frame");
  if (frame_.rows() != static_cast<Eigen::Index>(box_.size())) {
    throw Error(ErrorCode::DimensionMismatch, "frame order does not match box dimension");
  }
  check_box(box_);
  Eigen::FullPivLU<Matrix> lu(frame_);
  if (!lu.isInvertible()) throw Error(ErrorCode::SingularMatrix, "piece frame is singular");
  inverse_ = lu.inverse();
}

double Piece::volume() const { return std::abs(frame_.determinant()) * box_volume(box_); }

bool Piece::contains(const Vector& x) const {
  const Vector y = inverse_ * x;
  for (std::size_t i = 0; i < box_.size(); ++i) {
    const double v = y(static_cast<Eigen::Index>(i));
    if (v < box_[i].lo || v > box_[i].hi) return false;
  }
  return true;
}

Box Piece::bounding_box() const {
  const int d = dim();
  Box out(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    double lo = 0.0;
    double hi = 0.0;
    for (int j = 0; j < d; ++j) {
      const double m = frame_(i, j);
      const double a = m * box_[static_cast<std::size_t>(j)].lo;
      const double b = m * box_[static_cast<std::size_t>(j)].hi;
      lo += std::min(a, b);
      hi += std::max(a, b);
    }
    out[static_cast<std::size_t>(i)] = {lo, hi};
  }
  return out;
}

std::optional<Box> Piece::as_axis_box(double tol) const {
  const int d = dim();
  const double scale = frame_.cwiseAbs().maxCoeff();
  Box out(static_cast<std::size_t>(d));
  std::vector<int> row_hits(static_cast<std::size_t>(d), 0);
  for (int j = 0; j < d; ++j) {
    int row = -1;
    for (int i = 0; i < d; ++i) {
      if (std::abs(frame_(i, j)) > tol * scale) {
        if (row >= 0) return std::nullopt;
        row = i;
      }
    }
    if (row < 0 || row_hits[static_cast<std::size_t>(row)]++ > 0) return std::nullopt;
    const double m = frame_(row, j);
    const double a = m * box_[static_cast<std::size_t>(j)].lo;
    const double b = m * box_[static_cast<std::size_t>(j)].hi;
    out[static_cast<std::size_t>(row)] = {std::min(a, b), std::max(a, b)};
  }
  return out;
}

Region::Region(std::vector<Piece> pieces, bool disjoint) : pieces_(std::move(pieces)), disjoint_(disjoint) {
  if (pieces_.empty()) throw Error(ErrorCode::InvalidArgument, "region needs at least one piece");
  dim_ = pieces_.front().dim();
  for (const auto& p : pieces_) {
    if (p.dim() != dim_) throw Error(ErrorCode::DimensionMismatch, "pieces of different dimension");
  }
}

Region Region::from_box(const Box& box) {
  const auto d = static_cast<Eigen::Index>(box.size());
  return Region({Piece(Matrix::Identity(d, d), box)}, true);
}

Region Region::cube(int dim, double lo, double hi) {
  return from_box(Box(static_cast<std::size_t>(dim), Interval{lo, hi}));
}

bool Region::contains(const Vector& x) const {
  return std::any_of(pieces_.begin(), pieces_.end(), [&](const Piece& p) { return p.contains(x); });
}

Box Region::bounding_box() const {
  Box out = pieces_.front().bounding_box();
  for (const auto& p : pieces_) out = union_box(out, p.bounding_box());
  return out;
}

bool Region::axis_aligned() const {
  return std::all_of(pieces_.begin(), pieces_.end(), [](const Piece& p) { return p.as_axis_box().has_value(); });
}

Region transform(const Matrix& g, const Region& region) {
  require_square_finite(g, "transform");
  if (g.rows() != region.dim()) throw Error(ErrorCode::DimensionMismatch, "transform order does not match region");
  Eigen::FullPivLU<Matrix> lu(g);
  if (!lu.isInvertible()) throw Error(ErrorCode::SingularMatrix, "transform is singular");
  std::vector<Piece> pieces;
  pieces.reserve(region.pieces().size());
  for (const auto& p : region.pieces()) pieces.emplace_back(g * p.frame(), p.box());
  return Region(std::move(pieces), region.disjoint());
}

StratifiedPlan stratified_plan(int dim, std::size_t samples) {
  StratifiedPlan plan;
  const double target = std::max(1.0, static_cast<double>(samples) / 16.0);
  plan.strata_per_axis = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(std::pow(target, 1.0 / dim) + 1e-9)));
  plan.strata = 1;
  for (int i = 0; i < dim; ++i) plan.strata *= plan.strata_per_axis;
  plan.per_stratum = std::max<std::size_t>(2, samples / plan.strata);
  return plan;
}

namespace {

Box stratum_cell(const Box& box, const StratifiedPlan& plan, std::size_t s) {
  Box cell(box.size());
  std::size_t rest = s;
  for (std::size_t a = 0; a < box.size(); ++a) {
    const std::size_t idx = rest % plan.strata_per_axis;
    rest /= plan.strata_per_axis;
    const double w = box[a].length() / static_cast<double>(plan.strata_per_axis);
    cell[a] = {box[a].lo + w * static_cast<double>(idx), box[a].lo + w * static_cast<double>(idx + 1)};
  }
  return cell;
}

template <typename Fn>
void sample_stratum(const Box& box, const StratifiedPlan& plan, std::uint64_t seed, std::size_t s, Fn&& fn) {
  const Box cell = stratum_cell(box, plan, s);
  CounterRng rng(seed, {kStrataStream, s});
  Vector x(static_cast<Eigen::Index>(box.size()));
  for (std::size_t k = 0; k < plan.per_stratum; ++k) {
    for (std::size_t a = 0; a < box.size(); ++a) x(static_cast<Eigen::Index>(a)) = rng.uniform(cell[a].lo, cell[a].hi);
    fn(x);
  }
}

// Per-stratum signature counts, reduced in stratum order.
struct StratumCounts {
  std::vector<std::pair<Signature, std::size_t>> counts;
};

std::vector<StratumCounts> count_signatures(std::span<const Region> regions, const Box& box,
                                            const StratifiedPlan& plan, const McOptions& mc) {
  std::vector<StratumCounts> per(plan.strata);
  parallel_for(
      plan.strata,
      [&](std::size_t s) {
        std::map<Signature, std::size_t> local;
        sample_stratum(box, plan, mc.seed, s, [&](const Vector& x) { ++local[signature_of(regions, x)]; });
        per[s].counts.assign(local.begin(), local.end());
      },
      mc.workers);
  return per;
}

// Stratified estimate of the measure of {x : pred(signature)}.
template <typename Pred>
Estimate stratified_estimate(const std::vector<StratumCounts>& per, const StratifiedPlan& plan, double cell_volume,
                             Pred&& pred) {
  std::vector<double> means(per.size());
  std::vector<double> vars(per.size());
  const double k = static_cast<double>(plan.per_stratum);
  for (std::size_t s = 0; s < per.size(); ++s) {
    std::size_t hits = 0;
    for (const auto& [sig, c] : per[s].counts) {
      if (pred(sig)) hits += c;
    }
    const double p = static_cast<double>(hits) / k;
    means[s] = cell_volume * p;
    vars[s] = cell_volume * cell_volume * p * (1.0 - p) / (k - 1.0);
  }
  return {pairwise_sum(means), std::sqrt(pairwise_sum(vars)), false};
}

std::vector<double> snapped_coordinates(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  std::vector<double> out;
  for (double v : values) {
    if (out.empty() || v - out.back() > 1e-12 * (1.0 + std::abs(v))) out.push_back(v);
  }
  return out;
}

std::size_t coordinate_index(const std::vector<double>& coords, double v) {
  auto it = std::lower_bound(coords.begin(), coords.end(), v - 1e-12 * (1.0 + std::abs(v)));
  return static_cast<std::size_t>(it - coords.begin());
}

std::optional<AtomTable> atomize_exact(std::span<const Region> regions) {
  const int d = regions.front().dim();
  std::vector<std::vector<Box>> boxes(regions.size());
  for (std::size_t r = 0; r < regions.size(); ++r) {
    for (const auto& p : regions[r].pieces()) {
      auto b = p.as_axis_box();
      if (!b) return std::nullopt;
      boxes[r].push_back(std::move(*b));
    }
  }

  std::vector<std::vector<double>> coords(static_cast<std::size_t>(d));
  for (const auto& family : boxes) {
    for (const auto& b : family) {
      for (int a = 0; a < d; ++a) {
        coords[static_cast<std::size_t>(a)].push_back(b[static_cast<std::size_t>(a)].lo);
        coords[static_cast<std::size_t>(a)].push_back(b[static_cast<std::size_t>(a)].hi);
      }
    }
  }
  std::size_t cells = 1;
  std::vector<std::size_t> extent(static_cast<std::size_t>(d));
  for (int a = 0; a < d; ++a) {
    auto& c = coords[static_cast<std::size_t>(a)];
    c = snapped_coordinates(std::move(c));
    extent[static_cast<std::size_t>(a)] = c.size() > 1 ? c.size() - 1 : 0;
    cells *= extent[static_cast<std::size_t>(a)];
    if (cells > kMaxExactCells) return std::nullopt;
  }

  AtomTable table;
  table.region_count = static_cast<int>(regions.size());
  table.dim = d;
  table.exact = true;
  table.bounding_box.resize(static_cast<std::size_t>(d));
  for (int a = 0; a < d; ++a) {
    table.bounding_box[static_cast<std::size_t>(a)] = {coords[static_cast<std::size_t>(a)].front(),
                                                       coords[static_cast<std::size_t>(a)].back()};
  }

  std::vector<std::size_t> stride(static_cast<std::size_t>(d), 1);
  for (int a = 1; a < d; ++a) stride[static_cast<std::size_t>(a)] = stride[static_cast<std::size_t>(a - 1)] * extent[static_cast<std::size_t>(a - 1)];

  std::vector<Signature> sig(cells, 0);
  for (std::size_t r = 0; r < boxes.size(); ++r) {
    const Signature bit = Signature{1} << r;
    for (const auto& b : boxes[r]) {
      std::vector<std::size_t> lo(static_cast<std::size_t>(d));
      std::vector<std::size_t> hi(static_cast<std::size_t>(d));
      bool empty = false;
      for (int a = 0; a < d; ++a) {
        const auto& c = coords[static_cast<std::size_t>(a)];
        lo[static_cast<std::size_t>(a)] = coordinate_index(c, b[static_cast<std::size_t>(a)].lo);
        hi[static_cast<std::size_t>(a)] = coordinate_index(c, b[static_cast<std::size_t>(a)].hi);
        if (hi[static_cast<std::size_t>(a)] <= lo[static_cast<std::size_t>(a)]) empty = true;
      }
      if (empty) continue;
      std::vector<std::size_t> idx = lo;
      for (;;) {
        std::size_t flat = 0;
        for (int a = 0; a < d; ++a) flat += idx[static_cast<std::size_t>(a)] * stride[static_cast<std::size_t>(a)];
        sig[flat] |= bit;
        int a = 0;
        while (a < d) {
          auto& i = idx[static_cast<std::size_t>(a)];
          if (++i < hi[static_cast<std::size_t>(a)]) break;
          i = lo[static_cast<std::size_t>(a)];
          ++a;
        }
        if (a == d) break;
      }
    }
  }

  std::map<Signature, long double> measure;
  std::vector<long double> region_totals(regions.size(), 0.0L);
  std::vector<std::size_t> idx(static_cast<std::size_t>(d), 0);
  for (std::size_t flat = 0; flat < cells; ++flat) {
    std::size_t rest = flat;
    long double vol = 1.0L;
    for (int a = 0; a < d; ++a) {
      const std::size_t i = rest % extent[static_cast<std::size_t>(a)];
      rest /= extent[static_cast<std::size_t>(a)];
      const auto& c = coords[static_cast<std::size_t>(a)];
      vol *= static_cast<long double>(c[i + 1] - c[i]);
    }
    measure[sig[flat]] += vol;
    for (std::size_t r = 0; r < regions.size(); ++r) {
      if (sig[flat] & (Signature{1} << r)) region_totals[r] += vol;
    }
  }

  const double floor = kAtomFloor * box_volume(table.bounding_box);
  for (const auto& [s, m] : measure) {
    if (static_cast<double>(m) >= floor) table.atoms.push_back({s, static_cast<double>(m), 0.0, 0});
  }
  for (auto t : region_totals) table.region_measures.push_back({static_cast<double>(t), 0.0, true});
  return table;
}

AtomTable atomize_mc(std::span<const Region> regions, const McOptions& mc) {
  const Box box = family_bounding_box(regions);
  const int d = regions.front().dim();
  const StratifiedPlan plan = stratified_plan(d, mc.samples);
  const double cell_volume = box_volume(box) / static_cast<double>(plan.strata);
  const auto per = count_signatures(regions, box, plan, mc);

  std::map<Signature, std::size_t> totals;
  for (const auto& s : per) {
    for (const auto& [sig, c] : s.counts) totals[sig] += c;
  }

  AtomTable table;
  table.region_count = static_cast<int>(regions.size());
  table.dim = d;
  table.bounding_box = box;
  table.exact = false;
  const double floor = kAtomFloor * box_volume(box);
  for (const auto& [sig, count] : totals) {
    const Signature target = sig;
    Estimate e = stratified_estimate(per, plan, cell_volume, [target](Signature s) { return s == target; });
    if (e.value >= floor) table.atoms.push_back({sig, e.value, e.std_err, count});
  }
  for (std::size_t r = 0; r < regions.size(); ++r) {
    const Signature bit = Signature{1} << r;
    table.region_measures.push_back(
        stratified_estimate(per, plan, cell_volume, [bit](Signature s) { return (s & bit) != 0; }));
  }
  return table;
}

}  // namespace

void for_each_stratified_sample(const Box& box, const StratifiedPlan& plan, std::uint64_t seed,
                                const std::function<void(const Vector&, std::size_t)>& fn) {
  check_box(box);
  for (std::size_t s = 0; s < plan.strata; ++s) {
    sample_stratum(box, plan, seed, s, [&](const Vector& x) { fn(x, s); });
  }
}

Signature signature_of(std::span<const Region> regions, const Vector& x) {
  Signature sig = 0;
  for (std::size_t r = 0; r < regions.size(); ++r) {
    if (regions[r].contains(x)) sig |= Signature{1} << r;
  }
  return sig;
}

Estimate volume(const Region& region, VolumeMethod method, const McOptions& mc) {
  if (method == VolumeMethod::Exact) {
    if (!region.disjoint()) {
      throw Error(ErrorCode::OverlapUnknown, "exact volume needs a region flagged disjoint");
    }
    long double v = 0.0L;
    for (const auto& p : region.pieces()) v += static_cast<long double>(p.volume());
    return {static_cast<double>(v), 0.0, true};
  }
  const std::array<Region, 1> family{region};
  const Box box = region.bounding_box();
  const StratifiedPlan plan = stratified_plan(region.dim(), mc.samples);
  const auto per = count_signatures(family, box, plan, mc);
  return stratified_estimate(per, plan, box_volume(box) / static_cast<double>(plan.strata),
                             [](Signature s) { return s != 0; });
}

Estimate intersection_volume(const Region& a, const Region& b, IntersectionMethod method, const McOptions& mc) {
  if (a.dim() != b.dim()) throw Error(ErrorCode::DimensionMismatch, "regions of different dimension");
  const std::array<Region, 2> family{a, b};
  if (method != IntersectionMethod::MonteCarlo) {
    if (auto table = atomize_exact(family)) {
      double v = 0.0;
      for (const auto& atom : table->atoms) {
        if (atom.signature == 3) v = atom.measure;
      }
      return {v, 0.0, true};
    }
    if (method == IntersectionMethod::AxisExact) {
      throw Error(ErrorCode::NotAxisAligned, "exact intersection needs axis-aligned pieces");
    }
  }
  const Box box = a.bounding_box();
  const StratifiedPlan plan = stratified_plan(a.dim(), mc.samples);
  const auto per = count_signatures(family, box, plan, mc);
  return stratified_estimate(per, plan, box_volume(box) / static_cast<double>(plan.strata),
                             [](Signature s) { return s == 3; });
}

AtomTable atomize(std::span<const Region> regions, AtomizeMethod method, const McOptions& mc) {
  if (regions.empty()) throw Error(ErrorCode::InvalidArgument, "empty region family");
  if (regions.size() > 64) throw Error(ErrorCode::InvalidArgument, "at most 64 regions can be atomized");
  const Box box = family_bounding_box(regions);
  check_box(box);
  if (method == AtomizeMethod::Auto) {
    if (auto table = atomize_exact(regions)) return *table;
    if (regions.size() == 1 && regions.front().disjoint()) {
      // A lone region needs no overlap geometry: its atom is itself.
      AtomTable table;
      table.region_count = 1;
      table.dim = regions.front().dim();
      table.bounding_box = box;
      table.exact = true;
      const double inside = volume(regions.front(), VolumeMethod::Exact).value;
      const double outside = std::max(0.0, box_volume(box) - inside);
      const double floor = kAtomFloor * box_volume(box);
      if (outside >= floor) table.atoms.push_back({0, outside, 0.0, 0});
      if (inside >= floor) table.atoms.push_back({1, inside, 0.0, 0});
      table.region_measures.push_back({inside, 0.0, true});
      return table;
    }
  }
  return atomize_mc(regions, mc);
}

std::string AtomTable::signature_string(Signature s) const {
  std::string out(static_cast<std::size_t>(region_count), '0');
  for (int r = 0; r < region_count; ++r) {
    if (s & (Signature{1} << r)) out[static_cast<std::size_t>(r)] = '1';
  }
  return out;
}

std::optional<std::size_t> AtomTable::find(Signature s) const {
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (atoms[i].signature == s) return i;
  }
  return std::nullopt;
}

std::string AtomTable::to_csv() const {
  std::string out = "signature,measure,stderr\n";
  for (const auto& a : atoms) {
    out += signature_string(a.signature) + "," + fmt_double(a.measure) + "," + fmt_double(a.std_err) + "\n";
  }
  return out;
}

}  // namespace zeroone
