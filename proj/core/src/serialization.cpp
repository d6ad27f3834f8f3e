#include "zeroone/serialization.hpp"

#include <cstdio>

#include "zeroone/errors.hpp"

namespace zeroone {
namespace {

[[noreturn]] void bad(const std::string& what, const std::string& why) {
  throw Error(ErrorCode::InvalidArgument, what + ": " + why);
}

double number_at(const Json& j, const std::string& what) {
  if (!j.is_number()) bad(what, "expected a number");
  return j.get<double>();
}

Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json to_json(const Matrix& m) { return {{"d", m.rows()}, {"rows", rows_json(m)}}; }

Json rows_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const Json& j, const std::string& what) {
  if (j.is_object() && j.contains("rows")) {
    Matrix m = matrix_from_json(j["rows"], what + ".rows");
    if (j.contains("d") && (!j["d"].is_number_integer() || j["d"].get<long>() != m.rows() || m.rows() != m.cols())) {
      bad(what + ".d", "does not match the rows");
    }
    return m;
  }
  if (!j.is_array() || j.empty()) bad(what, "expected a non-empty array of rows");
  const std::size_t n = j.size();
  const std::size_t cols = j.front().is_array() ? j.front().size() : 0;
  if (cols == 0) bad(what, "rows must be non-empty arrays");
  Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < n; ++i) {
    if (!j[i].is_array() || j[i].size() != cols) bad(what, "row " + std::to_string(i) + " has the wrong length");
    for (std::size_t k = 0; k < cols; ++k) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
          number_at(j[i][k], what + "[" + std::to_string(i) + "][" + std::to_string(k) + "]");
    }
  }
  return m;
}

Json to_json(const Box& b) {
  Json out = Json::array();
  for (const auto& iv : b) out.push_back(Json::array({iv.lo, iv.hi}));
  return out;
}

Box box_from_json(const Json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) bad(what, "expected a non-empty array of [lo, hi] pairs");
  Box b;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string at = what + "[" + std::to_string(i) + "]";
    if (!j[i].is_array() || j[i].size() != 2) bad(at, "expected [lo, hi]");
    b.push_back({number_at(j[i][0], at), number_at(j[i][1], at)});
  }
  return b;
}

Json to_json(const Region& r) {
  Json pieces = Json::array();
  for (const auto& p : r.pieces()) pieces.push_back({{"frame", rows_json(p.frame())}, {"box", to_json(p.box())}});
  return {{"pieces", pieces}, {"disjoint", r.disjoint()}};
}

Region region_from_json(const Json& j, const std::string& what) {
  if (!j.is_object()) bad(what, "expected an object");
  if (j.contains("box") && !j.contains("pieces")) return Region::from_box(box_from_json(j["box"], what + ".box"));
  if (!j.contains("pieces") || !j["pieces"].is_array() || j["pieces"].empty()) {
    bad(what, "expected a non-empty \"pieces\" array");
  }
  std::vector<Piece> pieces;
  for (std::size_t i = 0; i < j["pieces"].size(); ++i) {
    const auto& pj = j["pieces"][i];
    const std::string at = what + ".pieces[" + std::to_string(i) + "]";
    if (!pj.is_object() || !pj.contains("box")) bad(at, "expected an object with \"box\"");
    Box box = box_from_json(pj["box"], at + ".box");
    const auto d = static_cast<Eigen::Index>(box.size());
    Matrix frame = pj.contains("frame") ? matrix_from_json(pj["frame"], at + ".frame") : Matrix::Identity(d, d);
    pieces.emplace_back(std::move(frame), std::move(box));
  }
  bool disjoint = true;
  if (j.contains("disjoint")) {
    if (!j["disjoint"].is_boolean()) bad(what + ".disjoint", "expected a boolean");
    disjoint = j["disjoint"].get<bool>();
  }
  return Region(std::move(pieces), disjoint);
}

Json to_json(const Estimate& e) { return {{"value", e.value}, {"stderr", e.std_err}, {"exact", e.exact}}; }

Json to_json(const ComplexJordanForm& f) {
  Json blocks = Json::array();
  for (const auto& b : f.blocks) blocks.push_back({{"size", b.size}, {"eigenvalue", complex_json(b.eigenvalue)}});
  Json re = to_json(Matrix(f.conjugator.real()));
  Json im = to_json(Matrix(f.conjugator.imag()));
  return {{"blocks", blocks}, {"conjugator_real", re}, {"conjugator_imag", im}, {"residual", f.residual}};
}

Json to_json(const RealJordanDecomposition& d) {
  Json blocks = Json::array();
  for (const auto& b : d.blocks) {
    blocks.push_back({{"kind", b.kind == BlockKind::RealBlock ? "real" : "complex_pair"},
                      {"size", b.size},
                      {"eigenvalue", complex_json(b.eigen)}});
  }
  return {{"blocks", blocks}, {"conjugator", to_json(d.conjugator)}, {"form", to_json(d.form())}, {"residual", d.residual}};
}

Json to_json(const NoncompactCertificate& c) {
  Json tags = Json::array();
  for (const auto& t : c.case_tags) tags.push_back({{"case", std::string(1, case_letter(t.which))}, {"block", t.block}});
  return {{"compact", c.compact}, {"case_tags", tags}};
}

Json to_json(const Witness& w) { return {{"element", to_json(w.element)}, {"word", w.word}}; }

Json to_json(const ShrinkingFamily& fam) {
  return {{"witness", to_json(fam.witness())},
          {"basis", to_json(fam.basis())},
          {"selected_block", fam.selected_block()},
          {"case", std::string(1, case_letter(fam.case_tag()))},
          {"shape", to_string(fam.shape())},
          {"param_map", fam.param_map_name()}};
}

Json to_json(const AtomTable& t) {
  Json atoms = Json::array();
  for (const auto& a : t.atoms) {
    atoms.push_back({{"signature", t.signature_string(a.signature)},
                     {"measure", a.measure},
                     {"stderr", a.std_err},
                     {"samples", a.samples}});
  }
  Json measures = Json::array();
  for (const auto& e : t.region_measures) measures.push_back(to_json(e));
  return {{"region_count", t.region_count},
          {"dim", t.dim},
          {"bounding_box", to_json(t.bounding_box)},
          {"exact", t.exact},
          {"atoms", atoms},
          {"region_measures", measures}};
}

Json to_json(const NoiseSpec& s) {
  Json out = {{"kind", to_string(s.kind)}};
  if (s.kind == NoiseKind::Poisson) out["intensity"] = s.intensity;
  if (s.kind == NoiseKind::Deterministic) out["rate"] = s.rate;
  return out;
}

NoiseSpec noise_spec_from_json(const Json& j, const std::string& what) {
  if (j.is_string()) return noise_spec_from_json(Json{{"kind", j}}, what);
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) bad(what, "expected {\"kind\": ...}");
  const auto kind = j["kind"].get<std::string>();
  if (kind == "gaussian") return NoiseSpec::gaussian();
  if (kind == "poisson") return NoiseSpec::poisson(j.contains("intensity") ? number_at(j["intensity"], what + ".intensity") : 1.0);
  if (kind == "deterministic") return NoiseSpec::deterministic(j.contains("rate") ? number_at(j["rate"], what + ".rate") : 1.0);
  bad(what + ".kind", "unknown noise kind \"" + kind + "\"");
}

Json to_json(const NoiseRealization& r) {
  Json out = {{"spec", to_json(r.spec)}, {"seed", r.seed}, {"replicate", r.replicate}};
  Json regions = Json::array();
  for (const auto& reg : r.regions) regions.push_back(to_json(reg));
  out["regions"] = regions;
  out["region_values"] = r.region_values();
  if (r.spec.kind == NoiseKind::Poisson) {
    Json pts = Json::array();
    for (std::size_t k = 0; k < r.points.size(); ++k) {
      Json p = Json::array();
      for (Eigen::Index i = 0; i < r.points[k].size(); ++i) p.push_back(r.points[k](i));
      pts.push_back({{"point", p}, {"signature", r.point_signatures[k]}});
    }
    out["points"] = pts;
    if (r.window) out["window"] = {{"frame", rows_json(r.window->frame())}, {"box", to_json(r.window->box())}};
  } else {
    out["atoms"] = to_json(r.atoms);
    out["atom_values"] = r.atom_values;
  }
  return out;
}

std::string absorption_csv_header() { return "t1,t2,h0,violations"; }

std::string absorption_csv_row(double t1, double t2, const AbsorptionResult& r) {
  return format_double(t1) + "," + format_double(t2) + "," + (r.h0 ? std::to_string(*r.h0) : std::string()) + "," +
         std::to_string(r.violations);
}

}  // namespace zeroone
