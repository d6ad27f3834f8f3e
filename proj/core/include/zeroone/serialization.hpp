#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "zeroone/compact_groups.hpp"
#include "zeroone/jordan.hpp"
#include "zeroone/levy_noise.hpp"
#include "zeroone/region.hpp"
#include "zeroone/shrinking_sets.hpp"

namespace zeroone {

using Json = nlohmann::json;

/// Shortest round-trip decimal form ("%.17g").
std::string format_double(double v);

/// Matrices are written as {"d": n, "rows": [[...], ...]}; parsing also takes a
/// bare array of rows. Errors throw InvalidArgument naming `what`.
Json to_json(const Matrix& m);
Json rows_json(const Matrix& m);
Matrix matrix_from_json(const Json& j, const std::string& what = "matrix");

/// {"pieces": [{"frame": rows, "box": [[lo, hi], ...]}], "disjoint": bool}.
/// A bare {"box": ...} is accepted as a single identity-frame piece.
Json to_json(const Region& r);
Region region_from_json(const Json& j, const std::string& what = "region");

Json to_json(const Box& b);
Box box_from_json(const Json& j, const std::string& what = "box");

Json to_json(const Estimate& e);
Json to_json(const ComplexJordanForm& f);
Json to_json(const RealJordanDecomposition& d);
Json to_json(const NoncompactCertificate& c);
Json to_json(const Witness& w);
Json to_json(const ShrinkingFamily& fam);
Json to_json(const AtomTable& t);
Json to_json(const NoiseSpec& s);
NoiseSpec noise_spec_from_json(const Json& j, const std::string& what = "noise");
Json to_json(const NoiseRealization& r);

/// "t1,t2,h0,violations" rows; h0 is empty when not reached.
std::string absorption_csv_header();
std::string absorption_csv_row(double t1, double t2, const AbsorptionResult& r);

}  // namespace zeroone
