#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "fllab/geometry.hpp"
#include "fllab/side.hpp"

namespace fllab {

using Json = nlohmann::ordered_json;

/// {"p":3,"u":-1,"n":2,"side":"u","entries":[["1","w"],["-w","0"]]}.
struct MatrixInput {
  FieldConfig cfg;
  Side side = Side::U;
  std::optional<HnElement> x;
  std::optional<GlnElement> y;
};

/// Parses the matrix document. Missing "p"/"u" fall back to `fallback`;
/// the precision always comes from `fallback`. Throws Error(Parse) on
/// malformed input and SideError on a non-hermitian u-side matrix.
MatrixInput parse_matrix_json(const Json& doc, const FieldConfig& fallback);
Json matrix_json(const HnElement& x);
Json matrix_json(const GlnElement& y);

/// {"n":2,"charpoly":["-1","-1"],"moments":["0"]}, optionally with "p" and "u".
InvariantPoint parse_invariants_json(const Json& doc, const FieldConfig& fallback);
FieldConfig invariants_field(const Json& doc, const FieldConfig& fallback);
Json invariants_json(const InvariantPoint& a);

/// Reads a file or, for "-", standard input. Throws Error(Parse).
Json read_json(const std::string& path);

}  // namespace fllab
