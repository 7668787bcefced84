#include "fllab/io.hpp"

#include <fstream>
#include <iostream>

#include "fllab/errors.hpp"

namespace fllab {

namespace {

std::int64_t int_field(const Json& doc, const char* key, std::int64_t fallback) {
  if (!doc.contains(key)) return fallback;
  if (!doc[key].is_number_integer()) fail(ErrorKind::Parse, std::string("'") + key + "' must be an integer");
  return doc[key].get<std::int64_t>();
}

std::string literal_at(const Json& v, const std::string& where) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  fail(ErrorKind::Parse, where + " must be a scalar literal string");
}

std::vector<std::vector<std::string>> entry_rows(const Json& doc, std::size_t n) {
  if (!doc.contains("entries") || !doc["entries"].is_array()) fail(ErrorKind::Parse, "missing 'entries' array");
  const Json& rows = doc["entries"];
  if (rows.size() != n) fail(ErrorKind::Parse, "'entries' must have n rows");
  std::vector<std::vector<std::string>> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (!rows[i].is_array() || rows[i].size() != n) fail(ErrorKind::Parse, "'entries' must be an n x n array");
    out.emplace_back();
    for (std::size_t j = 0; j < n; ++j)
      out.back().push_back(literal_at(rows[i][j], "entry (" + std::to_string(i) + "," + std::to_string(j) + ")"));
  }
  return out;
}

std::vector<PAdic> scalar_list(const Json& doc, const char* key, std::size_t count, const FieldConfig& cfg) {
  if (!doc.contains(key) || !doc[key].is_array()) fail(ErrorKind::Parse, std::string("missing '") + key + "' array");
  if (doc[key].size() != count)
    fail(ErrorKind::Parse, std::string("'") + key + "' must have " + std::to_string(count) + " entries");
  std::vector<PAdic> out;
  for (const Json& v : doc[key]) out.push_back(parse_f_scalar(literal_at(v, key), cfg));
  return out;
}

template <class S>
Json entries_json(const Matrix<S>& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j).to_literal());
    rows.push_back(std::move(row));
  }
  return rows;
}

std::size_t dimension(const Json& doc) {
  if (!doc.is_object()) fail(ErrorKind::Parse, "expected a JSON object");
  const std::int64_t n = int_field(doc, "n", -1);
  if (n < 1) fail(ErrorKind::Parse, "'n' must be a positive integer");
  return static_cast<std::size_t>(n);
}

}  // namespace

MatrixInput parse_matrix_json(const Json& doc, const FieldConfig& fallback) {
  const std::size_t n = dimension(doc);
  FieldConfig cfg = fallback;
  cfg.p = int_field(doc, "p", fallback.p);
  if (doc.contains("u")) cfg.u = int_field(doc, "u", fallback.u);
  else if (cfg.p != fallback.p) cfg = FieldConfig::make(cfg.p, std::nullopt, fallback.precision);
  cfg.validate();
  if (!doc.contains("side") || !doc["side"].is_string()) fail(ErrorKind::Parse, "missing 'side'");
  MatrixInput in;
  in.cfg = cfg;
  in.side = parse_side(doc["side"].get<std::string>());
  const auto rows = entry_rows(doc, n);
  if (in.side == Side::U) {
    std::vector<std::vector<Quad>> m;
    for (const auto& r : rows) {
      m.emplace_back();
      for (const auto& s : r) m.back().push_back(parse_scalar(s, cfg));
    }
    in.x.emplace(MatrixE::from_rows(m));
  } else {
    std::vector<std::vector<PAdic>> m;
    for (const auto& r : rows) {
      m.emplace_back();
      for (const auto& s : r) m.back().push_back(parse_f_scalar(s, cfg));
    }
    in.y.emplace(MatrixF::from_rows(m));
  }
  return in;
}

Json matrix_json(const HnElement& x) {
  Json j;
  j["p"] = x.field().p;
  j["u"] = x.field().u;
  j["n"] = x.n();
  j["side"] = "u";
  j["entries"] = entries_json(x.matrix());
  return j;
}

Json matrix_json(const GlnElement& y) {
  Json j;
  j["p"] = y.field().p;
  j["u"] = y.field().u;
  j["n"] = y.n();
  j["side"] = "gl";
  j["entries"] = entries_json(y.matrix());
  return j;
}

FieldConfig invariants_field(const Json& doc, const FieldConfig& fallback) {
  FieldConfig cfg = fallback;
  cfg.p = int_field(doc, "p", fallback.p);
  if (doc.contains("u")) cfg.u = int_field(doc, "u", fallback.u);
  else if (cfg.p != fallback.p) cfg = FieldConfig::make(cfg.p, std::nullopt, fallback.precision);
  cfg.validate();
  return cfg;
}

InvariantPoint parse_invariants_json(const Json& doc, const FieldConfig& fallback) {
  const std::size_t n = dimension(doc);
  const FieldConfig cfg = invariants_field(doc, fallback);
  InvariantPoint a;
  a.n = n;
  a.charpoly = scalar_list(doc, "charpoly", n, cfg);
  a.moments = scalar_list(doc, "moments", n - 1, cfg);
  return a;
}

Json invariants_json(const InvariantPoint& a) {
  Json j;
  j["n"] = a.n;
  Json c = Json::array();
  for (const auto& x : a.charpoly) c.push_back(x.to_literal());
  Json m = Json::array();
  for (const auto& x : a.moments) m.push_back(x.to_literal());
  j["charpoly"] = std::move(c);
  j["moments"] = std::move(m);
  return j;
}

Json read_json(const std::string& path) {
  try {
    if (path == "-") return Json::parse(std::cin);
    std::ifstream in(path);
    if (!in) fail(ErrorKind::Parse, "cannot open '" + path + "'");
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    fail(ErrorKind::Parse, std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace fllab
