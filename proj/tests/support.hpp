#pragma once

#include <string>
#include <vector>

#include "fllab/geometry.hpp"

namespace fltest {

inline fllab::FieldConfig cfg3m() { return fllab::FieldConfig{3, -1, 48}; }

inline fllab::PAdic f(const std::string& s, const fllab::FieldConfig& c) { return fllab::parse_f_scalar(s, c); }
inline fllab::Quad e(const std::string& s, const fllab::FieldConfig& c) { return fllab::parse_scalar(s, c); }

inline fllab::MatrixF mf(const std::vector<std::vector<std::string>>& rows, const fllab::FieldConfig& c) {
  std::vector<std::vector<fllab::PAdic>> out;
  for (const auto& r : rows) {
    out.emplace_back();
    for (const auto& s : r) out.back().push_back(f(s, c));
  }
  return fllab::MatrixF::from_rows(out);
}

inline fllab::MatrixE me(const std::vector<std::vector<std::string>>& rows, const fllab::FieldConfig& c) {
  std::vector<std::vector<fllab::Quad>> out;
  for (const auto& r : rows) {
    out.emplace_back();
    for (const auto& s : r) out.back().push_back(e(s, c));
  }
  return fllab::MatrixE::from_rows(out);
}

inline bool same(const fllab::PAdic& x, const std::string& lit) {
  return fllab::agree(x, fllab::parse_f_scalar(lit, x.field()), 2);
}

template <class S>
bool agree_matrix(const fllab::Matrix<S>& a, const fllab::Matrix<S>& b, std::int64_t slack = 4) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (std::size_t i = 0; i < a.data().size(); ++i)
    if (!fllab::agree(a.data()[i], b.data()[i], slack)) return false;
  return true;
}

}  // namespace fltest
