#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fllab/geometry.hpp"
#include "fllab/lattice.hpp"
#include "fllab/side.hpp"

namespace fllab {

struct Contribution {
  std::string lattice;
  int sign = 1;
};

/// gl side: value = omega * sum of signs. u side: value = lattice_count.
struct OrbitalResult {
  std::int64_t value = 0;
  Side side = Side::U;
  int omega = 1;
  std::int64_t lattice_count = 0;
  std::vector<Contribution> contributions;
};

/// O(X, 1_{h_n(O)}): self-dual X'-stable O_E-lattices containing b, when lambda is integral.
OrbitalResult orbital_u_unit(const HnElement& x, const EnumOptions& opts = {});
/// O(Y, 1_{gl_n(O)}): omega(Y) times the signed count of Y'-stable lattices L
/// with b in L and c L integral, when lambda is integral.
OrbitalResult orbital_gl_unit(const GlnElement& y, const EnumOptions& opts = {});

struct OracleOptions {
  std::size_t max_rank = 2;
  std::int64_t max_span = 4;
};

/// Brute force over every lattice p^hi O^m <= L <= p^lo O^m (canonical
/// bases), testing integrality of the conjugate entrywise. Throws
/// OracleTooLarge beyond the option bounds.
std::int64_t orbital_oracle(const HnElement& x, const OracleOptions& opts = {});
std::int64_t orbital_oracle(const GlnElement& y, const OracleOptions& opts = {});

struct FlComparison {
  std::int64_t o_u = 0;
  std::int64_t o_gl = 0;
  bool hermitian_exists = false;
  bool equal = false;
};

/// Both orbital integrals at the invariant point a (o_u = 0 without a hermitian orbit).
FlComparison fl_compare(const InvariantPoint& a, const EnumOptions& opts = {});
/// Same comparison for a known matched pair.
FlComparison fl_compare(const HnElement& x, const GlnElement& y, const EnumOptions& opts = {});

struct Lemma1Result {
  bool lambda_integral = false;
  std::int64_t o_u = 0;
  std::int64_t o_u_reduced = 0;
  std::int64_t o_gl = 0;
  std::int64_t o_gl_reduced = 0;
  bool u_holds = false;
  bool gl_holds = false;
  bool holds() const { return u_holds && gl_holds; }
};

/// Moves b to nu e_{n-1} (u side) and to N(nu) e_{n-1}, c to e_{n-1}^* (gl
/// side, for the matched representative) and compares O(X) with
/// 1_O(lambda) O(X') on both sides. Requires n >= 2 and q(X) a unit.
Lemma1Result lemma1_check(const HnElement& x, const EnumOptions& opts = {});

/// The conjugates used by lemma1_check, exposed for inspection.
HnElement lemma1_normal_form(const HnElement& x);
GlnElement lemma1_normal_form(const GlnElement& y);

}  // namespace fllab
