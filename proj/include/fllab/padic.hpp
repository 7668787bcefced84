#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>

#include "fllab/errors.hpp"

namespace fllab {

/// Valuation of an exact zero.
inline constexpr std::int64_t kInfVal = std::numeric_limits<std::int64_t>::max() / 4;

/// F = Q_p and E = F(w), w^2 = u, with u a non-residue unit (E/F unramified).
struct FieldConfig {
  std::int64_t p = 3;
  std::int64_t u = 2;
  int precision = 48;

  /// Throws Error(InvalidConfig) on an even/composite p, a residue u or precision < 8.
  void validate() const;

  /// Picks the smallest positive non-residue when u is not given.
  static FieldConfig make(std::int64_t p, std::optional<std::int64_t> u = std::nullopt,
                          int precision = 48);

  bool operator==(const FieldConfig&) const = default;
};

bool is_prime(std::int64_t n);
bool is_square_mod_p(std::int64_t a, std::int64_t p);
std::int64_t smallest_nonresidue(std::int64_t p);

/// p^k as a GMP integer (k >= 0), cached per thread.
const mpz_class& pow_p(std::int64_t p, std::int64_t k);

/// Truncated p-adic number in F.
///
/// Three representations share one type:
///   - exact: a rational number, kept exactly (only zero may be exact zero);
///   - approximate: p^val * (unit + O(p^rel)), 1 <= rel <= precision;
///   - zero at precision: O(p^abs), a value indistinguishable from zero.
/// Exact values arise from literals and field operations on exact inputs;
/// Hensel lifting is the only source of approximate values.
class PAdic {
 public:
  PAdic() = default;

  static PAdic zero(const FieldConfig& cfg);
  static PAdic one(const FieldConfig& cfg);
  static PAdic from_int(std::int64_t n, const FieldConfig& cfg);
  static PAdic from_rational(const mpz_class& num, const mpz_class& den, const FieldConfig& cfg);
  static PAdic from_mpq(const mpq_class& q, const FieldConfig& cfg);
  /// p^val * (unit mod p^rel); normalizes a unit that is divisible by p.
  static PAdic from_digits(std::int64_t val, const mpz_class& unit, std::int64_t rel,
                           const FieldConfig& cfg);
  static PAdic zero_to(std::int64_t abs, const FieldConfig& cfg);
  static PAdic p_power(std::int64_t k, const FieldConfig& cfg);

  const FieldConfig& field() const { return cfg_; }

  bool is_exact() const { return kind_ == Kind::Exact; }
  bool is_exact_zero() const { return kind_ == Kind::Exact && val_ == kInfVal; }
  /// Exact zero or zero at working precision.
  bool is_zero() const { return is_exact_zero() || kind_ == Kind::ZeroTo; }

  /// Throws PrecisionExhausted for a value that is zero at precision.
  std::int64_t valuation() const;
  std::int64_t val_lower_bound() const;
  /// Digits known in absolute terms; kInfVal for exact values.
  std::int64_t abs_precision() const;
  /// Relative digits known: precision for exact values, 0 for zero at precision.
  int known_digits() const;
  /// Unit part modulo p^known_digits (0 for zero values).
  mpz_class unit() const;

  std::optional<mpq_class> exact_value() const;
  /// Exact value, or the truncation with digits in the symmetric range.
  mpq_class rational_approximation() const;

  /// x mod p^k as an integer in [0, p^k); requires val >= 0 and abs precision >= k.
  mpz_class residue(std::int64_t k) const;
  /// Canonical representative of x modulo p^k O_F (digits in [0, p)), always exact.
  PAdic reduce_mod(std::int64_t k) const;

  bool is_integral() const;
  /// Same representation bit for bit; canonical forms compare this way.
  bool identical(const PAdic& other) const;

  PAdic operator-() const;
  PAdic inverse() const;
  PAdic conj() const { return *this; }
  PAdic sqrt() const;

  friend PAdic operator+(const PAdic& x, const PAdic& y);
  friend PAdic operator-(const PAdic& x, const PAdic& y) { return x + (-y); }
  friend PAdic operator*(const PAdic& x, const PAdic& y);
  friend PAdic operator/(const PAdic& x, const PAdic& y) { return x * y.inverse(); }
  PAdic& operator+=(const PAdic& y) { return *this = *this + y; }
  PAdic& operator-=(const PAdic& y) { return *this = *this - y; }
  PAdic& operator*=(const PAdic& y) { return *this = *this * y; }

  std::string to_literal() const;
  std::string debug_string() const;

 private:
  enum class Kind : std::uint8_t { Exact, Approx, ZeroTo };

  // For exact values: x = p^val * n0 / d0 with n0, d0 prime to p.
  void exact_parts(mpz_class& n0, mpz_class& d0) const;
  // Residue of x * p^{-shift} modulo p^{target - shift}; requires val(x) >= shift.
  mpz_class scaled_residue(std::int64_t shift, std::int64_t target) const;

  FieldConfig cfg_;
  Kind kind_ = Kind::Exact;
  mpq_class q_;                 // exact value
  std::int64_t val_ = kInfVal;  // valuation; abs precision for ZeroTo
  mpz_class unit_;              // approximate unit, in [0, p^rel)
  std::int64_t rel_ = 0;
};

/// a + b w in E.
class Quad {
 public:
  Quad() = default;
  explicit Quad(PAdic a);
  Quad(PAdic a, PAdic b);

  static Quad zero(const FieldConfig& cfg);
  static Quad one(const FieldConfig& cfg);
  static Quad omega(const FieldConfig& cfg);
  static Quad from_int(std::int64_t n, const FieldConfig& cfg);

  const FieldConfig& field() const { return a_.field(); }
  const PAdic& re() const { return a_; }
  const PAdic& im() const { return b_; }

  Quad sigma() const;
  Quad conj() const { return sigma(); }
  PAdic trace() const;
  PAdic norm() const;

  bool is_exact() const { return a_.is_exact() && b_.is_exact(); }
  bool is_exact_zero() const { return a_.is_exact_zero() && b_.is_exact_zero(); }
  bool is_zero() const { return a_.is_zero() && b_.is_zero(); }
  /// min(val a, val b); throws PrecisionExhausted when undecidable.
  std::int64_t valuation() const;
  std::int64_t val_lower_bound() const;
  std::int64_t abs_precision() const;
  int known_digits() const;
  bool is_integral() const;
  Quad reduce_mod(std::int64_t k) const;
  bool identical(const Quad& other) const;

  Quad operator-() const { return Quad(-a_, -b_); }
  Quad inverse() const;

  friend Quad operator+(const Quad& x, const Quad& y) { return Quad(x.a_ + y.a_, x.b_ + y.b_); }
  friend Quad operator-(const Quad& x, const Quad& y) { return Quad(x.a_ - y.a_, x.b_ - y.b_); }
  friend Quad operator*(const Quad& x, const Quad& y);
  friend Quad operator*(const Quad& x, const PAdic& y) { return Quad(x.a_ * y, x.b_ * y); }
  friend Quad operator*(const PAdic& y, const Quad& x) { return x * y; }
  friend Quad operator/(const Quad& x, const Quad& y) { return x * y.inverse(); }
  Quad& operator+=(const Quad& y) { return *this = *this + y; }
  Quad& operator-=(const Quad& y) { return *this = *this - y; }
  Quad& operator*=(const Quad& y) { return *this = *this * y; }

  std::string to_literal() const;

 private:
  PAdic a_;
  PAdic b_;
};

/// True when x and y agree to min(abs precision) - slack digits; exact
/// inputs must agree exactly.
bool agree(const PAdic& x, const PAdic& y, std::int64_t slack = 2);
bool agree(const Quad& x, const Quad& y, std::int64_t slack = 2);

/// Returns nu with N(nu) = mu. Throws OddValuation when val(mu) is odd.
Quad solve_norm_equation(const PAdic& mu);

/// Scalar literal: entry := term (('+'|'-') term)*, term := rational ('*'? 'w')?.
Quad parse_scalar(std::string_view text, const FieldConfig& cfg);
/// Same grammar, rejecting a nonzero w-part.
PAdic parse_f_scalar(std::string_view text, const FieldConfig& cfg);

}  // namespace fllab
