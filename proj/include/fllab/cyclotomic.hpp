#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fllab {

/// Z[zeta_{p^m}][1/p]: the value ring of additive characters of conductor exponent m.
class CharacterRing {
 public:
  CharacterRing() = default;
  CharacterRing(std::int64_t p, std::int64_t m);

  std::int64_t p() const { return p_; }
  std::int64_t conductor() const { return m_; }
  /// Order of zeta, p^m.
  std::int64_t order() const { return order_; }
  /// Rank of Z[zeta] over Z, (p - 1) p^{m-1}.
  std::int64_t degree() const { return degree_; }

  bool operator==(const CharacterRing&) const = default;

 private:
  std::int64_t p_ = 3;
  std::int64_t m_ = 1;
  std::int64_t order_ = 3;
  std::int64_t degree_ = 2;
};

/// Element sum_i c_i zeta^i / p^e in canonical form: i < degree (power basis
/// of Z[zeta]) and e >= 0 minimal. Equality is coefficient-wise. Coefficient
/// overflow throws std::overflow_error.
class CyclotomicValue {
 public:
  CyclotomicValue() = default;
  explicit CyclotomicValue(const CharacterRing& ring);

  static CyclotomicValue zero(const CharacterRing& ring) { return CyclotomicValue(ring); }
  static CyclotomicValue from_int(std::int64_t n, const CharacterRing& ring);
  /// zeta^k, k taken modulo p^m.
  static CyclotomicValue zeta_power(std::int64_t k, const CharacterRing& ring);
  /// sum_k raw[k] zeta^k / p^e for a vector indexed modulo p^m.
  static CyclotomicValue from_raw(const std::vector<std::int64_t>& raw, std::int64_t den_exp,
                                  const CharacterRing& ring);
  /// Power-basis coefficients (length degree) over p^e.
  static CyclotomicValue from_coefficients(std::vector<std::int64_t> coeffs, std::int64_t den_exp,
                                           const CharacterRing& ring);

  const CharacterRing& ring() const { return ring_; }
  const std::vector<std::int64_t>& coefficients() const { return c_; }
  std::int64_t denominator_exponent() const { return e_; }
  bool is_zero() const;

  /// Image under zeta -> zeta^{-1} (complex conjugation).
  CyclotomicValue conj() const;
  /// This value times p^k (k may be negative).
  CyclotomicValue scaled_p(std::int64_t k) const;
  CyclotomicValue times_zeta(std::int64_t k) const;
  /// The same number in a ring of larger conductor.
  CyclotomicValue in_ring(const CharacterRing& larger) const;

  friend CyclotomicValue operator+(const CyclotomicValue& x, const CyclotomicValue& y);
  friend CyclotomicValue operator-(const CyclotomicValue& x, const CyclotomicValue& y);
  friend CyclotomicValue operator*(const CyclotomicValue& x, const CyclotomicValue& y);
  CyclotomicValue operator-() const;
  CyclotomicValue& operator+=(const CyclotomicValue& y) { return *this = *this + y; }
  CyclotomicValue& operator*=(const CyclotomicValue& y) { return *this = *this * y; }

  bool operator==(const CyclotomicValue& other) const;
  bool operator!=(const CyclotomicValue& other) const { return !(*this == other); }

  std::string to_string() const;

 private:
  void normalize();

  CharacterRing ring_;
  std::vector<std::int64_t> c_;
  std::int64_t e_ = 0;
};

/// Rewrites a vector indexed modulo p^m so that only indices below the degree are nonzero.
void fold_raw(std::vector<std::int64_t>& raw, const CharacterRing& ring);

std::int64_t checked_add(std::int64_t a, std::int64_t b);
std::int64_t checked_mul(std::int64_t a, std::int64_t b);

}  // namespace fllab
