#include "fllab/cyclotomic.hpp"

#include <stdexcept>

#include "fllab/errors.hpp"

namespace fllab {

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("cyclotomic coefficient overflow");
  return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("cyclotomic coefficient overflow");
  return r;
}

CharacterRing::CharacterRing(std::int64_t p, std::int64_t m) : p_(p), m_(m) {
  if (p < 3 || m < 1) fail(ErrorKind::InvalidConfig, "character ring needs an odd prime and conductor >= 1");
  order_ = 1;
  for (std::int64_t i = 0; i < m; ++i) {
    if (order_ > (std::int64_t{1} << 24) / p) fail(ErrorKind::ConductorExceeded, "conductor too large");
    order_ *= p;
  }
  degree_ = order_ / p * (p - 1);
}

CyclotomicValue::CyclotomicValue(const CharacterRing& ring)
    : ring_(ring), c_(static_cast<std::size_t>(ring.degree()), 0) {}

CyclotomicValue CyclotomicValue::from_int(std::int64_t n, const CharacterRing& ring) {
  CyclotomicValue v(ring);
  v.c_[0] = n;
  return v;
}

CyclotomicValue CyclotomicValue::zeta_power(std::int64_t k, const CharacterRing& ring) {
  std::vector<std::int64_t> raw(static_cast<std::size_t>(ring.order()), 0);
  const std::int64_t idx = ((k % ring.order()) + ring.order()) % ring.order();
  raw[static_cast<std::size_t>(idx)] = 1;
  return from_raw(raw, 0, ring);
}

void fold_raw(std::vector<std::int64_t>& r, const CharacterRing& ring) {
  if (static_cast<std::int64_t>(r.size()) != ring.order()) throw std::invalid_argument("raw vector size");
  // zeta^{s + (p-1) p^{m-1}} = -sum_{j < p-1} zeta^{s + j p^{m-1}}.
  const std::int64_t step = ring.order() / ring.p();
  for (std::int64_t s = 0; s < step; ++s) {
    const std::size_t top = static_cast<std::size_t>(s + (ring.p() - 1) * step);
    const std::int64_t t = r[top];
    if (t == 0) continue;
    for (std::int64_t j = 0; j + 1 < ring.p(); ++j) {
      std::int64_t& x = r[static_cast<std::size_t>(s + j * step)];
      x = checked_add(x, -t);
    }
    r[top] = 0;
  }
}

CyclotomicValue CyclotomicValue::from_raw(const std::vector<std::int64_t>& raw, std::int64_t den_exp,
                                          const CharacterRing& ring) {
  std::vector<std::int64_t> r = raw;
  fold_raw(r, ring);
  r.resize(static_cast<std::size_t>(ring.degree()));
  return from_coefficients(std::move(r), den_exp, ring);
}

CyclotomicValue CyclotomicValue::from_coefficients(std::vector<std::int64_t> coeffs, std::int64_t den_exp,
                                                   const CharacterRing& ring) {
  if (static_cast<std::int64_t>(coeffs.size()) != ring.degree()) throw std::invalid_argument("coefficient count");
  CyclotomicValue v(ring);
  v.c_ = std::move(coeffs);
  v.e_ = den_exp;
  v.normalize();
  return v;
}

CyclotomicValue CyclotomicValue::in_ring(const CharacterRing& larger) const {
  if (larger.p() != ring_.p() || larger.conductor() < ring_.conductor())
    throw std::invalid_argument("target ring does not contain this ring");
  const std::int64_t stride = larger.order() / ring_.order();
  std::vector<std::int64_t> raw(static_cast<std::size_t>(larger.order()), 0);
  for (std::size_t i = 0; i < c_.size(); ++i) raw[i * static_cast<std::size_t>(stride)] = c_[i];
  return from_raw(raw, e_, larger);
}

void CyclotomicValue::normalize() {
  if (is_zero()) {
    e_ = 0;
    return;
  }
  while (e_ > 0) {
    for (std::int64_t x : c_)
      if (x % ring_.p() != 0) return;
    for (std::int64_t& x : c_) x /= ring_.p();
    --e_;
  }
  while (e_ < 0) {
    for (std::int64_t& x : c_) x = checked_mul(x, ring_.p());
    ++e_;
  }
}

bool CyclotomicValue::is_zero() const {
  for (std::int64_t x : c_)
    if (x != 0) return false;
  return true;
}

CyclotomicValue CyclotomicValue::conj() const {
  std::vector<std::int64_t> raw(static_cast<std::size_t>(ring_.order()), 0);
  for (std::size_t i = 0; i < c_.size(); ++i) {
    const std::int64_t j = (ring_.order() - static_cast<std::int64_t>(i)) % ring_.order();
    raw[static_cast<std::size_t>(j)] = c_[i];
  }
  return from_raw(raw, e_, ring_);
}

CyclotomicValue CyclotomicValue::scaled_p(std::int64_t k) const {
  CyclotomicValue v = *this;
  v.e_ -= k;
  v.normalize();
  return v;
}

CyclotomicValue CyclotomicValue::times_zeta(std::int64_t k) const {
  std::vector<std::int64_t> raw(static_cast<std::size_t>(ring_.order()), 0);
  const std::int64_t shift = ((k % ring_.order()) + ring_.order()) % ring_.order();
  for (std::size_t i = 0; i < c_.size(); ++i)
    raw[static_cast<std::size_t>((static_cast<std::int64_t>(i) + shift) % ring_.order())] = c_[i];
  return from_raw(raw, e_, ring_);
}

namespace {

void check_ring(const CyclotomicValue& x, const CyclotomicValue& y) {
  if (!(x.ring() == y.ring())) throw std::invalid_argument("cyclotomic values from different rings");
}

std::vector<std::int64_t> lifted(const CyclotomicValue& x, std::int64_t e) {
  std::vector<std::int64_t> out = x.coefficients();
  for (std::int64_t k = x.denominator_exponent(); k < e; ++k)
    for (std::int64_t& c : out) c = checked_mul(c, x.ring().p());
  return out;
}

}  // namespace

CyclotomicValue operator+(const CyclotomicValue& x, const CyclotomicValue& y) {
  check_ring(x, y);
  const std::int64_t e = std::max(x.e_, y.e_);
  std::vector<std::int64_t> a = lifted(x, e);
  const std::vector<std::int64_t> b = lifted(y, e);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = checked_add(a[i], b[i]);
  CyclotomicValue v(x.ring_);
  v.c_ = std::move(a);
  v.e_ = e;
  v.normalize();
  return v;
}

CyclotomicValue CyclotomicValue::operator-() const {
  CyclotomicValue v = *this;
  for (std::int64_t& x : v.c_) x = checked_mul(x, -1);
  return v;
}

CyclotomicValue operator-(const CyclotomicValue& x, const CyclotomicValue& y) { return x + (-y); }

CyclotomicValue operator*(const CyclotomicValue& x, const CyclotomicValue& y) {
  check_ring(x, y);
  const std::int64_t order = x.ring_.order();
  std::vector<std::int64_t> raw(static_cast<std::size_t>(order), 0);
  for (std::size_t i = 0; i < x.c_.size(); ++i) {
    if (x.c_[i] == 0) continue;
    for (std::size_t j = 0; j < y.c_.size(); ++j) {
      if (y.c_[j] == 0) continue;
      std::int64_t& slot = raw[(i + j) % static_cast<std::size_t>(order)];
      slot = checked_add(slot, checked_mul(x.c_[i], y.c_[j]));
    }
  }
  return CyclotomicValue::from_raw(raw, x.e_ + y.e_, x.ring_);
}

bool CyclotomicValue::operator==(const CyclotomicValue& other) const {
  return ring_ == other.ring_ && e_ == other.e_ && c_ == other.c_;
}

std::string CyclotomicValue::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    if (!out.empty()) out += c_[i] > 0 ? " + " : " - ";
    else if (c_[i] < 0) out += "-";
    const std::int64_t a = c_[i] < 0 ? -c_[i] : c_[i];
    if (i == 0) {
      out += std::to_string(a);
    } else {
      if (a != 1) out += std::to_string(a) + "*";
      out += "z^" + std::to_string(i);
    }
  }
  if (out.empty()) out = "0";
  if (e_ > 0) out = "(" + out + ")/" + std::to_string(ring_.p()) + "^" + std::to_string(e_);
  return out;
}

}  // namespace fllab
