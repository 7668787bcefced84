#include "fllab/padic.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <sstream>
#include <unordered_map>

namespace fllab {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::Parse: return "ParseError";
    case ErrorKind::PrecisionExhausted: return "PrecisionExhausted";
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::OddValuation: return "OddValuation";
    case ErrorKind::SingularSystem: return "SingularSystem";
    case ErrorKind::NotSplit: return "NotSplit";
    case ErrorKind::NotRss: return "NotRss";
    case ErrorKind::SideError: return "SideError";
    case ErrorKind::NoHermitianOrbit: return "NoHermitianOrbit";
    case ErrorKind::SamplingExhausted: return "SamplingExhausted";
    case ErrorKind::ZeroModule: return "ZeroModule";
    case ErrorKind::ExplosionGuard: return "ExplosionGuard";
    case ErrorKind::OracleTooLarge: return "OracleTooLarge";
    case ErrorKind::NormalFormFailure: return "NormalFormFailure";
    case ErrorKind::ConductorExceeded: return "ConductorExceeded";
    case ErrorKind::NotSquare: return "NotSquare";
  }
  return "Unknown";
}

// ---------------------------------------------------------------------------
// Field configuration

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

namespace {

std::int64_t mod_pow(std::int64_t base, std::int64_t exp, std::int64_t mod) {
  __int128 result = 1;
  __int128 b = ((base % mod) + mod) % mod;
  while (exp > 0) {
    if (exp & 1) result = result * b % mod;
    b = b * b % mod;
    exp >>= 1;
  }
  return static_cast<std::int64_t>(result);
}

std::int64_t mpz_valuation(mpz_class& n, std::int64_t p) {
  if (n == 0) return kInfVal;
  mpz_class pz(static_cast<long>(p));
  return static_cast<std::int64_t>(mpz_remove(n.get_mpz_t(), n.get_mpz_t(), pz.get_mpz_t()));
}

mpz_class mod_floor(const mpz_class& a, const mpz_class& m) {
  mpz_class r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

mpz_class inv_mod(const mpz_class& a, const mpz_class& m) {
  mpz_class r;
  if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0)
    fail(ErrorKind::DivisionByZero, "non-invertible residue");
  return r;
}

}  // namespace

bool is_square_mod_p(std::int64_t a, std::int64_t p) {
  a = ((a % p) + p) % p;
  if (a == 0) return true;
  return mod_pow(a, (p - 1) / 2, p) == 1;
}

std::int64_t smallest_nonresidue(std::int64_t p) {
  for (std::int64_t u = 2; u < p; ++u)
    if (!is_square_mod_p(u, p)) return u;
  fail(ErrorKind::InvalidConfig, "no quadratic non-residue mod " + std::to_string(p));
}

void FieldConfig::validate() const {
  if (p < 3 || p % 2 == 0 || !is_prime(p)) fail(ErrorKind::InvalidConfig, "p must be an odd prime");
  if (precision < 8) fail(ErrorKind::InvalidConfig, "precision must be at least 8");
  if (((u % p) + p) % p == 0 || is_square_mod_p(u, p))
    fail(ErrorKind::InvalidConfig, "u must be a quadratic non-residue mod p");
}

FieldConfig FieldConfig::make(std::int64_t p, std::optional<std::int64_t> u, int precision) {
  FieldConfig cfg;
  cfg.p = p;
  cfg.precision = precision;
  if (p < 3 || p % 2 == 0 || !is_prime(p)) fail(ErrorKind::InvalidConfig, "p must be an odd prime");
  cfg.u = u ? *u : smallest_nonresidue(p);
  cfg.validate();
  return cfg;
}

const mpz_class& pow_p(std::int64_t p, std::int64_t k) {
  thread_local std::unordered_map<std::int64_t, std::deque<mpz_class>> cache;
  auto& powers = cache[p];
  if (powers.empty()) powers.emplace_back(1);
  while (static_cast<std::int64_t>(powers.size()) <= k) powers.push_back(powers.back() * static_cast<long>(p));
  return powers[static_cast<std::size_t>(k)];
}

// ---------------------------------------------------------------------------
// PAdic

PAdic PAdic::zero(const FieldConfig& cfg) {
  PAdic x;
  x.cfg_ = cfg;
  return x;
}

PAdic PAdic::one(const FieldConfig& cfg) { return from_int(1, cfg); }

PAdic PAdic::from_int(std::int64_t n, const FieldConfig& cfg) {
  return from_mpq(mpq_class(mpz_class(static_cast<long>(n))), cfg);
}

PAdic PAdic::from_rational(const mpz_class& num, const mpz_class& den, const FieldConfig& cfg) {
  if (den == 0) fail(ErrorKind::DivisionByZero, "zero denominator");
  mpq_class q(num, den);
  q.canonicalize();
  return from_mpq(q, cfg);
}

PAdic PAdic::from_mpq(const mpq_class& q, const FieldConfig& cfg) {
  PAdic x;
  x.cfg_ = cfg;
  x.q_ = q;
  x.q_.canonicalize();
  if (x.q_ == 0) {
    x.val_ = kInfVal;
  } else {
    mpz_class num = x.q_.get_num(), den = x.q_.get_den();
    x.val_ = mpz_valuation(num, cfg.p) - mpz_valuation(den, cfg.p);
  }
  return x;
}

PAdic PAdic::from_digits(std::int64_t val, const mpz_class& unit, std::int64_t rel,
                         const FieldConfig& cfg) {
  if (rel <= 0) return zero_to(val + std::max<std::int64_t>(rel, 0), cfg);
  mpz_class u = mod_floor(unit, pow_p(cfg.p, rel));
  if (u == 0) return zero_to(val + rel, cfg);
  std::int64_t t = mpz_valuation(u, cfg.p);
  val += t;
  rel -= t;
  rel = std::min<std::int64_t>(rel, cfg.precision);
  PAdic x;
  x.cfg_ = cfg;
  x.kind_ = Kind::Approx;
  x.val_ = val;
  x.rel_ = rel;
  x.unit_ = mod_floor(u, pow_p(cfg.p, rel));
  return x;
}

PAdic PAdic::zero_to(std::int64_t abs, const FieldConfig& cfg) {
  PAdic x;
  x.cfg_ = cfg;
  x.kind_ = Kind::ZeroTo;
  x.val_ = abs;
  return x;
}

PAdic PAdic::p_power(std::int64_t k, const FieldConfig& cfg) {
  if (k >= 0) return from_mpq(mpq_class(pow_p(cfg.p, k)), cfg);
  return from_mpq(mpq_class(mpz_class(1), pow_p(cfg.p, -k)), cfg);
}

std::int64_t PAdic::valuation() const {
  if (kind_ == Kind::ZeroTo)
    fail(ErrorKind::PrecisionExhausted, "valuation of a value that is zero at precision");
  return val_;
}

std::int64_t PAdic::val_lower_bound() const { return val_; }

std::int64_t PAdic::abs_precision() const {
  switch (kind_) {
    case Kind::Exact: return kInfVal;
    case Kind::Approx: return val_ + rel_;
    case Kind::ZeroTo: return val_;
  }
  return kInfVal;
}

int PAdic::known_digits() const {
  switch (kind_) {
    case Kind::Exact: return cfg_.precision;
    case Kind::Approx: return static_cast<int>(rel_);
    case Kind::ZeroTo: return 0;
  }
  return 0;
}

void PAdic::exact_parts(mpz_class& n0, mpz_class& d0) const {
  n0 = q_.get_num();
  d0 = q_.get_den();
  mpz_valuation(n0, cfg_.p);
  mpz_valuation(d0, cfg_.p);
}

mpz_class PAdic::unit() const {
  if (is_zero()) return 0;
  if (kind_ == Kind::Approx) return unit_;
  mpz_class n0, d0;
  exact_parts(n0, d0);
  const mpz_class& m = pow_p(cfg_.p, cfg_.precision);
  return mod_floor(n0 * inv_mod(d0, m), m);
}

std::optional<mpq_class> PAdic::exact_value() const {
  if (kind_ == Kind::Exact) return q_;
  return std::nullopt;
}

mpq_class PAdic::rational_approximation() const {
  switch (kind_) {
    case Kind::Exact: return q_;
    case Kind::ZeroTo: return 0;
    case Kind::Approx: break;
  }
  const mpz_class& m = pow_p(cfg_.p, rel_);
  mpz_class s = unit_;
  if (2 * s > m) s -= m;
  mpq_class out(s);
  if (val_ >= 0) {
    out *= pow_p(cfg_.p, val_);
  } else {
    out /= pow_p(cfg_.p, -val_);
  }
  out.canonicalize();
  return out;
}

mpz_class PAdic::scaled_residue(std::int64_t shift, std::int64_t target) const {
  if (target <= shift || is_zero()) return 0;
  if (val_ >= target) return 0;
  const mpz_class& m = pow_p(cfg_.p, target - shift);
  const mpz_class& lift = pow_p(cfg_.p, val_ - shift);
  if (kind_ == Kind::Approx) return mod_floor(unit_ * lift, m);
  mpz_class n0, d0;
  exact_parts(n0, d0);
  return mod_floor(n0 * inv_mod(d0, m) * lift, m);
}

mpz_class PAdic::residue(std::int64_t k) const {
  if (is_exact_zero() || k <= 0) return 0;
  if (kind_ == Kind::ZeroTo) {
    if (val_ >= k) return 0;
    fail(ErrorKind::PrecisionExhausted, "residue beyond known digits");
  }
  if (val_ < 0) throw std::domain_error("residue of a non-integral p-adic number");
  if (abs_precision() < k && val_ < k) fail(ErrorKind::PrecisionExhausted, "residue beyond known digits");
  return scaled_residue(0, k);
}

PAdic PAdic::reduce_mod(std::int64_t k) const {
  if (is_exact_zero()) return *this;
  if (val_lower_bound() >= k) {
    if (kind_ == Kind::ZeroTo && val_ < k) fail(ErrorKind::PrecisionExhausted, "reduction beyond known digits");
    return zero(cfg_);
  }
  if (kind_ == Kind::ZeroTo || abs_precision() < k)
    fail(ErrorKind::PrecisionExhausted, "reduction beyond known digits");
  mpq_class r(scaled_residue(val_, k));
  if (val_ >= 0) {
    r *= pow_p(cfg_.p, val_);
  } else {
    r /= pow_p(cfg_.p, -val_);
  }
  return from_mpq(r, cfg_);
}

bool PAdic::is_integral() const {
  if (kind_ == Kind::ZeroTo && val_ < 0)
    fail(ErrorKind::PrecisionExhausted, "integrality undecidable at precision");
  return val_ >= 0;
}

bool PAdic::identical(const PAdic& other) const {
  if (kind_ != other.kind_ || cfg_.p != other.cfg_.p) return false;
  switch (kind_) {
    case Kind::Exact: return q_ == other.q_;
    case Kind::Approx: return val_ == other.val_ && rel_ == other.rel_ && unit_ == other.unit_;
    case Kind::ZeroTo: return val_ == other.val_;
  }
  return false;
}

PAdic PAdic::operator-() const {
  PAdic x = *this;
  if (kind_ == Kind::Exact) {
    x.q_ = -q_;
  } else if (kind_ == Kind::Approx) {
    x.unit_ = mod_floor(-unit_, pow_p(cfg_.p, rel_));
  }
  return x;
}

PAdic operator+(const PAdic& x, const PAdic& y) {
  const FieldConfig& cfg = x.is_exact_zero() && !y.is_exact_zero() ? y.cfg_ : x.cfg_;
  if (x.is_exact() && y.is_exact()) return PAdic::from_mpq(x.q_ + y.q_, cfg);
  const std::int64_t target = std::min(x.abs_precision(), y.abs_precision());
  const std::int64_t low = std::min({x.val_lower_bound(), y.val_lower_bound(), target});
  if (target <= low) return PAdic::zero_to(target, cfg);
  mpz_class sum = x.scaled_residue(low, target) + y.scaled_residue(low, target);
  return PAdic::from_digits(low, sum, target - low, cfg);
}

PAdic operator*(const PAdic& x, const PAdic& y) {
  const FieldConfig& cfg = x.cfg_;
  if (x.is_exact_zero() || y.is_exact_zero()) return PAdic::zero(cfg);
  if (x.is_exact() && y.is_exact()) return PAdic::from_mpq(x.q_ * y.q_, cfg);
  if (x.kind_ == PAdic::Kind::ZeroTo || y.kind_ == PAdic::Kind::ZeroTo)
    return PAdic::zero_to(x.val_ + y.val_, cfg);
  const std::int64_t rel = std::min(x.kind_ == PAdic::Kind::Approx ? x.rel_ : kInfVal,
                                    y.kind_ == PAdic::Kind::Approx ? y.rel_ : kInfVal);
  const mpz_class& m = pow_p(cfg.p, rel);
  auto unit_mod = [&](const PAdic& z) {
    if (z.kind_ == PAdic::Kind::Approx) return mpz_class(z.unit_);
    mpz_class n0, d0;
    z.exact_parts(n0, d0);
    return mod_floor(n0 * inv_mod(d0, m), m);
  };
  return PAdic::from_digits(x.val_ + y.val_, unit_mod(x) * unit_mod(y), rel, cfg);
}

PAdic PAdic::inverse() const {
  if (is_exact_zero()) fail(ErrorKind::DivisionByZero, "inverse of exact zero");
  if (kind_ == Kind::ZeroTo) fail(ErrorKind::PrecisionExhausted, "inverse of a value that is zero at precision");
  if (kind_ == Kind::Exact) return from_mpq(1 / q_, cfg_);
  return from_digits(-val_, inv_mod(unit_, pow_p(cfg_.p, rel_)), rel_, cfg_);
}

PAdic PAdic::sqrt() const {
  if (is_exact_zero()) return *this;
  const std::int64_t v = valuation();
  if (v % 2 != 0) fail(ErrorKind::OddValuation, "square root of an odd-valuation element");
  const std::int64_t p = cfg_.p;
  const mpz_class u0 = unit();
  const std::int64_t r0 = mpz_class(u0 % static_cast<unsigned long>(p)).get_si();
  if (!is_square_mod_p(r0, p)) fail(ErrorKind::NotSquare, "unit part is not a square mod p");
  auto normalize_sign = [&](const mpz_class& root_unit_residue) {
    const std::int64_t r = mpz_class(mod_floor(root_unit_residue, mpz_class(static_cast<long>(p)))).get_si();
    return 2 * r > p;
  };
  if (kind_ == Kind::Exact && q_ > 0) {
    mpz_class num = q_.get_num(), den = q_.get_den();
    if (mpz_perfect_square_p(num.get_mpz_t()) && mpz_perfect_square_p(den.get_mpz_t())) {
      mpz_class sn, sd;
      mpz_sqrt(sn.get_mpz_t(), num.get_mpz_t());
      mpz_sqrt(sd.get_mpz_t(), den.get_mpz_t());
      PAdic root = from_rational(sn, sd, cfg_);
      if (normalize_sign(root.unit())) root = -root;
      return root;
    }
  }
  // Hensel lifting of the residue root in [1, (p-1)/2].
  std::int64_t start = 1;
  while (mod_pow(start, 2, p) != r0) ++start;
  if (2 * start > p) start = p - start;
  const std::int64_t rel = known_digits();
  mpz_class root = start;
  std::int64_t have = 1;
  while (have < rel) {
    have = std::min<std::int64_t>(2 * have, rel);
    const mpz_class& m = pow_p(p, have);
    mpz_class f = root * root - u0;
    root = mod_floor(root - f * inv_mod(2 * root, m), m);
  }
  return from_digits(v / 2, root, rel, cfg_);
}

std::string PAdic::to_literal() const { return rational_approximation().get_str(); }

std::string PAdic::debug_string() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::Exact: os << q_.get_str(); break;
    case Kind::ZeroTo: os << "O(" << cfg_.p << "^" << val_ << ")"; break;
    case Kind::Approx:
      os << cfg_.p << "^" << val_ << "*(" << unit_.get_str() << " + O(" << cfg_.p << "^" << rel_ << "))";
      break;
  }
  return os.str();
}

bool agree(const PAdic& x, const PAdic& y, std::int64_t slack) {
  const PAdic d = x - y;
  if (d.is_exact_zero()) return true;
  if (d.is_exact()) return false;
  if (d.is_zero()) return true;
  return d.valuation() >= d.abs_precision() - slack;
}

// ---------------------------------------------------------------------------
// Quad

Quad::Quad(PAdic a) : a_(std::move(a)), b_(PAdic::zero(a_.field())) {}
Quad::Quad(PAdic a, PAdic b) : a_(std::move(a)), b_(std::move(b)) {}

Quad Quad::zero(const FieldConfig& cfg) { return Quad(PAdic::zero(cfg), PAdic::zero(cfg)); }
Quad Quad::one(const FieldConfig& cfg) { return Quad(PAdic::one(cfg), PAdic::zero(cfg)); }
Quad Quad::omega(const FieldConfig& cfg) { return Quad(PAdic::zero(cfg), PAdic::one(cfg)); }
Quad Quad::from_int(std::int64_t n, const FieldConfig& cfg) { return Quad(PAdic::from_int(n, cfg)); }

Quad Quad::sigma() const { return Quad(a_, -b_); }

PAdic Quad::trace() const { return a_ + a_; }

PAdic Quad::norm() const {
  return a_ * a_ - PAdic::from_int(field().u, field()) * b_ * b_;
}

Quad operator*(const Quad& x, const Quad& y) {
  const PAdic u = PAdic::from_int(x.field().u, x.field());
  return Quad(x.a_ * y.a_ + u * x.b_ * y.b_, x.a_ * y.b_ + x.b_ * y.a_);
}

Quad Quad::inverse() const {
  const PAdic n = norm();
  if (n.is_exact_zero()) fail(ErrorKind::DivisionByZero, "inverse of exact zero");
  return sigma() * n.inverse();
}

std::int64_t Quad::valuation() const {
  if (is_exact_zero()) return kInfVal;
  std::int64_t known = kInfVal;
  std::int64_t bound = kInfVal;
  for (const PAdic* c : {&a_, &b_}) {
    if (c->is_exact_zero()) continue;
    if (c->is_zero()) {
      bound = std::min(bound, c->val_lower_bound());
    } else {
      known = std::min(known, c->valuation());
    }
  }
  if (known == kInfVal || known > bound)
    fail(ErrorKind::PrecisionExhausted, "valuation undecidable at precision");
  return known;
}

std::int64_t Quad::val_lower_bound() const { return std::min(a_.val_lower_bound(), b_.val_lower_bound()); }

std::int64_t Quad::abs_precision() const { return std::min(a_.abs_precision(), b_.abs_precision()); }

int Quad::known_digits() const {
  int d = a_.field().precision;
  for (const PAdic* c : {&a_, &b_})
    if (!c->is_exact_zero()) d = std::min(d, c->known_digits());
  return d;
}

bool Quad::is_integral() const { return a_.is_integral() && b_.is_integral(); }

Quad Quad::reduce_mod(std::int64_t k) const { return Quad(a_.reduce_mod(k), b_.reduce_mod(k)); }

bool Quad::identical(const Quad& other) const { return a_.identical(other.a_) && b_.identical(other.b_); }

std::string Quad::to_literal() const {
  const mpq_class a = a_.rational_approximation();
  const mpq_class b = b_.rational_approximation();
  if (b == 0) return a.get_str();
  std::string imag;
  if (b == 1) {
    imag = "w";
  } else if (b == -1) {
    imag = "-w";
  } else {
    imag = b.get_str() + "*w";
  }
  if (a == 0) return imag;
  if (imag.front() == '-') return a.get_str() + imag;
  return a.get_str() + "+" + imag;
}

bool agree(const Quad& x, const Quad& y, std::int64_t slack) {
  return agree(x.re(), y.re(), slack) && agree(x.im(), y.im(), slack);
}

Quad solve_norm_equation(const PAdic& mu) {
  const FieldConfig& cfg = mu.field();
  if (mu.is_exact_zero()) fail(ErrorKind::DivisionByZero, "norm equation for zero");
  const std::int64_t v = mu.valuation();
  if (v % 2 != 0) fail(ErrorKind::OddValuation, "odd valuation elements are not norms");
  const PAdic mu0 = mu * PAdic::p_power(-v, cfg);
  const std::int64_t m0 = mu0.residue(1).get_si();
  for (std::int64_t b0 = 0; b0 < cfg.p; ++b0) {
    const std::int64_t t = ((m0 + (cfg.u % cfg.p) * b0 % cfg.p * b0) % cfg.p + cfg.p) % cfg.p;
    if (t == 0 || !is_square_mod_p(t, cfg.p)) continue;
    const PAdic b = PAdic::from_int(b0, cfg);
    const PAdic a = (mu0 + PAdic::from_int(cfg.u, cfg) * b * b).sqrt();
    return Quad(a, b) * PAdic::p_power(v / 2, cfg);
  }
  fail(ErrorKind::NotSquare, "no residue solution of the norm equation");
}

// ---------------------------------------------------------------------------
// Literal parsing

namespace {

class LiteralParser {
 public:
  LiteralParser(std::string_view text, const FieldConfig& cfg) : cfg_(cfg) {
    for (char ch : text)
      if (!std::isspace(static_cast<unsigned char>(ch))) s_.push_back(ch);
  }

  Quad parse() {
    if (s_.empty()) error("empty scalar literal");
    mpq_class re = 0, im = 0;
    bool first = true;
    while (pos_ < s_.size()) {
      int sign = 1;
      if (s_[pos_] == '+' || s_[pos_] == '-') {
        sign = s_[pos_] == '-' ? -1 : 1;
        ++pos_;
      } else if (!first) {
        error("expected '+' or '-'");
      }
      first = false;
      auto [value, is_w] = term();
      (is_w ? im : re) += sign * value;
    }
    return Quad(PAdic::from_mpq(re, cfg_), PAdic::from_mpq(im, cfg_));
  }

 private:
  std::pair<mpq_class, bool> term() {
    mpq_class value = 1;
    bool have_rational = false;
    if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      mpz_class num(integer());
      mpz_class den = 1;
      if (pos_ < s_.size() && s_[pos_] == '/') {
        ++pos_;
        den = mpz_class(integer());
        if (den == 0) error("zero denominator");
      }
      value = mpq_class(num, den);
      value.canonicalize();
      have_rational = true;
    }
    bool star = false;
    if (pos_ < s_.size() && s_[pos_] == '*') {
      if (!have_rational) error("'*' without a coefficient");
      star = true;
      ++pos_;
    }
    if (pos_ < s_.size() && s_[pos_] == 'w') {
      ++pos_;
      return {value, true};
    }
    if (star) error("expected 'w' after '*'");
    if (!have_rational) error("expected a rational or 'w'");
    return {value, false};
  }

  std::string integer() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) error("expected digits");
    return s_.substr(start, pos_ - start);
  }

  [[noreturn]] void error(const std::string& msg) const {
    fail(ErrorKind::Parse, msg + " in scalar literal '" + s_ + "' at offset " + std::to_string(pos_));
  }

  const FieldConfig& cfg_;
  std::string s_;
  std::size_t pos_ = 0;
};

}  // namespace

Quad parse_scalar(std::string_view text, const FieldConfig& cfg) { return LiteralParser(text, cfg).parse(); }

PAdic parse_f_scalar(std::string_view text, const FieldConfig& cfg) {
  Quad q = parse_scalar(text, cfg);
  if (!q.im().is_exact_zero())
    fail(ErrorKind::Parse, "expected an element of F, got '" + std::string(text) + "'");
  return q.re();
}

}  // namespace fllab
