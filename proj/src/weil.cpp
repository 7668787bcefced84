#include "fllab/weil.hpp"

#include <stdexcept>

#include "fllab/errors.hpp"

namespace fllab {

namespace {

constexpr std::size_t kMaxTable = std::size_t{1} << 22;

std::int64_t ipow(std::int64_t p, std::int64_t k) {
  std::int64_t r = 1;
  for (std::int64_t i = 0; i < k; ++i) r = checked_mul(r, p);
  return r;
}

std::int64_t mod(std::int64_t x, std::int64_t n) { return ((x % n) + n) % n; }

std::int64_t mulmod(std::int64_t x, std::int64_t y, std::int64_t n) {
  return static_cast<std::int64_t>((static_cast<__int128>(mod(x, n)) * mod(y, n)) % n);
}

}  // namespace

CyclotomicValue psi_value(const PAdic& x, const CharacterRing& ring) {
  if (x.is_zero()) return CyclotomicValue::from_int(1, ring);
  const std::int64_t v = x.valuation();
  if (v >= 0) return CyclotomicValue::from_int(1, ring);
  if (v < -ring.conductor()) fail(ErrorKind::ConductorExceeded, "psi argument of valuation " + std::to_string(v));
  const PAdic scaled = x * PAdic::p_power(ring.conductor(), x.field());
  const mpz_class k = scaled.residue(ring.conductor());
  return CyclotomicValue::zeta_power(k.get_si(), ring);
}

CyclotomicValue psi_value(const Quad& x, const CharacterRing& ring) { return psi_value(x.trace(), ring); }

FiniteLevelFunction::FiniteLevelFunction(Side side, const FieldConfig& cfg, int n, std::int64_t a, std::int64_t b)
    : side_(side), cfg_(cfg), n_(n), a_(a), b_(b) {
  if (n < 1) fail(ErrorKind::InvalidConfig, "n must be at least 1");
  if (a < 0 || b < 0) fail(ErrorKind::InvalidConfig, "grid scale and level must be nonnegative");
  radix_ = ipow(cfg.p, a + b);
  ring_ = CharacterRing(cfg.p, a + b + 2);
  std::size_t size = 1;
  for (int k = 0; k < dim(); ++k) {
    if (size > kMaxTable / static_cast<std::size_t>(radix_)) fail(ErrorKind::InvalidConfig, "grid too large");
    size *= static_cast<std::size_t>(radix_);
  }
  values_.assign(size, CyclotomicValue::zero(ring_));
}

FiniteLevelFunction FiniteLevelFunction::unit_box(Side side, const FieldConfig& cfg, int n, std::int64_t a,
                                                  std::int64_t b) {
  FiniteLevelFunction f(side, cfg, n, a, b);
  const std::int64_t unit_stride = ipow(cfg.p, a);
  const CyclotomicValue one = CyclotomicValue::from_int(1, f.ring_);
  for (std::size_t i = 0; i < f.size(); ++i) {
    bool inside = true;
    for (std::int64_t j : f.digits(i)) inside = inside && j % unit_stride == 0;
    if (inside) f.values_[i] = one;
  }
  return f;
}

FiniteLevelFunction FiniteLevelFunction::random(Side side, const FieldConfig& cfg, int n, std::int64_t a,
                                                std::int64_t b, Rng& rng) {
  FiniteLevelFunction f(side, cfg, n, a, b);
  for (auto& v : f.values_) {
    if (rng.coin(0.4)) continue;
    v = CyclotomicValue::from_int(rng.uniform(-2, 2), f.ring_);
    if (rng.coin(0.5))
      v += CyclotomicValue::zeta_power(rng.uniform(0, f.ring_.order() - 1), f.ring_) *
           CyclotomicValue::from_int(rng.uniform(1, 2), f.ring_);
  }
  return f;
}

void FiniteLevelFunction::set_value(std::size_t index, const CyclotomicValue& v) {
  if (!(v.ring() == ring_)) throw std::invalid_argument("value from a different character ring");
  values_.at(index) = v;
}

std::vector<std::int64_t> FiniteLevelFunction::digits(std::size_t index) const {
  std::vector<std::int64_t> out(static_cast<std::size_t>(dim()));
  for (auto& d : out) {
    d = static_cast<std::int64_t>(index % static_cast<std::size_t>(radix_));
    index /= static_cast<std::size_t>(radix_);
  }
  return out;
}

std::size_t FiniteLevelFunction::index(const std::vector<std::int64_t>& digits) const {
  std::size_t idx = 0;
  for (std::size_t k = digits.size(); k-- > 0;)
    idx = idx * static_cast<std::size_t>(radix_) + static_cast<std::size_t>(mod(digits[k], radix_));
  return idx;
}

std::vector<PAdic> FiniteLevelFunction::point(std::size_t index, std::int64_t representative_shift) const {
  const PAdic inv_scale = PAdic::p_power(-a_, cfg_);
  std::vector<PAdic> out;
  for (std::int64_t j : digits(index)) {
    const mpz_class rep = mpz_class(j) + mpz_class(radix_) * mpz_class(representative_shift);
    out.push_back(PAdic::from_rational(rep, 1, cfg_) * inv_scale);
  }
  return out;
}

CyclotomicValue FiniteLevelFunction::evaluate(const std::vector<PAdic>& x) const {
  if (static_cast<int>(x.size()) != dim()) throw std::invalid_argument("point dimension");
  std::vector<std::int64_t> d;
  const PAdic scale = PAdic::p_power(a_, cfg_);
  for (const PAdic& xk : x) {
    if (!xk.is_zero() && xk.valuation() < -a_) return CyclotomicValue::zero(ring_);
    d.push_back((xk * scale).residue(a_ + b_).get_si());
  }
  return values_[index(d)];
}

FiniteLevelFunction FiniteLevelFunction::regrid(std::int64_t a, std::int64_t b) const {
  if (a < a_ || b < b_) throw std::invalid_argument("regrid must refine the grid");
  FiniteLevelFunction g(side_, cfg_, n_, a, b);
  g.spectator_ = spectator_;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const CyclotomicValue v = evaluate(g.point(i));
    if (!v.is_zero()) g.values_[i] = v.in_ring(g.ring_);
  }
  return g;
}

bool FiniteLevelFunction::operator==(const FiniteLevelFunction& other) const {
  return side_ == other.side_ && cfg_.p == other.cfg_.p && cfg_.u == other.cfg_.u && n_ == other.n_ &&
         a_ == other.a_ && b_ == other.b_ && spectator_ == other.spectator_ && values_ == other.values_;
}

FiniteLevelFunction partial_fourier(const FiniteLevelFunction& f, const FourierOptions& opts) {
  const CharacterRing& ring = f.ring();
  const std::int64_t a = f.scale();
  const std::int64_t b = f.level();
  const int dim = f.dim();
  const std::int64_t R = f.radix();
  const std::int64_t N = ring.order();
  const std::int64_t deg = ring.degree();
  const std::int64_t shift_exp = ring.conductor() - (a + b) + opts.conductor_shift;
  if (shift_exp < 0) fail(ErrorKind::ConductorExceeded, "kernel leaves the conductor");
  const std::int64_t kernel_scale = mod(ipow(f.field().p, shift_exp), N);

  // Kernel psi(sum_k y_k s_k x_{pi(k)}).
  std::vector<std::int64_t> s(static_cast<std::size_t>(dim), 1);
  std::vector<int> pi(static_cast<std::size_t>(dim));
  const int half = f.n() - 1;
  for (int k = 0; k < dim; ++k) {
    if (f.side() == Side::GL) {
      pi[static_cast<std::size_t>(k)] = (k + half) % dim;
    } else {
      pi[static_cast<std::size_t>(k)] = k;
      s[static_cast<std::size_t>(k)] = k % 2 == 0 ? 2 : -2 * f.field().u;
    }
  }

  std::int64_t E = 0;
  for (const auto& v : f.values()) E = std::max(E, v.denominator_exponent());
  std::vector<std::vector<std::int64_t>> cur;
  cur.reserve(f.size());
  for (const auto& v : f.values()) {
    std::vector<std::int64_t> c = v.coefficients();
    for (std::int64_t k = v.denominator_exponent(); k < E; ++k)
      for (auto& x : c) x = checked_mul(x, f.field().p);
    cur.push_back(std::move(c));
  }

  const std::int64_t rep_offset = mulmod(R, opts.representative_shift, N);
  std::vector<std::int64_t> expo(static_cast<std::size_t>(R * R));
  std::vector<std::vector<std::int64_t>> next(cur.size());
  std::vector<std::int64_t> acc(static_cast<std::size_t>(N));
  std::size_t stride = 1;
  for (int k = 0; k < dim; ++k) {
    for (std::int64_t i = 0; i < R; ++i)
      for (std::int64_t j = 0; j < R; ++j) {
        const std::int64_t I = mod(i + rep_offset, N);
        const std::int64_t J = mod(j + rep_offset, N);
        std::int64_t e = mulmod(s[static_cast<std::size_t>(k)], I, N);
        e = mulmod(e, J, N);
        expo[static_cast<std::size_t>(i * R + j)] = mulmod(e, kernel_scale, N);
      }
    for (std::size_t base = 0; base < cur.size(); ++base) {
      if ((base / stride) % static_cast<std::size_t>(R) != 0) continue;
      for (std::int64_t j = 0; j < R; ++j) {
        std::fill(acc.begin(), acc.end(), 0);
        for (std::int64_t i = 0; i < R; ++i) {
          const auto& c = cur[base + static_cast<std::size_t>(i) * stride];
          const std::int64_t e = expo[static_cast<std::size_t>(i * R + j)];
          for (std::int64_t t = 0; t < deg; ++t) {
            if (c[static_cast<std::size_t>(t)] == 0) continue;
            std::int64_t& slot = acc[static_cast<std::size_t>((t + e) % N)];
            slot = checked_add(slot, c[static_cast<std::size_t>(t)]);
          }
        }
        fold_raw(acc, ring);
        next[base + static_cast<std::size_t>(j) * stride].assign(acc.begin(), acc.begin() + deg);
      }
    }
    std::swap(cur, next);
    stride *= static_cast<std::size_t>(R);
  }

  FiniteLevelFunction g(f.side(), f.field(), f.n(), b, a);
  g.set_spectator(f.spectator());
  const std::int64_t twist = opts.twist == 0 ? 0 : mulmod(opts.twist, N / f.field().p, N);
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    const std::vector<std::int64_t> x = g.digits(idx);
    std::vector<std::int64_t> z(static_cast<std::size_t>(dim));
    for (int k = 0; k < dim; ++k) z[static_cast<std::size_t>(k)] = x[static_cast<std::size_t>(pi[static_cast<std::size_t>(k)])];
    CyclotomicValue v = CyclotomicValue::from_coefficients(cur[g.index(z)], E, ring).scaled_p(-b * dim);
    if (twist != 0) v = v.times_zeta(twist);
    g.set_value(idx, v);
  }
  return g;
}

PAdic q_value(Side side, const std::vector<PAdic>& x) {
  if (x.empty()) throw std::invalid_argument("q of an empty point");
  if (x.size() % 2 != 0) throw std::invalid_argument("point dimension must be even");
  const FieldConfig& cfg = x.front().field();
  PAdic q = PAdic::zero(cfg);
  const std::size_t half = x.size() / 2;
  for (std::size_t i = 0; i < half; ++i) {
    if (side == Side::GL) {
      q += x[i] * x[i + half];
    } else {
      const Quad z(x[2 * i], x[2 * i + 1]);
      q += z.norm();
    }
  }
  return q;
}

FiniteLevelFunction multiply_psi_q(const FiniteLevelFunction& f, const PAdic& t, std::int64_t representative_shift) {
  if (t.is_zero() || f.dim() == 0) return f;
  const std::int64_t vt = t.valuation();
  if (vt + f.level() - f.scale() < 0 || vt + 2 * f.level() < 0)
    fail(ErrorKind::ConductorExceeded, "psi(t q) is not constant on grid cosets");
  FiniteLevelFunction g = f;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f.value(i).is_zero()) continue;
    g.set_value(i, f.value(i) * psi_value(t * q_value(f.side(), f.point(i, representative_shift)), f.ring()));
  }
  return g;
}

FiniteLevelFunction reflect(const FiniteLevelFunction& f) {
  FiniteLevelFunction g = f;
  for (std::size_t i = 0; i < f.size(); ++i) {
    std::vector<std::int64_t> d = f.digits(i);
    for (auto& x : d) x = -x;
    g.set_value(f.index(d), f.value(i));
  }
  return g;
}

CyclotomicValue l2_norm_squared(const FiniteLevelFunction& f) {
  CyclotomicValue sum = CyclotomicValue::zero(f.ring());
  for (const auto& v : f.values())
    if (!v.is_zero()) sum += v * v.conj();
  return sum.scaled_p(-f.level() * f.dim());
}

FiniteLevelFunction weil_apply(const std::vector<WeilGenerator>& word, const FiniteLevelFunction& f,
                               const FourierOptions& opts) {
  FiniteLevelFunction g = f;
  for (const WeilGenerator& gen : word) {
    if (gen.kind == WeilGenerator::Kind::W) {
      g = partial_fourier(g, opts);
    } else {
      if (!gen.t) throw std::invalid_argument("n(t) without t");
      g = multiply_psi_q(g, *gen.t, opts.representative_shift);
    }
  }
  return g;
}

bool sl2_relation_check(const FieldConfig& cfg, int n, std::int64_t a, std::int64_t b, int trials,
                        std::uint64_t seed, const Sl2CheckOptions& opts) {
  std::vector<Side> sides;
  if (opts.side) sides.push_back(*opts.side);
  else sides = {Side::U, Side::GL};
  // With eqA and the kernel psi(+B), F acts as s = (0 1; -1 0): (s n(-1))^3 = s^2 and (s n(1))^3 = 1.
  const WeilGenerator np = WeilGenerator::n(PAdic::one(cfg));
  const WeilGenerator nm = WeilGenerator::n(-PAdic::one(cfg));
  const WeilGenerator w = WeilGenerator::w();
  const std::vector<WeilGenerator> braid{nm, w, nm, w, nm, w};
  const std::vector<WeilGenerator> cube{np, w, np, w, np, w};
  FourierOptions fo;
  fo.twist = opts.twist;
  bool ok = true;
  for (Side side : sides) {
    for (int trial = 0; trial < trials; ++trial) {
      Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(trial) * 2 + (side == Side::U ? 0 : 1));
      const FiniteLevelFunction f = FiniteLevelFunction::random(side, cfg, n, a, b, rng);
      ok = ok && weil_apply(braid, f, fo) == weil_apply({w, w}, f, fo);
      ok = ok && weil_apply(cube, f, fo) == f;
      ok = ok && weil_apply({w, w, w, w}, f, fo) == f;
    }
  }
  return ok;
}

bool unit_selfdual_check(const FieldConfig& cfg, int n, std::int64_t conductor_shift) {
  FourierOptions fo;
  fo.conductor_shift = conductor_shift;
  const std::pair<std::int64_t, std::int64_t> grids[] = {{0, 0}, {0, 1}, {1, 0}};
  for (Side side : {Side::U, Side::GL}) {
    for (auto [a, b] : grids) {
      const FiniteLevelFunction f = FiniteLevelFunction::unit_box(side, cfg, n, a, b);
      if (partial_fourier(f, fo) != FiniteLevelFunction::unit_box(side, cfg, n, b, a)) return false;
    }
  }
  return true;
}

}  // namespace fllab
