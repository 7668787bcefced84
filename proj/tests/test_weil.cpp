#include <gtest/gtest.h>

#include <complex>
#include <numbers>

#include "fllab/errors.hpp"
#include "fllab/weil.hpp"
#include "support.hpp"

using namespace fllab;
using namespace fltest;

namespace {

PAdic fx(const std::string& s) { return f(s, cfg3m()); }
Quad ex(const std::string& s) { return e(s, cfg3m()); }

std::complex<double> embed(const CyclotomicValue& v) {
  const double n = static_cast<double>(v.ring().order());
  std::complex<double> sum = 0;
  for (std::size_t i = 0; i < v.coefficients().size(); ++i)
    sum += static_cast<double>(v.coefficients()[i]) * std::polar(1.0, 2 * std::numbers::pi * static_cast<double>(i) / n);
  return sum / std::pow(static_cast<double>(v.ring().p()), static_cast<double>(v.denominator_exponent()));
}

CyclotomicValue random_value(const CharacterRing& ring, Rng& rng) {
  std::vector<std::int64_t> raw(static_cast<std::size_t>(ring.order()), 0);
  for (int t = 0; t < 4; ++t) raw[static_cast<std::size_t>(rng.uniform(0, ring.order() - 1))] += rng.uniform(-5, 5);
  return CyclotomicValue::from_raw(raw, rng.uniform(0, 2), ring);
}

PAdic pairing(Side side, const std::vector<PAdic>& y, const std::vector<PAdic>& x) {
  const FieldConfig& cfg = y.front().field();
  PAdic s = PAdic::zero(cfg);
  const std::size_t h = y.size() / 2;
  for (std::size_t i = 0; i < h; ++i) {
    if (side == Side::GL) {
      s += y[i] * x[i + h] + y[i + h] * x[i];
    } else {
      s += (Quad(y[2 * i], y[2 * i + 1]).sigma() * Quad(x[2 * i], x[2 * i + 1])).trace();
    }
  }
  return s;
}

/// Direct character sum over all pairs of grid points.
FiniteLevelFunction naive_fourier(const FiniteLevelFunction& f) {
  FiniteLevelFunction g(f.side(), f.field(), f.n(), f.level(), f.scale());
  for (std::size_t xi = 0; xi < g.size(); ++xi) {
    const auto x = g.point(xi);
    CyclotomicValue sum = CyclotomicValue::zero(f.ring());
    for (std::size_t yi = 0; yi < f.size(); ++yi) {
      if (f.value(yi).is_zero()) continue;
      sum += f.value(yi) * psi_value(pairing(f.side(), f.point(yi), x), f.ring());
    }
    g.set_value(xi, sum.scaled_p(-f.level() * f.dim()));
  }
  return g;
}

FiniteLevelFunction translate(const FiniteLevelFunction& f, const std::vector<std::int64_t>& d) {
  FiniteLevelFunction g = f;
  for (std::size_t i = 0; i < f.size(); ++i) {
    auto j = f.digits(i);
    for (std::size_t k = 0; k < j.size(); ++k) j[k] += d[k];
    g.set_value(f.index(j), f.value(i));
  }
  return g;
}

}  // namespace

TEST(Cyclotomic, RootOfUnityRelations) {
  for (std::int64_t m = 1; m <= 3; ++m) {
    const CharacterRing ring(3, m);
    EXPECT_EQ(CyclotomicValue::zeta_power(ring.order(), ring), CyclotomicValue::from_int(1, ring));
    CyclotomicValue sum = CyclotomicValue::zero(ring);
    for (std::int64_t j = 0; j < 3; ++j) sum += CyclotomicValue::zeta_power(j * ring.order() / 3, ring);
    EXPECT_TRUE(sum.is_zero());
    EXPECT_EQ(CyclotomicValue::zeta_power(1, ring).conj(), CyclotomicValue::zeta_power(-1, ring));
  }
  const CharacterRing r5(5, 2);
  EXPECT_EQ(r5.degree(), 20);
  EXPECT_EQ(CyclotomicValue::from_int(10, r5).scaled_p(-1), CyclotomicValue::from_int(2, r5));
  EXPECT_EQ(CyclotomicValue::from_int(2, r5).scaled_p(-1).denominator_exponent(), 1);
}

TEST(Cyclotomic, AgreesWithComplexEmbedding) {
  Rng rng(17);
  for (auto [p, m] : {std::pair<std::int64_t, std::int64_t>{3, 2}, {3, 3}, {5, 2}, {7, 1}}) {
    const CharacterRing ring(p, m);
    for (int t = 0; t < 40; ++t) {
      const CyclotomicValue x = random_value(ring, rng);
      const CyclotomicValue y = random_value(ring, rng);
      EXPECT_LT(std::abs(embed(x + y) - (embed(x) + embed(y))), 1e-8);
      EXPECT_LT(std::abs(embed(x * y) - embed(x) * embed(y)), 1e-8);
      EXPECT_LT(std::abs(embed(x.conj()) - std::conj(embed(x))), 1e-8);
      EXPECT_LT(std::abs(embed(x.in_ring(CharacterRing(p, m + 1))) - embed(x)), 1e-8);
      // Canonical form: equal complex values give identical representations.
      EXPECT_EQ(x * y - y * x, CyclotomicValue::zero(ring));
      EXPECT_EQ((x + y) - y, x);
    }
  }
}

TEST(Cyclotomic, OverflowIsReported) {
  const CharacterRing ring(3, 1);
  CyclotomicValue big = CyclotomicValue::from_int(std::int64_t{1} << 40, ring);
  EXPECT_THROW(big * big, std::overflow_error);
}

TEST(Psi, Examples) {
  for (std::int64_t m = 1; m <= 3; ++m) {
    const CharacterRing ring(3, m);
    const auto one = CyclotomicValue::from_int(1, ring);
    EXPECT_EQ(psi_value(fx("7/2"), ring), one);
    EXPECT_EQ(psi_value(fx("0"), ring), one);
    EXPECT_EQ(psi_value(fx("1/3"), ring), CyclotomicValue::zeta_power(ring.order() / 3, ring));
    if (m >= 2) EXPECT_EQ(psi_value(fx("2/9"), ring), CyclotomicValue::zeta_power(2 * ring.order() / 9, ring));
    EXPECT_EQ(psi_value(fx("4/3"), ring), psi_value(fx("1/3"), ring));
  }
  const CharacterRing ring(3, 2);
  try {
    psi_value(fx("1/27"), ring);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ConductorExceeded);
  }
  EXPECT_EQ(psi_value(ex("1/9 + 5*w"), ring), psi_value(fx("2/9"), ring));
}

TEST(Psi, IsAdditive) {
  const FieldConfig cfg = cfg3m();
  const CharacterRing ring(3, 3);
  Rng rng(5);
  for (int t = 0; t < 100; ++t) {
    const PAdic x = PAdic::from_rational(rng.uniform(-200, 200), 27, cfg);
    const PAdic y = PAdic::from_rational(rng.uniform(-200, 200), 9, cfg);
    EXPECT_EQ(psi_value(x + y, ring), psi_value(x, ring) * psi_value(y, ring));
    EXPECT_EQ(psi_value(-x, ring), psi_value(x, ring).conj());
  }
}

TEST(FiniteLevel, GridShape) {
  const FieldConfig cfg = cfg3m();
  const auto f = FiniteLevelFunction(Side::GL, cfg, 3, 1, 1);
  EXPECT_EQ(f.size(), 6561u);
  EXPECT_EQ(f.dim(), 4);
  EXPECT_EQ(f.ring().conductor(), 4);
  EXPECT_EQ(FiniteLevelFunction(Side::U, FieldConfig::make(5), 2, 0, 1).size(), 25u);
  const auto box = FiniteLevelFunction::unit_box(Side::U, cfg, 2, 1, 1);
  std::size_t support = 0;
  for (const auto& v : box.values()) support += v.is_zero() ? 0 : 1;
  EXPECT_EQ(support, 9u);
  EXPECT_EQ(FiniteLevelFunction::unit_box(Side::U, cfg, 2, 0, 0).regrid(1, 1), box);
}

TEST(Fourier, Examples) {
  const FieldConfig cfg = cfg3m();
  for (Side side : {Side::U, Side::GL}) {
    const auto box = FiniteLevelFunction::unit_box(side, cfg, 2);
    EXPECT_EQ(partial_fourier(box), box);
  }
  // 1_{3O x O} on grid (0,1) goes to 3^{-1} 1_{O x 3^{-1}O} on grid (1,0).
  FiniteLevelFunction f(Side::GL, cfg, 2, 0, 1);
  for (std::size_t i = 0; i < f.size(); ++i)
    if (f.digits(i)[0] == 0) f.set_value(i, CyclotomicValue::from_int(1, f.ring()));
  FiniteLevelFunction expected(Side::GL, cfg, 2, 1, 0);
  for (std::size_t i = 0; i < expected.size(); ++i)
    if (expected.digits(i)[0] == 0) expected.set_value(i, CyclotomicValue::from_int(1, expected.ring()).scaled_p(-1));
  EXPECT_EQ(partial_fourier(f), expected);
}

TEST(Fourier, MatchesNaiveCharacterSum) {
  Rng rng(11);
  const FieldConfig cfgs[] = {cfg3m(), FieldConfig::make(5), FieldConfig::make(3, 2)};
  for (const auto& cfg : cfgs) {
    for (Side side : {Side::U, Side::GL}) {
      for (auto [a, b] : {std::pair<std::int64_t, std::int64_t>{1, 1}, {0, 1}, {1, 0}, {2, 0}}) {
        if (cfg.p == 5 && a + b > 1) continue;
        const auto fn = FiniteLevelFunction::random(side, cfg, 2, a, b, rng);
        EXPECT_EQ(partial_fourier(fn), naive_fourier(fn)) << to_string(side) << " p=" << cfg.p << " " << a << b;
      }
      const auto f3 = FiniteLevelFunction::random(side, cfg, 3, 0, 1, rng);
      EXPECT_EQ(partial_fourier(f3), naive_fourier(f3));
    }
  }
}

TEST(Fourier, SquareIsReflectionAndOrderFour) {
  Rng rng(3);
  for (const auto& cfg : {cfg3m(), FieldConfig::make(5)}) {
    for (Side side : {Side::U, Side::GL}) {
      for (int n : {2, 3}) {
        const std::int64_t a = cfg.p == 3 && n == 2 ? 1 : 0;
        const auto f = FiniteLevelFunction::random(side, cfg, n, a, 1, rng);
        const auto f2 = partial_fourier(partial_fourier(f));
        EXPECT_EQ(f2, reflect(f));
        EXPECT_EQ(partial_fourier(partial_fourier(f2)), f);
      }
    }
  }
}

TEST(Fourier, Plancherel) {
  Rng rng(8);
  for (Side side : {Side::U, Side::GL}) {
    for (int t = 0; t < 5; ++t) {
      const auto f = FiniteLevelFunction::random(side, cfg3m(), 2, 1, t % 3, rng);
      EXPECT_EQ(l2_norm_squared(partial_fourier(f)), l2_norm_squared(f));
    }
  }
}

TEST(Fourier, TranslationBecomesModulation) {
  Rng rng(21);
  for (Side side : {Side::U, Side::GL}) {
    for (int t = 0; t < 5; ++t) {
      const auto f = FiniteLevelFunction::random(side, cfg3m(), 2, 1, 1, rng);
      std::vector<std::int64_t> d(static_cast<std::size_t>(f.dim()));
      for (auto& x : d) x = rng.uniform(0, f.radix() - 1);
      FiniteLevelFunction v_point(side, cfg3m(), 2, 1, 1);
      const auto v = v_point.point(v_point.index(d));
      const auto lhs = partial_fourier(translate(f, d));
      auto rhs = partial_fourier(f);
      for (std::size_t i = 0; i < rhs.size(); ++i)
        rhs.set_value(i, rhs.value(i) * psi_value(pairing(side, v, rhs.point(i)), rhs.ring()));
      EXPECT_EQ(lhs, rhs);
    }
  }
}

TEST(Fourier, RepresentativeIndependence) {
  Rng rng(4);
  for (Side side : {Side::U, Side::GL}) {
    const auto fn = FiniteLevelFunction::random(side, cfg3m(), 2, 1, 1, rng);
    FourierOptions shifted;
    shifted.representative_shift = 7;
    EXPECT_EQ(partial_fourier(fn, shifted), partial_fourier(fn));
    EXPECT_EQ(multiply_psi_q(fn, fx("1/3") * fx("3"), 5), multiply_psi_q(fn, PAdic::one(cfg3m())));
    EXPECT_EQ(multiply_psi_q(fn, PAdic::one(cfg3m()), 2), multiply_psi_q(fn, PAdic::one(cfg3m())));
  }
}

TEST(Fourier, SpectatorIsUntouched) {
  auto f = FiniteLevelFunction::unit_box(Side::GL, cfg3m(), 2, 1, 1);
  f.set_spectator(SpectatorBox{2, 1});
  const auto g = weil_apply({WeilGenerator::n(PAdic::one(cfg3m())), WeilGenerator::w()}, f);
  EXPECT_EQ(g.spectator(), (SpectatorBox{2, 1}));
}

TEST(Weil, WordExamples) {
  const FieldConfig cfg = cfg3m();
  Rng rng(9);
  for (Side side : {Side::U, Side::GL}) {
    const auto fn = FiniteLevelFunction::random(side, cfg, 2, 1, 1, rng);
    EXPECT_EQ(weil_apply({WeilGenerator::n(fx("0"))}, fn), fn);
    const auto box = FiniteLevelFunction::unit_box(side, cfg, 2, 1, 1);
    EXPECT_EQ(weil_apply({WeilGenerator::n(PAdic::one(cfg))}, box), box);
    const auto w = WeilGenerator::w();
    EXPECT_EQ(weil_apply({w, w, w, w}, fn), fn);
    // n(1/3) is not constant on cosets of the (1,1) grid.
    EXPECT_THROW(weil_apply({WeilGenerator::n(fx("1/3"))}, fn), Error);
  }
}

TEST(Weil, QMultiplicationDoesNotCommuteWithFourier) {
  const FieldConfig cfg = cfg3m();
  for (Side side : {Side::U, Side::GL}) {
    // Witness: the indicator of the single coset at the first basis vector times 3^{-1}.
    FiniteLevelFunction f(side, cfg, 2, 1, 1);
    std::vector<std::int64_t> d(2, 0);
    d[0] = 1;
    f.set_value(f.index(d), CyclotomicValue::from_int(1, f.ring()));
    const auto n1 = WeilGenerator::n(PAdic::one(cfg));
    EXPECT_NE(weil_apply({n1, WeilGenerator::w()}, f), weil_apply({WeilGenerator::w(), n1}, f));
    // The unit box is q-invariant, so there the two orders agree.
    const auto box = FiniteLevelFunction::unit_box(side, cfg, 2, 1, 1);
    EXPECT_EQ(weil_apply({n1, WeilGenerator::w()}, box), weil_apply({WeilGenerator::w(), n1}, box));
  }
}

TEST(Weil, Sl2Relations) {
  const FieldConfig cfg = cfg3m();
  for (Side side : {Side::U, Side::GL}) {
    Sl2CheckOptions opts;
    opts.side = side;
    EXPECT_TRUE(sl2_relation_check(cfg, 2, 1, 1, 10, 1, opts));
    opts.twist = 1;
    EXPECT_FALSE(sl2_relation_check(cfg, 2, 1, 1, 2, 1, opts));
  }
  EXPECT_TRUE(sl2_relation_check(FieldConfig::make(5), 2, 1, 1, 2, 3));
  // Orientation: with n(1) the cube is the identity, not the reflection F^2.
  Rng rng(2);
  const auto fn = FiniteLevelFunction::random(Side::GL, cfg, 2, 1, 1, rng);
  const auto n1 = WeilGenerator::n(PAdic::one(cfg));
  const auto w = WeilGenerator::w();
  EXPECT_EQ(weil_apply({n1, w, n1, w, n1, w}, fn), fn);
  EXPECT_NE(weil_apply({w, w}, fn), fn);
  EXPECT_TRUE(sl2_relation_check(cfg, 3, 0, 0, 3, 3));
}

TEST(Weil, UnitSelfDual) {
  for (std::int64_t p : {3, 5}) {
    for (int n : {2, 3}) {
      EXPECT_TRUE(unit_selfdual_check(FieldConfig::make(p), n));
      EXPECT_FALSE(unit_selfdual_check(FieldConfig::make(p), n, 1));
    }
  }
}
