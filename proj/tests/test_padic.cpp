#include <gtest/gtest.h>

#include "fllab/padic.hpp"
#include "fllab/rng.hpp"
#include "support.hpp"

using namespace fllab;
using fltest::cfg3m;

TEST(FieldConfig, Validation) {
  EXPECT_THROW(FieldConfig::make(4), Error);
  EXPECT_THROW(FieldConfig::make(2), Error);
  EXPECT_THROW((FieldConfig{3, 1, 48}.validate()), Error);
  EXPECT_THROW((FieldConfig{3, -1, 4}.validate()), Error);
  EXPECT_EQ(FieldConfig::make(3).u, 2);
  EXPECT_EQ(FieldConfig::make(5).u, 2);
  EXPECT_EQ(FieldConfig::make(7).u, 3);
  EXPECT_NO_THROW(cfg3m().validate());
}

TEST(PAdic, FromRational) {
  const FieldConfig c = FieldConfig::make(3);
  const PAdic x = PAdic::from_int(10, c);
  EXPECT_EQ(x.valuation(), 0);
  EXPECT_EQ(x.residue(c.precision), mpz_class(10));

  const PAdic y = PAdic::from_rational(9, 2, c);
  EXPECT_EQ(y.valuation(), 2);
  EXPECT_EQ(y.unit() % 9, 5);
  // 2 * unit == 1 mod 3^D
  EXPECT_EQ((2 * y.unit()) % pow_p(3, c.precision), 1);

  EXPECT_TRUE(PAdic::from_int(0, c).is_exact_zero());
  EXPECT_EQ(PAdic::from_int(0, c).val_lower_bound(), kInfVal);
}

TEST(PAdic, Arithmetic) {
  const FieldConfig c = FieldConfig::make(3);
  const PAdic three = PAdic::from_int(3, c);
  const PAdic inv = three.inverse();
  EXPECT_EQ(inv.valuation(), -1);
  EXPECT_EQ(inv.unit(), 1);
  EXPECT_EQ((three * inv).valuation(), 0);
  EXPECT_TRUE((PAdic::from_int(4, c) + PAdic::from_int(-4, c)).is_exact_zero());
  EXPECT_THROW(PAdic::zero(c).inverse(), Error);
}

TEST(PAdic, ApproximateZeroIsNotExact) {
  const FieldConfig c = FieldConfig::make(3);
  const PAdic r = PAdic::from_int(7, c).sqrt();  // 7 = 1 mod 3
  const PAdic d = r * r - PAdic::from_int(7, c);
  EXPECT_FALSE(d.is_exact_zero());
  EXPECT_TRUE(d.is_zero());
  EXPECT_THROW((void)d.valuation(), Error);
  try {
    (void)d.valuation();
  } catch (const Error& err) {
    EXPECT_EQ(err.kind(), ErrorKind::PrecisionExhausted);
  }
}

TEST(PAdic, ValuationLaws) {
  const FieldConfig c = FieldConfig::make(5);
  Rng rng(7);
  for (int i = 0; i < 300; ++i) {
    const PAdic x = PAdic::from_rational(rng.uniform(1, 1000), rng.uniform(1, 1000), c) *
                    PAdic::p_power(rng.uniform(-3, 3), c);
    const PAdic y = PAdic::from_rational(rng.uniform(-1000, -1), rng.uniform(1, 1000), c);
    EXPECT_EQ((x * y).valuation(), x.valuation() + y.valuation());
    const PAdic s = x + y;
    if (!s.is_exact_zero()) {
      EXPECT_GE(s.valuation(), std::min(x.valuation(), y.valuation()));
      if (x.valuation() != y.valuation()) EXPECT_EQ(s.valuation(), std::min(x.valuation(), y.valuation()));
    }
  }
}

TEST(Quad, GaloisTraceNorm) {
  const FieldConfig c = cfg3m();
  const Quad x = parse_scalar("2+w", c);
  EXPECT_TRUE(x.sigma().identical(parse_scalar("2-w", c)));
  EXPECT_TRUE(fltest::same(Quad::omega(c).norm(), "1"));
  EXPECT_TRUE(fltest::same(parse_scalar("1+w", c).norm(), "2"));
  EXPECT_TRUE(fltest::same(x.trace(), "4"));

  Rng rng(11);
  for (int i = 0; i < 100; ++i) {
    const Quad z(PAdic::from_rational(rng.uniform(-99, 99), rng.uniform(1, 30), c),
                 PAdic::from_rational(rng.uniform(-99, 99), rng.uniform(1, 30), c));
    EXPECT_TRUE(z.sigma().sigma().identical(z));
    EXPECT_TRUE(agree(Quad(z.trace()), z + z.sigma()));
    EXPECT_TRUE(agree(Quad(z.norm()), z * z.sigma()));
  }
  EXPECT_TRUE(parse_scalar("5", c).sigma().im().is_zero());
}

TEST(Quad, NormEquation) {
  const FieldConfig c = cfg3m();
  EXPECT_TRUE(solve_norm_equation(PAdic::one(c)).identical(Quad::one(c)));
  const Quad nu = solve_norm_equation(PAdic::from_int(2, c));
  EXPECT_TRUE(nu.identical(parse_scalar("1+w", c)));
  try {
    (void)solve_norm_equation(PAdic::from_int(3, c));
    FAIL() << "expected OddValuation";
  } catch (const Error& err) {
    EXPECT_EQ(err.kind(), ErrorKind::OddValuation);
  }
}

TEST(Quad, NormEquationRandom) {
  for (std::int64_t p : {3, 5, 7}) {
    const FieldConfig c = FieldConfig::make(p);
    Rng rng(static_cast<std::uint64_t>(p));
    int odd = 0;
    for (int i = 0; i < 200; ++i) {
      std::int64_t num = rng.uniform(1, 100000);
      while (num % p == 0) num /= p;
      std::int64_t den = rng.uniform(1, 1000);
      while (den % p == 0) den /= p;
      const PAdic mu = PAdic::from_rational(num * (rng.coin(0.5) ? 1 : -1), den, c);
      const Quad nu = solve_norm_equation(mu);
      EXPECT_EQ(nu.valuation(), 0);
      EXPECT_GE((nu.norm() - mu).val_lower_bound(), c.precision - 2);
      const PAdic odd_mu = mu * PAdic::p_power(2 * rng.uniform(-3, 3) + 1, c);
      try {
        (void)solve_norm_equation(odd_mu);
      } catch (const Error& err) {
        if (err.kind() == ErrorKind::OddValuation) ++odd;
      }
    }
    EXPECT_EQ(odd, 200);
  }
}

TEST(Literal, Grammar) {
  const FieldConfig c = cfg3m();
  EXPECT_TRUE(parse_scalar("w", c).identical(Quad::omega(c)));
  EXPECT_TRUE(parse_scalar("-w", c).identical(-Quad::omega(c)));
  EXPECT_TRUE(parse_scalar("1/3*w", c).identical(Quad(PAdic::zero(c), PAdic::from_rational(1, 3, c))));
  EXPECT_TRUE(parse_scalar("2w", c).identical(Quad(PAdic::zero(c), PAdic::from_int(2, c))));
  EXPECT_TRUE(parse_scalar("1-2/9w+3", c).identical(Quad(PAdic::from_int(4, c), PAdic::from_rational(-2, 9, c))));
  EXPECT_THROW(parse_scalar("", c), Error);
  EXPECT_THROW(parse_scalar("1/0", c), Error);
  EXPECT_THROW(parse_scalar("x", c), Error);
  EXPECT_THROW(parse_f_scalar("w", c), Error);
  for (const char* s : {"0", "w", "-w", "1/3*w", "5-2*w", "-7/9"})
    EXPECT_EQ(parse_scalar(s, c).to_literal(), std::string(s));
}
