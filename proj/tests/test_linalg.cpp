#include <gtest/gtest.h>

#include "fllab/linalg.hpp"
#include "fllab/rng.hpp"
#include "support.hpp"

using namespace fllab;
using fltest::mf;
using fltest::me;

namespace {

// Polynomials as coefficient vectors, lowest degree first.
using Poly = std::vector<mpq_class>;

Poly poly_mul(const Poly& a, const Poly& b) {
  Poly out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

Poly poly_add(Poly a, const Poly& b, int sign) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] += sign * b[i];
  return a;
}

// det(t I - M) by cofactor expansion along the first row.
Poly cofactor_charpoly(const std::vector<std::vector<Poly>>& m) {
  const std::size_t n = m.size();
  if (n == 1) return m[0][0];
  Poly acc{0};
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<std::vector<Poly>> minor;
    for (std::size_t r = 1; r < n; ++r) {
      minor.emplace_back();
      for (std::size_t c = 0; c < n; ++c)
        if (c != j) minor.back().push_back(m[r][c]);
    }
    acc = poly_add(acc, poly_mul(m[0][j], cofactor_charpoly(minor)), j % 2 == 0 ? 1 : -1);
  }
  return acc;
}

MatrixF random_int_matrix(std::size_t n, const FieldConfig& c, Rng& rng, std::int64_t h = 20) {
  MatrixF m = MatrixF::zeros(n, n, c);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = PAdic::from_int(rng.uniform(-h, h), c);
  return m;
}

mpq_class exact(const PAdic& x) { return *x.exact_value(); }

}  // namespace

TEST(Charpoly, Examples) {
  const FieldConfig c = FieldConfig::make(3);
  const auto id = charpoly(MatrixF::identity(2, c));
  EXPECT_TRUE(fltest::same(id[1], "-2"));
  EXPECT_TRUE(fltest::same(id[2], "1"));
  // Companion of t^2 - 5t + 7.
  const auto comp = charpoly(mf({{"0", "-7"}, {"1", "5"}}, c));
  EXPECT_TRUE(fltest::same(comp[1], "-5"));
  EXPECT_TRUE(fltest::same(comp[2], "7"));
}

TEST(Charpoly, CofactorOracle) {
  const FieldConfig c = FieldConfig::make(3);
  Rng rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(trial % 4);
    const MatrixF m = random_int_matrix(n, c, rng);
    std::vector<std::vector<Poly>> tm(n, std::vector<Poly>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) tm[i][j] = i == j ? Poly{-exact(m(i, j)), 1} : Poly{-exact(m(i, j))};
    const Poly oracle = cofactor_charpoly(tm);
    const auto got = charpoly(m);
    ASSERT_EQ(got.size(), n + 1);
    for (std::size_t k = 0; k <= n; ++k) EXPECT_EQ(exact(got[k]), oracle[n - k]) << "n=" << n << " k=" << k;
  }
}

TEST(Charpoly, ConjugationInvariant) {
  const FieldConfig c = FieldConfig::make(5);
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial % 3);
    const MatrixF m = random_int_matrix(n, c, rng);
    MatrixF g = random_int_matrix(n, c, rng, 5);
    if (val_det(g) == kInfVal) continue;
    const auto a = charpoly(m);
    const auto b = charpoly(g * m * inverse(g));
    for (std::size_t k = 0; k <= n; ++k) EXPECT_TRUE(a[k].identical(b[k]));
  }
}

TEST(ValDet, Examples) {
  const FieldConfig c = FieldConfig::make(3);
  EXPECT_EQ(val_det(mf({{"3", "0"}, {"0", "1"}}, c)), 1);
  EXPECT_EQ(val_det(mf({{"3", "1"}, {"0", "3"}}, c)), 2);
  EXPECT_EQ(val_det(mf({{"1", "2"}, {"2", "4"}}, c)), kInfVal);
  EXPECT_EQ(val_det(mf({{"1/3", "1"}, {"1", "6"}}, c)), 0);
}

TEST(ValDet, Multiplicative) {
  const FieldConfig c = FieldConfig::make(3);
  Rng rng(9);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(trial % 3);
    const MatrixF a = random_int_matrix(n, c, rng);
    const MatrixF b = random_int_matrix(n, c, rng);
    const std::int64_t va = val_det(a), vb = val_det(b);
    if (va == kInfVal || vb == kInfVal) continue;
    EXPECT_EQ(val_det(a * b), va + vb);
    EXPECT_EQ(determinant(a).valuation(), va);
  }
}

TEST(Solve, Examples) {
  const FieldConfig c = FieldConfig::make(3);
  const auto x = solve_linear(mf({{"3", "0"}, {"0", "1"}}, c), {PAdic::from_int(3, c), PAdic::from_int(2, c)});
  EXPECT_TRUE(fltest::same(x[0], "1"));
  EXPECT_TRUE(fltest::same(x[1], "2"));
  try {
    (void)solve_linear(mf({{"1", "2"}, {"2", "4"}}, c), {PAdic::one(c), PAdic::one(c)});
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.kind(), ErrorKind::SingularSystem);
  }
}

TEST(Solve, ResidualAtPrecision) {
  const FieldConfig c = FieldConfig::make(3);
  Rng rng(13);
  for (int trial = 0; trial < 30; ++trial) {
    // Approximate right-hand side: square roots of integers = 1 mod 3.
    const MatrixF a = random_int_matrix(3, c, rng);
    const std::int64_t v = val_det(a);
    if (v == kInfVal) continue;
    std::vector<PAdic> rhs;
    for (int i = 0; i < 3; ++i) rhs.push_back(PAdic::from_int(1 + 3 * rng.uniform(0, 50), c).sqrt());
    const auto x = solve_linear(a, rhs);
    const auto back = a.apply(x);
    for (int i = 0; i < 3; ++i) EXPECT_GE((back[i] - rhs[i]).val_lower_bound(), c.precision - v - 2);
  }
}

TEST(Hnf, Examples) {
  const FieldConfig c = FieldConfig::make(3);
  const auto h = hnf_basis<PAdic>({{PAdic::from_int(3, c), PAdic::zero(c)}, {PAdic::one(c), PAdic::one(c)}}, 2);
  EXPECT_TRUE(h.full_rank);
  EXPECT_TRUE(h.basis.identical(mf({{"1", "0"}, {"1", "3"}}, c)));
  const MatrixF id = MatrixF::identity(3, c);
  std::vector<std::vector<PAdic>> cols;
  for (std::size_t j = 0; j < 3; ++j) cols.push_back(id.col(j));
  EXPECT_TRUE(hnf_basis(cols, 3).basis.identical(id));
  for (auto& col : cols)
    for (auto& x : col) x = x * PAdic::from_int(3, c);
  EXPECT_TRUE(hnf_basis(cols, 3).basis.identical(PAdic::from_int(3, c) * id));
  const auto deficient = hnf_basis<PAdic>({{PAdic::one(c), PAdic::one(c)}}, 2);
  EXPECT_FALSE(deficient.full_rank);
}

template <class S>
std::vector<std::vector<S>> columns(const Matrix<S>& m) {
  std::vector<std::vector<S>> out;
  for (std::size_t j = 0; j < m.cols(); ++j) out.push_back(m.col(j));
  return out;
}

TEST(Hnf, BasisIndependentF) {
  const FieldConfig c = FieldConfig::make(3);
  Rng rng(21);
  for (int trial = 0; trial < 60; ++trial) {
    MatrixF b = MatrixF::zeros(3, 3, c);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j)
        b(i, j) = PAdic::from_int(rng.uniform(-30, 30), c) * PAdic::p_power(rng.uniform(-1, 1), c);
    if (val_det(b) == kInfVal) continue;
    MatrixF u = random_int_matrix(3, c, rng, 4);
    if (val_det(u) != 0) continue;
    const auto h1 = hnf_basis(columns(b), 3).basis;
    const auto h2 = hnf_basis(columns(MatrixF(b * u)), 3).basis;
    EXPECT_TRUE(h1.identical(h2));
    EXPECT_TRUE(hnf_basis(columns(h1), 3).basis.identical(h1));
    EXPECT_EQ(val_det(h1), val_det(b));
  }
}

TEST(Hnf, BasisIndependentE) {
  const FieldConfig c = FieldConfig::make(5);
  Rng rng(22);
  auto rq = [&](std::int64_t h) {
    return Quad(PAdic::from_int(rng.uniform(-h, h), c), PAdic::from_int(rng.uniform(-h, h), c));
  };
  for (int trial = 0; trial < 40; ++trial) {
    MatrixE b = MatrixE::zeros(2, 2, c), u = MatrixE::zeros(2, 2, c);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) {
        b(i, j) = rq(30);
        u(i, j) = rq(4);
      }
    if (val_det(b) == kInfVal || val_det(u) != 0) continue;
    const auto h1 = hnf_basis(columns(b), 2).basis;
    EXPECT_TRUE(h1.identical(hnf_basis(columns(MatrixE(b * u)), 2).basis));
  }
}

TEST(HermitianSplit, Examples) {
  const FieldConfig c = fltest::cfg3m();
  const MatrixE id = MatrixE::identity(2, c);
  EXPECT_TRUE(fltest::agree_matrix(hermitian_split(id), id));
  const MatrixE a = hermitian_split(me({{"2"}}, c));
  EXPECT_TRUE(fltest::same(a(0, 0).norm(), "2"));
  EXPECT_TRUE(a(0, 0).identical(fltest::e("1+w", c)) || a(0, 0).identical(fltest::e("1-w", c)) ||
              a(0, 0).identical(fltest::e("-1+w", c)) || a(0, 0).identical(fltest::e("-1-w", c)));
  try {
    (void)hermitian_split(me({{"3"}}, c));
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.kind(), ErrorKind::NotSplit);
  }
}

TEST(HermitianSplit, RoundTrip) {
  for (std::int64_t p : {3, 5}) {
    const FieldConfig c = FieldConfig::make(p);
    Rng rng(static_cast<std::uint64_t>(100 + p));
    int done = 0;
    while (done < 40) {
      const std::size_t n = 1 + static_cast<std::size_t>(done % 3);
      MatrixE m = MatrixE::zeros(n, n, c);
      for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = Quad(PAdic::from_int(rng.uniform(-40, 40), c) * PAdic::p_power(rng.uniform(-1, 1), c));
        for (std::size_t j = i + 1; j < n; ++j) {
          m(i, j) = Quad(PAdic::from_int(rng.uniform(-40, 40), c), PAdic::from_int(rng.uniform(-40, 40), c));
          m(j, i) = m(i, j).sigma();
        }
      }
      const std::int64_t v = val_det(m);
      if (v == kInfVal) continue;
      if (v % 2 != 0) {
        EXPECT_THROW(hermitian_split(m), Error);
        continue;
      }
      const MatrixE a = hermitian_split(m);
      const MatrixE r = a.adjoint() * a - m;
      for (const Quad& x : r.data()) EXPECT_GE(x.val_lower_bound(), c.precision - 4 - 2 * std::abs(v));
      ++done;
    }
  }
}
