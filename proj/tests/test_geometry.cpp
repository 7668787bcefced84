#include <gtest/gtest.h>

#include <functional>

#include "fllab/geometry.hpp"
#include "support.hpp"

using namespace fllab;
using fltest::cfg3m;
using fltest::me;
using fltest::mf;

namespace {

InvariantPoint point(std::size_t n, const std::vector<std::string>& cp, const std::vector<std::string>& mom,
                     const FieldConfig& c) {
  InvariantPoint a;
  a.n = n;
  for (const auto& s : cp) a.charpoly.push_back(fltest::f(s, c));
  for (const auto& s : mom) a.moments.push_back(fltest::f(s, c));
  return a;
}

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& err) {
    return err.kind();
  }
  return ErrorKind::InvalidConfig;
}

// Rank of the linear map Z -> ([Z, X'], Z b) or ([Z, X'], c Z) on gl_m(F).
bool centralizer_trivial(const MatrixF& y, bool right) {
  const Blocks<PAdic> bl = split_blocks(y);
  const std::size_t m = bl.b.size();
  const FieldConfig& c = y.field();
  std::vector<std::vector<PAdic>> images;
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t s = 0; s < m; ++s) {
      MatrixF z = MatrixF::zeros(m, m, c);
      z(r, s) = PAdic::one(c);
      const MatrixF comm = z * bl.corner - bl.corner * z;
      std::vector<PAdic> img = comm.data();
      if (right) {
        for (const PAdic& x : z.apply(bl.b)) img.push_back(x);
      } else {
        for (const PAdic& x : z.transpose().apply(bl.c)) img.push_back(x);
      }
      images.push_back(img);
    }
  // Z -> image is injective iff the images are linearly independent.
  MatrixF gram = MatrixF::zeros(m * m, m * m, c);
  for (std::size_t i = 0; i < m * m; ++i)
    for (std::size_t j = 0; j < m * m; ++j)
      for (std::size_t k = 0; k < images[i].size(); ++k) gram(i, j) += images[i][k] * images[j][k];
  return val_det(gram) != kInfVal;
}

MatrixF random_small(std::size_t n, const FieldConfig& c, Rng& rng) {
  MatrixF y = MatrixF::zeros(n, n, c);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) y(i, j) = PAdic::from_int(rng.uniform(-2, 2), c);
  return y;
}

}  // namespace

TEST(Geometry, BlockQ) {
  const FieldConfig c = cfg3m();
  EXPECT_TRUE(fltest::same(block_q(GlnElement(MatrixF::identity(2, c))), "0"));
  EXPECT_TRUE(fltest::same(block_q(HnElement(me({{"1", "w"}, {"-w", "0"}}, c))), "1"));
  EXPECT_TRUE(fltest::same(block_q(GlnElement(mf({{"1", "1"}, {"1", "0"}}, c))), "1"));
  EXPECT_THROW(HnElement(me({{"1", "w"}, {"w", "0"}}, c)), Error);
}

TEST(Geometry, RssExamples) {
  const FieldConfig c = cfg3m();
  EXPECT_TRUE(is_rss(GlnElement(mf({{"1", "1"}, {"1", "0"}}, c))));
  EXPECT_FALSE(is_rss(GlnElement(mf({{"1", "0"}, {"1", "0"}}, c))));
  EXPECT_FALSE(is_rss(GlnElement(mf({{"1", "2", "0"}, {"3", "4", "0"}, {"5", "6", "7"}}, c))));
  // d = (1, 1, 1): Y' = [[0, 0], [1, 1]] companion of t^2 - t, b = e_1, c = (1, 0).
  const MatrixF y3 = mf({{"0", "0", "1"}, {"1", "1", "0"}, {"1", "0", "0"}}, c);
  EXPECT_FALSE(is_rss(GlnElement(y3)));
  EXPECT_TRUE(is_rss(GlnElement(mf({{"5"}}, c))));
}

TEST(Geometry, InvariantsExamples) {
  const FieldConfig c = cfg3m();
  const InvariantPoint a = invariants_of(HnElement(me({{"1", "w"}, {"-w", "0"}}, c)));
  EXPECT_TRUE(same_point(a, point(2, {"-1", "-1"}, {"0"}, c)));
  const InvariantPoint d = invariants_of(GlnElement(mf({{"2", "0"}, {"0", "5"}}, c)));
  EXPECT_TRUE(fltest::same(d.moments[0], "5"));
  const InvariantPoint d3 = invariants_of(GlnElement(mf({{"2", "0", "0"}, {"0", "4", "0"}, {"0", "0", "5"}}, c)));
  EXPECT_TRUE(fltest::same(d3.moments[1], "25"));
}

TEST(Geometry, TransferSignExamples) {
  const FieldConfig c = cfg3m();
  const TransferSign s1 = transfer_sign(GlnElement(mf({{"1", "1"}, {"1", "0"}}, c)));
  EXPECT_EQ(s1.v, 0);
  EXPECT_EQ(s1.omega, 1);
  const TransferSign s2 = transfer_sign(GlnElement(mf({{"1", "1"}, {"3", "0"}}, c)));
  EXPECT_EQ(s2.v, 1);
  EXPECT_EQ(s2.omega, -1);
  const HnElement x(me({{"1", "w"}, {"-w", "0"}}, c));
  EXPECT_EQ(kind_of([&] { transfer_sign(x); }), ErrorKind::SideError);
}

TEST(Geometry, Representatives) {
  const FieldConfig c = cfg3m();
  const InvariantPoint a = point(2, {"-1", "-1"}, {"0"}, c);
  EXPECT_TRUE(gl_representative(a).matrix().identical(mf({{"1", "1"}, {"1", "0"}}, c)));
  const HnElement x = u_representative(a);
  EXPECT_TRUE(same_point(invariants_of(x), a));
  EXPECT_TRUE(matches(x, gl_representative(a)));

  // n = 2 with d_0 = 3: Y = [[0, 1], [3, 0]].
  const InvariantPoint odd = invariants_of(GlnElement(mf({{"0", "1"}, {"3", "0"}}, c)));
  EXPECT_FALSE(hermitian_orbit_exists(odd));
  EXPECT_EQ(kind_of([&] { u_representative(odd); }), ErrorKind::NoHermitianOrbit);
  const InvariantPoint bad = invariants_of(GlnElement(mf({{"1", "0"}, {"1", "0"}}, c)));
  EXPECT_EQ(kind_of([&] { u_representative(bad); }), ErrorKind::NotRss);
  EXPECT_EQ(kind_of([&] { gl_representative(bad); }), ErrorKind::NotRss);

  MatrixF perturbed = gl_representative(a).matrix();
  perturbed(1, 1) += PAdic::one(c);
  EXPECT_FALSE(matches(x, GlnElement(perturbed)));
}

TEST(Geometry, SampledPairs) {
  for (std::int64_t p : {3, 5}) {
    const FieldConfig c = FieldConfig::make(p);
    for (std::size_t n = 1; n <= 4; ++n) {
      for (std::uint64_t seed = 0; seed < (n == 4 ? 10u : 40u); ++seed) {
        const MatchedPair s = sample_matched_pair(n, c, SampleOptions{}, seed);
        EXPECT_TRUE(matches(s.x, s.y));
        EXPECT_TRUE(is_rss(s.y));
        EXPECT_TRUE(same_point(invariants_of(s.y), s.a));
        if (n >= 2) {
          EXPECT_TRUE(hermitian_orbit_exists(s.a));
          EXPECT_TRUE(agree(block_q(s.x), block_q(s.y)));
          EXPECT_TRUE(agree(q_of(s.a), block_q(s.y)));
          const HnElement x2 = u_representative(s.a);
          EXPECT_TRUE(same_point(invariants_of(x2), s.a));
        }
        if (n >= 3) EXPECT_TRUE(agree(q_of(s.a), s.a.moments[1] - s.a.moments[0] * s.a.moments[0]));
      }
    }
  }
}

TEST(Geometry, SamplingDeterministic) {
  const FieldConfig c = FieldConfig::make(3);
  const MatchedPair s1 = sample_matched_pair(2, c, SampleOptions{}, 42);
  const MatchedPair s2 = sample_matched_pair(2, c, SampleOptions{}, 42);
  EXPECT_TRUE(s1.x.matrix().identical(s2.x.matrix()));
  EXPECT_TRUE(s1.y.matrix().identical(s2.y.matrix()));
}

TEST(Geometry, ConjugationInvariance) {
  const FieldConfig c = FieldConfig::make(3);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const std::size_t n = 2 + seed % 2;
    const MatchedPair s = sample_matched_pair(n, c, SampleOptions{}, seed);
    const MatrixE g = random_unitary(n - 1, c, seed + 1000);
    EXPECT_TRUE(fltest::agree_matrix(MatrixE(g.adjoint() * g), MatrixE::identity(n - 1, c)));
    const HnElement gx(conjugate_embedded(g, s.x.matrix()));
    EXPECT_TRUE(same_point(invariants_of(gx), s.a));

    Rng rng(seed);
    const MatrixF h = random_gl(n - 1, c, rng);
    const GlnElement hy(conjugate_embedded(h, s.y.matrix()));
    EXPECT_TRUE(same_point(invariants_of(hy), s.a));
    EXPECT_TRUE(matches(s.x, hy));

    // omega(h Y h^-1) = omega(Y) (-1)^{val det h}
    const int expected = transfer_sign(s.y).omega * (val_det(h) % 2 == 0 ? 1 : -1);
    EXPECT_EQ(transfer_sign(hy).omega, expected);

    const InvariantPoint t = invariants_of(HnElement(s.x.matrix().adjoint()));
    EXPECT_TRUE(same_point(t, s.a));
  }
}

TEST(Geometry, CayleyScalar) {
  const FieldConfig c = cfg3m();
  const MatrixE g = cayley(me({{"w"}}, c));
  EXPECT_TRUE(fltest::same(g(0, 0).norm(), "1"));
  EXPECT_TRUE(cayley(me({{"0"}}, c)).identical(MatrixE::identity(1, c)));
}

TEST(Geometry, RssMatchesCentralizerOracle) {
  const FieldConfig c = FieldConfig::make(3);
  Rng rng(77);
  int rss = 0, non = 0;
  for (int trial = 0; trial < 300 && (rss < 50 || non < 50); ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial % 2);
    const MatrixF y = random_small(n, c, rng);
    const bool oracle = centralizer_trivial(y, true) && centralizer_trivial(y, false);
    const bool got = is_rss(GlnElement(y));
    EXPECT_EQ(got, oracle) << to_string(y);
    (got ? rss : non) += 1;
  }
  EXPECT_GE(rss, 50);
  EXPECT_GE(non, 20);
}

TEST(Geometry, UnmatchedSamples) {
  const FieldConfig c = FieldConfig::make(3);
  Rng rng(5);
  for (int i = 0; i < 20; ++i) {
    const GlnElement y = sample_unmatched_gl(2 + i % 2, c, SampleOptions{}, rng);
    EXPECT_FALSE(hermitian_orbit_exists(invariants_of(y)));
  }
}
