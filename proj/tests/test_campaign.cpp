#include <gtest/gtest.h>

#include "fllab/campaign.hpp"
#include "fllab/errors.hpp"
#include "support.hpp"

using namespace fllab;
using namespace fltest;

namespace {

RunConfig small_config(std::size_t n, std::int64_t p, std::size_t samples) {
  RunConfig rc;
  rc.n = n;
  rc.cfg = FieldConfig::make(p);
  rc.samples = samples;
  rc.seed = 7;
  return rc;
}

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::InvalidConfig;
}

}  // namespace

TEST(Campaign, UnmatchedIndicesHitTheRequestedShare) {
  std::size_t hits = 0;
  for (std::size_t i = 0; i < 500; ++i) hits += is_unmatched_index(i, 200) ? 1 : 0;
  EXPECT_EQ(hits, 100u);
  EXPECT_FALSE(is_unmatched_index(0, 200));
  EXPECT_TRUE(is_unmatched_index(4, 200));
  for (std::size_t i = 0; i < 50; ++i) {
    EXPECT_FALSE(is_unmatched_index(i, 0));
    EXPECT_TRUE(is_unmatched_index(i, 1000));
  }
}

TEST(Campaign, VerifySmallRun) {
  const VerifyReport rep = run_verify(small_config(2, 3, 60));
  EXPECT_EQ(rep.summary.total, 60u);
  EXPECT_EQ(rep.summary.mismatches, 0u);
  EXPECT_EQ(rep.summary.errors, 0u);
  EXPECT_EQ(rep.summary.unmatched, 12u);
  std::size_t mismatches = 0, unmatched = 0;
  for (std::size_t i = 0; i < rep.samples.size(); ++i) {
    const SampleRecord& r = rep.samples[i];
    EXPECT_EQ(r.index, i);
    mismatches += r.status == SampleStatus::Ok && !r.equal ? 1 : 0;
    unmatched += r.matched ? 0 : 1;
    ASSERT_TRUE(r.y);
    if (r.matched) {
      ASSERT_TRUE(r.x);
      EXPECT_TRUE(matches(*r.x, *r.y));
    } else {
      EXPECT_FALSE(r.hermitian_exists);
      EXPECT_EQ(r.o_gl, 0);
    }
  }
  EXPECT_EQ(mismatches, rep.summary.mismatches);
  EXPECT_EQ(unmatched, rep.summary.unmatched);
  EXPECT_EQ(exit_code(rep.summary), 0);
}

TEST(Campaign, RecordsReproduceThroughOrbit) {
  const VerifyReport rep = run_verify(small_config(3, 3, 15));
  for (const auto& r : rep.samples) {
    ASSERT_EQ(r.status, SampleStatus::Ok) << r.message;
    const MatrixInput y = parse_matrix_json(matrix_json(*r.y), r.y->field());
    EXPECT_EQ(orbital_gl_unit(*y.y).value, r.o_gl);
    if (r.x) {
      const MatrixInput x = parse_matrix_json(matrix_json(*r.x), r.x->field());
      EXPECT_EQ(orbital_u_unit(*x.x).value, r.o_u);
    }
  }
}

TEST(Campaign, ThreadCountDoesNotChangeReport) {
  RunConfig one = small_config(3, 3, 30);
  one.sampling.height = 20;
  RunConfig four = one;
  four.threads = 4;
  EXPECT_EQ(to_json(run_verify(one), "t").dump(), to_json(run_verify(four), "t").dump());
  RunConfig lemma = small_config(3, 3, 10);
  RunConfig lemma_threads = lemma;
  lemma_threads.threads = 3;
  EXPECT_EQ(to_json(run_lemma1(lemma), "t").dump(), to_json(run_lemma1(lemma_threads), "t").dump());
}

TEST(Campaign, TimingsOnlyOnRequest) {
  RunConfig rc = small_config(2, 3, 3);
  EXPECT_FALSE(to_json(run_verify(rc), "t")["samples"][0].contains("runtime_ms"));
  rc.timings = true;
  EXPECT_TRUE(to_json(run_verify(rc), "t")["samples"][0].contains("runtime_ms"));
}

TEST(Campaign, ExitCodes) {
  Summary s;
  EXPECT_EQ(exit_code(s), 0);
  s.explosion_skips = 2;
  EXPECT_EQ(exit_code(s), 0);
  s.precision_failures = 1;
  EXPECT_EQ(exit_code(s), 3);
  s.mismatches = 1;
  EXPECT_EQ(exit_code(s), 1);
  s.mismatches = 0;
  s.errors = 1;
  EXPECT_EQ(exit_code(s), 1);
}

TEST(Campaign, ConfigValidation) {
  RunConfig rc = small_config(2, 3, 10);
  rc.cfg.p = 4;
  EXPECT_EQ(kind_of([&] { rc.validate(); }), ErrorKind::InvalidConfig);
  rc = small_config(2, 3, 0);
  EXPECT_EQ(kind_of([&] { rc.validate(); }), ErrorKind::InvalidConfig);
  rc = small_config(1, 3, 5);
  EXPECT_EQ(kind_of([&] { run_lemma1(rc); }), ErrorKind::InvalidConfig);
}

TEST(Campaign, Lemma1SmallRun) {
  const Lemma1Report rep = run_lemma1(small_config(2, 3, 30));
  EXPECT_EQ(rep.failures, 0u);
  EXPECT_EQ(rep.errors, 0u);
  for (const auto& r : rep.samples) {
    ASSERT_TRUE(r.x);
    EXPECT_EQ(block_q(*r.x).valuation(), 0);
  }
  EXPECT_EQ(exit_code(rep), 0);
}

TEST(Campaign, CsvHasOneRowPerSample) {
  const VerifyReport rep = run_verify(small_config(2, 5, 12));
  const std::string csv = to_csv(rep);
  EXPECT_EQ(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')), 13u);
  EXPECT_EQ(csv.rfind("index,kind,status,o_u,o_gl", 0), 0u);
}

TEST(Campaign, FourierCheck) {
  FourierCheckConfig fc;
  fc.cfg = FieldConfig::make(3);
  fc.trials = 3;
  const FourierCheckReport rep = run_fourier_check(fc);
  EXPECT_TRUE(rep.passed());
  EXPECT_EQ(rep.checks.size(), 5u);
}

TEST(Io, MatrixRoundTrip) {
  const FieldConfig cfg = cfg3m();
  const Json doc = Json::parse(R"({"p":3,"u":-1,"n":2,"side":"u","entries":[["1","w"],["-w","0"]]})");
  const MatrixInput in = parse_matrix_json(doc, FieldConfig::make(5));
  EXPECT_EQ(in.cfg.p, 3);
  EXPECT_EQ(in.cfg.u, -1);
  ASSERT_TRUE(in.x);
  EXPECT_EQ(matrix_json(*in.x), doc);
  const Json gl = Json::parse(R"({"n":2,"side":"gl","entries":[["1","1/3"],[9,"0"]]})");
  const MatrixInput g = parse_matrix_json(gl, cfg);
  ASSERT_TRUE(g.y);
  EXPECT_TRUE(same(g.y->matrix()(0, 1), "1/3"));
  EXPECT_EQ(g.cfg, cfg);
}

TEST(Io, MatrixErrors) {
  const FieldConfig cfg = cfg3m();
  auto parse = [&](const char* text) { return parse_matrix_json(Json::parse(text), cfg); };
  EXPECT_EQ(kind_of([&] { parse(R"({"n":2,"side":"u","entries":[["1","w"]]})"); }), ErrorKind::Parse);
  EXPECT_EQ(kind_of([&] { parse(R"({"n":2,"side":"x","entries":[["1","0"],["0","1"]]})"); }), ErrorKind::Parse);
  EXPECT_EQ(kind_of([&] { parse(R"({"n":2,"side":"gl","entries":[["1","w"],["0","1"]]})"); }), ErrorKind::Parse);
  EXPECT_EQ(kind_of([&] { parse(R"({"n":2,"side":"u","entries":[["1","w"],["w","0"]]})"); }), ErrorKind::SideError);
  EXPECT_EQ(kind_of([&] { parse(R"({"p":9,"n":1,"side":"gl","entries":[["1"]]})"); }), ErrorKind::InvalidConfig);
  EXPECT_EQ(kind_of([&] { read_json("/nonexistent/file.json"); }), ErrorKind::Parse);
}

TEST(Io, InvariantsRoundTrip) {
  const FieldConfig cfg = cfg3m();
  const Json doc = Json::parse(R"({"n":2,"charpoly":["-1","-1"],"moments":["0"]})");
  const InvariantPoint a = parse_invariants_json(doc, cfg);
  EXPECT_EQ(invariants_json(a), doc);
  const HnElement x(me({{"1", "w"}, {"-w", "0"}}, cfg));
  EXPECT_TRUE(same_point(invariants_of(x), a));
  EXPECT_EQ(kind_of([&] { parse_invariants_json(Json::parse(R"({"n":2,"charpoly":["1"],"moments":["0"]})"), cfg); }),
            ErrorKind::Parse);
}
