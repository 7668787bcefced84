// Acceptance run: one PASS/FAIL line per criterion, exit 0 iff all pass.

#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "fllab/campaign.hpp"
#include "fllab/errors.hpp"
#include "fllab/geometry.hpp"
#include "fllab/linalg.hpp"
#include "fllab/weil.hpp"

using namespace fllab;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt_seconds(double s) {
  std::ostringstream os;
  os.precision(2);
  os << std::fixed << s << " s";
  return os.str();
}

const SampleOptions kIntegral{6, 0};

Outcome fl_campaign(std::size_t n, std::int64_t p, std::size_t samples, std::int64_t height, double limit_s) {
  RunConfig rc;
  rc.n = n;
  rc.cfg = FieldConfig::make(p);
  rc.samples = samples;
  rc.seed = 0;
  rc.sampling.height = height;
  const auto t0 = Clock::now();
  const VerifyReport rep = run_verify(rc);
  const double secs = seconds_since(t0);
  const Summary& s = rep.summary;
  std::ostringstream os;
  os << "p=" << p << " n=" << n << " samples=" << s.total << " mismatches=" << s.mismatches
     << " unmatched=" << s.unmatched << " nonzero=" << s.nonzero << " precision_failures=" << s.precision_failures
     << " explosion_skips=" << s.explosion_skips << " errors=" << s.errors << " (" << fmt_seconds(secs) << ", limit "
     << limit_s << " s)";
  const bool ok = s.mismatches == 0 && s.errors == 0 && s.precision_failures == 0 && s.explosion_skips == 0 &&
                  s.total == samples && secs < limit_s;
  return {ok, os.str()};
}

Outcome criterion1() {
  const Outcome a = fl_campaign(2, 3, 500, 50, 120);
  const Outcome b = fl_campaign(2, 5, 500, 50, 120);
  return {a.pass && b.pass, a.detail + "; " + b.detail};
}

Outcome criterion2() { return fl_campaign(3, 3, 100, 20, 600); }

Outcome criterion3() {
  int count = 0, nontrivial = 0, failures = 0;
  for (std::int64_t p : {3, 5}) {
    const FieldConfig cfg = FieldConfig::make(p);
    Rng rng(303 + static_cast<std::uint64_t>(p));
    for (int i = 0; i < 30; ++i) {
      const std::size_t n = 2 + static_cast<std::size_t>(i % 2);
      const GlnElement y = sample_unmatched_gl(n, cfg, i % 3 == 2 ? SampleOptions{20, 1} : kIntegral, rng);
      const InvariantPoint a = invariants_of(y);
      const OrbitalResult r = orbital_gl_unit(y);
      const FlComparison cmp = fl_compare(a);
      ++count;
      if (r.lattice_count > 0) ++nontrivial;
      if (!is_rss(a) || hermitian_orbit_exists(a) || r.value != 0 || cmp.o_gl != 0 || cmp.hermitian_exists) ++failures;
    }
  }
  std::ostringstream os;
  os << count << " rss points without hermitian orbit, " << nontrivial
     << " with stable lattices (signed sums cancel), failures=" << failures;
  return {failures == 0 && count >= 50 && nontrivial >= 25, os.str()};
}

Outcome lemma_campaign(std::size_t n, std::size_t samples) {
  RunConfig rc;
  rc.n = n;
  rc.cfg = FieldConfig::make(3);
  rc.samples = samples;
  const Lemma1Report rep = run_lemma1(rc);
  std::size_t nonzero = 0;
  for (const auto& r : rep.samples) nonzero += r.result.o_u != 0 ? 1 : 0;
  std::ostringstream os;
  os << "n=" << n << " samples=" << rep.samples.size() << " failures=" << rep.failures << " nonzero=" << nonzero
     << " precision_failures=" << rep.precision_failures << " explosion_skips=" << rep.explosion_skips
     << " errors=" << rep.errors;
  const bool ok = rep.failures == 0 && rep.errors == 0 && rep.precision_failures == 0 && rep.explosion_skips == 0 &&
                  rep.samples.size() == samples;
  return {ok, os.str()};
}

Outcome criterion4() {
  const Outcome a = lemma_campaign(2, 100);
  const Outcome b = lemma_campaign(3, 50);
  return {a.pass && b.pass, a.detail + "; " + b.detail};
}

Outcome criterion5() {
  const FieldConfig cfg = FieldConfig::make(3);
  std::ostringstream os;
  bool ok = true;
  for (std::size_t n : {2u, 3u}) {
    int u_checked = 0, gl_checked = 0, u_bad = 0, gl_bad = 0, u_nonzero = 0, gl_nonzero = 0;
    for (std::uint64_t seed = 0; (u_checked < 50 || gl_checked < 50) && seed < 2000; ++seed) {
      const SampleOptions opts = seed % 2 ? kIntegral : SampleOptions{20, 1};
      Rng rng(seed * 31 + n);
      if (u_checked < 50) {
        const HnElement x = sample_hermitian(n, cfg, opts, rng);
        try {
          const std::int64_t o = orbital_oracle(x);
          ++u_checked;
          if (o != orbital_u_unit(x).value) ++u_bad;
          if (o != 0) ++u_nonzero;
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::OracleTooLarge) throw;
        }
      }
      if (gl_checked < 50) {
        const MatchedPair s = sample_matched_pair(n, cfg, opts, seed);
        const GlnElement y(conjugate_embedded(random_gl(n - 1, cfg, rng), s.y.matrix()));
        try {
          const std::int64_t o = orbital_oracle(y);
          ++gl_checked;
          if (o != orbital_gl_unit(y).value) ++gl_bad;
          if (o != 0) ++gl_nonzero;
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::OracleTooLarge) throw;
        }
      }
    }
    os << "n=" << n << ": u " << u_checked << " compared (" << u_nonzero << " nonzero, " << u_bad << " disagree), gl "
       << gl_checked << " compared (" << gl_nonzero << " nonzero, " << gl_bad << " disagree)" << (n == 2 ? "; " : "");
    ok = ok && u_checked == 50 && gl_checked == 50 && u_bad == 0 && gl_bad == 0 && u_nonzero > 0 && gl_nonzero > 0;
  }
  return {ok, os.str()};
}

Outcome criterion6() {
  int u_bad = 0, gl_bad = 0, omega_bad = 0, odd_det = 0, nonzero = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const FieldConfig cfg = FieldConfig::make(seed % 4 == 3 ? 5 : 3);
    const std::size_t n = 2 + seed % 2;
    const MatchedPair s = sample_matched_pair(n, cfg, seed % 3 ? kIntegral : SampleOptions{20, 1}, seed + 5000);
    const std::int64_t ou = orbital_u_unit(s.x).value;
    const std::int64_t og = orbital_gl_unit(s.y).value;
    if (og != 0) ++nonzero;
    const MatrixE g = random_unitary(n - 1, cfg, seed + 9000);
    if (orbital_u_unit(HnElement(conjugate_embedded(g, s.x.matrix()))).value != ou) ++u_bad;
    Rng rng(seed + 7000);
    const MatrixF h = random_gl(n - 1, cfg, rng);
    const GlnElement hy(conjugate_embedded(h, s.y.matrix()));
    if (orbital_gl_unit(hy).value != og) ++gl_bad;
    const std::int64_t v = val_det(h);
    if (v % 2 != 0) ++odd_det;
    if (transfer_sign(hy).omega != transfer_sign(s.y).omega * (v % 2 == 0 ? 1 : -1)) ++omega_bad;
  }
  std::ostringstream os;
  os << "100 conjugations per side: u changed=" << u_bad << " gl changed=" << gl_bad << " (nonzero values " << nonzero
     << "); omega cocycle violations=" << omega_bad << " over 100 g (" << odd_det << " with odd val det)";
  return {u_bad == 0 && gl_bad == 0 && omega_bad == 0 && odd_det > 0, os.str()};
}

Outcome criterion7() {
  const auto t0 = Clock::now();
  std::ostringstream os;
  bool ok = true;
  int unit_pass = 0;
  for (std::int64_t p : {3, 5})
    for (int n : {2, 3}) {
      const bool r = unit_selfdual_check(FieldConfig::make(p), n);
      unit_pass += r ? 1 : 0;
      ok = ok && r;
    }
  os << "unit self-dual " << unit_pass << "/4; ";
  const FieldConfig cfg = FieldConfig::make(3);
  for (Side side : {Side::U, Side::GL}) {
    int order4 = 0;
    for (int t = 0; t < 20; ++t) {
      Rng rng = Rng::stream(77, static_cast<std::uint64_t>(t));
      const auto f = FiniteLevelFunction::random(side, cfg, 2, 1, 1, rng);
      const auto w = WeilGenerator::w();
      order4 += weil_apply({w, w, w, w}, f) == f ? 1 : 0;
    }
    Sl2CheckOptions opts;
    opts.side = side;
    const bool sl2 = sl2_relation_check(cfg, 2, 1, 1, 10, 11, opts);
    os << to_string(side) << ": F^4 = id " << order4 << "/20, SL2 relations (10 trials) " << (sl2 ? "hold" : "FAIL")
       << "; ";
    ok = ok && order4 == 20 && sl2;
  }
  Sl2CheckOptions twisted;
  twisted.twist = 1;
  const bool twist_detected = !sl2_relation_check(cfg, 2, 1, 1, 2, 11, twisted);
  const double secs = seconds_since(t0);
  os << "zeta_3 twist detected: " << (twist_detected ? "yes" : "no") << " (" << fmt_seconds(secs) << ", limit 60 s)";
  return {ok && twist_detected && secs < 60, os.str()};
}

Outcome criterion8() {
  int sampled = 0, odd = 0, rep_fail = 0, unmatched = 0, unmatched_wrong = 0;
  for (std::int64_t p : {3, 5}) {
    const FieldConfig cfg = FieldConfig::make(p);
    Rng rng(808 + static_cast<std::uint64_t>(p));
    for (int i = 0; i < 250; ++i) {
      const std::size_t n = 2 + static_cast<std::size_t>(i % 2);
      const HnElement x = sample_hermitian(n, cfg, i % 2 ? kIntegral : SampleOptions{50, 1}, rng);
      ++sampled;
      const InvariantPoint a = invariants_of(x);
      if (val_det(hankel_of(a)) % 2 != 0) ++odd;
      try {
        const HnElement rep = u_representative(a);
        if (!is_rss(x) || !is_hermitian(rep.matrix()) || !same_point(invariants_of(rep), a)) ++rep_fail;
      } catch (const Error&) {
        ++rep_fail;
      }
    }
    for (int i = 0; i < 50; ++i) {
      const GlnElement y = sample_unmatched_gl(2 + static_cast<std::size_t>(i % 2), cfg, SampleOptions{20, 1}, rng);
      ++unmatched;
      try {
        u_representative(invariants_of(y));
        ++unmatched_wrong;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::NoHermitianOrbit) ++unmatched_wrong;
      }
    }
  }
  std::ostringstream os;
  os << sampled << " hermitian samples: odd val det=" << odd << ", representative failures=" << rep_fail << "; "
     << unmatched << " odd points: representative produced anyway=" << unmatched_wrong;
  return {sampled >= 500 && odd == 0 && rep_fail == 0 && unmatched_wrong == 0, os.str()};
}

Outcome criterion9() {
  RunConfig rc;
  rc.n = 3;
  rc.cfg = FieldConfig::make(3);
  rc.samples = 60;
  rc.seed = 2024;
  rc.sampling.height = 20;
  RunConfig threaded = rc;
  threaded.threads = 4;
  const bool verify_same = to_json(run_verify(rc), "").dump() == to_json(run_verify(threaded), "").dump();
  RunConfig lemma = rc;
  lemma.samples = 30;
  RunConfig lemma_threaded = lemma;
  lemma_threaded.threads = 3;
  const bool lemma_same = to_json(run_lemma1(lemma), "").dump() == to_json(run_lemma1(lemma_threaded), "").dump();
  FourierCheckConfig fc;
  fc.cfg = rc.cfg;
  fc.trials = 3;
  const bool fourier_same = to_json(run_fourier_check(fc), "").dump() == to_json(run_fourier_check(fc), "").dump();
  std::ostringstream os;
  os << "verify (1 vs 4 threads) " << (verify_same ? "identical" : "DIFFERENT") << ", lemma1 (1 vs 3 threads) "
     << (lemma_same ? "identical" : "DIFFERENT") << ", fourier-check " << (fourier_same ? "identical" : "DIFFERENT");
  return {verify_same && lemma_same && fourier_same, os.str()};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {1, "fundamental lemma n=2", criterion1},
      {2, "fundamental lemma n=3", criterion2},
      {3, "vanishing off the hermitian image", criterion3},
      {4, "lemma 1 reduction", criterion4},
      {5, "oracle equivalence", criterion5},
      {6, "conjugation invariance and omega cocycle", criterion6},
      {7, "Fourier and Weil identities", criterion7},
      {8, "hermitian existence criterion", criterion8},
      {9, "determinism", criterion9},
  };
  bool all = true;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    all = all && o.pass;
    std::cout << "criterion " << c.id << " [" << (o.pass ? "PASS" : "FAIL") << "] " << c.name << ": " << o.detail
              << std::endl;
  }
  return all ? 0 : 1;
}
