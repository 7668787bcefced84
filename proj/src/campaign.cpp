#include "fllab/campaign.hpp"

#include <atomic>
#include <chrono>
#include <ctime>
#include <functional>
#include <sstream>
#include <thread>

#include "fllab/errors.hpp"
#include "fllab/weil.hpp"

namespace fllab {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::uint64_t sample_seed(std::uint64_t seed, std::size_t index) { return Rng::stream(seed, index).next(); }

/// Runs body(cfg) at the configured precision, then once more at twice the
/// precision if digits ran out. Returns the final status.
SampleStatus with_retry(const FieldConfig& base, int& retries, std::string& message,
                        const std::function<void(const FieldConfig&)>& body) {
  for (int attempt = 0; attempt < 2; ++attempt) {
    FieldConfig cfg = base;
    if (attempt == 1) cfg.precision = base.precision * 2;
    try {
      body(cfg);
      return SampleStatus::Ok;
    } catch (const Error& e) {
      message = e.what();
      if (e.kind() == ErrorKind::PrecisionExhausted) {
        if (attempt == 0) {
          retries = 1;
          continue;
        }
        return SampleStatus::PrecisionFailure;
      }
      if (e.kind() == ErrorKind::ExplosionGuard) return SampleStatus::ExplosionSkip;
      return SampleStatus::Error;
    } catch (const std::exception& e) {
      message = e.what();
      return SampleStatus::Error;
    }
  }
  return SampleStatus::PrecisionFailure;
}

template <class Record, class Fn>
std::vector<Record> run_indexed(std::size_t count, unsigned threads, Fn fn) {
  std::vector<Record> out(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) out[i] = fn(i);
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
  if (workers <= 1) {
    worker();
    return out;
  }
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < workers; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return out;
}

Json meta_json(const char* command, const RunConfig& c, const std::string& timestamp) {
  Json m;
  m["tool"] = "fl-lab";
  m["version"] = kToolVersion;
  m["command"] = command;
  m["p"] = c.cfg.p;
  m["u"] = c.cfg.u;
  m["n"] = c.n;
  m["seed"] = c.seed;
  m["samples"] = c.samples;
  m["height"] = c.sampling.height;
  m["max_denominator_exp"] = c.sampling.max_denominator_exp;
  m["precision"] = c.cfg.precision;
  m["max_log_index"] = c.enumeration.max_log_index;
  m["timestamp"] = timestamp;
  return m;
}

std::string join_literals(const std::vector<PAdic>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? ";" : "") + xs[i].to_literal();
  return out;
}

}  // namespace

void RunConfig::validate() const {
  cfg.validate();
  if (n < 1 || n > 6) fail(ErrorKind::InvalidConfig, "n must be between 1 and 6");
  if (samples < 1) fail(ErrorKind::InvalidConfig, "samples must be positive");
  if (sampling.height < 1) fail(ErrorKind::InvalidConfig, "height must be positive");
  if (sampling.max_denominator_exp < 0) fail(ErrorKind::InvalidConfig, "max denominator exponent must be >= 0");
  if (enumeration.max_log_index < 1) fail(ErrorKind::InvalidConfig, "explosion bound must be positive");
  if (unmatched_permille < 0 || unmatched_permille > 1000)
    fail(ErrorKind::InvalidConfig, "unmatched fraction must lie in [0, 1]");
}

std::string_view to_string(SampleStatus status) {
  switch (status) {
    case SampleStatus::Ok: return "ok";
    case SampleStatus::ExplosionSkip: return "explosion_skip";
    case SampleStatus::PrecisionFailure: return "precision_failure";
    case SampleStatus::Error: return "error";
  }
  return "error";
}

bool is_unmatched_index(std::size_t index, std::int64_t permille) {
  const auto i = static_cast<std::int64_t>(index);
  return ((i + 1) * permille) / 1000 > (i * permille) / 1000;
}

SampleRecord run_verify_sample(const RunConfig& config, std::size_t index) {
  const auto start = Clock::now();
  SampleRecord r;
  r.index = index;
  r.matched = config.n < 2 || !is_unmatched_index(index, config.unmatched_permille);
  const std::uint64_t seed = sample_seed(config.seed, index);
  r.status = with_retry(config.cfg, r.retries, r.message, [&](const FieldConfig& cfg) {
    if (r.matched) {
      const MatchedPair mp = sample_matched_pair(config.n, cfg, config.sampling, seed);
      r.invariants = mp.a;
      r.x = mp.x;
      r.y = mp.y;
      const FlComparison c = fl_compare(mp.x, mp.y, config.enumeration);
      r.o_u = c.o_u;
      r.o_gl = c.o_gl;
      r.hermitian_exists = c.hermitian_exists;
      r.equal = c.equal;
    } else {
      Rng rng(seed);
      const GlnElement y = sample_unmatched_gl(config.n, cfg, config.sampling, rng);
      r.y = y;
      r.invariants = invariants_of(y);
      r.hermitian_exists = hermitian_orbit_exists(*r.invariants);
      r.o_u = 0;
      r.o_gl = orbital_gl_unit(y, config.enumeration).value;
      r.equal = !r.hermitian_exists && r.o_gl == 0;
    }
  });
  if (r.status == SampleStatus::Ok) r.message.clear();
  r.runtime_ms = elapsed_ms(start);
  return r;
}

VerifyReport run_verify(const RunConfig& config) {
  config.validate();
  VerifyReport rep;
  rep.config = config;
  rep.samples = run_indexed<SampleRecord>(config.samples, config.threads,
                                          [&](std::size_t i) { return run_verify_sample(config, i); });
  Summary& s = rep.summary;
  s.total = rep.samples.size();
  for (const auto& r : rep.samples) {
    if (!r.matched) ++s.unmatched;
    switch (r.status) {
      case SampleStatus::Ok:
        if (!r.equal) ++s.mismatches;
        if (r.o_gl != 0) ++s.nonzero;
        break;
      case SampleStatus::ExplosionSkip: ++s.explosion_skips; break;
      case SampleStatus::PrecisionFailure: ++s.precision_failures; break;
      case SampleStatus::Error: ++s.errors; break;
    }
  }
  return rep;
}

int exit_code(const Summary& s) {
  if (s.mismatches > 0 || s.errors > 0) return 1;
  if (s.precision_failures > 0) return 3;
  return 0;
}

Lemma1Report run_lemma1(const RunConfig& config) {
  config.validate();
  if (config.n < 2) fail(ErrorKind::InvalidConfig, "lemma1 needs n >= 2");
  Lemma1Report rep;
  rep.config = config;
  rep.samples = run_indexed<Lemma1Record>(config.samples, config.threads, [&](std::size_t index) {
    const auto start = Clock::now();
    Lemma1Record r;
    r.index = index;
    const std::uint64_t seed = sample_seed(config.seed, index);
    r.status = with_retry(config.cfg, r.retries, r.message, [&](const FieldConfig& cfg) {
      Rng rng(seed);
      for (int attempt = 0; attempt < 1000; ++attempt) {
        HnElement x = sample_hermitian(config.n, cfg, config.sampling, rng);
        if (block_q(x).valuation() == 0) {
          r.x = x;
          break;
        }
      }
      if (!r.x) fail(ErrorKind::SamplingExhausted, "no unit-q sample in 1000 draws");
      r.result = lemma1_check(*r.x, config.enumeration);
    });
    if (r.status == SampleStatus::Ok) r.message.clear();
    r.runtime_ms = elapsed_ms(start);
    return r;
  });
  for (const auto& r : rep.samples) {
    switch (r.status) {
      case SampleStatus::Ok:
        if (!r.result.holds()) ++rep.failures;
        break;
      case SampleStatus::ExplosionSkip: ++rep.explosion_skips; break;
      case SampleStatus::PrecisionFailure: ++rep.precision_failures; break;
      case SampleStatus::Error: ++rep.errors; break;
    }
  }
  return rep;
}

int exit_code(const Lemma1Report& rep) {
  if (rep.failures > 0 || rep.errors > 0) return 1;
  if (rep.precision_failures > 0) return 3;
  return 0;
}

bool FourierCheckReport::passed() const {
  for (const auto& c : checks)
    if (!c.passed) return false;
  return !checks.empty();
}

FourierCheckReport run_fourier_check(const FourierCheckConfig& config) {
  config.cfg.validate();
  if (config.n < 1) fail(ErrorKind::InvalidConfig, "n must be positive");
  if (config.level < 0) fail(ErrorKind::InvalidConfig, "level must be nonnegative");
  if (config.trials < 1) fail(ErrorKind::InvalidConfig, "trials must be positive");
  FourierCheckReport rep;
  rep.config = config;
  rep.checks.push_back({"unit_selfdual", unit_selfdual_check(config.cfg, config.n)});
  for (Side side : {Side::U, Side::GL}) {
    Sl2CheckOptions opts;
    opts.side = side;
    rep.checks.push_back({"sl2_relations_" + std::string(to_string(side)),
                          sl2_relation_check(config.cfg, config.n, config.level, config.level, config.trials,
                                             config.seed, opts)});
    bool order4 = true;
    for (int t = 0; t < config.trials; ++t) {
      Rng rng = Rng::stream(config.seed ^ 0xf4f4f4f4ULL, static_cast<std::uint64_t>(t) * 2 + (side == Side::U ? 0 : 1));
      const auto f = FiniteLevelFunction::random(side, config.cfg, config.n, config.level, config.level, rng);
      const auto w = WeilGenerator::w();
      order4 = order4 && weil_apply({w, w, w, w}, f) == f;
    }
    rep.checks.push_back({"fourier_order_4_" + std::string(to_string(side)), order4});
  }
  return rep;
}

Json to_json(const VerifyReport& rep, const std::string& timestamp) {
  Json doc;
  doc["meta"] = meta_json("verify", rep.config, timestamp);
  doc["meta"]["unmatched_fraction"] = static_cast<double>(rep.config.unmatched_permille) / 1000.0;
  Json samples = Json::array();
  for (const auto& r : rep.samples) {
    Json s;
    s["index"] = r.index;
    s["kind"] = r.matched ? "matched" : "unmatched";
    s["status"] = to_string(r.status);
    if (!r.message.empty()) s["message"] = r.message;
    if (r.invariants) s["invariants"] = invariants_json(*r.invariants);
    if (r.x) s["X"] = matrix_json(*r.x);
    if (r.y) s["Y"] = matrix_json(*r.y);
    s["o_u"] = r.o_u;
    s["o_gl"] = r.o_gl;
    s["hermitian_exists"] = r.hermitian_exists;
    s["equal"] = r.equal;
    s["retries"] = r.retries;
    if (rep.config.timings) s["runtime_ms"] = r.runtime_ms;
    samples.push_back(std::move(s));
  }
  doc["samples"] = std::move(samples);
  const Summary& su = rep.summary;
  doc["summary"] = {{"total", su.total},
                    {"mismatches", su.mismatches},
                    {"precision_failures", su.precision_failures},
                    {"explosion_skips", su.explosion_skips},
                    {"errors", su.errors},
                    {"unmatched", su.unmatched},
                    {"nonzero", su.nonzero}};
  return doc;
}

Json to_json(const Lemma1Report& rep, const std::string& timestamp) {
  Json doc;
  doc["meta"] = meta_json("lemma1", rep.config, timestamp);
  Json samples = Json::array();
  for (const auto& r : rep.samples) {
    Json s;
    s["index"] = r.index;
    s["status"] = to_string(r.status);
    if (!r.message.empty()) s["message"] = r.message;
    if (r.x) s["X"] = matrix_json(*r.x);
    s["lambda_integral"] = r.result.lambda_integral;
    s["o_u"] = r.result.o_u;
    s["o_u_reduced"] = r.result.o_u_reduced;
    s["o_gl"] = r.result.o_gl;
    s["o_gl_reduced"] = r.result.o_gl_reduced;
    s["u_holds"] = r.result.u_holds;
    s["gl_holds"] = r.result.gl_holds;
    s["retries"] = r.retries;
    if (rep.config.timings) s["runtime_ms"] = r.runtime_ms;
    samples.push_back(std::move(s));
  }
  doc["samples"] = std::move(samples);
  doc["summary"] = {{"total", rep.samples.size()},
                    {"failures", rep.failures},
                    {"precision_failures", rep.precision_failures},
                    {"explosion_skips", rep.explosion_skips},
                    {"errors", rep.errors}};
  return doc;
}

Json to_json(const FourierCheckReport& rep, const std::string& timestamp) {
  Json doc;
  doc["meta"] = {{"tool", "fl-lab"},
                 {"version", kToolVersion},
                 {"command", "fourier-check"},
                 {"p", rep.config.cfg.p},
                 {"u", rep.config.cfg.u},
                 {"n", rep.config.n},
                 {"level", rep.config.level},
                 {"trials", rep.config.trials},
                 {"seed", rep.config.seed},
                 {"timestamp", timestamp}};
  Json checks = Json::array();
  for (const auto& c : rep.checks) checks.push_back({{"name", c.name}, {"passed", c.passed}});
  doc["checks"] = std::move(checks);
  doc["summary"] = {{"passed", rep.passed()}};
  return doc;
}

std::string to_csv(const VerifyReport& rep) {
  std::ostringstream os;
  os << "index,kind,status,o_u,o_gl,hermitian_exists,equal,retries,charpoly,moments\n";
  for (const auto& r : rep.samples) {
    os << r.index << ',' << (r.matched ? "matched" : "unmatched") << ',' << to_string(r.status) << ',' << r.o_u
       << ',' << r.o_gl << ',' << (r.hermitian_exists ? "true" : "false") << ',' << (r.equal ? "true" : "false")
       << ',' << r.retries << ',';
    if (r.invariants) os << join_literals(r.invariants->charpoly) << ',' << join_literals(r.invariants->moments);
    else os << ',';
    os << '\n';
  }
  return os.str();
}

Json orbit_report(const MatrixInput& in, bool oracle) {
  Json out;
  out["side"] = to_string(in.side);
  auto fill = [&](const auto& m) {
    if (!is_rss(m)) fail(ErrorKind::NotRss, "moment Hankel determinant vanishes");
    const OrbitalResult r = in.side == Side::U ? orbital_u_unit(*in.x) : orbital_gl_unit(*in.y);
    out["value"] = r.value;
    if (in.side == Side::GL) out["omega"] = r.omega;
    out["lattice_count"] = r.lattice_count;
    if (oracle) {
      const std::int64_t o = orbital_oracle(m);
      out["oracle"] = o;
      out["oracle_agrees"] = o == r.value;
    }
  };
  if (in.x) fill(*in.x);
  else fill(*in.y);
  return out;
}

Json invariants_report(const MatrixInput& in) {
  const InvariantPoint a = in.x ? invariants_of(*in.x) : invariants_of(*in.y);
  Json out;
  out["p"] = in.cfg.p;
  out["u"] = in.cfg.u;
  out.update(invariants_json(a));
  out["q"] = q_of(a).to_literal();
  const bool rss = is_rss(a);
  out["rss"] = rss;
  out["hermitian_exists"] = rss ? Json(hermitian_orbit_exists(a)) : Json(nullptr);
  return out;
}

Json represent_report(const InvariantPoint& a, Side side) {
  if (side == Side::GL) {
    const GlnElement y = gl_representative(a);
    if (!same_point(invariants_of(y), a)) fail(ErrorKind::NormalFormFailure, "representative round trip failed");
    return matrix_json(y);
  }
  const HnElement x = u_representative(a);
  if (!same_point(invariants_of(x), a)) fail(ErrorKind::NormalFormFailure, "representative round trip failed");
  return matrix_json(x);
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace fllab
