#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "fllab/campaign.hpp"
#include "fllab/errors.hpp"

using namespace fllab;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitPrecision = 3;

struct FieldFlags {
  std::int64_t p = 3;
  std::optional<std::int64_t> u;
  std::optional<int> precision;
};

void add_field_flags(CLI::App* cmd, FieldFlags& f) {
  cmd->add_option("--p", f.p, "odd prime p");
  cmd->add_option("--u", f.u, "non-residue unit u (E = F(sqrt u)); smallest positive one by default");
  cmd->add_option("--precision", f.precision, "p-adic digits (overrides FLLAB_PRECISION)");
}

int resolve_precision(const std::optional<int>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("FLLAB_PRECISION")) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(env, &used);
      if (used == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    fail(ErrorKind::InvalidConfig, "FLLAB_PRECISION must be an integer");
  }
  return 48;
}

FieldConfig field_config(const FieldFlags& f) {
  FieldConfig cfg = FieldConfig::make(f.p, f.u, resolve_precision(f.precision));
  cfg.validate();
  return cfg;
}

void emit(const Json& doc, const std::string& out) {
  const std::string text = doc.dump(2) + "\n";
  if (out.empty() || out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream os(out);
  if (!os) fail(ErrorKind::InvalidConfig, "cannot write '" + out + "'");
  os << text;
}

int error_exit(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::Parse:
    case ErrorKind::InvalidConfig:
    case ErrorKind::SideError:
      std::cerr << "fl-lab: " << e.what() << "\n";
      return kExitUsage;
    case ErrorKind::PrecisionExhausted:
      std::cerr << "fl-lab: " << e.what() << "\n";
      return kExitPrecision;
    case ErrorKind::NotRss:
      std::cerr << "fl-lab: not relatively regular semi-simple (" << e.what() << ")\n";
      return kExitFailure;
    default:
      std::cerr << "fl-lab: " << e.what() << "\n";
      return kExitFailure;
  }
}

struct CampaignFlags {
  FieldFlags field;
  std::size_t n = 2;
  std::size_t samples = 100;
  std::uint64_t seed = 0;
  std::int64_t height = 50;
  std::int64_t max_den = 1;
  std::int64_t max_log_index = 12;
  double unmatched = 0.2;
  unsigned threads = 1;
  bool timings = false;
  std::string out;
  std::string csv;
};

void add_campaign_flags(CLI::App* cmd, CampaignFlags& c) {
  add_field_flags(cmd, c.field);
  cmd->add_option("--n", c.n, "matrix size n");
  cmd->add_option("--samples", c.samples, "number of samples");
  cmd->add_option("--seed", c.seed, "base seed; sample i uses the stream (seed, i)");
  cmd->add_option("--height", c.height, "numerator bound for sampled entries");
  cmd->add_option("--max-denominator-exp", c.max_den, "sampled entries are m / p^e with e <= this");
  cmd->add_option("--max-log-index", c.max_log_index, "explosion bound: log_p of the largest lattice index");
  cmd->add_option("--threads", c.threads, "worker threads (results do not depend on it)");
  cmd->add_flag("--timings", c.timings, "record runtime_ms per sample");
  cmd->add_option("--out", c.out, "report path (default stdout)");
}

RunConfig run_config(const CampaignFlags& c) {
  RunConfig rc;
  rc.cfg = field_config(c.field);
  rc.n = c.n;
  rc.samples = c.samples;
  rc.seed = c.seed;
  rc.sampling.height = c.height;
  rc.sampling.max_denominator_exp = c.max_den;
  rc.enumeration.max_log_index = c.max_log_index;
  if (c.unmatched < 0 || c.unmatched > 1) fail(ErrorKind::InvalidConfig, "unmatched fraction must lie in [0, 1]");
  rc.unmatched_permille = static_cast<std::int64_t>(c.unmatched * 1000 + 0.5);
  rc.threads = c.threads;
  rc.timings = c.timings;
  rc.validate();
  return rc;
}

int cmd_verify(const CampaignFlags& c) {
  const RunConfig rc = run_config(c);
  const VerifyReport rep = run_verify(rc);
  emit(to_json(rep, utc_timestamp()), c.out);
  if (!c.csv.empty()) {
    std::ofstream os(c.csv);
    if (!os) fail(ErrorKind::InvalidConfig, "cannot write '" + c.csv + "'");
    os << to_csv(rep);
  }
  const Summary& s = rep.summary;
  std::cerr << "verify: total " << s.total << ", mismatches " << s.mismatches << ", unmatched " << s.unmatched
            << ", nonzero " << s.nonzero << ", precision_failures " << s.precision_failures << ", explosion_skips "
            << s.explosion_skips << ", errors " << s.errors << "\n";
  return exit_code(s);
}

int cmd_lemma1(const CampaignFlags& c) {
  const RunConfig rc = run_config(c);
  const Lemma1Report rep = run_lemma1(rc);
  emit(to_json(rep, utc_timestamp()), c.out);
  std::cerr << "lemma1: total " << rep.samples.size() << ", failures " << rep.failures << ", precision_failures "
            << rep.precision_failures << ", explosion_skips " << rep.explosion_skips << ", errors " << rep.errors
            << "\n";
  return exit_code(rep);
}

struct MatrixFlags {
  FieldFlags field;
  std::string input;
  std::string side;
  bool oracle = false;
  std::string out;
};

MatrixInput matrix_input(const MatrixFlags& m) {
  Json doc = read_json(m.input);
  if (!m.side.empty()) doc["side"] = m.side;
  return parse_matrix_json(doc, field_config(m.field));
}

int cmd_orbit(const MatrixFlags& m) {
  emit(orbit_report(matrix_input(m), m.oracle), m.out);
  return kExitOk;
}

int cmd_invariants(const MatrixFlags& m) {
  emit(invariants_report(matrix_input(m)), m.out);
  return kExitOk;
}

int cmd_represent(const MatrixFlags& m) {
  const InvariantPoint a = parse_invariants_json(read_json(m.input), field_config(m.field));
  emit(represent_report(a, parse_side(m.side.empty() ? "gl" : m.side)), m.out);
  return kExitOk;
}

struct FourierFlags {
  FieldFlags field;
  int n = 2;
  std::int64_t level = 1;
  int trials = 10;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_fourier_check(const FourierFlags& f) {
  FourierCheckConfig fc;
  fc.cfg = field_config(f.field);
  fc.n = f.n;
  fc.level = f.level;
  fc.trials = f.trials;
  fc.seed = f.seed;
  const FourierCheckReport rep = run_fourier_check(fc);
  emit(to_json(rep, utc_timestamp()), f.out);
  for (const auto& c : rep.checks) std::cerr << "fourier-check: " << c.name << " " << (c.passed ? "pass" : "FAIL") << "\n";
  return rep.passed() ? kExitOk : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Orbital-integral verification lab for unitary and general linear Lie algebras"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  CampaignFlags verify_flags;
  auto* verify = app.add_subcommand("verify", "compare both orbital integrals on sampled invariant points");
  add_campaign_flags(verify, verify_flags);
  verify->add_option("--unmatched-fraction", verify_flags.unmatched, "share of samples off the hermitian locus");
  verify->add_option("--csv", verify_flags.csv, "also write a CSV summary here");

  CampaignFlags lemma_flags;
  lemma_flags.n = 3;
  auto* lemma = app.add_subcommand("lemma1", "check the reduction to the corner block on unit-q samples");
  add_campaign_flags(lemma, lemma_flags);

  MatrixFlags orbit_flags;
  auto* orbit = app.add_subcommand("orbit", "orbital integral of the unit function at one element");
  add_field_flags(orbit, orbit_flags.field);
  orbit->add_option("--input", orbit_flags.input, "matrix JSON file, '-' for stdin")->required();
  orbit->add_option("--side", orbit_flags.side, "u or gl (overrides the file)");
  orbit->add_flag("--oracle", orbit_flags.oracle, "also run the brute-force oracle");
  orbit->add_option("--out", orbit_flags.out, "output path (default stdout)");

  MatrixFlags inv_flags;
  auto* inv = app.add_subcommand("invariants", "invariant point of a matrix");
  add_field_flags(inv, inv_flags.field);
  inv->add_option("--input", inv_flags.input, "matrix JSON file, '-' for stdin")->required();
  inv->add_option("--side", inv_flags.side, "u or gl (overrides the file)");
  inv->add_option("--out", inv_flags.out, "output path (default stdout)");

  MatrixFlags rep_flags;
  auto* rep = app.add_subcommand("represent", "representative matrix of an invariant point");
  add_field_flags(rep, rep_flags.field);
  rep->add_option("--input", rep_flags.input, "invariants JSON file, '-' for stdin")->required();
  rep->add_option("--side", rep_flags.side, "u or gl")->default_str("gl");
  rep->add_option("--out", rep_flags.out, "output path (default stdout)");

  FourierFlags fourier_flags;
  auto* fourier = app.add_subcommand("fourier-check", "exact partial Fourier and Weil identities");
  add_field_flags(fourier, fourier_flags.field);
  fourier->add_option("--n", fourier_flags.n, "matrix size n");
  fourier->add_option("--level", fourier_flags.level, "grid p^{-level}M / p^{level}M");
  fourier->add_option("--trials", fourier_flags.trials, "random functions per side");
  fourier->add_option("--seed", fourier_flags.seed, "seed");
  fourier->add_option("--out", fourier_flags.out, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*verify) return cmd_verify(verify_flags);
    if (*lemma) return cmd_lemma1(lemma_flags);
    if (*orbit) return cmd_orbit(orbit_flags);
    if (*inv) return cmd_invariants(inv_flags);
    if (*rep) return cmd_represent(rep_flags);
    if (*fourier) return cmd_fourier_check(fourier_flags);
  } catch (const Error& e) {
    return error_exit(e);
  } catch (const std::exception& e) {
    std::cerr << "fl-lab: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}
