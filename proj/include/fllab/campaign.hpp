#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fllab/io.hpp"
#include "fllab/orbital.hpp"

namespace fllab {

inline constexpr const char* kToolVersion = "0.1.0";

struct RunConfig {
  std::size_t n = 2;
  FieldConfig cfg;
  std::size_t samples = 100;
  std::uint64_t seed = 0;
  SampleOptions sampling;
  EnumOptions enumeration;
  /// Share of samples drawn from the non-hermitian locus, in thousandths.
  std::int64_t unmatched_permille = 200;
  unsigned threads = 1;
  bool timings = false;

  /// Throws Error(InvalidConfig).
  void validate() const;
};

enum class SampleStatus { Ok, ExplosionSkip, PrecisionFailure, Error };
std::string_view to_string(SampleStatus status);

struct SampleRecord {
  std::size_t index = 0;
  bool matched = true;
  SampleStatus status = SampleStatus::Ok;
  std::string message;
  std::optional<InvariantPoint> invariants;
  std::optional<HnElement> x;
  std::optional<GlnElement> y;
  std::int64_t o_u = 0;
  std::int64_t o_gl = 0;
  bool hermitian_exists = false;
  bool equal = false;
  int retries = 0;
  double runtime_ms = 0;
};

struct Summary {
  std::size_t total = 0;
  std::size_t mismatches = 0;
  std::size_t precision_failures = 0;
  std::size_t explosion_skips = 0;
  std::size_t errors = 0;
  std::size_t unmatched = 0;
  std::size_t nonzero = 0;
};

struct VerifyReport {
  RunConfig config;
  std::vector<SampleRecord> samples;
  Summary summary;
};

/// True when sample i is drawn off the hermitian locus: floor((i+1) f) > floor(i f).
bool is_unmatched_index(std::size_t index, std::int64_t permille);

/// One sample of the campaign; depends only on (config, index).
SampleRecord run_verify_sample(const RunConfig& config, std::size_t index);
/// All samples, ordered by index whatever the thread count.
VerifyReport run_verify(const RunConfig& config);
/// 0 ok, 1 mismatch or hard error, 3 precision failures only.
int exit_code(const Summary& summary);

struct Lemma1Record {
  std::size_t index = 0;
  SampleStatus status = SampleStatus::Ok;
  std::string message;
  std::optional<HnElement> x;
  Lemma1Result result;
  int retries = 0;
  double runtime_ms = 0;
};

struct Lemma1Report {
  RunConfig config;
  std::vector<Lemma1Record> samples;
  std::size_t failures = 0;
  std::size_t precision_failures = 0;
  std::size_t explosion_skips = 0;
  std::size_t errors = 0;
};

/// Samples hermitian X with q(X) a unit and runs lemma1_check on each.
Lemma1Report run_lemma1(const RunConfig& config);
int exit_code(const Lemma1Report& report);

struct FourierCheckConfig {
  FieldConfig cfg;
  int n = 2;
  std::int64_t level = 1;
  int trials = 10;
  std::uint64_t seed = 0;
};

struct NamedCheck {
  std::string name;
  bool passed = false;
};

struct FourierCheckReport {
  FourierCheckConfig config;
  std::vector<NamedCheck> checks;
  bool passed() const;
};

/// unit_selfdual_check, sl2_relation_check per side and F^4 = id on `trials` functions per side.
FourierCheckReport run_fourier_check(const FourierCheckConfig& config);

/// Reports as JSON; runtime_ms appears only when config.timings is set.
Json to_json(const VerifyReport& report, const std::string& timestamp);
Json to_json(const Lemma1Report& report, const std::string& timestamp);
Json to_json(const FourierCheckReport& report, const std::string& timestamp);
/// One row per sample: index,kind,status,o_u,o_gl,hermitian_exists,equal,retries,charpoly,moments.
std::string to_csv(const VerifyReport& report);

/// Orbital integral of one matrix: side, value, lattice_count, omega (gl), oracle fields when asked.
/// Throws NotRss.
Json orbit_report(const MatrixInput& input, bool oracle);
/// p, u, invariants, q, rss and hermitian_exists (null when not rss).
Json invariants_report(const MatrixInput& input);
/// Matrix JSON of the canonical representative on `side`; throws NoHermitianOrbit or NormalFormFailure.
Json represent_report(const InvariantPoint& a, Side side);

/// Current UTC time, ISO 8601.
std::string utc_timestamp();

}  // namespace fllab
