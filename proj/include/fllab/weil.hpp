#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fllab/cyclotomic.hpp"
#include "fllab/padic.hpp"
#include "fllab/rng.hpp"
#include "fllab/side.hpp"

namespace fllab {

/// psi(x) = zeta^k, k = p^m x mod p^m, for the unramified character (conductor O_F).
/// Throws ConductorExceeded when val(x) < -m.
CyclotomicValue psi_value(const PAdic& x, const CharacterRing& ring);
/// psi_E = psi o Tr.
CyclotomicValue psi_value(const Quad& x, const CharacterRing& ring);

/// Frozen (X', lambda) coordinates: X' in p^{x_scale} M_{n-1}(O), lambda in p^{lambda_scale} O.
struct SpectatorBox {
  std::int64_t x_scale = 0;
  std::int64_t lambda_scale = 0;
  bool operator==(const SpectatorBox&) const = default;
};

/// A function on p^{-a}M / p^{b}M with M = O_F^{n-1} x O_F^{n-1} (gl: coordinates
/// b_1..b_{n-1}, c_1..c_{n-1}) or M = O_E^{n-1} (u: re b_1, im b_1, ...).
/// A grid point is a digit vector j in [0, p^{a+b})^dim standing for x = p^{-a} j;
/// the table index is sum_k j_k R^k with R = p^{a+b}. Values lie in the
/// character ring of conductor a + b + 2.
class FiniteLevelFunction {
 public:
  FiniteLevelFunction(Side side, const FieldConfig& cfg, int n, std::int64_t a, std::int64_t b);

  /// Indicator of M, on grid (a, b).
  static FiniteLevelFunction unit_box(Side side, const FieldConfig& cfg, int n, std::int64_t a = 0,
                                      std::int64_t b = 0);
  /// Random values (small integers and zeta powers, many zeros).
  static FiniteLevelFunction random(Side side, const FieldConfig& cfg, int n, std::int64_t a, std::int64_t b,
                                    Rng& rng);

  Side side() const { return side_; }
  const FieldConfig& field() const { return cfg_; }
  int n() const { return n_; }
  std::int64_t scale() const { return a_; }
  std::int64_t level() const { return b_; }
  int dim() const { return 2 * (n_ - 1); }
  std::int64_t radix() const { return radix_; }
  const CharacterRing& ring() const { return ring_; }
  const SpectatorBox& spectator() const { return spectator_; }
  void set_spectator(const SpectatorBox& box) { spectator_ = box; }

  std::size_t size() const { return values_.size(); }
  const std::vector<CyclotomicValue>& values() const { return values_; }
  const CyclotomicValue& value(std::size_t index) const { return values_.at(index); }
  void set_value(std::size_t index, const CyclotomicValue& v);

  std::vector<std::int64_t> digits(std::size_t index) const;
  std::size_t index(const std::vector<std::int64_t>& digits) const;
  /// Coordinates of the grid point as elements of F (x_k = p^{-a} (j_k + R * shift)).
  std::vector<PAdic> point(std::size_t index, std::int64_t representative_shift = 0) const;
  /// Value at an arbitrary point of F^dim (zero outside the support).
  CyclotomicValue evaluate(const std::vector<PAdic>& x) const;

  /// Same function on a finer grid (a' >= a, b' >= b); values move to the larger ring.
  FiniteLevelFunction regrid(std::int64_t a, std::int64_t b) const;

  bool operator==(const FiniteLevelFunction& other) const;
  bool operator!=(const FiniteLevelFunction& other) const { return !(*this == other); }

 private:
  Side side_;
  FieldConfig cfg_;
  int n_;
  std::int64_t a_;
  std::int64_t b_;
  std::int64_t radix_ = 1;
  CharacterRing ring_;
  SpectatorBox spectator_;
  std::vector<CyclotomicValue> values_;
};

struct FourierOptions {
  /// Evaluate kernels at representatives j + R * shift instead of j.
  std::int64_t representative_shift = 0;
  /// Use psi(p^s x), of conductor p^{-s} O, instead of psi.
  std::int64_t conductor_shift = 0;
  /// Multiply the transform by zeta_p^twist.
  std::int64_t twist = 0;
};

/// gl: (Ff)(b, c) = int f(b', c') psi(c' b + c b'); u: (Ff)(b) = int f(c) psi_E(c^sigma b).
/// Self-dual measure (vol M = 1); the output lives on grid (b, a).
FiniteLevelFunction partial_fourier(const FiniteLevelFunction& f, const FourierOptions& opts = {});

/// q(x) = sum c_i b_i (gl) or sum N(b_i) (u) at a point.
PAdic q_value(Side side, const std::vector<PAdic>& x);
/// f(x) -> psi(t q(x)) f(x). Throws ConductorExceeded when the multiplier is
/// not constant on grid cosets or leaves the conductor.
FiniteLevelFunction multiply_psi_q(const FiniteLevelFunction& f, const PAdic& t,
                                   std::int64_t representative_shift = 0);
/// f(x) -> f(-x).
FiniteLevelFunction reflect(const FiniteLevelFunction& f);
/// Sum of |f(x)|^2 vol(cell), with conj(zeta) = zeta^{-1}.
CyclotomicValue l2_norm_squared(const FiniteLevelFunction& f);

struct WeilGenerator {
  enum class Kind { N, W };
  Kind kind = Kind::W;
  std::optional<PAdic> t;

  static WeilGenerator n(const PAdic& t) { return {Kind::N, t}; }
  static WeilGenerator w() { return {Kind::W, std::nullopt}; }
};

/// Applies the generators in order: the first element of the word acts first.
FiniteLevelFunction weil_apply(const std::vector<WeilGenerator>& word, const FiniteLevelFunction& f,
                               const FourierOptions& opts = {});

struct Sl2CheckOptions {
  std::optional<Side> side;  // both sides when empty
  std::int64_t twist = 0;    // W(w) = zeta_p^twist F
};

/// SL2 relations with scalar exactly 1 on random functions on grid (a, b), a = b:
/// (W(w) W(n(-1)))^3 = W(w)^2, (W(w) W(n(1)))^3 = id and W(w)^4 = id. Here W(w)
/// is F with kernel psi(+B), which realizes (0 1; -1 0) relative to n(t).
bool sl2_relation_check(const FieldConfig& cfg, int n, std::int64_t a, std::int64_t b, int trials,
                        std::uint64_t seed, const Sl2CheckOptions& opts = {});

/// F 1_M = 1_M on both models, checked on grids (0,0), (0,1) and (1,0).
bool unit_selfdual_check(const FieldConfig& cfg, int n, std::int64_t conductor_shift = 0);

}  // namespace fllab
