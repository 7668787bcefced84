#include "fllab/orbital.hpp"

#include <algorithm>

namespace fllab {

std::string_view to_string(Side side) { return side == Side::U ? "u" : "gl"; }

Side parse_side(std::string_view text) {
  if (text == "u") return Side::U;
  if (text == "gl") return Side::GL;
  fail(ErrorKind::Parse, "side must be 'u' or 'gl', got '" + std::string(text) + "'");
}

namespace {

template <class S>
bool charpoly_integral(const Matrix<S>& m) {
  const auto poly = charpoly(m);
  return std::all_of(poly.begin(), poly.end(), [](const S& c) { return c.is_integral(); });
}

OrbitalResult scalar_case(const PAdic& entry, Side side) {
  OrbitalResult r;
  r.side = side;
  r.value = entry.is_integral() ? 1 : 0;
  r.lattice_count = r.value;
  return r;
}

MatrixF krylov_rows(const GlnElement& y) {
  const Blocks<PAdic>& bl = y.blocks();
  const std::size_t m = bl.b.size();
  MatrixF r = MatrixF::zeros(m, m, y.field());
  std::vector<PAdic> row = bl.c;
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t j = 0; j < m; ++j) r(k, j) = row[j];
    row = bl.corner.transpose().apply(row);
  }
  return r;
}

}  // namespace

OrbitalResult orbital_u_unit(const HnElement& x, const EnumOptions& opts) {
  if (x.n() == 1) return scalar_case(x.matrix()(0, 0).re(), Side::U);
  if (!is_rss(x)) fail(ErrorKind::NotRss, "not relatively regular semi-simple");
  const Blocks<Quad>& bl = x.blocks();
  OrbitalResult r;
  r.side = Side::U;
  if (!bl.lambda.re().is_integral() || !charpoly_integral(bl.corner)) return r;
  const HermitianLattice lmin = module_closure(bl.corner, bl.b);
  for (const HermitianLattice& l : enumerate_selfdual_stable(lmin, bl.corner, opts))
    r.contributions.push_back(Contribution{l.to_string(), 1});
  r.lattice_count = static_cast<std::int64_t>(r.contributions.size());
  r.value = r.lattice_count;
  return r;
}

OrbitalResult orbital_gl_unit(const GlnElement& y, const EnumOptions& opts) {
  if (y.n() == 1) return scalar_case(y.matrix()(0, 0), Side::GL);
  if (!is_rss(y)) fail(ErrorKind::NotRss, "not relatively regular semi-simple");
  const Blocks<PAdic>& bl = y.blocks();
  OrbitalResult r;
  r.side = Side::GL;
  r.omega = transfer_sign(y).omega;
  if (!bl.lambda.is_integral() || !charpoly_integral(bl.corner)) return r;
  const Lattice lmin = module_closure(bl.corner, bl.b);
  // {v : c Y'^k v integral, k < m}; Y'-stable once the charpoly is integral.
  const Lattice lmax = Lattice::from_basis(inverse(krylov_rows(y)));
  if (!lmax.contains(lmin)) return r;
  std::int64_t sum = 0;
  for (const Lattice& l : enumerate_stable_between(lmin, lmax, bl.corner, opts)) {
    const int s = index_sign(l);
    r.contributions.push_back(Contribution{l.to_string(), s});
    sum += s;
  }
  r.lattice_count = static_cast<std::int64_t>(r.contributions.size());
  r.value = r.omega * sum;
  return r;
}

// ---------------------------------------------------------------------------
// Oracle: a direct search over canonical coset representatives.

namespace {

template <class S>
std::vector<S> residues_between(std::int64_t lo, std::int64_t hi, const FieldConfig& cfg) {
  std::vector<S> out;
  if (hi <= lo) {
    out.push_back(S::zero(cfg));
    return out;
  }
  const std::int64_t count = pow_p(cfg.p, hi - lo).get_si();
  const PAdic scale = PAdic::p_power(lo, cfg);
  for (std::int64_t j = 0; j < count; ++j) {
    if constexpr (std::is_same_v<S, PAdic>) {
      out.push_back(PAdic::from_int(j, cfg) * scale);
    } else {
      for (std::int64_t k = 0; k < count; ++k)
        out.push_back(Quad(PAdic::from_int(j, cfg) * scale, PAdic::from_int(k, cfg) * scale));
    }
  }
  return out;
}

// Calls visit(B) for every lower triangular B with diagonal p^{k_i},
// k_i in [lo, hi], and entry (r, j) running over p^lo O / p^{k_r} O.
template <class S, class Visit, class Admit>
void for_each_basis(std::size_t m, std::int64_t lo, std::int64_t hi, const FieldConfig& cfg, Admit admit_pivots,
                    Visit visit) {
  std::vector<std::int64_t> k(m, lo);
  while (true) {
    if (admit_pivots(k)) {
      std::vector<std::pair<std::size_t, std::size_t>> slots;
      for (std::size_t j = 0; j < m; ++j)
        for (std::size_t r = j + 1; r < m; ++r) slots.emplace_back(r, j);
      std::vector<std::vector<S>> choices;
      for (const auto& [r, j] : slots) choices.push_back(residues_between<S>(lo, k[r], cfg));
      std::vector<std::size_t> idx(slots.size(), 0);
      while (true) {
        Matrix<S> b = Matrix<S>::zeros(m, m, cfg);
        for (std::size_t i = 0; i < m; ++i) b(i, i) = lift_scalar<S>(PAdic::p_power(k[i], cfg));
        for (std::size_t s = 0; s < slots.size(); ++s) b(slots[s].first, slots[s].second) = choices[s][idx[s]];
        visit(b);
        std::size_t pos = 0;
        while (pos < idx.size() && ++idx[pos] == choices[pos].size()) idx[pos++] = 0;
        if (pos == idx.size()) break;
      }
    }
    std::size_t pos = 0;
    while (pos < m && ++k[pos] > hi) k[pos++] = lo;
    if (pos == m) break;
  }
}

template <class S>
std::pair<std::int64_t, std::int64_t> oracle_bounds(const Matrix<S>& lmin_basis, const Matrix<S>& upper_basis,
                                                    std::size_t m, const OracleOptions& opts) {
  if (m > opts.max_rank) fail(ErrorKind::OracleTooLarge, "oracle supports rank <= " + std::to_string(opts.max_rank));
  const std::int64_t lo = min_valuation(upper_basis);
  const std::int64_t hi = -min_valuation(inverse(lmin_basis));
  if (hi - lo > opts.max_span)
    fail(ErrorKind::OracleTooLarge, "oracle search span " + std::to_string(hi - lo) + " exceeds " +
                                        std::to_string(opts.max_span));
  return {lo, hi};
}

template <class S>
Matrix<S> conjugate_by_basis(const Matrix<S>& b, const Matrix<S>& x) {
  // diag(B^{-1}, 1) X diag(B, 1) = g X g^{-1} for the coset g = B^{-1}.
  return conjugate_embedded(inverse(b), x);
}

}  // namespace

std::int64_t orbital_oracle(const GlnElement& y, const OracleOptions& opts) {
  if (y.n() == 1) return y.matrix()(0, 0).is_integral() ? 1 : 0;
  if (!is_rss(y)) fail(ErrorKind::NotRss, "not relatively regular semi-simple");
  const Blocks<PAdic>& bl = y.blocks();
  const std::size_t m = bl.b.size();
  std::vector<std::vector<PAdic>> gens{bl.b};
  for (std::size_t k = 1; k < m; ++k) gens.push_back(bl.corner.apply(gens.back()));
  MatrixF lmin = MatrixF::zeros(m, m, y.field());
  for (std::size_t j = 0; j < m; ++j) lmin.set_col(j, gens[j]);
  const auto [lo, hi] = oracle_bounds(lmin, inverse(krylov_rows(y)), m, opts);
  std::int64_t total = 0;
  for_each_basis<PAdic>(
      m, lo, hi, y.field(), [](const std::vector<std::int64_t>&) { return true; },
      [&](const MatrixF& b) {
        const MatrixF conj = conjugate_by_basis(b, y.matrix());
        if (is_integral(conj)) total += transfer_sign(GlnElement(conj)).omega;
      });
  return total;
}

std::int64_t orbital_oracle(const HnElement& x, const OracleOptions& opts) {
  if (x.n() == 1) return x.matrix()(0, 0).re().is_integral() ? 1 : 0;
  if (!is_rss(x)) fail(ErrorKind::NotRss, "not relatively regular semi-simple");
  const Blocks<Quad>& bl = x.blocks();
  const std::size_t m = bl.b.size();
  std::vector<std::vector<Quad>> gens{bl.b};
  for (std::size_t k = 1; k < m; ++k) gens.push_back(bl.corner.apply(gens.back()));
  MatrixE lmin = MatrixE::zeros(m, m, x.field());
  for (std::size_t j = 0; j < m; ++j) lmin.set_col(j, gens[j]);
  // A self-dual lattice containing Lmin lies inside its hermitian dual.
  const MatrixE upper = inverse(lmin).adjoint();
  const auto [lo, hi] = oracle_bounds(lmin, upper, m, opts);
  std::int64_t total = 0;
  for_each_basis<Quad>(
      m, lo, hi, x.field(),
      [](const std::vector<std::int64_t>& k) {
        std::int64_t s = 0;
        for (std::int64_t v : k) s += v;
        return s == 0;
      },
      [&](const MatrixE& b) {
        const MatrixE g = b.adjoint() * b;
        if (!is_integral(g) || val_det(g) != 0) return;
        if (is_integral(conjugate_by_basis(b, x.matrix()))) ++total;
      });
  return total;
}

FlComparison fl_compare(const InvariantPoint& a, const EnumOptions& opts) {
  FlComparison out;
  out.o_gl = orbital_gl_unit(gl_representative(a), opts).value;
  out.hermitian_exists = hermitian_orbit_exists(a);
  if (out.hermitian_exists) out.o_u = orbital_u_unit(u_representative(a), opts).value;
  out.equal = out.o_u == out.o_gl;
  return out;
}

FlComparison fl_compare(const HnElement& x, const GlnElement& y, const EnumOptions& opts) {
  if (!matches(x, y)) throw std::invalid_argument("fl_compare: elements do not match");
  FlComparison out;
  out.hermitian_exists = true;
  out.o_u = orbital_u_unit(x, opts).value;
  out.o_gl = orbital_gl_unit(y, opts).value;
  out.equal = out.o_u == out.o_gl;
  return out;
}

// ---------------------------------------------------------------------------
// Lemma 1 normal forms.

namespace {

template <class S>
std::size_t min_valuation_index(const std::vector<S>& v) {
  std::size_t best = v.size();
  std::int64_t best_val = kInfVal;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i].is_zero()) continue;
    const std::int64_t val = v[i].valuation();
    if (best == v.size() || val < best_val) {
      best = i;
      best_val = val;
    }
  }
  if (best == v.size()) fail(ErrorKind::NormalFormFailure, "vector is zero at working precision");
  return best;
}

template <class S>
void check_normal_form(const Blocks<S>& bl, const S& b_last, const S& c_last) {
  const std::size_t m = bl.b.size();
  const FieldConfig& cfg = b_last.field();
  for (std::size_t i = 0; i < m; ++i) {
    const S want_b = i + 1 == m ? b_last : S::zero(cfg);
    const S want_c = i + 1 == m ? c_last : S::zero(cfg);
    if (!agree(bl.b[i], want_b, 4) || !agree(bl.c[i], want_c, 4))
      fail(ErrorKind::NormalFormFailure, "b could not be moved to the last basis vector");
  }
}

}  // namespace

HnElement lemma1_normal_form(const HnElement& x) {
  if (x.n() < 2) throw std::invalid_argument("lemma1 normal form needs n >= 2");
  const FieldConfig& cfg = x.field();
  const std::size_t m = x.n() - 1;
  const PAdic mu = block_q(x);
  const Quad nu = solve_norm_equation(mu);
  std::vector<Quad> w = x.blocks().b;
  const Quad nu_inv = nu.inverse();
  for (Quad& wi : w) wi = wi * nu_inv;

  // Orthonormal completion of w: project the other standard vectors away
  // from w, then orthonormalize them with a hermitian splitting.
  const std::size_t drop = min_valuation_index(w);
  MatrixE u = MatrixE::zeros(m, m, cfg);
  if (m > 1) {
    MatrixE v = MatrixE::zeros(m, m - 1, cfg);
    std::size_t col = 0;
    for (std::size_t j = 0; j < m; ++j) {
      if (j == drop) continue;
      // e_j - w h(w, e_j), h(w, e_j) = sigma(w_j).
      for (std::size_t i = 0; i < m; ++i) v(i, col) = (i == j ? Quad::one(cfg) : Quad::zero(cfg)) - w[i] * w[j].sigma();
      ++col;
    }
    const MatrixE a = hermitian_split(v.adjoint() * v);
    const MatrixE vn = v * inverse(a);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j + 1 < m; ++j) u(i, j) = vn(i, j);
  }
  u.set_col(m - 1, w);
  // g = adjoint(U) = U^{-1} sends w to e_{n-1}.
  HnElement out(conjugate_embedded(u.adjoint(), x.matrix()));
  check_normal_form(out.blocks(), nu, nu.sigma());
  return out;
}

GlnElement lemma1_normal_form(const GlnElement& y) {
  if (y.n() < 2) throw std::invalid_argument("lemma1 normal form needs n >= 2");
  const FieldConfig& cfg = y.field();
  const std::size_t m = y.n() - 1;
  const Blocks<PAdic>& bl = y.blocks();
  const PAdic mu = block_q(y);
  if (mu.is_zero()) fail(ErrorKind::NormalFormFailure, "q vanishes");
  const std::size_t pivot = min_valuation_index(bl.c);
  // g^{-1} = [basis of ker c | b / mu].
  MatrixF ginv = MatrixF::zeros(m, m, cfg);
  std::size_t col = 0;
  for (std::size_t j = 0; j < m; ++j) {
    if (j == pivot) continue;
    ginv(j, col) = PAdic::one(cfg);
    ginv(pivot, col) = -(bl.c[j] / bl.c[pivot]);
    ++col;
  }
  const PAdic mu_inv = mu.inverse();
  for (std::size_t i = 0; i < m; ++i) ginv(i, m - 1) = bl.b[i] * mu_inv;
  GlnElement out(conjugate_embedded(inverse(ginv), y.matrix()));
  check_normal_form(out.blocks(), mu, PAdic::one(cfg));
  return out;
}

Lemma1Result lemma1_check(const HnElement& x, const EnumOptions& opts) {
  if (x.n() < 2) throw std::invalid_argument("lemma1_check needs n >= 2");
  const PAdic q = block_q(x);
  if (q.is_zero() || q.valuation() != 0) throw std::invalid_argument("lemma1_check needs q(X) to be a unit");
  Lemma1Result r;
  const HnElement xn = lemma1_normal_form(x);
  const GlnElement yn = lemma1_normal_form(gl_representative(invariants_of(x)));
  r.lambda_integral = xn.blocks().lambda.re().is_integral();
  if (!agree(xn.blocks().lambda.re(), yn.blocks().lambda))
    fail(ErrorKind::NormalFormFailure, "normal forms disagree on lambda");
  const int indicator = r.lambda_integral ? 1 : 0;

  r.o_u = orbital_u_unit(x, opts).value;
  r.o_u_reduced = orbital_u_unit(HnElement(xn.blocks().corner), opts).value;
  r.u_holds = r.o_u == indicator * r.o_u_reduced;

  const GlnElement y = gl_representative(invariants_of(x));
  r.o_gl = orbital_gl_unit(y, opts).value;
  r.o_gl_reduced = orbital_gl_unit(GlnElement(yn.blocks().corner), opts).value;
  r.gl_holds = r.o_gl == indicator * r.o_gl_reduced;
  return r;
}

}  // namespace fllab
