#include "fllab/lattice.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <limits>
#include <map>
#include <set>

namespace fllab {

template <class S>
LatticeT<S> LatticeT<S>::from_generators(const std::vector<std::vector<S>>& generators, std::size_t dim) {
  HnfResult<S> h = hnf_basis(generators, dim);
  LatticeT l;
  l.basis_ = std::move(h.basis);
  l.full_rank_ = h.full_rank;
  for (std::size_t i = 0; i < dim; ++i) {
    const S& d = l.basis_(i, i);
    l.pivots_.push_back(d.is_exact_zero() ? kInfVal : d.valuation());
  }
  return l;
}

template <class S>
LatticeT<S> LatticeT<S>::from_basis(const Matrix<S>& basis) {
  std::vector<std::vector<S>> cols;
  for (std::size_t j = 0; j < basis.cols(); ++j) cols.push_back(basis.col(j));
  return from_generators(cols, basis.rows());
}

template <class S>
LatticeT<S> LatticeT<S>::standard(std::size_t dim, const FieldConfig& cfg) {
  return from_basis(Matrix<S>::identity(dim, cfg));
}

template <class S>
std::int64_t LatticeT<S>::val_det() const {
  if (!full_rank_) throw std::logic_error("val_det of a lattice that is not of full rank");
  std::int64_t v = 0;
  for (std::int64_t k : pivots_) v += k;
  return v;
}

template <class S>
bool LatticeT<S>::contains(const std::vector<S>& v) const {
  if (v.size() != dim()) throw std::invalid_argument("vector dimension mismatch");
  if (full_rank_) {
    for (const S& x : solve_linear(basis_, v))
      if (!x.is_integral()) return false;
    return true;
  }
  std::vector<std::vector<S>> gens;
  for (std::size_t j = 0; j < dim(); ++j) gens.push_back(basis_.col(j));
  gens.push_back(v);
  return from_generators(gens, dim()) == *this;
}

template <class S>
bool LatticeT<S>::contains(const LatticeT& other) const {
  for (std::size_t j = 0; j < other.dim(); ++j) {
    const std::vector<S> c = other.basis_.col(j);
    if (std::all_of(c.begin(), c.end(), [](const S& x) { return x.is_exact_zero(); })) continue;
    if (!contains(c)) return false;
  }
  return true;
}

template <class S>
bool LatticeT<S>::is_stable(const Matrix<S>& t) const {
  for (std::size_t j = 0; j < dim(); ++j)
    if (!contains(t.apply(basis_.col(j)))) return false;
  return true;
}

template <class S>
LatticeT<S> LatticeT<S>::scaled(std::int64_t k) const {
  return from_basis(lift_scalar<S>(PAdic::p_power(k, field())) * basis_);
}

Lattice dual(const Lattice& l) {
  if (!l.full_rank()) throw std::invalid_argument("dual of a lattice that is not of full rank");
  return Lattice::from_basis(inverse(l.basis()).transpose());
}

HermitianLattice dual(const HermitianLattice& l) {
  if (!l.full_rank()) throw std::invalid_argument("dual of a lattice that is not of full rank");
  return HermitianLattice::from_basis(inverse(l.basis()).adjoint());
}

MatrixE gram(const HermitianLattice& l) { return l.basis().adjoint() * l.basis(); }

bool is_integral_form(const HermitianLattice& l) { return is_integral(gram(l)); }

bool is_self_dual(const HermitianLattice& l) { return l.full_rank() && l.val_det() == 0 && is_integral_form(l); }

int index_sign(const Lattice& l) { return l.val_det() % 2 == 0 ? 1 : -1; }

template <class S>
LatticeT<S> module_closure(const Matrix<S>& t, const std::vector<S>& v) {
  if (std::all_of(v.begin(), v.end(), [](const S& x) { return x.is_zero(); }))
    fail(ErrorKind::ZeroModule, "module generated by the zero vector");
  std::vector<std::vector<S>> gens{v};
  for (std::size_t k = 1; k < v.size(); ++k) gens.push_back(t.apply(gens.back()));
  return LatticeT<S>::from_generators(gens, v.size());
}

// ---------------------------------------------------------------------------
// Enumeration. Lattices between L0 and L1 are handled in coordinates relative
// to the basis of L1, where they become submodules of (O / p^K)^m containing
// the image of L0, with p^K L1 inside L0.

namespace {

struct Res {
  std::int64_t a = 0;
  std::int64_t b = 0;
  auto operator<=>(const Res&) const = default;
};

using Vec = std::vector<Res>;

class ResRing {
 public:
  ResRing(std::int64_t p, std::int64_t u, std::int64_t k, bool quad) : p_(p), k_(k), quad_(quad) {
    pk_.push_back(1);
    for (std::int64_t i = 0; i < k; ++i) {
      if (pk_.back() > std::numeric_limits<std::int64_t>::max() / (4 * p))
        fail(ErrorKind::ExplosionGuard, "quotient exponent too large for the residue engine");
      pk_.push_back(pk_.back() * p);
    }
    mod_ = pk_.back();
    u_ = ((u % mod_) + mod_) % mod_;
  }

  std::int64_t p() const { return p_; }
  std::int64_t k() const { return k_; }
  bool quad() const { return quad_; }
  std::int64_t pk(std::int64_t i) const { return pk_[static_cast<std::size_t>(i)]; }

  std::int64_t norm_int(__int128 x) const {
    __int128 r = x % mod_;
    if (r < 0) r += mod_;
    return static_cast<std::int64_t>(r);
  }

  Res add(const Res& x, const Res& y) const { return {norm_int(x.a + y.a), norm_int(x.b + y.b)}; }
  Res sub(const Res& x, const Res& y) const { return {norm_int(x.a - y.a), norm_int(x.b - y.b)}; }
  Res mul(const Res& x, const Res& y) const {
    const __int128 bb = norm_int(static_cast<__int128>(x.b) * y.b);
    return {norm_int(static_cast<__int128>(x.a) * y.a + static_cast<__int128>(u_) * bb),
            norm_int(static_cast<__int128>(x.a) * y.b + static_cast<__int128>(x.b) * y.a)};
  }
  Res conj(const Res& x) const { return {x.a, norm_int(-static_cast<__int128>(x.b))}; }
  bool zero(const Res& x) const { return x.a == 0 && x.b == 0; }

  std::int64_t val(const Res& x) const { return std::min(val_int(x.a), val_int(x.b)); }

  // x / p^i for val(x) >= i, as a residue mod p^K (a lift of the quotient).
  Res div_p(const Res& x, std::int64_t i) const { return {x.a / pk(i), x.b / pk(i)}; }
  Res reduce(const Res& x, std::int64_t i) const { return {x.a % pk(i), x.b % pk(i)}; }

  Res unit_inverse(const Res& x) const {
    const std::int64_t n = norm_int(static_cast<__int128>(x.a) * x.a -
                                    static_cast<__int128>(u_) * norm_int(static_cast<__int128>(x.b) * x.b));
    const std::int64_t ninv = inv_mod(n);
    const Res c = conj(x);
    return {norm_int(static_cast<__int128>(c.a) * ninv), norm_int(static_cast<__int128>(c.b) * ninv)};
  }

  Res from_padic(const PAdic& x) const { return {x.residue(k_).get_si(), 0}; }
  Res from_quad(const Quad& x) const { return {x.re().residue(k_).get_si(), x.im().residue(k_).get_si()}; }

 private:
  std::int64_t val_int(std::int64_t a) const {
    if (a == 0) return k_;
    std::int64_t v = 0;
    while (a % p_ == 0) {
      a /= p_;
      ++v;
    }
    return v;
  }

  std::int64_t inv_mod(std::int64_t a) const {
    __int128 old_r = a, r = mod_, old_s = 1, s = 0;
    while (r != 0) {
      const __int128 q = old_r / r;
      std::swap(old_r, r);
      r -= q * old_r;
      std::swap(old_s, s);
      s -= q * old_s;
    }
    return norm_int(old_s);
  }

  std::int64_t p_, k_, mod_, u_ = 0;
  bool quad_;
  std::vector<std::int64_t> pk_;
};

/// Canonical relative basis: column j has diagonal p^{k_j} (stored as the
/// zero column when k_j = K), zeros above and reduced entries below.
struct RelBasis {
  std::vector<Vec> cols;
  std::vector<std::int64_t> k;

  std::vector<std::int64_t> key() const {
    std::vector<std::int64_t> out;
    const std::size_t m = cols.size();
    for (std::size_t j = 0; j < m; ++j) {
      out.push_back(k[j]);
      for (std::size_t r = j + 1; r < m; ++r) {
        out.push_back(cols[j][r].a);
        out.push_back(cols[j][r].b);
      }
    }
    return out;
  }
  std::int64_t log_index() const {
    std::int64_t s = 0;
    for (std::int64_t x : k) s += x;
    return s;
  }
};

RelBasis canonical(const ResRing& R, std::vector<Vec> gens, std::size_t m) {
  RelBasis out;
  out.cols.assign(m, Vec(m));
  out.k.assign(m, R.k());
  for (std::size_t r = 0; r < m; ++r) {
    std::size_t best = gens.size();
    std::int64_t best_val = R.k();
    for (std::size_t j = 0; j < gens.size(); ++j) {
      const std::int64_t v = R.val(gens[j][r]);
      if (v < best_val) {
        best_val = v;
        best = j;
      }
    }
    if (best == gens.size()) continue;
    Vec piv = std::move(gens[best]);
    gens.erase(gens.begin() + static_cast<std::ptrdiff_t>(best));
    const Res w = R.unit_inverse(R.div_p(piv[r], best_val));
    for (Res& x : piv) x = R.mul(x, w);
    for (Vec& g : gens) {
      if (R.zero(g[r])) continue;
      const Res f = R.div_p(g[r], best_val);
      for (std::size_t i = r; i < m; ++i) g[i] = R.sub(g[i], R.mul(f, piv[i]));
    }
    out.cols[r] = std::move(piv);
    out.k[r] = best_val;
  }
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t r = j + 1; r < m; ++r) {
      if (out.k[r] == R.k()) continue;
      const Res e = out.cols[j][r];
      const Res rem = R.reduce(e, out.k[r]);
      const Res q = R.div_p(R.sub(e, rem), out.k[r]);
      if (!R.zero(q))
        for (std::size_t i = r; i < m; ++i) out.cols[j][i] = R.sub(out.cols[j][i], R.mul(q, out.cols[r][i]));
      out.cols[j][r] = rem;
    }
  return out;
}

Vec apply(const ResRing& R, const std::vector<Vec>& t, const Vec& v) {
  Vec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) out[i] = R.add(out[i], R.mul(t[i][j], v[j]));
  return out;
}

RelBasis closure(const ResRing& R, const std::vector<Vec>& t, std::vector<Vec> gens, std::size_t m) {
  RelBasis cur = canonical(R, gens, m);
  while (true) {
    std::vector<Vec> next = cur.cols;
    for (const Vec& c : cur.cols) next.push_back(apply(R, t, c));
    RelBasis grown = canonical(R, next, m);
    if (grown.key() == cur.key()) return cur;
    cur = std::move(grown);
  }
}

// Vectors spanning {v : p v in M} / M, one per point of its projective space
// over the residue field.
std::vector<Vec> socle_points(const ResRing& R, const RelBasis& mb) {
  const std::size_t m = mb.cols.size();
  std::vector<Vec> a(m, Vec(m));
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t c = 0; c < m; ++c) a[r][c] = mb.cols[c][r];
  std::vector<Vec> pinv(m, Vec(m));
  for (std::size_t i = 0; i < m; ++i) pinv[i][i] = Res{1, 0};
  std::vector<std::int64_t> e(m, R.k());

  for (std::size_t t = 0; t < m; ++t) {
    std::size_t br = m, bc = m;
    std::int64_t bv = R.k();
    for (std::size_t r = t; r < m; ++r)
      for (std::size_t c = t; c < m; ++c)
        if (R.val(a[r][c]) < bv) {
          bv = R.val(a[r][c]);
          br = r;
          bc = c;
        }
    if (br == m) break;
    std::swap(a[t], a[br]);
    for (auto& row : pinv) std::swap(row[t], row[br]);
    for (auto& row : a) std::swap(row[t], row[bc]);
    const Res w = R.div_p(a[t][t], bv);
    const Res winv = R.unit_inverse(w);
    for (Res& x : a[t]) x = R.mul(x, winv);
    for (auto& row : pinv) row[t] = R.mul(row[t], w);
    for (std::size_t i = t + 1; i < m; ++i) {
      if (R.zero(a[i][t])) continue;
      const Res f = R.div_p(a[i][t], bv);
      for (std::size_t c = t; c < m; ++c) a[i][c] = R.sub(a[i][c], R.mul(f, a[t][c]));
      for (auto& row : pinv) row[t] = R.add(row[t], R.mul(f, row[i]));
    }
    for (std::size_t c = t + 1; c < m; ++c) a[t][c] = Res{};
    e[t] = bv;
  }

  std::vector<Vec> basis;
  for (std::size_t t = 0; t < m; ++t) {
    if (e[t] == 0) continue;
    Vec s(m);
    const Res scale{R.pk(e[t] - 1), 0};
    for (std::size_t i = 0; i < m; ++i) s[i] = R.mul(pinv[i][t], scale);
    basis.push_back(std::move(s));
  }

  std::vector<Res> field;
  for (std::int64_t x = 0; x < R.p(); ++x)
    for (std::int64_t y = 0; y < (R.quad() ? R.p() : 1); ++y) field.push_back(Res{x, y});

  std::vector<Vec> out;
  const std::size_t s = basis.size();
  // Coefficient vectors whose first nonzero entry is 1.
  for (std::size_t lead = 0; lead < s; ++lead) {
    std::vector<std::size_t> idx(s - lead - 1, 0);
    while (true) {
      Vec v = basis[lead];
      for (std::size_t i = 0; i < idx.size(); ++i) {
        const Res& coef = field[idx[i]];
        if (R.zero(coef)) continue;
        const Vec& b = basis[lead + 1 + i];
        for (std::size_t r = 0; r < m; ++r) v[r] = R.add(v[r], R.mul(coef, b[r]));
      }
      out.push_back(std::move(v));
      std::size_t pos = 0;
      while (pos < idx.size() && ++idx[pos] == field.size()) idx[pos++] = 0;
      if (pos == idx.size()) break;
    }
  }
  return out;
}

template <class S>
Res to_res(const ResRing& R, const S& x) {
  if constexpr (std::is_same_v<S, PAdic>)
    return R.from_padic(x);
  else
    return R.from_quad(x);
}

template <class S>
S from_res(const Res& x, const FieldConfig& cfg) {
  if constexpr (std::is_same_v<S, PAdic>)
    return PAdic::from_int(x.a, cfg);
  else
    return Quad(PAdic::from_int(x.a, cfg), PAdic::from_int(x.b, cfg));
}

template <class S>
struct Engine {
  ResRing ring;
  std::vector<Vec> t;
  RelBasis start;
  Matrix<S> b1;
  std::int64_t vdet1 = 0;

  LatticeT<S> absolute(const RelBasis& rb) const {
    const FieldConfig& cfg = b1.field();
    const std::size_t m = rb.cols.size();
    Matrix<S> h = Matrix<S>::zeros(m, m, cfg);
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t r = j + 1; r < m; ++r) h(r, j) = from_res<S>(rb.cols[j][r], cfg);
      h(j, j) = lift_scalar<S>(PAdic::p_power(rb.k[j], cfg));
    }
    return LatticeT<S>::from_basis(b1 * h);
  }

  /// Breadth-first search over minimal over-lattices; `keep` prunes nodes.
  std::vector<RelBasis> search(const std::function<bool(const RelBasis&)>& keep) const {
    const std::size_t m = start.cols.size();
    std::vector<RelBasis> found;
    if (!keep(start)) return found;
    std::set<std::vector<std::int64_t>> seen{start.key()};
    std::deque<RelBasis> queue{start};
    while (!queue.empty()) {
      RelBasis cur = std::move(queue.front());
      queue.pop_front();
      for (const Vec& v : socle_points(ring, cur)) {
        std::vector<Vec> gens = cur.cols;
        gens.push_back(v);
        RelBasis next = closure(ring, t, gens, m);
        if (!seen.insert(next.key()).second) continue;
        if (!keep(next)) continue;
        queue.push_back(next);
      }
      found.push_back(std::move(cur));
    }
    std::sort(found.begin(), found.end(),
              [](const RelBasis& x, const RelBasis& y) { return x.key() < y.key(); });
    return found;
  }
};

template <class S>
Engine<S> make_engine(const LatticeT<S>& l0, const LatticeT<S>& l1, const Matrix<S>& t, const EnumOptions& opts) {
  if (!l0.full_rank() || !l1.full_rank()) throw std::invalid_argument("enumeration needs full-rank bounds");
  const FieldConfig& cfg = l1.field();
  const std::size_t m = l1.dim();
  const std::int64_t f = std::is_same_v<S, Quad> ? 2 : 1;
  const std::int64_t log_index = f * (l0.val_det() - l1.val_det());
  if (log_index < 0) throw std::invalid_argument("lower bound is not contained in upper bound");
  if (log_index > opts.max_log_index)
    fail(ErrorKind::ExplosionGuard, "quotient L1/L0 has order p^" + std::to_string(log_index) +
                                        ", above the bound p^" + std::to_string(opts.max_log_index));
  const Matrix<S> b1inv = inverse(l1.basis());
  const Matrix<S> rel0 = b1inv * l0.basis();
  if (!is_integral(rel0)) throw std::invalid_argument("lower bound is not contained in upper bound");
  const std::int64_t k = std::max<std::int64_t>(0, -min_valuation(inverse(rel0)));
  const Matrix<S> trel = b1inv * t * l1.basis();
  if (!is_integral(trel)) throw std::invalid_argument("upper bound is not stable");

  Engine<S> eng{ResRing(cfg.p, cfg.u, std::max<std::int64_t>(k, 1), std::is_same_v<S, Quad>), {}, {}, l1.basis(),
                l1.val_det()};
  eng.t.assign(m, Vec(m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) eng.t[i][j] = to_res(eng.ring, trel(i, j));
  std::vector<Vec> gens;
  for (std::size_t j = 0; j < m; ++j) {
    Vec c(m);
    for (std::size_t i = 0; i < m; ++i) c[i] = to_res(eng.ring, rel0(i, j));
    gens.push_back(std::move(c));
  }
  eng.start = closure(eng.ring, eng.t, gens, m);
  return eng;
}

}  // namespace

std::vector<Lattice> enumerate_stable_between(const Lattice& l0, const Lattice& l1, const MatrixF& t,
                                              const EnumOptions& opts) {
  const Engine<PAdic> eng = make_engine(l0, l1, t, opts);
  std::vector<Lattice> out;
  for (const RelBasis& rb : eng.search([](const RelBasis&) { return true; })) out.push_back(eng.absolute(rb));
  return out;
}

std::vector<HermitianLattice> enumerate_selfdual_stable(const HermitianLattice& lmin, const MatrixE& t,
                                                        const EnumOptions& opts) {
  if (!lmin.full_rank()) throw std::invalid_argument("enumeration needs a full-rank lower bound");
  if (!is_integral_form(lmin)) return {};
  const HermitianLattice l1 = dual(lmin);
  const Engine<Quad> eng = make_engine(lmin, l1, t, opts);
  const ResRing& R = eng.ring;
  const std::size_t m = lmin.dim();

  // p^K times the Gram matrix of L1 is integral; a relative basis H spans an
  // integral lattice iff adjoint(H) G H = 0 mod p^K.
  const MatrixE g1 = lift_scalar<Quad>(PAdic::p_power(R.k(), l1.field())) * gram(l1);
  std::vector<Vec> g(m, Vec(m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) g[i][j] = R.from_quad(g1(i, j));

  auto integral = [&](const RelBasis& rb) {
    std::vector<Vec> gh(m, Vec(m));
    for (std::size_t j = 0; j < m; ++j) gh[j] = apply(R, g, rb.cols[j]);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        Res acc;
        for (std::size_t r = 0; r < m; ++r) acc = R.add(acc, R.mul(R.conj(rb.cols[i][r]), gh[j][r]));
        if (!R.zero(acc)) return false;
      }
    return true;
  };
  std::vector<HermitianLattice> out;
  for (const RelBasis& rb : eng.search(integral))
    if (eng.vdet1 + rb.log_index() == 0) out.push_back(eng.absolute(rb));
  return out;
}

template class LatticeT<PAdic>;
template class LatticeT<Quad>;
template Lattice module_closure<PAdic>(const MatrixF&, const std::vector<PAdic>&);
template HermitianLattice module_closure<Quad>(const MatrixE&, const std::vector<Quad>&);

}  // namespace fllab
