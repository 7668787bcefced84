#include "fllab/geometry.hpp"

#include <utility>

namespace fllab {

template <class S>
Blocks<S> split_blocks(const Matrix<S>& x) {
  if (!x.square() || x.rows() == 0) throw std::invalid_argument("split_blocks needs a non-empty square matrix");
  const std::size_t m = x.rows() - 1;
  Blocks<S> out;
  out.lambda = x(m, m);
  if (m == 0) return out;
  out.corner = x.block(0, 0, m, m);
  for (std::size_t i = 0; i < m; ++i) {
    out.b.push_back(x(i, m));
    out.c.push_back(x(m, i));
  }
  return out;
}

template <class S>
Matrix<S> assemble_blocks(const Blocks<S>& blocks) {
  const std::size_t m = blocks.b.size();
  Matrix<S> x = Matrix<S>::zeros(m + 1, m + 1, blocks.lambda.field());
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) x(i, j) = blocks.corner(i, j);
    x(i, m) = blocks.b[i];
    x(m, i) = blocks.c[i];
  }
  x(m, m) = blocks.lambda;
  return x;
}

GlnElement::GlnElement(MatrixF y) : y_(std::move(y)), blocks_(split_blocks(y_)) {}

HnElement::HnElement(MatrixE x) : x_(std::move(x)) {
  if (!is_hermitian(x_)) fail(ErrorKind::SideError, "matrix is not hermitian: " + to_string(x_));
  blocks_ = split_blocks(x_);
}

namespace {

template <class S>
S dot(const std::vector<S>& row, const std::vector<S>& col) {
  S acc = S::zero(row.front().field());
  for (std::size_t i = 0; i < row.size(); ++i) acc += row[i] * col[i];
  return acc;
}

PAdic real_part(const Quad& x, const char* what) {
  if (!x.im().is_zero()) fail(ErrorKind::SideError, std::string(what) + " is not in F: " + x.to_literal());
  return x.re();
}

template <class S>
InvariantPoint invariants_generic(const Matrix<S>& x, std::vector<PAdic> (*to_f_vec)(const std::vector<S>&)) {
  const std::size_t n = x.rows();
  InvariantPoint a;
  a.n = n;
  auto poly = charpoly(x);
  poly.erase(poly.begin());
  a.charpoly = to_f_vec(poly);
  std::vector<S> moments;
  // Row e_n^* X^i, read off its last entry.
  std::vector<S> row = x.row(n - 1);
  for (std::size_t i = 1; i < n; ++i) {
    moments.push_back(row[n - 1]);
    std::vector<S> next(n, S::zero(x.field()));
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) next[k] += row[j] * x(j, k);
    row = std::move(next);
  }
  a.moments = to_f_vec(moments);
  return a;
}

std::vector<PAdic> identity_vec(const std::vector<PAdic>& v) { return v; }

std::vector<PAdic> real_vec(const std::vector<Quad>& v) {
  std::vector<PAdic> out;
  for (const Quad& x : v) out.push_back(real_part(x, "invariant"));
  return out;
}

}  // namespace

PAdic block_q(const GlnElement& y) {
  if (y.n() < 2) throw std::invalid_argument("q needs n >= 2");
  return dot(y.blocks().c, y.blocks().b);
}

PAdic block_q(const HnElement& x) {
  if (x.n() < 2) throw std::invalid_argument("q needs n >= 2");
  return real_part(dot(x.blocks().c, x.blocks().b), "q");
}

template <class S>
Matrix<S> moment_hankel(const Matrix<S>& x) {
  const Blocks<S> bl = split_blocks(x);
  const std::size_t m = bl.b.size();
  if (m == 0) return Matrix<S>();
  // d_k = c X'^k b for k = 0..2m-2.
  std::vector<S> d;
  std::vector<S> v = bl.b;
  for (std::size_t k = 0; k + 1 < 2 * m; ++k) {
    d.push_back(dot(bl.c, v));
    v = bl.corner.apply(v);
  }
  Matrix<S> h = Matrix<S>::zeros(m, m, x.field());
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) h(i, j) = d[i + j];
  return h;
}

bool is_rss(const GlnElement& y) {
  if (y.n() == 1) return true;
  return val_det(moment_hankel(y.matrix())) != kInfVal;
}

bool is_rss(const HnElement& x) {
  if (x.n() == 1) return true;
  return val_det(moment_hankel(x.matrix())) != kInfVal;
}

InvariantPoint invariants_of(const GlnElement& y) { return invariants_generic<PAdic>(y.matrix(), identity_vec); }

InvariantPoint invariants_of(const HnElement& x) { return invariants_generic<Quad>(x.matrix(), real_vec); }

TransferSign transfer_sign(const GlnElement& y) {
  const std::size_t n = y.n();
  const MatrixF& m = y.matrix();
  MatrixF krylov = MatrixF::zeros(n, n, m.field());
  std::vector<PAdic> row(n, PAdic::zero(m.field()));
  row[n - 1] = PAdic::one(m.field());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) krylov(i, j) = row[j];
    std::vector<PAdic> next(n, PAdic::zero(m.field()));
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) next[k] += row[j] * m(j, k);
    row = std::move(next);
  }
  const std::int64_t v = val_det(krylov);
  if (v == kInfVal) fail(ErrorKind::NotRss, "not relatively regular semi-simple (Krylov determinant vanishes)");
  return TransferSign{v, (v % 2 == 0) ? 1 : -1};
}

TransferSign transfer_sign(const HnElement&) {
  fail(ErrorKind::SideError, "the transfer sign is defined on the general linear side only");
}

DerivedCoordinates derived_coordinates(const InvariantPoint& a, std::size_t count) {
  const std::size_t n = a.n;
  if (a.charpoly.size() != n || a.moments.size() + 1 != n)
    throw std::invalid_argument("malformed invariant point");
  const FieldConfig& cfg = a.charpoly.front().field();
  const PAdic zero = PAdic::zero(cfg);
  DerivedCoordinates out;
  out.lambda = n >= 2 ? a.moments[0] : -a.charpoly[0];
  if (n == 1) return out;
  const std::size_t m = n - 1;

  auto coef = [&](std::size_t j) { return j == 0 ? PAdic::one(cfg) : a.charpoly[j - 1]; };
  auto moment = [&](std::size_t i) { return i == 0 ? PAdic::one(cfg) : a.moments[i - 1]; };

  // chi'(t) is the polynomial part of chi(t) * sum_i a_i t^{-i-1}.
  std::vector<PAdic> corner(m + 1, zero);
  for (std::size_t k = 0; k <= m; ++k)
    for (std::size_t i = 0; i <= k; ++i) corner[k] += coef(k - i) * moment(i);

  // R(t) = (t - lambda) chi'(t) - chi(t) = chi'(t) * sum_k d_k t^{-k-1}.
  auto r = [&](std::size_t j) {
    if (j > n) return zero;
    PAdic v = -coef(j);
    if (j <= m) v += corner[j];
    if (j >= 1 && j - 1 <= m) v -= out.lambda * corner[j - 1];
    return v;
  };
  for (std::size_t s = 0; s < count; ++s) {
    PAdic ds = r(s + 2);
    for (std::size_t i = 1; i <= std::min(s, m); ++i) ds -= corner[i] * out.d[s - i];
    out.d.push_back(ds);
  }
  out.corner_charpoly.assign(corner.begin() + 1, corner.end());
  return out;
}

MatrixF hankel_of(const InvariantPoint& a) {
  const std::size_t m = a.n - 1;
  const DerivedCoordinates dc = derived_coordinates(a, 2 * m - 1);
  MatrixF h = MatrixF::zeros(m, m, a.charpoly.front().field());
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) h(i, j) = dc.d[i + j];
  return h;
}

PAdic q_of(const InvariantPoint& a) {
  if (a.n < 2) throw std::invalid_argument("q needs n >= 2");
  return derived_coordinates(a, 1).d[0];
}

bool is_rss(const InvariantPoint& a) {
  if (a.n == 1) return true;
  return val_det(hankel_of(a)) != kInfVal;
}

bool hermitian_orbit_exists(const InvariantPoint& a) {
  if (a.n == 1) return true;
  const std::int64_t v = val_det(hankel_of(a));
  if (v == kInfVal) fail(ErrorKind::NotRss, "not relatively regular semi-simple");
  return v % 2 == 0;
}

bool same_point(const InvariantPoint& a, const InvariantPoint& b, std::int64_t slack) {
  if (a.n != b.n) return false;
  for (std::size_t i = 0; i < a.charpoly.size(); ++i)
    if (!agree(a.charpoly[i], b.charpoly[i], slack)) return false;
  for (std::size_t i = 0; i < a.moments.size(); ++i)
    if (!agree(a.moments[i], b.moments[i], slack)) return false;
  return true;
}

namespace {

// Companion matrix with C e_i = e_{i+1} and last column -(chi'_m, ..., chi'_1).
MatrixF companion(const std::vector<PAdic>& corner_charpoly, const FieldConfig& cfg) {
  const std::size_t m = corner_charpoly.size();
  MatrixF c = MatrixF::zeros(m, m, cfg);
  for (std::size_t i = 0; i + 1 < m; ++i) c(i + 1, i) = PAdic::one(cfg);
  for (std::size_t k = 0; k < m; ++k) c(k, m - 1) = -corner_charpoly[m - 1 - k];
  return c;
}

}  // namespace

GlnElement gl_representative(const InvariantPoint& a) {
  const FieldConfig& cfg = a.charpoly.front().field();
  if (a.n == 1) return GlnElement(MatrixF(1, 1, -a.charpoly[0]));
  if (!is_rss(a)) fail(ErrorKind::NotRss, "not relatively regular semi-simple");
  const std::size_t m = a.n - 1;
  const DerivedCoordinates dc = derived_coordinates(a, m);
  Blocks<PAdic> bl;
  bl.corner = companion(dc.corner_charpoly, cfg);
  bl.b.assign(m, PAdic::zero(cfg));
  bl.b[0] = PAdic::one(cfg);
  bl.c = dc.d;
  bl.lambda = dc.lambda;
  GlnElement y(assemble_blocks(bl));
  if (!same_point(invariants_of(y), a)) throw std::logic_error("gl_representative: invariants round-trip failed");
  return y;
}

HnElement u_representative(const InvariantPoint& a) {
  const FieldConfig& cfg = a.charpoly.front().field();
  if (a.n == 1) return HnElement(MatrixE(1, 1, Quad(-a.charpoly[0])));
  const MatrixF h = hankel_of(a);
  const std::int64_t v = val_det(h);
  if (v == kInfVal) fail(ErrorKind::NotRss, "not relatively regular semi-simple");
  if (v % 2 != 0) fail(ErrorKind::NoHermitianOrbit, "val det of the moment Hankel matrix is odd");
  const std::size_t m = a.n - 1;
  const DerivedCoordinates dc = derived_coordinates(a, m);
  const MatrixE split = hermitian_split(to_e(h));
  const MatrixE corner = split * to_e(companion(dc.corner_charpoly, cfg)) * inverse(split);

  Blocks<Quad> bl;
  bl.corner = corner;
  // Store the corner as an exactly hermitian matrix: upper triangle wins.
  for (std::size_t i = 0; i < m; ++i) {
    bl.corner(i, i) = Quad(corner(i, i).re());
    for (std::size_t j = i + 1; j < m; ++j) bl.corner(j, i) = corner(i, j).sigma();
  }
  bl.b = split.col(0);
  for (const Quad& x : bl.b) bl.c.push_back(x.sigma());
  bl.lambda = Quad(dc.lambda);
  HnElement x(assemble_blocks(bl));
  if (!same_point(invariants_of(x), a))
    fail(ErrorKind::PrecisionExhausted, "u_representative: invariants round-trip failed at working precision");
  return x;
}

bool matches(const HnElement& x, const GlnElement& y) {
  return same_point(invariants_of(x), invariants_of(y));
}

PAdic random_scalar(Rng& rng, const FieldConfig& cfg, const SampleOptions& opts) {
  const std::int64_t num = rng.uniform(-opts.height, opts.height);
  const std::int64_t e = rng.uniform(0, opts.max_denominator_exp);
  return PAdic::from_int(num, cfg) * PAdic::p_power(-e, cfg);
}

HnElement sample_hermitian(std::size_t n, const FieldConfig& cfg, const SampleOptions& opts, Rng& rng) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    MatrixE x = MatrixE::zeros(n, n, cfg);
    for (std::size_t i = 0; i < n; ++i) {
      x(i, i) = Quad(random_scalar(rng, cfg, opts));
      for (std::size_t j = i + 1; j < n; ++j) {
        x(i, j) = Quad(random_scalar(rng, cfg, opts), random_scalar(rng, cfg, opts));
        x(j, i) = x(i, j).sigma();
      }
    }
    HnElement h(std::move(x));
    if (is_rss(h)) return h;
  }
  fail(ErrorKind::SamplingExhausted, "no rss hermitian sample after 1000 attempts");
}

MatchedPair sample_matched_pair(std::size_t n, const FieldConfig& cfg, const SampleOptions& opts,
                                std::uint64_t seed) {
  if (n < 1 || n > 4) throw std::invalid_argument("sample_matched_pair supports n in 1..4");
  Rng rng(seed);
  HnElement x = sample_hermitian(n, cfg, opts, rng);
  InvariantPoint a = invariants_of(x);
  GlnElement y = gl_representative(a);
  return MatchedPair{std::move(x), std::move(y), std::move(a)};
}

GlnElement sample_unmatched_gl(std::size_t n, const FieldConfig& cfg, const SampleOptions& opts, Rng& rng) {
  if (n < 2) throw std::invalid_argument("every point has a hermitian match when n = 1");
  for (int attempt = 0; attempt < 1000; ++attempt) {
    MatrixF y = MatrixF::zeros(n, n, cfg);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) y(i, j) = random_scalar(rng, cfg, opts);
    GlnElement g(std::move(y));
    const std::int64_t v = val_det(moment_hankel(g.matrix()));
    if (v != kInfVal && v % 2 != 0) return g;
  }
  fail(ErrorKind::SamplingExhausted, "no unmatched rss sample after 1000 attempts");
}

MatrixE cayley(const MatrixE& a) {
  const MatrixE id = MatrixE::identity(a.rows(), a.field());
  return (id + a) * inverse(id - a);
}

MatrixE random_unitary(std::size_t m, const FieldConfig& cfg, std::uint64_t seed) {
  Rng rng(seed);
  const SampleOptions opts{9, 1};
  for (int attempt = 0; attempt < 1000; ++attempt) {
    MatrixE a = MatrixE::zeros(m, m, cfg);
    for (std::size_t i = 0; i < m; ++i) {
      a(i, i) = Quad(PAdic::zero(cfg), random_scalar(rng, cfg, opts));
      for (std::size_t j = i + 1; j < m; ++j) {
        a(i, j) = Quad(random_scalar(rng, cfg, opts), random_scalar(rng, cfg, opts));
        a(j, i) = -a(i, j).sigma();
      }
    }
    try {
      return cayley(a);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::SingularSystem) throw;
    }
  }
  fail(ErrorKind::SamplingExhausted, "no invertible Cayley parameter after 1000 attempts");
}

MatrixF random_gl(std::size_t m, const FieldConfig& cfg, Rng& rng) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    MatrixF g = MatrixF::zeros(m, m, cfg);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        const std::int64_t num = rng.uniform(-9, 9);
        g(i, j) = PAdic::from_int(num, cfg) * PAdic::p_power(rng.uniform(-1, 1), cfg);
      }
    if (val_det(g) != kInfVal) return g;
  }
  fail(ErrorKind::SamplingExhausted, "no invertible matrix after 1000 attempts");
}

template <class S>
Matrix<S> conjugate_embedded(const Matrix<S>& g, const Matrix<S>& x) {
  const std::size_t m = g.rows();
  Matrix<S> big = Matrix<S>::identity(m + 1, x.field());
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) big(i, j) = g(i, j);
  return big * x * inverse(big);
}

template Blocks<PAdic> split_blocks<PAdic>(const MatrixF&);
template Blocks<Quad> split_blocks<Quad>(const MatrixE&);
template MatrixF assemble_blocks<PAdic>(const Blocks<PAdic>&);
template MatrixE assemble_blocks<Quad>(const Blocks<Quad>&);
template MatrixF moment_hankel<PAdic>(const MatrixF&);
template MatrixE moment_hankel<Quad>(const MatrixE&);
template MatrixF conjugate_embedded<PAdic>(const MatrixF&, const MatrixF&);
template MatrixE conjugate_embedded<Quad>(const MatrixE&, const MatrixE&);

}  // namespace fllab
