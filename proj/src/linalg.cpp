#include "fllab/linalg.hpp"

#include <algorithm>
#include <utility>

namespace fllab {

MatrixE to_e(const MatrixF& m) {
  MatrixE out = MatrixE::zeros(m.rows(), m.cols(), m.field());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = Quad(m(i, j));
  return out;
}

MatrixF to_f(const MatrixE& m) {
  MatrixF out = MatrixF::zeros(m.rows(), m.cols(), m.field());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const Quad& x = m(i, j);
      if (!x.im().is_zero()) fail(ErrorKind::SideError, "matrix entry " + x.to_literal() + " is not in F");
      out(i, j) = x.re();
    }
  return out;
}

template <>
PAdic lift_scalar<PAdic>(const PAdic& x) {
  return x;
}
template <>
Quad lift_scalar<Quad>(const PAdic& x) {
  return Quad(x);
}

template <class S>
std::optional<std::int64_t> known_valuation(const S& x) {
  if (x.is_zero()) return std::nullopt;
  try {
    return x.valuation();
  } catch (const Error&) {
    return std::nullopt;
  }
}

template <class S>
std::vector<S> charpoly(const Matrix<S>& m) {
  if (!m.square()) throw std::invalid_argument("charpoly of a non-square matrix");
  const std::size_t n = m.rows();
  const FieldConfig& cfg = m.field();
  std::vector<S> poly{S::one(cfg), -m(0, 0)};
  for (std::size_t r = 1; r < n; ++r) {
    // Toeplitz column (1, -a, -R C, -R A C, ..., -R A^{r-1} C) for the
    // bordered leading block [[A, C], [R, a]].
    std::vector<S> toeplitz(r + 2, S::zero(cfg));
    toeplitz[0] = S::one(cfg);
    toeplitz[1] = -m(r, r);
    std::vector<S> krylov(r, S::zero(cfg));
    for (std::size_t i = 0; i < r; ++i) krylov[i] = m(i, r);
    for (std::size_t k = 2; k < r + 2; ++k) {
      S acc = S::zero(cfg);
      for (std::size_t i = 0; i < r; ++i) acc += m(r, i) * krylov[i];
      toeplitz[k] = -acc;
      if (k + 1 < r + 2) {
        std::vector<S> next(r, S::zero(cfg));
        for (std::size_t i = 0; i < r; ++i)
          for (std::size_t j = 0; j < r; ++j) next[i] += m(i, j) * krylov[j];
        krylov = std::move(next);
      }
    }
    std::vector<S> next(r + 2, S::zero(cfg));
    for (std::size_t i = 0; i < r + 2; ++i)
      for (std::size_t j = 0; j <= std::min(i, r); ++j) next[i] += toeplitz[i - j] * poly[j];
    poly = std::move(next);
  }
  return poly;
}

template <class S>
S determinant(const Matrix<S>& m) {
  const auto poly = charpoly(m);
  return (m.rows() % 2 == 0) ? poly.back() : -poly.back();
}

namespace {

struct Pivot {
  std::size_t row;
  std::size_t col;
  std::int64_t val;
};

// Minimal known valuation over rows/cols >= k; ties broken by row then column.
template <class S>
std::optional<Pivot> find_pivot(const Matrix<S>& a, std::size_t k, std::size_t col_end, bool& saw_approx_zero) {
  std::optional<Pivot> best;
  saw_approx_zero = false;
  for (std::size_t i = k; i < a.rows(); ++i)
    for (std::size_t j = k; j < col_end; ++j) {
      const S& x = a(i, j);
      if (x.is_exact_zero()) continue;
      auto v = known_valuation(x);
      if (!v) {
        saw_approx_zero = true;
        continue;
      }
      if (!best || *v < best->val) best = Pivot{i, j, *v};
    }
  return best;
}

template <class S>
void swap_rows(Matrix<S>& a, std::size_t r1, std::size_t r2) {
  if (r1 == r2) return;
  for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(r1, j), a(r2, j));
}

template <class S>
void swap_cols(Matrix<S>& a, std::size_t c1, std::size_t c2) {
  if (c1 == c2) return;
  for (std::size_t i = 0; i < a.rows(); ++i) std::swap(a(i, c1), a(i, c2));
}

}  // namespace

template <class S>
std::int64_t val_det(const Matrix<S>& m) {
  if (!m.square()) throw std::invalid_argument("val_det of a non-square matrix");
  Matrix<S> a = m;
  const std::size_t n = a.rows();
  std::int64_t total = 0;
  for (std::size_t k = 0; k < n; ++k) {
    bool approx_zero = false;
    auto piv = find_pivot(a, k, n, approx_zero);
    if (!piv) {
      if (approx_zero) fail(ErrorKind::PrecisionExhausted, "determinant is zero at working precision");
      return kInfVal;
    }
    swap_rows(a, k, piv->row);
    swap_cols(a, k, piv->col);
    total += piv->val;
    const S inv = a(k, k).inverse();
    for (std::size_t i = k + 1; i < n; ++i) {
      if (a(i, k).is_exact_zero()) continue;
      const S f = a(i, k) * inv;
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return total;
}

template <class S>
std::int64_t min_valuation(const Matrix<S>& m) {
  std::int64_t v = kInfVal;
  for (const S& x : m.data())
    if (!x.is_exact_zero()) v = std::min(v, known_valuation(x).value_or(x.val_lower_bound()));
  return v;
}

template <class S>
bool is_integral(const Matrix<S>& m) {
  return std::all_of(m.data().begin(), m.data().end(), [](const S& x) { return x.is_integral(); });
}

template <class S>
Matrix<S> solve_matrix(const Matrix<S>& a_in, const Matrix<S>& b_in) {
  if (!a_in.square() || a_in.rows() != b_in.rows()) throw std::invalid_argument("solve: dimension mismatch");
  const std::size_t n = a_in.rows();
  const std::size_t nb = b_in.cols();
  Matrix<S> a = a_in;
  Matrix<S> b = b_in;
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  for (std::size_t k = 0; k < n; ++k) {
    bool approx_zero = false;
    auto piv = find_pivot(a, k, n, approx_zero);
    if (!piv) {
      if (approx_zero) fail(ErrorKind::PrecisionExhausted, "system is singular at working precision");
      fail(ErrorKind::SingularSystem, "matrix is singular");
    }
    swap_rows(a, k, piv->row);
    swap_rows(b, k, piv->row);
    swap_cols(a, k, piv->col);
    std::swap(perm[k], perm[piv->col]);
    const S inv = a(k, k).inverse();
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k || a(i, k).is_exact_zero()) continue;
      const S f = a(i, k) * inv;
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
      for (std::size_t j = 0; j < nb; ++j) b(i, j) -= f * b(k, j);
      a(i, k) = S::zero(a.field());
    }
  }
  Matrix<S> x = Matrix<S>::zeros(n, nb, a.field());
  for (std::size_t k = 0; k < n; ++k) {
    const S inv = a(k, k).inverse();
    for (std::size_t j = 0; j < nb; ++j) x(perm[k], j) = b(k, j) * inv;
  }
  return x;
}

template <class S>
std::vector<S> solve_linear(const Matrix<S>& a, const std::vector<S>& rhs) {
  return solve_matrix(a, Matrix<S>::column(rhs)).col(0);
}

template <class S>
Matrix<S> inverse(const Matrix<S>& a) {
  return solve_matrix(a, Matrix<S>::identity(a.rows(), a.field()));
}

template <class S>
HnfResult<S> hnf_basis(const std::vector<std::vector<S>>& generators, std::size_t dim) {
  if (generators.empty()) throw std::invalid_argument("hnf_basis needs at least one generator");
  const FieldConfig& cfg = generators.front().front().field();
  std::vector<std::vector<S>> cols = generators;
  HnfResult<S> out{Matrix<S>::zeros(dim, dim, cfg), true};
  std::vector<std::optional<std::int64_t>> pivot_exp(dim);

  for (std::size_t i = 0; i < dim; ++i) {
    std::optional<std::size_t> best;
    std::int64_t best_val = kInfVal;
    bool approx_zero = false;
    for (std::size_t j = 0; j < cols.size(); ++j) {
      const S& x = cols[j][i];
      if (x.is_exact_zero()) continue;
      auto v = known_valuation(x);
      if (!v) {
        approx_zero = true;
        continue;
      }
      if (!best || *v < best_val) {
        best = j;
        best_val = *v;
      }
    }
    if (!best) {
      if (approx_zero) fail(ErrorKind::PrecisionExhausted, "module rank undecidable at working precision");
      out.full_rank = false;
      continue;
    }
    std::vector<S> piv = std::move(cols[*best]);
    cols.erase(cols.begin() + static_cast<std::ptrdiff_t>(*best));
    const S pk = lift_scalar<S>(PAdic::p_power(best_val, cfg));
    const S scale = pk * piv[i].inverse();
    for (std::size_t r = i + 1; r < dim; ++r) piv[r] = piv[r] * scale;
    piv[i] = pk;
    const S pk_inv = lift_scalar<S>(PAdic::p_power(-best_val, cfg));
    for (auto& c : cols) {
      if (c[i].is_exact_zero()) continue;
      const S f = c[i] * pk_inv;
      for (std::size_t r = i + 1; r < dim; ++r) c[r] -= f * piv[r];
      c[i] = S::zero(cfg);
    }
    out.basis.set_col(i, piv);
    pivot_exp[i] = best_val;
  }
  for (const auto& c : cols)
    for (const S& x : c)
      if (!x.is_zero()) throw std::logic_error("hnf_basis: leftover generator not eliminated");

  Matrix<S>& b = out.basis;
  for (std::size_t j = 0; j < dim; ++j) {
    if (!pivot_exp[j]) continue;
    for (std::size_t r = j + 1; r < dim; ++r) {
      if (!pivot_exp[r]) continue;
      const S e = b(r, j);
      const S rho = e.reduce_mod(*pivot_exp[r]);
      const S quot = (e - rho) * lift_scalar<S>(PAdic::p_power(-*pivot_exp[r], cfg));
      if (!quot.is_exact_zero())
        for (std::size_t t = r + 1; t < dim; ++t) b(t, j) -= quot * b(t, r);
      b(r, j) = rho;
    }
  }
  return out;
}

bool is_hermitian(const MatrixE& m, std::int64_t slack) {
  if (!m.square()) return false;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i; j < m.cols(); ++j)
      if (!agree(m(i, j), m(j, i).sigma(), slack)) return false;
  return true;
}

namespace {

// Gram matrix adjoint(P) M P.
MatrixE gram(const MatrixE& m, const MatrixE& p) { return p.adjoint() * m * p; }

void add_col_multiple(MatrixE& p, std::size_t target, std::size_t source, const Quad& factor) {
  for (std::size_t r = 0; r < p.rows(); ++r) p(r, target) += factor * p(r, source);
}

}  // namespace

MatrixE hermitian_split(const MatrixE& m) {
  if (!m.square()) throw std::invalid_argument("hermitian_split of a non-square matrix");
  const std::size_t n = m.rows();
  const FieldConfig& cfg = m.field();
  const std::int64_t vdet = val_det(m);
  if (vdet == kInfVal) fail(ErrorKind::SingularSystem, "hermitian_split needs a nonsingular form");
  if (vdet % 2 != 0) fail(ErrorKind::NotSplit, "odd determinant valuation: form is not split");

  // Columns of P form the working basis; G = adjoint(P) M P.
  MatrixE p = MatrixE::identity(n, cfg);
  for (std::size_t k = 0; k < n; ++k) {
    MatrixE g = gram(m, p);
    std::optional<Pivot> best;
    bool diagonal = false;
    for (std::size_t i = k; i < n; ++i)
      for (std::size_t j = k; j < n; ++j) {
        auto v = known_valuation(g(i, j));
        if (!v) continue;
        const bool diag = i == j;
        if (!best || *v < best->val || (*v == best->val && diag && !diagonal)) {
          best = Pivot{i, j, *v};
          diagonal = diag;
        }
      }
    if (!best) fail(ErrorKind::PrecisionExhausted, "degenerate form at working precision");
    if (!diagonal) {
      // h(v_i + a v_j, same) = G_ii + Tr(a G_ij) + N(a) G_jj; choose a in {1, w}
      // so the trace term carries the minimal valuation.
      const Quad& gij = g(best->row, best->col);
      const bool use_one = !gij.re().is_zero() && gij.re().valuation() == best->val;
      const Quad a = use_one ? Quad::one(cfg) : Quad::omega(cfg);
      add_col_multiple(p, best->row, best->col, a);
      best->col = best->row;
    }
    for (std::size_t r = 0; r < n; ++r) std::swap(p(r, k), p(r, best->row));
    g = gram(m, p);
    const Quad inv = g(k, k).inverse();
    for (std::size_t i = k + 1; i < n; ++i) {
      if (g(k, i).is_exact_zero()) continue;
      add_col_multiple(p, i, k, -(g(k, i) * inv));
    }
  }

  MatrixE g = gram(m, p);
  std::vector<PAdic> diag;
  for (std::size_t i = 0; i < n; ++i) diag.push_back(g(i, i).re());

  // Pair up odd-valuation diagonal entries d_i, d_j: with x, z in F solving
  // x^2 - z^2 = 1/d_i and N(rho) = -d_j/d_i, the vectors
  //   v1 = x e_i + (z/rho) e_j,  v2 = -d_j sigma(z/rho) e_i + d_i x e_j
  // have Gram matrix diag(1, d_i d_j).
  std::vector<std::size_t> odd;
  for (std::size_t i = 0; i < n; ++i)
    if (diag[i].valuation() % 2 != 0) odd.push_back(i);
  const PAdic half = PAdic::from_rational(1, 2, cfg);
  for (std::size_t t = 0; t + 1 < odd.size(); t += 2) {
    const std::size_t i = odd[t], j = odd[t + 1];
    const PAdic di = diag[i];
    const PAdic dj = diag[j];
    const PAdic inv_di = di.inverse();
    const Quad x(half * (inv_di + PAdic::one(cfg)));
    const PAdic z = half * (inv_di - PAdic::one(cfg));
    const Quad rho = solve_norm_equation(-(dj * inv_di));
    const Quad y = Quad(z) * rho.inverse();
    const Quad c_ii = x, c_ji = y;
    const Quad c_ij = -(Quad(dj) * y.sigma()), c_jj = Quad(di) * x.sigma();
    for (std::size_t r = 0; r < n; ++r) {
      const Quad vi = p(r, i), vj = p(r, j);
      p(r, i) = c_ii * vi + c_ji * vj;
      p(r, j) = c_ij * vi + c_jj * vj;
    }
    diag[i] = PAdic::one(cfg);
    diag[j] = di * dj;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Quad nu_inv = solve_norm_equation(diag[i]).inverse();
    for (std::size_t r = 0; r < n; ++r) p(r, i) = p(r, i) * nu_inv;
  }
  return inverse(p);
}

#define FLLAB_INSTANTIATE(S)                                                                   \
  template std::optional<std::int64_t> known_valuation<S>(const S&);                          \
  template std::vector<S> charpoly<S>(const Matrix<S>&);                                       \
  template S determinant<S>(const Matrix<S>&);                                                 \
  template std::int64_t val_det<S>(const Matrix<S>&);                                          \
  template std::int64_t min_valuation<S>(const Matrix<S>&);                                    \
  template bool is_integral<S>(const Matrix<S>&);                                              \
  template Matrix<S> solve_matrix<S>(const Matrix<S>&, const Matrix<S>&);                      \
  template std::vector<S> solve_linear<S>(const Matrix<S>&, const std::vector<S>&);            \
  template Matrix<S> inverse<S>(const Matrix<S>&);                                             \
  template HnfResult<S> hnf_basis<S>(const std::vector<std::vector<S>>&, std::size_t);

FLLAB_INSTANTIATE(PAdic)
FLLAB_INSTANTIATE(Quad)

#undef FLLAB_INSTANTIATE

}  // namespace fllab
