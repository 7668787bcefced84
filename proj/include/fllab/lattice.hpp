#pragma once

#include <cstdint>
#include <vector>

#include "fllab/linalg.hpp"

namespace fllab {

/// Finitely generated O-submodule of F^m (S = PAdic) or O_E-submodule of E^m
/// (S = Quad), stored by its canonical basis. Equality of modules is
/// bit-equality of canonical bases.
template <class S>
class LatticeT {
 public:
  LatticeT() = default;

  static LatticeT from_generators(const std::vector<std::vector<S>>& generators, std::size_t dim);
  static LatticeT from_basis(const Matrix<S>& basis);
  static LatticeT standard(std::size_t dim, const FieldConfig& cfg);

  std::size_t dim() const { return basis_.rows(); }
  bool full_rank() const { return full_rank_; }
  const Matrix<S>& basis() const { return basis_; }
  const FieldConfig& field() const { return basis_.field(); }
  /// Exponents k_i of the diagonal entries p^{k_i}.
  const std::vector<std::int64_t>& pivots() const { return pivots_; }
  /// val det of the canonical basis; requires full rank.
  std::int64_t val_det() const;

  bool contains(const std::vector<S>& v) const;
  bool contains(const LatticeT& other) const;
  /// T L inside L.
  bool is_stable(const Matrix<S>& t) const;

  /// p^k L.
  LatticeT scaled(std::int64_t k) const;

  bool operator==(const LatticeT& other) const { return basis_.identical(other.basis_); }

  std::string to_string() const { return fllab::to_string(basis_); }

 private:
  Matrix<S> basis_;
  std::vector<std::int64_t> pivots_;
  bool full_rank_ = false;
};

using Lattice = LatticeT<PAdic>;
using HermitianLattice = LatticeT<Quad>;

/// {v : v^T w in O for all w in L}.
Lattice dual(const Lattice& l);
/// {v : adjoint(w) v in O_E for all w in L} for the form h(v, w) = sum sigma(v_i) w_i.
HermitianLattice dual(const HermitianLattice& l);

/// Gram matrix adjoint(B) B of the canonical basis.
MatrixE gram(const HermitianLattice& l);
bool is_integral_form(const HermitianLattice& l);
bool is_self_dual(const HermitianLattice& l);

/// (-1)^{val det basis}.
int index_sign(const Lattice& l);

/// O[T] v, spanned by v, Tv, ..., T^{m-1} v. Throws ZeroModule for v = 0.
template <class S>
LatticeT<S> module_closure(const Matrix<S>& t, const std::vector<S>& v);

struct EnumOptions {
  /// ExplosionGuard when log_p |L1/L0| exceeds this.
  std::int64_t max_log_index = 12;
};

/// All L with L0 <= L <= L1 and T L <= L, sorted by canonical basis.
/// Requires L0 inside L1 and both T-stable.
std::vector<Lattice> enumerate_stable_between(const Lattice& l0, const Lattice& l1, const MatrixF& t,
                                              const EnumOptions& opts = {});

/// All self-dual L with Lmin <= L and T L <= L (hence L <= dual(Lmin)).
/// Empty when the form is not integral on Lmin.
std::vector<HermitianLattice> enumerate_selfdual_stable(const HermitianLattice& lmin, const MatrixE& t,
                                                        const EnumOptions& opts = {});

}  // namespace fllab
