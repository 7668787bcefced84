#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fllab/matrix.hpp"

namespace fllab {

/// Lifts an F-scalar into S (identity for PAdic, a + 0w for Quad).
template <class S>
S lift_scalar(const PAdic& x);

/// Valuation of a scalar when it is certainly nonzero; nullopt otherwise.
template <class S>
std::optional<std::int64_t> known_valuation(const S& x);

/// Monic characteristic polynomial det(t I - M), coefficients by descending
/// degree: result[0] = 1, result[k] is the coefficient of t^{n-k}.
/// Berkowitz recursion: no divisions, so nothing is lost when p divides n.
template <class S>
std::vector<S> charpoly(const Matrix<S>& m);

template <class S>
S determinant(const Matrix<S>& m);

/// Valuation of det(M) by elimination with minimal-valuation pivoting
/// (ties: smallest row, then column). kInfVal when det is exactly zero.
template <class S>
std::int64_t val_det(const Matrix<S>& m);

/// Smallest entry valuation (a lower bound for approximate zeros); kInfVal for 0.
template <class S>
std::int64_t min_valuation(const Matrix<S>& m);

template <class S>
bool is_integral(const Matrix<S>& m);

/// X with A X = B. Throws SingularSystem or PrecisionExhausted.
template <class S>
Matrix<S> solve_matrix(const Matrix<S>& a, const Matrix<S>& b);

template <class S>
std::vector<S> solve_linear(const Matrix<S>& a, const std::vector<S>& rhs);

template <class S>
Matrix<S> inverse(const Matrix<S>& a);

template <class S>
struct HnfResult {
  Matrix<S> basis;
  bool full_rank = true;
};

/// Canonical basis of the O-module spanned by the generator columns.
///
/// Lower triangular column echelon form: column i has diagonal entry p^{k_i}
/// and zeros above it; an entry below the diagonal in row r is reduced
/// modulo p^{k_r} O (digits in [0, p), both coordinates for O_E). Two
/// generating sets of one module give bit-identical bases.
template <class S>
HnfResult<S> hnf_basis(const std::vector<std::vector<S>>& generators, std::size_t dim);

/// A with adjoint(A) * A = M for a nonsingular hermitian M.
/// Throws NotSplit when val det M is odd.
MatrixE hermitian_split(const MatrixE& m);

/// True when adjoint(M) == M to working precision.
bool is_hermitian(const MatrixE& m, std::int64_t slack = 2);

}  // namespace fllab
