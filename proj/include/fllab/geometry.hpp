#pragma once

#include <cstdint>
#include <vector>

#include "fllab/linalg.hpp"
#include "fllab/rng.hpp"

namespace fllab {

/// Block decomposition X = [[X', b], [c, lambda]] with X' of size n-1.
template <class S>
struct Blocks {
  Matrix<S> corner;
  std::vector<S> b;
  std::vector<S> c;
  S lambda;
};

template <class S>
Blocks<S> split_blocks(const Matrix<S>& x);

template <class S>
Matrix<S> assemble_blocks(const Blocks<S>& blocks);

/// Element of gl_n(F).
class GlnElement {
 public:
  explicit GlnElement(MatrixF y);

  std::size_t n() const { return y_.rows(); }
  const MatrixF& matrix() const { return y_; }
  const Blocks<PAdic>& blocks() const { return blocks_; }
  const FieldConfig& field() const { return y_.field(); }

 private:
  MatrixF y_;
  Blocks<PAdic> blocks_;
};

/// Element of h_n(F) = {X in gl_n(E) : adjoint(X) = X}.
class HnElement {
 public:
  /// Throws SideError unless adjoint(X) == X to working precision.
  explicit HnElement(MatrixE x);

  std::size_t n() const { return x_.rows(); }
  const MatrixE& matrix() const { return x_; }
  const Blocks<Quad>& blocks() const { return blocks_; }
  const FieldConfig& field() const { return x_.field(); }

 private:
  MatrixE x_;
  Blocks<Quad> blocks_;
};

/// Point of the quotient A: charpoly coefficients c_1..c_n of
/// t^n + c_1 t^{n-1} + ... + c_n, and moments a_i = e_n^* X^i e_n, i = 1..n-1.
struct InvariantPoint {
  std::size_t n = 0;
  std::vector<PAdic> charpoly;
  std::vector<PAdic> moments;
};

/// Coordinates recovered from an InvariantPoint by the triangular change of
/// variables: lambda = a_1, the monic charpoly of X' (coefficients 1..n-1,
/// descending) and d_k = c X'^k b.
struct DerivedCoordinates {
  PAdic lambda;
  std::vector<PAdic> corner_charpoly;
  std::vector<PAdic> d;
};

struct TransferSign {
  std::int64_t v = 0;
  int omega = 1;
};

PAdic block_q(const GlnElement& y);
/// q = adjoint(b) b, which lies in F.
PAdic block_q(const HnElement& x);

/// (n-1)x(n-1) Hankel matrix of c X'^{i+j} b.
template <class S>
Matrix<S> moment_hankel(const Matrix<S>& x);

bool is_rss(const GlnElement& y);
bool is_rss(const HnElement& x);

InvariantPoint invariants_of(const GlnElement& y);
InvariantPoint invariants_of(const HnElement& x);

/// v = val det of the Krylov matrix with rows e_n^* Y^i; omega = (-1)^v.
TransferSign transfer_sign(const GlnElement& y);
/// Always throws SideError: the sign is defined on the general linear side only.
TransferSign transfer_sign(const HnElement& x);

/// d_0..d_{count-1}, along with lambda and the charpoly of the corner block.
DerivedCoordinates derived_coordinates(const InvariantPoint& a, std::size_t count);
/// Hankel matrix in d_0..d_{2n-4}.
MatrixF hankel_of(const InvariantPoint& a);
PAdic q_of(const InvariantPoint& a);
bool is_rss(const InvariantPoint& a);
/// A hermitian orbit exists iff val det Hankel(d) is even.
bool hermitian_orbit_exists(const InvariantPoint& a);

bool same_point(const InvariantPoint& a, const InvariantPoint& b, std::int64_t slack = 2);

/// Y_a = [[C(chi'), e_1], [(d_0..d_{n-2}), lambda]]; throws NotRss.
GlnElement gl_representative(const InvariantPoint& a);
/// X = [[A C A^{-1}, A e_1], [adjoint(A e_1), lambda]] with adjoint(A) A = Hankel(d).
/// Throws NoHermitianOrbit or NotRss.
HnElement u_representative(const InvariantPoint& a);

bool matches(const HnElement& x, const GlnElement& y);

struct SampleOptions {
  std::int64_t height = 50;
  /// Entries are m / p^e with e in [0, max_denominator_exp].
  std::int64_t max_denominator_exp = 1;
};

struct MatchedPair {
  HnElement x;
  GlnElement y;
  InvariantPoint a;
};

PAdic random_scalar(Rng& rng, const FieldConfig& cfg, const SampleOptions& opts);
/// Random element of h_n^rs(F); throws SamplingExhausted after 1000 rejections.
HnElement sample_hermitian(std::size_t n, const FieldConfig& cfg, const SampleOptions& opts, Rng& rng);
MatchedPair sample_matched_pair(std::size_t n, const FieldConfig& cfg, const SampleOptions& opts,
                                std::uint64_t seed);
/// Random rss Y in gl_n(F) with val det Hankel odd (no hermitian match).
GlnElement sample_unmatched_gl(std::size_t n, const FieldConfig& cfg, const SampleOptions& opts, Rng& rng);

/// Cayley transform (I + A)(I - A)^{-1}.
MatrixE cayley(const MatrixE& a);
/// Unitary g (adjoint(g) g = I) from a random anti-hermitian Cayley parameter.
MatrixE random_unitary(std::size_t m, const FieldConfig& cfg, std::uint64_t seed);
/// Random invertible matrix with entries m p^e, e in {-1, 0, 1}.
MatrixF random_gl(std::size_t m, const FieldConfig& cfg, Rng& rng);

/// diag(g, 1) X diag(g, 1)^{-1}.
template <class S>
Matrix<S> conjugate_embedded(const Matrix<S>& g, const Matrix<S>& x);

}  // namespace fllab
