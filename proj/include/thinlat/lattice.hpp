#pragma once

#include "thinlat/core.hpp"

#include <vector>

namespace thinlat {

// Lattice given by the columns of a nonsingular matrix, with cached
// Gram-Schmidt data.
class LatticeBasis {
 public:
  explicit LatticeBasis(Mat B);

  int dim() const { return static_cast<int>(B_.cols()); }
  const Mat& B() const { return B_; }
  const Mat& Binv() const { return Binv_; }
  // Columns are the Gram-Schmidt vectors b*_i.
  const Mat& gs() const { return gs_; }
  // mu(i, j) = <b_i, b*_j>/<b*_j, b*_j> for j < i.
  const Mat& mu() const { return mu_; }
  double det_abs() const { return det_; }

  // pi_i: projection orthogonal to span(b_0 .. b_{i-1}) (0-based).
  Vec project(int i, const Vec& x) const;
  Vec point(const IVec& z) const;
  Vec coords(const Vec& x) const { return Binv_ * x; }

  LatticeBasis scaled(double s) const { return LatticeBasis(s * B_); }
  // LLL-reduced basis of the same lattice (delta = 0.99).
  LatticeBasis lll_reduced() const;

 private:
  Mat B_;
  Mat Binv_;
  Mat gs_;
  Mat mu_;
  double det_;
};

// M = {y in Lambda : <a, coords(y)> = 0 mod p}.
struct SublatticeSpec {
  IVec a;
  std::int64_t p;
};

// Basis of the lattice spanned by M_basis that is triangular with respect to
// `reference`: span(b_1..b_i) = span(ref_1..ref_i) for all i. Works for
// sublattices and superlattices (exact integer HNF).
LatticeBasis directional_basis(const LatticeBasis& M_basis,
                               const LatticeBasis& reference);

// Closed-form directional basis of the parity sublattice.
LatticeBasis parity_sublattice_basis(const LatticeBasis& reference,
                                     const SublatticeSpec& spec);

// Lambda + Z c for c with 3c in Lambda; directional w.r.t. Lambda's basis.
LatticeBasis adjoin(const LatticeBasis& L, const Vec& c);

// Streams the p^n coset representatives B a / p of Lambda/p mod Lambda in
// lexicographic order of a in {0..p-1}^n (first coordinate most
// significant). Representatives are reported in centered form: digits above
// p/2 are shifted by -p.
class CosetStream {
 public:
  CosetStream(const LatticeBasis& L, int p);
  // Writes the next representative; false when exhausted.
  bool next(Vec& rep, IVec& digits);
  std::int64_t total() const { return total_; }

 private:
  const LatticeBasis& L_;
  int p_;
  std::vector<int> digits_;
  bool done_ = false;
  std::int64_t total_;
};

CosetStream mod_p_cosets(const LatticeBasis& L, int p);

bool is_prime(std::int64_t n);
// Smallest prime strictly greater than n.
std::int64_t next_prime_above(std::int64_t n);

}  // namespace thinlat
