#include "thinlat/lattice.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <utility>

namespace thinlat {

using boost::multiprecision::cpp_int;

LatticeBasis::LatticeBasis(Mat B) : B_(std::move(B)) {
  const int n = dim();
  if (B_.rows() != n || n == 0)
    throw Error("BadDescriptor", "lattice basis must be square");
  if (!B_.allFinite()) throw Error("BadDescriptor", "lattice basis not finite");
  gs_ = B_;
  mu_ = Mat::Identity(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < i; ++j) {
      mu_(i, j) = B_.col(i).dot(gs_.col(j)) / gs_.col(j).squaredNorm();
      gs_.col(i) -= mu_(i, j) * gs_.col(j);
    }
  }
  det_ = 1;
  for (int i = 0; i < n; ++i) det_ *= gs_.col(i).norm();
  if (!(det_ > 0)) throw Error("BadDescriptor", "lattice basis is singular");
  Binv_ = B_.inverse();
}

Vec LatticeBasis::project(int i, const Vec& x) const {
  Vec y = x;
  for (int j = 0; j < i; ++j)
    y -= (y.dot(gs_.col(j)) / gs_.col(j).squaredNorm()) * gs_.col(j);
  return y;
}

Vec LatticeBasis::point(const IVec& z) const { return B_ * z.cast<double>(); }

LatticeBasis LatticeBasis::lll_reduced() const {
  const int n = dim();
  Mat b = B_;
  const double delta = 0.99;
  auto gso = [&](Mat& bs, Mat& mu) {
    bs = b;
    mu = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < i; ++j) {
        mu(i, j) = b.col(i).dot(bs.col(j)) / bs.col(j).squaredNorm();
        bs.col(i) -= mu(i, j) * bs.col(j);
      }
  };
  Mat bs, mu;
  gso(bs, mu);
  int k = 1, guard = 0;
  while (k < n && guard++ < 100000) {
    for (int j = k - 1; j >= 0; --j) {
      double q = std::round(mu(k, j));
      if (q != 0) {
        b.col(k) -= q * b.col(j);
        gso(bs, mu);
      }
    }
    if (bs.col(k).squaredNorm() >=
        (delta - mu(k, k - 1) * mu(k, k - 1)) * bs.col(k - 1).squaredNorm()) {
      ++k;
    } else {
      b.col(k).swap(b.col(k - 1));
      gso(bs, mu);
      k = std::max(k - 1, 1);
    }
  }
  return LatticeBasis(b);
}

namespace {

// Finds k > 0 with k X integral (within tol) and returns the integer matrix.
bool scale_to_integers(const Mat& X, long k, std::vector<std::vector<cpp_int>>& Y) {
  const int n = static_cast<int>(X.rows());
  Y.assign(n, std::vector<cpp_int>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double v = k * X(i, j);
      double r = std::round(v);
      if (std::abs(v - r) > 1e-9 * std::max(1.0, std::abs(v))) return false;
      Y[i][j] = cpp_int(static_cast<long long>(r));
    }
  return true;
}

cpp_int floor_div(const cpp_int& a, const cpp_int& b) {
  cpp_int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

LatticeBasis directional_basis(const LatticeBasis& M_basis,
                               const LatticeBasis& reference) {
  const int n = reference.dim();
  if (M_basis.dim() != n)
    throw Error("NotCommensurable", "dimension mismatch");
  Mat X = reference.Binv() * M_basis.B();
  double dX = std::abs(X.determinant());
  long k0 = dX < 1 ? std::lround(1 / dX) : 1;
  std::vector<std::vector<cpp_int>> Y;
  long k = 0;
  for (long cand : {k0, 1L}) {
    if (cand > 0 && scale_to_integers(X, cand, Y)) {
      k = cand;
      break;
    }
  }
  if (k == 0)
    for (long cand = 2; cand <= 4096; ++cand)
      if (scale_to_integers(X, cand, Y)) {
        k = cand;
        break;
      }
  if (k == 0)
    throw Error("NotCommensurable", "coordinates are not rational at tolerance");

  // Column operations make Y upper triangular: process rows bottom-up and
  // gather each row's gcd into the diagonal column.
  auto col_combine = [&](int a, int b, const cpp_int& p, const cpp_int& q,
                         const cpp_int& r, const cpp_int& s) {
    // (col_a, col_b) <- (p col_a + q col_b, r col_a + s col_b)
    for (int i = 0; i < n; ++i) {
      cpp_int ya = Y[i][a], yb = Y[i][b];
      Y[i][a] = p * ya + q * yb;
      Y[i][b] = r * ya + s * yb;
    }
  };
  for (int i = n - 1; i >= 0; --i) {
    for (int j = 0; j < i; ++j) {
      if (Y[i][j] == 0) continue;
      // extended gcd of (Y[i][i], Y[i][j])
      cpp_int a = Y[i][i], b = Y[i][j];
      cpp_int old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
      while (r != 0) {
        cpp_int q = old_r / r;
        cpp_int tmp = old_r - q * r;
        old_r = r;
        r = tmp;
        tmp = old_s - q * s;
        old_s = s;
        s = tmp;
        tmp = old_t - q * t;
        old_t = t;
        t = tmp;
      }
      cpp_int g = old_r;  // = old_s a + old_t b
      // new col_i = old_s col_i + old_t col_j; new col_j = -(b/g) col_i + (a/g) col_j
      col_combine(i, j, old_s, old_t, -(b / g), a / g);
    }
    if (Y[i][i] < 0)
      for (int r = 0; r < n; ++r) Y[r][i] = -Y[r][i];
    if (Y[i][i] == 0) throw Error("NotCommensurable", "singular coordinates");
  }
  // Reduce entries right of each pivot.
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      cpp_int q = floor_div(Y[i][j], Y[i][i]);
      if (q != 0)
        for (int r = 0; r <= i; ++r) Y[r][j] -= q * Y[r][i];
    }
  Mat T(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      T(i, j) = static_cast<double>(Y[i][j]) / static_cast<double>(k);
  return LatticeBasis(reference.B() * T);
}

LatticeBasis parity_sublattice_basis(const LatticeBasis& reference,
                                     const SublatticeSpec& spec) {
  const int n = reference.dim();
  const std::int64_t p = spec.p;
  if (spec.a.size() != n || p < 2)
    throw Error("BadDescriptor", "sublattice spec does not match the basis");
  auto mod = [p](std::int64_t v) { return ((v % p) + p) % p; };
  int j = -1;
  for (int i = 0; i < n; ++i)
    if (mod(spec.a(i)) != 0) {
      j = i;
      break;
    }
  if (j < 0) throw Error("BadDescriptor", "sublattice vector is 0 mod p");
  // inverse of a_j mod p (p prime)
  std::int64_t inv = 1, base = mod(spec.a(j)), e = p - 2;
  while (e > 0) {
    if (e & 1) inv = static_cast<std::int64_t>((__int128)inv * base % p);
    base = static_cast<std::int64_t>((__int128)base * base % p);
    e >>= 1;
  }
  Mat T = Mat::Identity(n, n);
  T(j, j) = static_cast<double>(p);
  for (int i = j + 1; i < n; ++i) {
    std::int64_t ai = static_cast<std::int64_t>((__int128)mod(spec.a(i)) * inv % p);
    // centered residue keeps the basis short
    if (ai > p / 2) ai -= p;
    T(j, i) = static_cast<double>(-ai);
  }
  return LatticeBasis(reference.B() * T);
}

LatticeBasis adjoin(const LatticeBasis& L, const Vec& c) {
  const int n = L.dim();
  Vec a = 3.0 * L.coords(c);
  IVec ai(n);
  for (int i = 0; i < n; ++i) {
    double r = std::round(a(i));
    if (std::abs(a(i) - r) > 1e-9 * std::max(1.0, std::abs(a(i))))
      throw Error("NotOrderThree", "3c is not a lattice vector");
    ai(i) = static_cast<std::int64_t>(r);
  }
  auto res = [](std::int64_t v) {
    std::int64_t m = ((v % 3) + 3) % 3;
    return m == 2 ? -1 : m;
  };
  int j = -1;
  for (int i = n - 1; i >= 0; --i)
    if (res(ai(i)) != 0) {
      j = i;
      break;
    }
  if (j < 0) throw Error("AlreadyMember", "c is already in the lattice");
  int sgn = static_cast<int>(res(ai(j)));
  Vec v = Vec::Zero(n);
  for (int i = 0; i < j; ++i) {
    std::int64_t r = res(sgn * ai(i));
    v(i) = r / 3.0;
  }
  v(j) = 1.0 / 3.0;
  Mat B = L.B();
  B.col(j) = L.B() * v;
  return LatticeBasis(B);
}

CosetStream::CosetStream(const LatticeBasis& L, int p)
    : L_(L), p_(p), digits_(L.dim(), 0) {
  if (p < 2) throw Error("BadDescriptor", "coset modulus must be >= 2");
  total_ = 1;
  for (int i = 0; i < L.dim(); ++i) total_ *= p;
}

bool CosetStream::next(Vec& rep, IVec& digits) {
  if (done_) return false;
  const int n = L_.dim();
  digits.resize(n);
  Vec a(n);
  for (int i = 0; i < n; ++i) {
    int d = digits_[i];
    if (2 * d > p_) d -= p_;
    digits(i) = d;
    a(i) = static_cast<double>(d) / p_;
  }
  rep = L_.B() * a;
  int k = n - 1;
  while (k >= 0 && digits_[k] == p_ - 1) {
    digits_[k] = 0;
    --k;
  }
  if (k < 0)
    done_ = true;
  else
    ++digits_[k];
  return true;
}

CosetStream mod_p_cosets(const LatticeBasis& L, int p) { return CosetStream(L, p); }

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::int64_t next_prime_above(std::int64_t n) {
  std::int64_t p = n + 1;
  while (!is_prime(p)) ++p;
  return p;
}

}  // namespace thinlat
