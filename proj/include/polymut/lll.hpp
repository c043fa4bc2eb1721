#pragma once

// LLL lattice reduction over exact integer bases with MPFR Gram-Schmidt data.

#include <polymut/multiprecision.hpp>

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace polymut {

using IntVector = std::vector<Integer>;
using IntMatrix = std::vector<IntVector>;

inline Integer dot(const IntVector& a, const IntVector& b) {
  Integer s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

namespace detail {

/// Working state of one reduction: exact rows and Gram matrix, floating
/// Gram-Schmidt data recomputed from the exact Gram entries (L^2 style), so
/// the float precision only has to grow with the dimension.
class LllState {
 public:
  LllState(IntMatrix basis, double delta)
      : b_(std::move(basis)), n_(b_.size()), delta_(delta),
        gram_(n_, IntVector(n_, 0)), mu_(n_, std::vector<Real>(n_, Real(0))),
        r_(n_, std::vector<Real>(n_, Real(0))), bstar_(n_, Real(0)) {
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j <= i; ++j) gram_[i][j] = gram_[j][i] = dot(b_[i], b_[j]);
  }

  IntMatrix run() {
    if (n_ == 0) return b_;
    gso_row(0);
    std::size_t k = 1;
    while (k < n_) {
      size_reduce(k);
      const Real lhs = bstar_[k];
      const Real rhs = (Real(delta_) - mu_[k][k - 1] * mu_[k][k - 1]) * bstar_[k - 1];
      if (lhs < rhs) {
        swap_rows(k);
        if (k == 1) gso_row(0);
        k = std::max<std::size_t>(1, k - 1);
      } else {
        ++k;
      }
    }
    return b_;
  }

 private:
  // Row k of the Gram-Schmidt data from the exact Gram entries and rows 0..k-1.
  void gso_row(std::size_t k) {
    for (std::size_t j = 0; j < k; ++j) {
      Real r = to_real(gram_[k][j]);
      for (std::size_t i = 0; i < j; ++i) r -= mu_[j][i] * r_[k][i];
      r_[k][j] = r;
      mu_[k][j] = r / bstar_[j];
    }
    Real r = to_real(gram_[k][k]);
    for (std::size_t j = 0; j < k; ++j) r -= mu_[k][j] * r_[k][j];
    bstar_[k] = r;
  }

  // b_k -= q b_l, keeping the Gram matrix exact.
  void subtract(std::size_t k, std::size_t l, const Integer& q) {
    for (std::size_t c = 0; c < b_[k].size(); ++c) b_[k][c] -= q * b_[l][c];
    const Integer gkl = gram_[k][l];
    gram_[k][k] += q * q * gram_[l][l] - 2 * q * gkl;
    for (std::size_t j = 0; j < n_; ++j) {
      if (j == k) continue;
      gram_[k][j] -= q * gram_[l][j];
      gram_[j][k] = gram_[k][j];
    }
  }

  // Lazy size reduction: reduce with the floating mu, then recompute from the
  // exact Gram row until nothing moves.
  void size_reduce(std::size_t k) {
    const Real eta(0.51);
    for (int pass = 0; pass < 256; ++pass) {
      gso_row(k);
      bool moved = false;
      std::vector<Real> mu(mu_[k]);
      for (std::size_t l = k; l-- > 0;) {
        if (abs(mu[l]) <= eta) continue;
        const Integer q = round_to_integer(mu[l]);
        if (q == 0) continue;
        subtract(k, l, q);
        const Real qr = to_real(q);
        mu[l] -= qr;
        for (std::size_t i = 0; i < l; ++i) mu[i] -= qr * mu_[l][i];
        moved = true;
      }
      if (!moved) return;
    }
    throw std::runtime_error("lll_reduce: size reduction did not settle; precision too low");
  }

  void swap_rows(std::size_t k) {
    std::swap(b_[k], b_[k - 1]);
    std::swap(gram_[k], gram_[k - 1]);
    for (auto& row : gram_) std::swap(row[k], row[k - 1]);
  }

  IntMatrix b_;
  std::size_t n_;
  double delta_;
  IntMatrix gram_;
  std::vector<std::vector<Real>> mu_;
  std::vector<std::vector<Real>> r_;
  std::vector<Real> bstar_;
};

}  // namespace detail

/// LLL-reduces the rows of `basis` (Lovász parameter `delta`). Rows must be
/// linearly independent; the result spans the same lattice.
///
/// Floating Gram-Schmidt data uses 3n + 160 bits regardless of entry size;
/// the basis and its Gram matrix stay exact.
inline IntMatrix lll_reduce(IntMatrix basis, double delta = 0.99) {
  if (delta <= 0.25 || delta >= 1.0) throw std::invalid_argument("lll_reduce: delta must lie in (1/4, 1)");
  for (const auto& row : basis)
    if (row.size() != basis.front().size()) throw std::invalid_argument("lll_reduce: ragged basis");
  const unsigned prec_bits = static_cast<unsigned>(3 * basis.size() + 160);
  PrecisionGuard guard(prec_bits * 30103 / 100000 + 1);
  detail::LllState state(std::move(basis), delta);
  return state.run();
}

/// Exact Gram-Schmidt squared norms and coefficients (rational arithmetic);
/// used to certify reduction results on small bases.
struct ExactGso {
  std::vector<std::vector<Rational>> mu;
  std::vector<Rational> bstar;
};

inline ExactGso exact_gso(const IntMatrix& basis) {
  const std::size_t n = basis.size();
  ExactGso g{std::vector<std::vector<Rational>>(n, std::vector<Rational>(n)), std::vector<Rational>(n)};
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < k; ++j) {
      Rational r(dot(basis[k], basis[j]));
      for (std::size_t i = 0; i < j; ++i) r -= g.mu[j][i] * g.mu[k][i] * g.bstar[i];
      g.mu[k][j] = r / g.bstar[j];
    }
    Rational r(dot(basis[k], basis[k]));
    for (std::size_t j = 0; j < k; ++j) r -= g.mu[k][j] * g.mu[k][j] * g.bstar[j];
    g.bstar[k] = r;
  }
  return g;
}

/// True iff `basis` is size reduced (|mu| <= eta) and satisfies the Lovász
/// condition, checked in exact arithmetic.
inline bool is_lll_reduced(const IntMatrix& basis, double delta = 0.99, double eta = 0.51) {
  const ExactGso g = exact_gso(basis);
  const Rational half(static_cast<long>(eta * 1000000 + 0.5), 1000000);
  const Rational d(static_cast<long>(delta * 1000000 + 0.5), 1000000);
  for (std::size_t k = 0; k < basis.size(); ++k)
    for (std::size_t j = 0; j < k; ++j)
      if (abs(g.mu[k][j]) > half) return false;
  for (std::size_t k = 1; k < basis.size(); ++k)
    if (g.bstar[k] < (d - g.mu[k][k - 1] * g.mu[k][k - 1]) * g.bstar[k - 1]) return false;
  return true;
}

/// Exact squared length of a shortest nonzero lattice vector: LLL followed by
/// Fincke-Pohst enumeration over the reduced basis.
inline Integer shortest_vector_norm2(const IntMatrix& basis) {
  const IntMatrix red = lll_reduce(basis);
  const ExactGso g = exact_gso(red);
  const std::size_t n = red.size();
  Integer best = dot(red[0], red[0]);
  std::vector<Integer> coeff(n, 0);
  // Depth-first enumeration of coefficient vectors with partial norm <= best.
  auto recurse = [&](auto&& self, std::size_t level, const Rational& partial) -> void {
    Rational center = 0;
    for (std::size_t j = level + 1; j < n; ++j) center -= Rational(coeff[j]) * g.mu[j][level];
    const Rational room = (Rational(best) - partial) / g.bstar[level];
    if (room < 0) return;
    const double c = static_cast<double>(center);
    const double r = std::sqrt(static_cast<double>(room)) + 1.0;
    for (long x = static_cast<long>(std::floor(c - r)); x <= static_cast<long>(std::ceil(c + r)); ++x) {
      const Rational diff = Rational(x) - center;
      const Rational next = partial + diff * diff * g.bstar[level];
      if (next > Rational(best)) continue;
      coeff[level] = x;
      if (level == 0) {
        bool zero = true;
        for (const auto& cf : coeff) zero = zero && cf == 0;
        if (!zero) {
          IntVector v(red[0].size(), 0);
          for (std::size_t i = 0; i < n; ++i)
            for (std::size_t col = 0; col < v.size(); ++col) v[col] += coeff[i] * red[i][col];
          const Integer len = dot(v, v);
          if (len < best) best = len;
        }
      } else {
        self(self, level - 1, next);
      }
    }
    coeff[level] = 0;
  };
  recurse(recurse, n - 1, Rational(0));
  return best;
}

}  // namespace polymut
