#pragma once

// Arbitrary precision scalars shared by every module: MPFR reals, GMP integers
// and rationals, and a small complex type over the reals.

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <cmath>
#include <string>

namespace polymut {

using Real = boost::multiprecision::mpfr_float;
using Integer = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

/// Bits needed to carry `digits` decimal digits.
inline unsigned digits_to_bits(unsigned digits) {
  return static_cast<unsigned>(std::ceil(digits * 3.3219280948873623)) + 1;
}

/// Scoped change of the thread's default MPFR precision. Values created while
/// the guard is alive get `digits` decimal digits; the old default comes back
/// on destruction.
class PrecisionGuard {
 public:
  explicit PrecisionGuard(unsigned digits) : saved_(Real::default_precision()) {
    Real::default_precision(digits);
  }
  ~PrecisionGuard() { Real::default_precision(saved_); }
  PrecisionGuard(const PrecisionGuard&) = delete;
  PrecisionGuard& operator=(const PrecisionGuard&) = delete;

 private:
  unsigned saved_;
};

/// Copy of `x` carried at the current default precision.
inline Real at_working_precision(const Real& x) {
  return Real(x, Real::default_precision());
}

inline Real pi() {
  Real r;
  mpfr_const_pi(r.backend().data(), MPFR_RNDN);
  return r;
}

inline Real ten_pow(long e) { return pow(Real(10), e); }

/// Nearest integer (ties to even).
inline Integer round_to_integer(const Real& x) {
  Integer z;
  mpfr_get_z(z.backend().data(), x.backend().data(), MPFR_RNDN);
  return z;
}

inline Real to_real(const Integer& z) {
  Real r;
  mpfr_set_z(r.backend().data(), z.backend().data(), MPFR_RNDN);
  return r;
}

inline Real to_real(const Rational& q) {
  Real r;
  mpfr_set_q(r.backend().data(), q.backend().data(), MPFR_RNDN);
  return r;
}

/// Fixed-point decimal rendering with `digits` significant digits; locale
/// independent so serialized output is byte-stable.
inline std::string to_decimal(const Real& x, unsigned digits) {
  return x.str(static_cast<std::streamsize>(digits), std::ios_base::scientific);
}

/// Base-10 exponent of |x| (floor of log10), or a large negative number at 0.
inline long decimal_exponent(const Real& x) {
  if (x == 0) return -1000000;
  return static_cast<long>(floor(log10(abs(x))).convert_to<double>());
}

struct Complex {
  Real re;
  Real im;

  Complex() : re(0), im(0) {}
  Complex(Real r) : re(std::move(r)), im(0) {}  // NOLINT(google-explicit-constructor)
  Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}
  Complex(int r) : re(r), im(0) {}  // NOLINT(google-explicit-constructor)

  Complex& operator+=(const Complex& o) { re += o.re; im += o.im; return *this; }
  Complex& operator-=(const Complex& o) { re -= o.re; im -= o.im; return *this; }
  Complex& operator*=(const Complex& o) {
    Real r = re * o.re - im * o.im;
    im = re * o.im + im * o.re;
    re = std::move(r);
    return *this;
  }
  Complex& operator/=(const Complex& o) {
    Real d = o.re * o.re + o.im * o.im;
    Real r = (re * o.re + im * o.im) / d;
    im = (im * o.re - re * o.im) / d;
    re = std::move(r);
    return *this;
  }
};

inline Complex operator+(Complex a, const Complex& b) { return a += b; }
inline Complex operator-(Complex a, const Complex& b) { return a -= b; }
inline Complex operator*(Complex a, const Complex& b) { return a *= b; }
inline Complex operator/(Complex a, const Complex& b) { return a /= b; }
inline Complex operator-(const Complex& a) { return {-a.re, -a.im}; }
inline Complex conj(const Complex& a) { return {a.re, -a.im}; }
inline Real norm(const Complex& a) { return a.re * a.re + a.im * a.im; }
inline Real abs(const Complex& a) { return sqrt(norm(a)); }
inline Complex scale(const Complex& a, const Real& s) { return {a.re * s, a.im * s}; }

inline Complex scale_int(const Complex& a, const Integer& c) {
  const Real r = to_real(c);
  return {a.re * r, a.im * r};
}

inline Complex at_working_precision(const Complex& z) {
  return {at_working_precision(z.re), at_working_precision(z.im)};
}

}  // namespace polymut
