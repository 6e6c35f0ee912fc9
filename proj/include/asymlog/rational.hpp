// SPDX-License-Identifier: Apache-2.0
//
// Exact arbitrary-size rational arithmetic, backed by GMP.
// Rationals are always canonical: lowest terms, positive denominator.

#ifndef ASYMLOG_RATIONAL_HPP
#define ASYMLOG_RATIONAL_HPP

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace asymlog {

using Integer = mpz_class;
using Rational = mpq_class;

// Thrown when an operation is called outside its parameter domain.
class domain_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Thrown when a computation would exceed the configured resource budget.
class budget_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Thrown when an identity that must hold exactly fails to verify.
class verification_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline Rational make_rational(long num, long den = 1) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline Rational make_rational(const Integer& num, const Integer& den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline Integer factorial(unsigned long n) {
  Integer r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

// C(n, k) for integer n (generalized: n may be negative), k >= 0.
inline Integer binomial(long n, unsigned long k) {
  Integer r;
  if (n >= 0) {
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), k);
  } else {
    // C(n,k) = (-1)^k C(k-n-1, k)
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(k - n - 1), k);
    if (k % 2 == 1) r = -r;
  }
  return r;
}

// Falling factorial n!/(n-k)! = n(n-1)...(n-k+1); zero when k > n >= 0.
inline Integer falling_factorial(long n, unsigned long k) {
  Integer r = 1;
  for (unsigned long i = 0; i < k; ++i) r *= Integer(n - static_cast<long>(i));
  return r;
}

inline Integer pow_int(const Integer& base, unsigned long e) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

inline Rational pow_rat(const Rational& base, long e) {
  if (e == 0) return Rational(1);
  Rational r;
  unsigned long a = static_cast<unsigned long>(e < 0 ? -e : e);
  mpz_pow_ui(r.get_num_mpz_t(), base.get_num().get_mpz_t(), a);
  mpz_pow_ui(r.get_den_mpz_t(), base.get_den().get_mpz_t(), a);
  if (e < 0) {
    if (base == 0) throw domain_error("pow_rat: zero to negative power");
    mpq_inv(r.get_mpq_t(), r.get_mpq_t());
  }
  r.canonicalize();
  return r;
}

// Serializes as "num/den", or plain "num" for integers.
inline std::string to_string(const Rational& q) { return q.get_str(); }

inline Rational rational_from_string(const std::string& s) {
  Rational q;
  if (q.set_str(s, 10) != 0) throw domain_error("bad rational literal: " + s);
  q.canonicalize();
  return q;
}

}  // namespace asymlog

#endif  // ASYMLOG_RATIONAL_HPP
