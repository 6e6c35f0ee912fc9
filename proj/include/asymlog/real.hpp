// SPDX-License-Identifier: Apache-2.0
//
// Arbitrary-precision real arithmetic over MPFR with an explicit per-value
// precision. Binary operations compute at the larger operand precision;
// primitives are correctly rounded by MPFR.

#ifndef ASYMLOG_REAL_HPP
#define ASYMLOG_REAL_HPP

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "asymlog/rational.hpp"

namespace asymlog {

// Working precision policy: callers request decimal digits, the library
// selects bits with a guard margin that grows with the expected number of
// accumulated operations.
struct Precision {
  long digits = 30;
  long guard_bits = 64;

  static constexpr double kLog2Of10 = 3.3219280948873623;

  mpfr_prec_t bits() const {
    return static_cast<mpfr_prec_t>(static_cast<double>(digits) * kLog2Of10) + guard_bits;
  }
  // guard grows logarithmically with the series length / term count
  static Precision for_digits(long digits, long terms = 1) {
    Precision p;
    p.digits = digits;
    p.guard_bits = 64;
    long t = 2;
    while (t < terms) {
      ++p.guard_bits;
      t *= 2;
    }
    return p;
  }
};

inline mpfr_prec_t bits_for_digits(long digits) { return Precision::for_digits(digits).bits(); }

class Real {
 public:
  explicit Real(mpfr_prec_t prec = 128) { mpfr_init2(v_, prec < MPFR_PREC_MIN ? MPFR_PREC_MIN : prec); mpfr_set_zero(v_, 1); }
  Real(double d, mpfr_prec_t prec) : Real(prec) { mpfr_set_d(v_, d, MPFR_RNDN); }
  Real(long n, mpfr_prec_t prec) : Real(prec) { mpfr_set_si(v_, n, MPFR_RNDN); }
  Real(int n, mpfr_prec_t prec) : Real(static_cast<long>(n), prec) {}
  Real(const Rational& q, mpfr_prec_t prec) : Real(prec) {
    mpfr_set_q(v_, q.get_mpq_t(), MPFR_RNDN);
  }
  Real(const Integer& z, mpfr_prec_t prec) : Real(prec) {
    mpfr_set_z(v_, z.get_mpz_t(), MPFR_RNDN);
  }

  Real(const Real& o) : Real(o.prec()) { mpfr_set(v_, o.v_, MPFR_RNDN); }
  Real(Real&& o) noexcept {
    mpfr_init2(v_, o.prec());
    mpfr_swap(v_, o.v_);
  }
  Real& operator=(const Real& o) {
    if (this != &o) {
      mpfr_set_prec(v_, o.prec());
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  Real& operator=(Real&& o) noexcept {
    if (this != &o) mpfr_swap(v_, o.v_);
    return *this;
  }
  ~Real() { mpfr_clear(v_); }

  mpfr_prec_t prec() const { return mpfr_get_prec(v_); }
  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }

  Real at_prec(mpfr_prec_t prec) const {
    Real r(prec);
    mpfr_set(r.v_, v_, MPFR_RNDN);
    return r;
  }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_nan() const { return mpfr_nan_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }

  // Scientific-notation decimal string "d.ddd...e±k" with the given digit
  // count.
  std::string to_string(long digits = 0) const {
    if (digits <= 0) digits = static_cast<long>(static_cast<double>(prec()) / Precision::kLog2Of10);
    if (mpfr_nan_p(v_)) return "nan";
    if (mpfr_inf_p(v_)) return sign() > 0 ? "inf" : "-inf";
    if (mpfr_zero_p(v_)) return "0";
    mpfr_exp_t e;
    char* s = mpfr_get_str(nullptr, &e, 10, static_cast<size_t>(digits), v_, MPFR_RNDN);
    std::string digits_str(s);
    mpfr_free_str(s);
    std::string sign_str;
    if (!digits_str.empty() && digits_str[0] == '-') {
      sign_str = "-";
      digits_str.erase(0, 1);
    }
    std::string out = sign_str + digits_str.substr(0, 1);
    if (digits_str.size() > 1) out += "." + digits_str.substr(1);
    out += "e" + std::to_string(static_cast<long>(e) - 1);
    return out;
  }

  friend Real operator-(const Real& a) {
    Real r(a.prec());
    mpfr_neg(r.v_, a.v_, MPFR_RNDN);
    return r;
  }

#define ASYMLOG_REAL_BINOP(op, fn)                       \
  friend Real operator op(const Real& a, const Real& b) { \
    Real r(std::max(a.prec(), b.prec()));                 \
    fn(r.v_, a.v_, b.v_, MPFR_RNDN);                      \
    return r;                                             \
  }                                                       \
  Real& operator op##=(const Real& b) {                   \
    if (prec() < b.prec()) *this = at_prec(b.prec());     \
    fn(v_, v_, b.v_, MPFR_RNDN);                          \
    return *this;                                         \
  }

  ASYMLOG_REAL_BINOP(+, mpfr_add)
  ASYMLOG_REAL_BINOP(-, mpfr_sub)
  ASYMLOG_REAL_BINOP(*, mpfr_mul)
  ASYMLOG_REAL_BINOP(/, mpfr_div)
#undef ASYMLOG_REAL_BINOP

  friend Real operator*(const Real& a, long b) {
    Real r(a.prec());
    mpfr_mul_si(r.v_, a.v_, b, MPFR_RNDN);
    return r;
  }
  friend Real operator/(const Real& a, long b) {
    Real r(a.prec());
    mpfr_div_si(r.v_, a.v_, b, MPFR_RNDN);
    return r;
  }

  friend bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.v_, b.v_); }
  friend bool operator>(const Real& a, const Real& b) { return mpfr_greater_p(a.v_, b.v_); }
  friend bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.v_, b.v_); }
  friend bool operator>=(const Real& a, const Real& b) { return mpfr_greaterequal_p(a.v_, b.v_); }
  friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.v_, b.v_); }
  friend bool operator!=(const Real& a, const Real& b) { return !mpfr_equal_p(a.v_, b.v_); }

 private:
  mpfr_t v_;
};

inline Real abs(const Real& a) {
  Real r(a.prec());
  mpfr_abs(r.raw(), a.raw(), MPFR_RNDN);
  return r;
}
inline Real log(const Real& a) {
  Real r(a.prec());
  mpfr_log(r.raw(), a.raw(), MPFR_RNDN);
  return r;
}
inline Real exp(const Real& a) {
  Real r(a.prec());
  mpfr_exp(r.raw(), a.raw(), MPFR_RNDN);
  return r;
}
inline Real sqrt(const Real& a) {
  Real r(a.prec());
  mpfr_sqrt(r.raw(), a.raw(), MPFR_RNDN);
  return r;
}
inline Real pow_si(const Real& a, long e) {
  Real r(a.prec());
  mpfr_pow_si(r.raw(), a.raw(), e, MPFR_RNDN);
  return r;
}
inline Real pow(const Real& a, const Real& e) {
  Real r(std::max(a.prec(), e.prec()));
  mpfr_pow(r.raw(), a.raw(), e.raw(), MPFR_RNDN);
  return r;
}

inline Real const_pi(mpfr_prec_t prec) {
  Real r(prec);
  mpfr_const_pi(r.raw(), MPFR_RNDN);
  return r;
}
// Euler's gamma from MPFR's internal engine; the library cross-checks this
// against its own extraction routes in the test suite.
inline Real const_euler(mpfr_prec_t prec) {
  Real r(prec);
  mpfr_const_euler(r.raw(), MPFR_RNDN);
  return r;
}
inline Real const_log2pi_half(mpfr_prec_t prec) {
  Real two_pi = const_pi(prec) * 2L;
  return log(two_pi) / 2L;
}

// Riemann zeta for real argument (MPFR backend).
inline Real zeta(const Real& s) {
  Real r(s.prec());
  mpfr_zeta(r.raw(), s.raw(), MPFR_RNDN);
  return r;
}
inline Real zeta_ui(unsigned long s, mpfr_prec_t prec) {
  Real r(prec);
  mpfr_zeta_ui(r.raw(), s, MPFR_RNDN);
  return r;
}

// Deterministic pairwise (tree) summation; bit-stable regardless of how the
// caller later parallelizes block production.
inline Real pairwise_sum(std::vector<Real>& terms, size_t lo, size_t hi, mpfr_prec_t prec) {
  if (lo >= hi) return Real(prec);
  if (hi - lo == 1) return terms[lo];
  size_t mid = lo + (hi - lo) / 2;
  return pairwise_sum(terms, lo, mid, prec) + pairwise_sum(terms, mid, hi, prec);
}

}  // namespace asymlog

#endif  // ASYMLOG_REAL_HPP
