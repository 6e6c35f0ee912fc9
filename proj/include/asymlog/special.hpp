// SPDX-License-Identifier: Apache-2.0
//
// Special functions needed by the expansion lemmas: log-integral li,
// principal-value exponential integral Ei, the upper incomplete gamma
// function, and double-exponential quadrature for the log-moment integrals.
//
// The function values are served by MPFR's correctly-rounded engines
// (mpfr_eint, mpfr_gamma_inc); the test suite re-derives reference values
// from independent series and continued-fraction oracles.

#ifndef ASYMLOG_SPECIAL_HPP
#define ASYMLOG_SPECIAL_HPP

#include <functional>
#include <vector>

#include "asymlog/real.hpp"

namespace asymlog::special {

// Principal-value exponential integral Ei(x), x != 0.
// For x < 0 this equals -E_1(-x).
inline Real exp_integral_ei(const Real& x) {
  if (x.is_zero()) throw domain_error("exp_integral_ei: x must be nonzero");
  Real r(x.prec());
  mpfr_eint(r.raw(), x.raw(), MPFR_RNDN);
  return r;
}

// E_1(x) = -Ei(-x) for x > 0.
inline Real exp_integral_e1(const Real& x) {
  if (!(x.sign() > 0)) throw domain_error("exp_integral_e1: x must be > 0");
  return -exp_integral_ei(-x);
}

// Principal-value log-integral li(x) = PV int_0^x dt/log t, as Ei(log x).
inline Real log_integral(const Real& x) {
  if (!(x > Real(1.0, x.prec()))) throw domain_error("log_integral: x must be > 1");
  return exp_integral_ei(log(x));
}

// Upper incomplete gamma Gamma(z, x) = int_x^infty t^{z-1} e^{-t} dt, x > 0,
// z any real.
inline Real upper_incomplete_gamma(const Real& z, const Real& x) {
  if (!(x.sign() > 0)) throw domain_error("upper_incomplete_gamma: x must be > 0");
  Real r(std::max(z.prec(), x.prec()));
  mpfr_gamma_inc(r.raw(), z.raw(), x.raw(), MPFR_RNDN);
  return r;
}

inline Real gamma(const Real& x) {
  Real r(x.prec());
  mpfr_gamma(r.raw(), x.raw(), MPFR_RNDN);
  return r;
}

// ---------------------------------------------------------------------------
// tanh-sinh (double exponential) quadrature on a finite interval. Handles
// integrable endpoint singularities of log and mild power type.

using Integrand = std::function<Real(const Real&)>;

inline Real tanh_sinh(const Integrand& f, const Real& a, const Real& b, long digits,
                      int max_level = 13) {
  mpfr_prec_t prec = bits_for_digits(digits + 10);
  Real half = (b.at_prec(prec) - a.at_prec(prec)) / 2L;
  Real mid = (a.at_prec(prec) + b.at_prec(prec)) / 2L;
  Real ten(10.0, prec);
  Real target = pow_si(ten, -(digits + 2));

  // abscissa x(t) = tanh((pi/2) sinh t),
  // weight   w(t) = (pi/2) cosh t / cosh^2((pi/2) sinh t)
  Real pi_half = const_pi(prec) / 2L;
  auto sample = [&](double t) -> Real {
    Real tr(t, prec);
    Real sh(prec), ch(prec);
    mpfr_sinh_cosh(sh.raw(), ch.raw(), tr.raw(), MPFR_RNDN);
    Real arg = pi_half * sh;
    Real che(prec), th(prec);
    mpfr_cosh(che.raw(), arg.raw(), MPFR_RNDN);
    mpfr_tanh(th.raw(), arg.raw(), MPFR_RNDN);
    Real x = mid + half * th;
    // rounding may land exactly on an endpoint where f is singular
    if (!(x > a) || !(x < b)) return Real(prec);
    Real w = pi_half * ch / (che * che);
    Real fx = f(x);
    if (fx.is_nan()) return Real(prec);
    return fx * w;
  };

  const double t_max = 6.9;  // tanh((pi/2) sinh 6.9) is 1 within ~2^-2000
  double h = 1.0;
  Real node_sum = sample(0.0);
  for (long i = 1; i <= static_cast<long>(t_max); ++i)
    node_sum += sample(static_cast<double>(i)) + sample(-static_cast<double>(i));
  Real estimate = node_sum * Real(h, prec) * half;

  for (int level = 1; level <= max_level; ++level) {
    h /= 2.0;
    std::vector<Real> terms;
    for (double t = h; t <= t_max; t += 2.0 * h) {
      terms.push_back(sample(t));
      terms.push_back(sample(-t));
    }
    node_sum += pairwise_sum(terms, 0, terms.size(), prec);
    Real next = node_sum * Real(h, prec) * half;
    Real change = abs(next - estimate);
    estimate = next;
    if (level >= 5 && change < target * (abs(estimate) + Real(1.0, prec))) break;
  }
  return estimate;
}

// int_a^infty f, for integrands decaying at least exponentially: substitute
// x = a + e^u - ... handled by mapping u in (0, 1) twice. Practical approach:
// integrate [a, a+L] by tanh_sinh and bound/add the exponential tail by
// successive octaves until an octave contributes below target.
inline Real integral_to_infinity(const Integrand& f, const Real& a, long digits) {
  mpfr_prec_t prec = bits_for_digits(digits + 10);
  Real ten(10.0, prec);
  Real target = pow_si(ten, -(digits + 2));
  Real total(prec);
  Real lo = a.at_prec(prec);
  Real len(1.0, prec);
  for (int octave = 0; octave < 64; ++octave) {
    Real hi = lo + len;
    Real piece = tanh_sinh(f, lo, hi, digits);
    total += piece;
    if (octave >= 2 && abs(piece) < target * (abs(total) + Real(1.0, prec))) break;
    lo = hi;
    len = len * 2L;
  }
  return total;
}

}  // namespace asymlog::special

#endif  // ASYMLOG_SPECIAL_HPP
