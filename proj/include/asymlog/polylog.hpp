// SPDX-License-Identifier: Apache-2.0
//
// Polylogarithms and Nielsen integrals: series evaluation with exact
// S_{r,1,t} coefficients, the Li_j(1-x) reflection representation, the T
// recursion, and the exact Bernoulli/harmonic identities (including the open
// conjecture) behind the series representations.

#ifndef ASYMLOG_POLYLOG_HPP
#define ASYMLOG_POLYLOG_HPP

#include <vector>

#include "asymlog/exact.hpp"
#include "asymlog/special.hpp"

namespace asymlog::polylog {

// coefficient of x^n in (-log(1-x))^p / p!, which equals S_{p-1,1,n-1}/n
inline Rational log_power_coeff(int p, long n) {
  if (p < 0 || n < 0) throw domain_error("log_power_coeff: need p, n >= 0");
  if (n == 0) return p == 0 ? Rational(1) : Rational(0);
  return exact::stirling_s(p - 1, 1, n - 1) / Integer(n);
}

inline Real li(int j, const Real& x, long digits);

// Nielsen integral S_{k,p}(x) = sum_{n>=1} S_{p-1,1,n-1} x^n / n^{k+1}.
// S_{1,0}(x) = log x by convention; S_{k-1,1} = Li_k.
inline Real nielsen(int k, int p, const Real& x, long digits) {
  if (k < 1) throw domain_error("nielsen: k must be >= 1");
  if (p < 0) throw domain_error("nielsen: p must be >= 0");
  mpfr_prec_t prec = bits_for_digits(digits + 10);
  Real xx = x.at_prec(prec);
  if (p == 0) {
    if (k == 1) return log(xx);
    throw domain_error("nielsen: p = 0 only defined for k = 1 (log x)");
  }
  Real one(1.0, prec);
  if (abs(xx) > one) throw domain_error("nielsen: need |x| <= 1");

  if (xx == one) {
    if (p == 1) return zeta_ui(static_cast<unsigned long>(k + 1), prec);
    if (p == 2) {
      // sum H_{n-1}/n^{k+1} = sum H_n/n^{k+1} - zeta(k+2), with Euler's
      // closed form for the linear sum
      long m = k + 1;
      Real acc = (Real(1.0, prec) + Real(m, prec) / Real(2, prec)) *
                 zeta_ui(static_cast<unsigned long>(m + 1), prec);
      for (long i = 1; i <= m - 2; ++i)
        acc -= zeta_ui(static_cast<unsigned long>(i + 1), prec) *
               zeta_ui(static_cast<unsigned long>(m - i), prec) / Real(2, prec);
      return acc - zeta_ui(static_cast<unsigned long>(m + 1), prec);
    }
  }
  if (xx == one || xx == -one) {
    // integral representation through tanh-sinh quadrature; endpoint
    // singularities are log-type
    int kk = k, pp = p;
    Real xv = xx;
    Real fac(Integer(factorial(static_cast<unsigned long>(k - 1)) *
                   factorial(static_cast<unsigned long>(p))),
           prec);
    Real sign((k + p - 1) % 2 == 0 ? 1.0 : -1.0, prec);
    Real integral = special::tanh_sinh(
        [kk, pp, xv, prec](const Real& y) {
          Real ly = log(y);
          Real l1 = log(Real(1.0, prec) - xv * y);
          return pow_si(ly, kk - 1) * pow_si(l1, pp) / y;
        },
        Real(0.0, prec), Real(1.0, prec), digits + 5);
    return sign * integral / fac;
  }

  // power series; the S_{p-1,1,n-1} coefficients are carried incrementally
  // through their recursion (floating, which is exact to working precision
  // and avoids the deep exact-rational rows at large n)
  Real eps = pow_si(Real(10.0, prec), -(digits + 6));
  Real acc(prec);
  Real xpow(1.0, prec);
  std::vector<Real> srow;  // srow[r] = S_{r,1,n-1}
  srow.reserve(static_cast<size_t>(p));
  for (int r = 0; r < p; ++r) srow.emplace_back(r == 0 ? 1.0 : 0.0, prec);
  for (long n = 1; n <= 1000000; ++n) {
    xpow *= xx;
    const Real& s = srow[static_cast<size_t>(p - 1)];
    if (!s.is_zero()) {
      Real term = s * xpow / pow_si(Real(n, prec), k + 1);
      acc += term;
      if (n > 8 && abs(term) / (one - abs(xx)) < eps) break;
    }
    for (int r = p - 1; r >= 1; --r)
      srow[static_cast<size_t>(r)] += srow[static_cast<size_t>(r - 1)] / Real(n, prec);
  }
  return acc;
}

// Li_j(1-x) via the reflection representation
//   sum_{r=0}^{j-1} (zeta(j-r) - S_{1,j-r-1}(x)) log^r(1-x)/r!
// with the zeta(1) term dropped (the r = j-1 slot contributes -log x).
inline Real li_reflection(int j, const Real& x, long digits) {
  if (j < 2) throw domain_error("li_reflection: j must be >= 2");
  mpfr_prec_t prec = bits_for_digits(digits + 10);
  Real xx = x.at_prec(prec);
  if (!(xx > Real(0.0, prec)) || !(xx < Real(1.0, prec)))
    throw domain_error("li_reflection: need 0 < x < 1");
  Real l1x = log(Real(1.0, prec) - xx);
  Real acc(prec);
  Real lpow(1.0, prec);
  for (int r = 0; r <= j - 1; ++r) {
    Real bracket(prec);
    if (r == j - 1) {
      bracket = -log(xx);  // zeta(1) dropped, -S_{1,0}(x) = -log x
    } else {
      bracket = zeta_ui(static_cast<unsigned long>(j - r), prec) -
                nielsen(1, j - r - 1, xx, digits + 5);
    }
    acc += bracket * lpow / Real(factorial(static_cast<unsigned long>(r)), prec);
    lpow *= l1x;
  }
  return acc;
}

// Li_j(x) for |x| <= 1 (j >= 2, or j = 1 with x < 1); switches to the
// reflection representation close to x = 1
inline Real li(int j, const Real& x, long digits) {
  if (j < 1) throw domain_error("polylog: j must be >= 1");
  mpfr_prec_t prec = bits_for_digits(digits + 10);
  Real xx = x.at_prec(prec);
  Real one(1.0, prec);
  if (abs(xx) > one) throw domain_error("polylog: need |x| <= 1");
  if (j == 1) {
    if (xx == one) throw domain_error("polylog: Li_1 diverges at x = 1");
    return -log(one - xx);
  }
  if (xx == one) return zeta_ui(static_cast<unsigned long>(j), prec);
  if (xx == -one) {
    // -eta(j) = -(1 - 2^{1-j}) zeta(j)
    return -(one - pow_si(Real(2.0, prec), 1 - j)) * zeta_ui(static_cast<unsigned long>(j), prec);
  }
  if (xx > Real(0.75, prec)) return li_reflection(j, one - xx, digits);
  Real eps = pow_si(Real(10.0, prec), -(digits + 6));
  Real acc(prec);
  Real xpow(1.0, prec);
  for (long n = 1; n <= 1000000; ++n) {
    xpow *= xx;
    Real term = xpow / pow_si(Real(n, prec), j);
    acc += term;
    if (abs(term) / (one - abs(xx)) < eps) break;
  }
  return acc;
}

// T_{j-2,n-1} = sum 1/(i_1 ... i_{j-3} k^2) over increasing tuples below n
// with k distinct from all i's; T_{1,N} = H_N^{(2)}.
inline Rational t_numbers(int j, long n) {
  if (j < 3) throw domain_error("t_numbers: j must be >= 3");
  if (n < 1) throw domain_error("t_numbers: n must be >= 1");
  long m = j - 2, N = n - 1;
  static exact::detail::MemoTable<std::pair<long, long>, Rational> memo;
  auto t = [](long mm, long NN) -> Rational {
    auto rec = [](auto&& self, long m2, long N2) -> Rational {
      if (m2 == 1) return exact::harmonic_number(N2, 2);
      if (N2 <= 0) return Rational(0);
      return memo.get_or_compute({m2, N2}, [&] {
        return Rational(self(self, m2, N2 - 1) + self(self, m2 - 1, N2 - 1) / Integer(N2) +
                        exact::stirling_s(m2 - 1, 1, N2 - 1) /
                            (Integer(N2) * Integer(N2)));
      });
    };
    return rec(rec, mm, NN);
  };
  return t(m, N);
}

// --- exact identity checks ----------------------------------------------------

struct IdentityWitness {
  bool holds = false;
  Rational lhs;
  Rational rhs;
};

// sum_{r=1}^{n-1} (-1)^r B_r/r sum_{l=r}^n (-1)^l/l C(n-1, n-l) = -1/n^2
inline IdentityWitness bernoulli_identity_one(long n) {
  if (n < 2) throw domain_error("bernoulli_identity_one: n must be >= 2");
  IdentityWitness w;
  for (long r = 1; r <= n - 1; ++r) {
    Rational br = exact::bernoulli_number(r) / Integer(r);
    if (br == 0) continue;
    if (r % 2 == 1) br = -br;
    Rational inner(0);
    for (long l = r; l <= n; ++l) {
      Rational t = make_rational(binomial(n - 1, static_cast<unsigned long>(n - l)), Integer(l));
      if (l % 2 == 1) t = -t;
      inner += t;
    }
    w.lhs += br * inner;
  }
  w.rhs = make_rational(Integer(-1), Integer(n) * Integer(n));
  w.holds = (w.lhs == w.rhs);
  return w;
}

// sum_{r=1}^{p-1} (-1)^r B_r/r ( sum_{l=r}^p (-1)^l C(p,l) H_{l-1}
//                                + 1/r + 1/(p-r) )
//   = H_{p-1}^{(2)} + H_{p-1}/p
inline IdentityWitness bernoulli_conjecture(long p) {
  if (p < 1) throw domain_error("bernoulli_conjecture: p must be >= 1");
  IdentityWitness w;
  for (long r = 1; r <= p - 1; ++r) {
    Rational br = exact::bernoulli_number(r) / Integer(r);
    if (br == 0) continue;
    if (r % 2 == 1) br = -br;
    Rational inner = make_rational(1, r) + make_rational(1, p - r);
    for (long l = r; l <= p; ++l) {
      Rational t = Rational(binomial(p, static_cast<unsigned long>(l))) *
                   exact::harmonic_number(l - 1);
      if (l % 2 == 1) t = -t;
      inner += t;
    }
    w.lhs += br * inner;
  }
  w.rhs = exact::harmonic_number(p - 1, 2) + exact::harmonic_number(p - 1) / Integer(p);
  w.holds = (w.lhs == w.rhs);
  return w;
}

// sum_{i=1}^{n-1} H_{i-1}/(n-i)^p
//   = sum_{i=1}^{n-1} ( sum_{r=1}^{p-1} H_{i-1}^{(p-r+1)}/i^r + 2 H_{i-1}/i^p )
inline IdentityWitness harmonic_power_identity(long p, long n) {
  if (p < 1) throw domain_error("harmonic_power_identity: p must be >= 1");
  if (n < 2) throw domain_error("harmonic_power_identity: n must be >= 2");
  IdentityWitness w;
  for (long i = 1; i <= n - 1; ++i) {
    w.lhs += exact::harmonic_number(i - 1) /
             pow_int(Integer(n - i), static_cast<unsigned long>(p));
    Rational inner = exact::harmonic_number(i - 1) * 2 /
                     pow_int(Integer(i), static_cast<unsigned long>(p));
    for (long r = 1; r <= p - 1; ++r)
      inner += exact::harmonic_number(i - 1, p - r + 1) /
               pow_int(Integer(i), static_cast<unsigned long>(r));
    w.rhs += inner;
  }
  w.holds = (w.lhs == w.rhs);
  return w;
}

// sum_{l=1}^{p+1} (-1)^l C(p+1,l) H_{l-1} = H_p  (and the companion
// -sum_{l=1}^{p} (-1)^l/l C(p,l) = H_p)
inline IdentityWitness binomial_harmonic_identity(long p) {
  if (p < 1) throw domain_error("binomial_harmonic_identity: p must be >= 1");
  IdentityWitness w;
  Rational first(0), second(0);
  for (long l = 1; l <= p + 1; ++l) {
    Rational t = Rational(binomial(p + 1, static_cast<unsigned long>(l))) *
                 exact::harmonic_number(l - 1);
    if (l % 2 == 1) t = -t;
    first += t;
  }
  for (long l = 1; l <= p; ++l) {
    Rational t = make_rational(binomial(p, static_cast<unsigned long>(l)), Integer(l));
    if (l % 2 == 0) t = -t;  // minus sign outside the sum
    second += t;
  }
  w.lhs = first;
  w.rhs = exact::harmonic_number(p);
  w.holds = (first == w.rhs) && (second == w.rhs);
  return w;
}

// x^n-coefficient identity of the S_{1,1} series representation:
//   (-1)^n B_n/n^2 - sum_{i=1}^n (-1)^i C(n-1,n-i) b_i/i = 1/n^2,
// with b_i = sum_{r=1}^i (-1)^r B_r/r.
inline IdentityWitness s11_coefficient_identity(long n) {
  if (n < 1) throw domain_error("s11_coefficient_identity: n must be >= 1");
  IdentityWitness w;
  Rational b(0);
  Rational acc(0);
  for (long i = 1; i <= n; ++i) {
    Rational br = exact::bernoulli_number(i) / Integer(i);
    if (i % 2 == 1) br = -br;
    b += br;  // b_i
    Rational t = Rational(binomial(n - 1, static_cast<unsigned long>(n - i))) * b / Integer(i);
    if (i % 2 == 1) t = -t;
    acc += t;
  }
  Rational bn = exact::bernoulli_number(n) / (Integer(n) * Integer(n));
  if (n % 2 == 1) bn = -bn;
  w.lhs = bn - acc;
  w.rhs = make_rational(Integer(1), Integer(n) * Integer(n));
  w.holds = (w.lhs == w.rhs);
  return w;
}

// x^P-coefficient identity of the S_{1,2} series representation:
//   (-1)^P B_P H_{P-1}/P^2
//   - sum_i (-1)^i b_i/i [ C(P-1,P-i) H_{i-1}
//                          + sum_{m=i}^{P-1} C(m-1,m-i)/(P-m) ] = H_{P-1}/P^2
inline IdentityWitness s12_coefficient_identity(long P) {
  if (P < 1) throw domain_error("s12_coefficient_identity: P must be >= 1");
  IdentityWitness w;
  Rational b(0);
  Rational acc(0);
  for (long i = 1; i <= P; ++i) {
    Rational br = exact::bernoulli_number(i) / Integer(i);
    if (i % 2 == 1) br = -br;
    b += br;
    Rational bracket = Rational(binomial(P - 1, static_cast<unsigned long>(P - i))) *
                       exact::harmonic_number(i - 1);
    for (long m = i; m <= P - 1; ++m)
      bracket += make_rational(binomial(m - 1, static_cast<unsigned long>(m - i)), Integer(P - m));
    Rational t = b / Integer(i) * bracket;
    if (i % 2 == 1) t = -t;
    acc += t;
  }
  Rational bn = exact::bernoulli_number(P) * exact::harmonic_number(P - 1) /
                (Integer(P) * Integer(P));
  if (P % 2 == 1) bn = -bn;
  w.lhs = bn - acc;
  w.rhs = exact::harmonic_number(P - 1) / (Integer(P) * Integer(P));
  w.holds = (w.lhs == w.rhs);
  return w;
}

}  // namespace asymlog::polylog

#endif  // ASYMLOG_POLYLOG_HPP
