// SPDX-License-Identifier: Apache-2.0
//
// Taylor coefficients of (z/(-log(1-z)))^k, their asymptotics through the
// reciprocal-gamma derivative constants g_i, and generalized Bernoulli
// (Norlund) polynomials B_n^{(m)}(alpha) with the links between the two.

#ifndef ASYMLOG_NORLUND_HPP
#define ASYMLOG_NORLUND_HPP

#include <mutex>
#include <vector>

#include "asymlog/exact.hpp"
#include "asymlog/real.hpp"

namespace asymlog::norlund {

struct PowerSeries {
  std::vector<Rational> c;  // coefficients 0..N

  long order() const { return static_cast<long>(c.size()) - 1; }
};

namespace detail {

inline PowerSeries multiply(const PowerSeries& a, const PowerSeries& b, long N) {
  PowerSeries out;
  out.c.assign(static_cast<size_t>(N) + 1, Rational(0));
  for (long i = 0; i <= std::min(N, a.order()); ++i) {
    if (a.c[static_cast<size_t>(i)] == 0) continue;
    long jmax = std::min(N - i, b.order());
    for (long j = 0; j <= jmax; ++j)
      out.c[static_cast<size_t>(i + j)] +=
          a.c[static_cast<size_t>(i)] * b.c[static_cast<size_t>(j)];
  }
  return out;
}

inline PowerSeries reciprocal(const PowerSeries& a, long N) {
  PowerSeries out;
  out.c.assign(static_cast<size_t>(N) + 1, Rational(0));
  out.c[0] = 1 / a.c[0];
  for (long n = 1; n <= N; ++n) {
    Rational acc(0);
    for (long i = 1; i <= std::min(n, a.order()); ++i)
      acc += a.c[static_cast<size_t>(i)] * out.c[static_cast<size_t>(n - i)];
    out.c[static_cast<size_t>(n)] = -acc / a.c[0];
  }
  return out;
}

inline PowerSeries power(PowerSeries base, long e, long N) {
  PowerSeries out;
  out.c.assign(static_cast<size_t>(N) + 1, Rational(0));
  out.c[0] = 1;
  while (e > 0) {
    if (e & 1) out = multiply(out, base, N);
    e >>= 1;
    if (e) base = multiply(base, base, N);
  }
  return out;
}

// shared exact row of (z/(-log(1-z))) coefficients, grown on demand
inline const PowerSeries& base_row(long N) {
  static std::mutex mu;
  static PowerSeries row;
  std::scoped_lock lock(mu);
  long have = row.order();
  if (have < N) {
    // reciprocal of -log(1-z)/z = sum z^i/(i+1), extended incrementally
    row.c.resize(static_cast<size_t>(N) + 1);
    if (have < 0) {
      row.c[0] = Rational(1);
      have = 0;
    }
    for (long n = have + 1; n <= N; ++n) {
      Rational acc(0);
      for (long i = 1; i <= n; ++i)
        acc += row.c[static_cast<size_t>(n - i)] / Integer(i + 1);
      row.c[static_cast<size_t>(n)] = -acc;
    }
  }
  return row;
}

}  // namespace detail

// Exact coefficients of (z/(-log(1-z)))^k to order N.
inline PowerSeries taylor_coeffs(int k, long N) {
  if (k < 1) throw domain_error("taylor_coeffs: k must be >= 1");
  if (N < 0) throw domain_error("taylor_coeffs: N must be >= 0");
  PowerSeries base;
  {
    const PowerSeries& row = detail::base_row(N);
    base.c.assign(row.c.begin(), row.c.begin() + N + 1);
  }
  if (k == 1) return base;
  return detail::power(std::move(base), k, N);
}

// a_n of (z/(-log(1-z)))^{k1+k2} as the Cauchy product of two exact rows;
// the cheap route to single higher-k coefficients.
inline Rational convolved_coeff(const PowerSeries& a, const PowerSeries& b, long n) {
  if (n > a.order() || n > b.order()) throw domain_error("convolved_coeff: row too short");
  Rational acc(0);
  for (long i = 0; i <= n; ++i)
    acc += a.c[static_cast<size_t>(i)] * b.c[static_cast<size_t>(n - i)];
  return acc;
}

// Floating fallback for long rows: same recurrence carried in Real.
inline std::vector<Real> taylor_coeffs_real(int k, long N, long digits) {
  if (k < 1) throw domain_error("taylor_coeffs_real: k must be >= 1");
  mpfr_prec_t prec = Precision::for_digits(digits, N + 1).bits();
  std::vector<Real> row(static_cast<size_t>(N) + 1, Real(prec));
  row[0] = Real(1.0, prec);
  for (long n = 1; n <= N; ++n) {
    Real acc(prec);
    for (long i = 1; i <= n; ++i) acc += row[static_cast<size_t>(n - i)] / Real(i + 1, prec);
    row[static_cast<size_t>(n)] = -acc;
  }
  if (k == 1) return row;
  std::vector<Real> out = row;
  for (int rep = 2; rep <= k; ++rep) {
    std::vector<Real> next(static_cast<size_t>(N) + 1, Real(prec));
    for (long i = 0; i <= N; ++i)
      for (long j = 0; i + j <= N; ++j)
        next[static_cast<size_t>(i + j)] += out[static_cast<size_t>(i)] * row[static_cast<size_t>(j)];
    out = std::move(next);
  }
  return out;
}

// g_i = d^i/d alpha^i |_0 of 1/Gamma(-alpha), built from the exact
// exponential series 1/Gamma(-alpha) = -alpha exp(-gamma alpha
// - sum_{j>=2} zeta(j) alpha^j / j).
inline std::vector<Real> recip_gamma_coeffs(long N, long digits = 30) {
  if (N < 0) throw domain_error("recip_gamma_coeffs: N must be >= 0");
  mpfr_prec_t prec = bits_for_digits(digits + 10);
  std::vector<Real> u(static_cast<size_t>(N) + 1, Real(prec));  // exponent series
  if (N >= 1) u[1] = -const_euler(prec);
  for (long j = 2; j <= N; ++j)
    u[static_cast<size_t>(j)] = -zeta_ui(static_cast<unsigned long>(j), prec) / Real(j, prec);

  std::vector<Real> e(static_cast<size_t>(N) + 1, Real(prec));  // exp(u)
  e[0] = Real(1.0, prec);
  for (long n = 1; n <= N; ++n) {
    Real acc(prec);
    for (long j = 1; j <= n; ++j)
      acc += Real(j, prec) * u[static_cast<size_t>(j)] * e[static_cast<size_t>(n - j)];
    e[static_cast<size_t>(n)] = acc / Real(n, prec);
  }

  // multiply by -alpha and scale by i!
  std::vector<Real> g(static_cast<size_t>(N) + 1, Real(prec));
  Real fact(1.0, prec);
  for (long i = 0; i <= N; ++i) {
    if (i >= 1) {
      fact *= Real(i, prec);
      g[static_cast<size_t>(i)] = -e[static_cast<size_t>(i - 1)] * fact;
    }
  }
  return g;
}

// Predicted a_n: sum_{i=1}^{terms} C(k+i-1, i) g_i / (n (log n)^{i+1}).
inline Real asymp_taylor(long n, int k, int terms, long digits = 30) {
  if (n < 3) throw domain_error("asymp_taylor: n must be >= 3");
  if (k < 1 || terms < 1) throw domain_error("asymp_taylor: need k, terms >= 1");
  mpfr_prec_t prec = bits_for_digits(digits);
  std::vector<Real> g = recip_gamma_coeffs(terms, digits);
  Real x(n, prec), ln = log(x);
  Real acc(prec);
  for (int i = 1; i <= terms; ++i) {
    Real coeff(binomial(k + i - 1, static_cast<unsigned long>(i)), prec);
    acc += coeff * g[static_cast<size_t>(i)] / (x * pow_si(ln, i + 1));
  }
  return acc;
}

// B_n^{(m)}(alpha) as an exact polynomial in alpha (coefficients of
// alpha^0..alpha^n), from (t/(e^t-1))^m e^{alpha t}.
inline std::vector<Rational> norlund_poly_coeffs(long n, long order) {
  if (n < 0) throw domain_error("norlund_poly_coeffs: n must be >= 0");
  PowerSeries s;  // (t/(e^t-1))^order
  if (order >= 0) {
    PowerSeries base;
    base.c.reserve(static_cast<size_t>(n) + 1);
    for (long j = 0; j <= n; ++j)
      base.c.push_back(exact::bernoulli_number(j) /
                       factorial(static_cast<unsigned long>(j)));
    s = detail::power(std::move(base), order, n);
  } else {
    PowerSeries base;  // (e^t-1)/t = sum t^j/(j+1)!
    base.c.reserve(static_cast<size_t>(n) + 1);
    for (long j = 0; j <= n; ++j)
      base.c.push_back(make_rational(Integer(1), factorial(static_cast<unsigned long>(j + 1))));
    s = detail::power(std::move(base), -order, n);
  }
  // B_n^{(m)}(alpha) = n! sum_i s_{n-i} alpha^i / i!
  std::vector<Rational> out(static_cast<size_t>(n) + 1);
  Integer nfac = factorial(static_cast<unsigned long>(n));
  for (long i = 0; i <= n; ++i)
    out[static_cast<size_t>(i)] = s.c[static_cast<size_t>(n - i)] *
                                  make_rational(nfac, factorial(static_cast<unsigned long>(i)));
  return out;
}

inline Rational norlund_poly(long n, long order, const Rational& alpha) {
  std::vector<Rational> coeffs = norlund_poly_coeffs(n, order);
  Rational acc(0);
  Rational apow(1);
  for (size_t i = 0; i < coeffs.size(); ++i) {
    acc += coeffs[i] * apow;
    apow *= alpha;
  }
  return acc;
}

// a_n == (-1)^n B_n^{(n-k+1)}(1)/n! for n <= N, and the Stirling link
// (-1)^n B_n^{(n+g+1)}(1) = n! g!/(n+g) S_{g-1,1,n+g-1} for g = 1..3.
inline bool verify_bernoulli_poly_link(int k, long N) {
  if (k < 1) throw domain_error("verify_bernoulli_poly_link: k must be >= 1");
  PowerSeries a = taylor_coeffs(k, N);
  for (long n = 0; n <= N; ++n) {
    Rational b = norlund_poly(n, n - k + 1, Rational(1)) /
                 factorial(static_cast<unsigned long>(n));
    if (n % 2 == 1) b = -b;
    if (a.c[static_cast<size_t>(n)] != b) return false;
  }
  for (long g = 1; g <= 3; ++g) {
    for (long n = 0; n <= std::min<long>(N, 12); ++n) {
      Rational lhs = norlund_poly(n, n + g + 1, Rational(1));
      if (n % 2 == 1) lhs = -lhs;
      Rational rhs = make_rational(factorial(static_cast<unsigned long>(n)) *
                                       factorial(static_cast<unsigned long>(g)),
                                   Integer(n + g)) *
                     exact::stirling_s(g - 1, 1, n + g - 1);
      if (lhs != rhs) return false;
    }
  }
  return true;
}

}  // namespace asymlog::norlund

#endif  // ASYMLOG_NORLUND_HPP
