// SPDX-License-Identifier: Apache-2.0
//
// Constant extraction: gamma, Stieltjes constants gamma_p, zeta^(p)(a) for
// integer a (a >= 2 or a <= 0), generalized Glaisher constants, and the
// C_{p,q} array, each obtained as (direct finite sum) minus (all
// non-constant expansion terms) at large n, with optimal truncation of the
// Euler-Maclaurin tail.

#ifndef ASYMLOG_CONSTANTS_HPP
#define ASYMLOG_CONSTANTS_HPP

#include <array>
#include <cstdlib>
#include <future>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <vector>

#include "asymlog/accel.hpp"
#include "asymlog/expansion.hpp"

namespace asymlog::constants {

struct ConstantResult {
  Real value{128};
  long digits_claimed = 0;
  long n_used = 0;
  long m_used = 0;
  Real residual_estimate{128};
};

inline long max_digits_budget() {
  if (const char* env = std::getenv("ASYMLOG_MAX_DIGITS")) {
    long v = std::atol(env);
    if (v > 0) return v;
  }
  return 100;
}

inline void check_budget(long digits) {
  if (digits < 1) throw domain_error("digits must be >= 1");
  if (digits > max_digits_budget())
    throw budget_error("requested digits " + std::to_string(digits) +
                       " exceed the budget (ASYMLOG_MAX_DIGITS)");
}

// --- Euler's gamma via the asymp_k trick on H_n - log n ------------------------

inline Real euler_gamma_accel(long digits) {
  long k = std::min<long>(digits + 10, 60);
  long n_terms = 420;
  long work_digits = digits + 2 * k / 3 + 10;
  mpfr_prec_t prec = bits_for_digits(work_digits);
  accel::Sequence s;
  s.first_index = 1;
  s.values.reserve(static_cast<size_t>(n_terms));
  Real h(prec);
  for (long n = 1; n <= n_terms; ++n) {
    h += Real(1.0, prec) / Real(n, prec);
    s.values.push_back(h - log(Real(n, prec)));
  }
  accel::Sequence t = accel::asympk_transform(s, k);
  return t.values.back().at_prec(bits_for_digits(digits));
}

// --- write-once constant cache --------------------------------------------------

class ConstantCache {
 public:
  Real get(const Symbol& s, long digits) {
    {
      std::shared_lock lock(mu_);
      auto it = map_.find(s);
      if (it != map_.end() && it->second.second >= digits)
        return it->second.first.at_prec(bits_for_digits(digits));
    }
    Real v = compute(s, digits);
    std::unique_lock lock(mu_);
    auto it = map_.find(s);
    if (it == map_.end() || it->second.second < digits) map_[s] = {v, digits};
    return v;
  }

  static ConstantCache& instance() {
    static ConstantCache c;
    return c;
  }

 private:
  Real compute(const Symbol& s, long digits);

  std::shared_mutex mu_;
  std::map<Symbol, std::pair<Real, long>> map_;
};

// Resolver backed by the global cache; every symbol the expansions can emit
// is computable here.
inline Resolver default_resolver() {
  return [](const Symbol& s, long digits) { return ConstantCache::instance().get(s, digits); };
}

// --- generic extraction engine ---------------------------------------------------

// Computes the value of the expansion's constant slot as
// direct_sum(n) - (non-constant terms at n), growing n geometrically until
// the optimal-truncation residual of the Euler-Maclaurin tail meets the
// digit target.
inline ConstantResult extract_constant(expansions::Family fam, int p, int q, long digits,
                                       const std::vector<ConstExpr>* dblock = nullptr) {
  check_budget(digits);
  const long work = digits + 10;
  mpfr_prec_t prec = bits_for_digits(work);
  Real target = pow_si(Real(10.0, prec), -(digits + 3));

  const int m = 25;  // optimal truncation trims the tail well before the
                     // divergence knee 2m ~ 2 pi n at the n we use
  long n = 64;
  const long n_cap = 100000;
  expansions::AsymptoticExpansion e = expansions::expand(fam, p, q, m, dblock);
  Resolver resolve = default_resolver();

  for (;;) {
    Real residual(prec);
    Real tail = expansions::evaluate_nonconstant_optimal(e, n, resolve, work, &residual);
    if (residual < target || n >= n_cap) {
      if (!(residual < target))
        throw budget_error("extract_constant: cannot reach " + std::to_string(digits) +
                           " digits within the n budget");
      Real direct = expansions::direct_sum(fam, p, q, n, work);
      ConstantResult res;
      res.value = direct - tail;
      res.n_used = n;
      res.m_used = m;
      res.residual_estimate = residual;
      res.digits_claimed = digits;
      return res;
    }
    n *= 2;
  }
}

// Solves the constant slot for one symbol: extraction gives the numeric
// value of the whole ConstExpr constant; subtract the other (resolvable)
// pieces and divide by the target's rational coefficient.
inline ConstantResult extract_symbol(expansions::Family fam, int p, int q, const Symbol& want,
                                     long digits, const std::vector<ConstExpr>* dblock = nullptr) {
  ConstantResult res = extract_constant(fam, p, q, digits, dblock);
  expansions::AsymptoticExpansion e = expansions::expand(fam, p, q, 1, dblock);
  Rational coeff = e.constant.coefficient_of(want);
  if (coeff == 0) throw domain_error("extract_symbol: symbol absent from the constant slot");
  mpfr_prec_t prec = res.value.prec();
  Real rest(prec);
  for (const auto& [sym, c] : e.constant.terms()) {
    if (sym == want) continue;
    if (sym == Symbol::one())
      rest += Real(c, prec);
    else
      rest += Real(c, prec) * ConstantCache::instance().get(sym, digits + 5);
  }
  res.value = (res.value - rest) / Real(coeff, prec);
  return res;
}

// --- the named operations ---------------------------------------------------------

// zeta^(p)(a) for integer a >= 2 or a <= 0 (p = 0 gives zeta itself;
// zeta(-q) is exact rational -B_{q+1}/(q+1)).
inline ConstantResult zeta_derivative(int p, int a, long digits) {
  if (p < 0) throw domain_error("zeta_derivative: p must be >= 0");
  if (a == 1) throw domain_error("zeta_derivative: pole at a = 1");
  if (a < -60 || a > 60) throw budget_error("zeta_derivative: |a| too large");
  check_budget(digits);
  if (p == 0 && a <= 0) {
    ConstantResult r;
    Rational z = a == 0 ? make_rational(-1, 2)
                        : Rational(-exact::bernoulli_number(-a + 1) / Integer(-a + 1));
    r.value = Real(z, bits_for_digits(digits));
    r.digits_claimed = digits;
    r.residual_estimate = Real(bits_for_digits(digits));
    return r;
  }
  if (a >= 2) {
    // constant of S1(p, a) is (-1)^p zeta^(p)(a)
    ConstantResult r = extract_constant(expansions::Family::S1, p, a, digits);
    if (p % 2 == 1) r.value = -r.value;
    return r;
  }
  // a = -q <= 0: solve the S2 constant (-1)^p zeta^(p)(-q) + B_{q+1}/(q+1) p! S_{p,1,q}
  int q = -a;
  ConstantResult r = extract_constant(expansions::Family::S2, p, q, digits);
  mpfr_prec_t prec = r.value.prec();
  Rational shift = exact::bernoulli_number(q + 1) / Integer(q + 1) *
                   factorial(static_cast<unsigned long>(p)) * exact::stirling_s(p, 1, q);
  r.value -= Real(shift, prec);
  if (p % 2 == 1) r.value = -r.value;
  return r;
}

// Stieltjes constant gamma_p (gamma for p = 0), the constant of S1(p, 1).
inline ConstantResult stieltjes(int p, long digits) {
  if (p < 0) throw domain_error("stieltjes: p must be >= 0");
  return extract_constant(expansions::Family::S1, p, 1, digits);
}

// Generalized Glaisher constant -zeta'(-q) + B_{q+1} H_q / (q+1),
// the constant of S2(1, q).
inline ConstantResult glaisher(int q, long digits) {
  if (q < 0) throw domain_error("glaisher: q must be >= 0");
  return extract_constant(expansions::Family::S2, 1, q, digits);
}

// C_{p,q}, the constant of the fourth family.
inline ConstantResult cpq(int p, int q, long digits) {
  if (p < 1) throw domain_error("cpq: p must be >= 1");
  if (q < 0) throw domain_error("cpq: q must be >= 0");
  return extract_constant(expansions::Family::S4, p, q, digits);
}

inline Real ConstantCache::compute(const Symbol& s, long digits) {
  mpfr_prec_t prec = bits_for_digits(digits);
  switch (s.kind) {
    case Symbol::Kind::One:
      return Real(1.0, prec);
    case Symbol::Kind::Gamma:
      return euler_gamma_accel(digits);
    case Symbol::Kind::Stieltjes:
      return stieltjes(s.p, digits).value;
    case Symbol::Kind::Zeta:
      return zeta_ui(static_cast<unsigned long>(s.a), prec);
    case Symbol::Kind::ZetaDeriv:
      return zeta_derivative(s.p, s.a, digits).value;
    case Symbol::Kind::Log2PiHalf:
      return const_log2pi_half(prec);
    case Symbol::Kind::Cpq:
      return cpq(s.p, s.q, digits).value;
    case Symbol::Kind::Glaisher:
      return glaisher(s.q, digits).value;
  }
  throw domain_error("unresolvable symbol: " + s.name());
}

// --- Table 1 and the decay fit ------------------------------------------------------

struct Table1 {
  // rows p = 1..6, columns q = 0..4
  std::array<std::array<Real, 5>, 6> c;
  std::array<std::array<Real, 5>, 6> reference;  // 2^{-q} (log 2)^{-p}
};

inline Table1 table1(long digits = 6, int jobs = 1) {
  Table1 t;
  mpfr_prec_t prec = bits_for_digits(digits + 4);
  auto cell = [digits](int p, int q) { return cpq(p, q, digits + 4).value; };
  if (jobs <= 1) {
    for (int p = 1; p <= 6; ++p)
      for (int q = 0; q <= 4; ++q) t.c[p - 1][q] = cell(p, q);
  } else {
    std::vector<std::future<Real>> futs;
    for (int p = 1; p <= 6; ++p)
      for (int q = 0; q <= 4; ++q)
        futs.push_back(std::async(std::launch::async, cell, p, q));
    size_t i = 0;
    for (int p = 1; p <= 6; ++p)
      for (int q = 0; q <= 4; ++q) t.c[p - 1][q] = futs[i++].get();
  }
  Real log2 = log(Real(2.0, prec));
  for (int p = 1; p <= 6; ++p)
    for (int q = 0; q <= 4; ++q)
      t.reference[p - 1][q] = pow_si(Real(2.0, prec), -q) * pow_si(log2, -p);
  return t;
}

struct DecayFit {
  double a = 0, b = 0, c = 0, d = 0;
  double rms_residual = 0;     // relative rms of the fitted model
  double rms_after_named = 0;  // relative rms after subtracting the exact
                               // 3^{-q}(log 3)^{-p} and 4^{-q}(log 4)^{-p}
                               // tails (vs 1 for Delta itself)
};

namespace detail {

// weighted no-intercept fit of log Delta ~ -a p - b q on positive residuals
inline std::pair<double, double> log_linear_exponents(
    const std::vector<std::array<double, 3>>& data) {
  double m00 = 0, m01 = 0, m11 = 0, v0 = 0, v1 = 0;
  for (const auto& d : data) {
    if (d[2] <= 0) continue;
    double y = std::log(d[2]);
    m00 += d[0] * d[0];
    m01 += d[0] * d[1];
    m11 += d[1] * d[1];
    v0 += -d[0] * y;
    v1 += -d[1] * y;
  }
  double det = m00 * m11 - m01 * m01;
  return {(v0 * m11 - v1 * m01) / det, (m00 * v1 - m01 * v0) / det};
}

}  // namespace detail

// Least-squares fit of Delta_{p,q} = C_{p,q} - 2^{-q} (log 2)^{-p} to
// e^{-ap-bq} + e^{-cp-dq} (+ one more exponential absorbing the next tail
// term) over the given ranges; Gauss-Newton on relative residuals, seeded by
// sequentially peeling log-linear fits.
inline DecayFit cpq_decay_fit(int p_lo, int p_hi, int q_lo, int q_hi, long digits = 8) {
  if (p_hi < p_lo || q_hi < q_lo) throw domain_error("cpq_decay_fit: empty range");
  std::vector<std::array<double, 3>> data;  // {p, q, Delta}
  for (int p = p_lo; p <= p_hi; ++p)
    for (int q = q_lo; q <= q_hi; ++q) {
      double c = cpq(p, q, digits).value.to_double();
      double ref = std::pow(2.0, -q) * std::pow(std::log(2.0), -p);
      data.push_back({static_cast<double>(p), static_cast<double>(q), c - ref});
    }
  size_t npos = 0;
  for (auto& d : data)
    if (d[2] > 0) npos++;
  if (npos < 7) throw domain_error("cpq_decay_fit: underdetermined fit (too few usable cells)");

  // sequential peeling: fit one exponential, subtract, fit the next
  constexpr int kExp = 4;
  double th[2 * kExp];
  {
    std::vector<std::array<double, 3>> work = data;
    for (int e = 0; e < kExp; ++e) {
      auto [ae, be] = detail::log_linear_exponents(work);
      th[2 * e] = ae;
      th[2 * e + 1] = be;
      for (auto& d : work) d[2] -= std::exp(-ae * d[0] - be * d[1]);
    }
  }

  // Gauss-Newton refinement on relative residuals
  constexpr int kP = 2 * kExp;
  for (int iter = 0; iter < 300; ++iter) {
    double jtj[kP][kP] = {};
    double jtr[kP] = {};
    for (auto& d : data) {
      double w = 1.0 / std::max(std::fabs(d[2]), 1e-9);
      double model = 0;
      double ev[kExp];
      for (int e = 0; e < kExp; ++e) {
        ev[e] = std::exp(-th[2 * e] * d[0] - th[2 * e + 1] * d[1]);
        model += ev[e];
      }
      double r = (model - d[2]) * w;
      double jac[kP];
      for (int e = 0; e < kExp; ++e) {
        jac[2 * e] = -d[0] * ev[e] * w;
        jac[2 * e + 1] = -d[1] * ev[e] * w;
      }
      for (int i = 0; i < kP; ++i) {
        jtr[i] += jac[i] * r;
        for (int j = 0; j < kP; ++j) jtj[i][j] += jac[i] * jac[j];
      }
    }
    double mm[kP][kP + 1];
    for (int i = 0; i < kP; ++i) {
      for (int j = 0; j < kP; ++j) mm[i][j] = jtj[i][j];
      mm[i][i] *= 1.0 + 1e-10;
      mm[i][kP] = -jtr[i];
    }
    for (int c0 = 0; c0 < kP; ++c0) {
      int piv = c0;
      for (int r = c0 + 1; r < kP; ++r)
        if (std::fabs(mm[r][c0]) > std::fabs(mm[piv][c0])) piv = r;
      for (int cc = 0; cc <= kP; ++cc) std::swap(mm[piv][cc], mm[c0][cc]);
      for (int r = c0 + 1; r < kP; ++r) {
        double f = mm[r][c0] / mm[c0][c0];
        for (int cc = c0; cc <= kP; ++cc) mm[r][cc] -= f * mm[c0][cc];
      }
    }
    double step[kP];
    double norm = 0;
    for (int i = kP - 1; i >= 0; --i) {
      double v = mm[i][kP];
      for (int cc = i + 1; cc < kP; ++cc) v -= mm[i][cc] * step[cc];
      step[i] = v / mm[i][i];
    }
    for (int i = 0; i < kP; ++i) {
      if (!std::isfinite(step[i])) return DecayFit{};  // degenerate; keep last state
      if (step[i] > 0.5) step[i] = 0.5;
      if (step[i] < -0.5) step[i] = -0.5;
      th[i] += step[i];
      norm += step[i] * step[i];
    }
    if (norm < 1e-26) break;
  }

  // canonical order: slowest-decaying exponential in q first
  std::array<int, kExp> order = {0, 1, 2, 3};
  std::sort(order.begin(), order.end(),
            [&](int x, int y) { return th[2 * x + 1] < th[2 * y + 1]; });

  DecayFit out;
  out.a = th[2 * order[0]];
  out.b = th[2 * order[0] + 1];
  out.c = th[2 * order[1]];
  out.d = th[2 * order[1] + 1];
  double s_model = 0, s_named = 0;
  for (auto& d : data) {
    double model = 0;
    for (int e = 0; e < kExp; ++e) model += std::exp(-th[2 * e] * d[0] - th[2 * e + 1] * d[1]);
    double named = std::pow(3.0, -d[1]) * std::pow(std::log(3.0), -d[0]) +
                   std::pow(4.0, -d[1]) * std::pow(std::log(4.0), -d[0]);
    double w = 1.0 / std::max(std::fabs(d[2]), 1e-12);
    s_model += (d[2] - model) * (d[2] - model) * w * w;
    s_named += (d[2] - named) * (d[2] - named) * w * w;
  }
  out.rms_residual = std::sqrt(s_model / static_cast<double>(data.size()));
  out.rms_after_named = std::sqrt(s_named / static_cast<double>(data.size()));
  return out;
}

}  // namespace asymlog::constants

#endif  // ASYMLOG_CONSTANTS_HPP
