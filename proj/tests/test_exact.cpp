// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>
#include <thread>

#include "asymlog/exact.hpp"
#include "asymlog/real.hpp"

using namespace asymlog;
using namespace asymlog::exact;

namespace {

// Independent Bernoulli oracle: Akiyama-Tanigawa. Produces the B_1 = +1/2
// convention, so compare with a sign flip at n = 1.
Rational bernoulli_akiyama_tanigawa(int n) {
  std::vector<Rational> a(static_cast<size_t>(n) + 1);
  for (int j = 0; j <= n; ++j) a[static_cast<size_t>(j)] = make_rational(1, j + 1);
  for (int i = 1; i <= n; ++i)
    for (int j = 0; j <= n - i; ++j) {
      size_t sj = static_cast<size_t>(j);
      a[sj] = Rational(Integer(j + 1) * (a[sj] - a[sj + 1]));
    }
  return a[0];
}

// Brute-force S_{r,s,t} by enumerating increasing index tuples.
Rational stirling_enumerate(int r, int s, int t) {
  Rational total(0);
  std::vector<long> idx(static_cast<size_t>(r));
  auto rec = [&](auto&& self, int pos, long lo) -> void {
    if (pos == r) {
      Rational prod(1);
      for (long v : idx) prod /= Integer(v);
      total += prod;
      return;
    }
    for (long v = lo; v <= t; ++v) {
      idx[static_cast<size_t>(pos)] = v;
      self(self, pos + 1, v + 1);
    }
  };
  if (r == 0) return t >= s - 1 ? Rational(1) : Rational(0);
  rec(rec, 0, s);
  return total;
}

}  // namespace

TEST_CASE("Bernoulli numbers: convention and oracle") {
  CHECK(bernoulli_number(0) == Rational(1));
  CHECK(bernoulli_number(1) == make_rational(-1, 2));
  CHECK(bernoulli_number(2) == make_rational(1, 6));   // B_2/2! = 1/12
  CHECK(bernoulli_number(4) == make_rational(-1, 30)); // B_4/4! = -1/720
  CHECK(bernoulli_number(3) == Rational(0));
  CHECK(bernoulli_number(12) == make_rational(-691, 2730));

  for (int n = 0; n <= 24; ++n) {
    Rational expected = bernoulli_akiyama_tanigawa(n);
    if (n == 1) expected = -expected;
    CHECK(bernoulli_number(n) == expected);
  }
}

TEST_CASE("Bernoulli recurrence (B+1)^n = B_n") {
  for (int n = 2; n <= 100; ++n) {
    Rational lhs(0);
    for (int r = 0; r <= n; ++r)
      lhs += Rational(binomial(n, static_cast<unsigned long>(r))) * bernoulli_number(r);
    CHECK(lhs == bernoulli_number(n));
  }
}

TEST_CASE("harmonic numbers") {
  CHECK(harmonic_number(3, 1) == make_rational(11, 6));
  CHECK(harmonic_number(0, 5) == Rational(0));
  CHECK(harmonic_number(4, 2) == make_rational(205, 144));
}

TEST_CASE("S_{r,s,t}: examples and enumeration oracle") {
  CHECK(stirling_s(1, 1, 3) == make_rational(11, 6));  // = H_3
  CHECK(stirling_s(3, 1, 2) == Rational(0));           // t < r+s-1
  CHECK(stirling_s(2, 1, 3) == Rational(1));
  CHECK(stirling_s(0, 3, 2) == Rational(1));           // t = s-1 convention
  CHECK(stirling_s(0, 3, 1) == Rational(0));
  CHECK(stirling_s(-1, 1, 5) == Rational(0));
  CHECK_THROWS_AS(stirling_s(1, 0, 3), domain_error);

  for (int r = 0; r <= 4; ++r)
    for (int s = 1; s <= 3; ++s)
      for (int t = 0; t <= 8; ++t) CHECK(stirling_s(r, s, t) == stirling_enumerate(r, s, t));
}

TEST_CASE("Stirling numbers of the first kind") {
  CHECK(stirling_first_kind(4, 2) == Integer(11));
  CHECK(stirling_first_kind(5, 5) == Integer(1));
  CHECK_THROWS_AS(stirling_first_kind(4, 5), domain_error);

  // expand x(x+1)(x+2)(x+3) directly: coefficients 0,6,11,6,1
  CHECK(stirling_first_kind(4, 1) == Integer(6));
  CHECK(stirling_first_kind(4, 3) == Integer(6));
  CHECK(stirling_first_kind(4, 4) == Integer(1));

  // S_{r,1,t} = [t+1, r+1]/t!
  for (int t = 1; t <= 40; ++t)
    for (int r = 0; r <= t; ++r)
      CHECK(stirling_s(r, 1, t) * factorial(static_cast<unsigned long>(t)) ==
            Rational(stirling_first_kind(t + 1, r + 1)));
}

TEST_CASE("partition formula for S_{r,1,n}") {
  CHECK(stirling_from_partitions(2, 3) == Rational(1));
  CHECK(stirling_from_partitions(2, 3) ==
        -harmonic_number(3, 2) / 2 + harmonic_number(3, 1) * harmonic_number(3, 1) / 2);
  CHECK(stirling_from_partitions(0, 7) == Rational(1));
  CHECK(stirling_from_partitions(4, 6) == stirling_s(4, 1, 6));

  for (int r = 0; r <= 12; ++r)
    for (int n = 0; n <= 60; n += (n < 10 ? 1 : 7))
      CHECK(stirling_from_partitions(r, n) == stirling_s(r, 1, n));
}

TEST_CASE("inverted partition formula for H_n^{(r)}") {
  CHECK(harmonic_from_stirlings(1, 5) == make_rational(137, 60));
  CHECK(harmonic_from_stirlings(2, 3) == make_rational(49, 36));
  CHECK(harmonic_from_stirlings(3, 4) == harmonic_number(4, 3));

  for (int r = 1; r <= 8; ++r)
    for (int n = 0; n <= 40; n += (n < 8 ? 1 : 5))
      CHECK(harmonic_from_stirlings(r, n) == harmonic_number(n, r));
}

TEST_CASE("c_{j,i} table") {
  CHECK(c_table(0, 2) == make_rational(-3, 2));
  CHECK(c_table(1, 3) == make_rational(1, 2));
  CHECK(c_table(2, 3) == make_rational(3, 2));
  CHECK(c_table(2, 3) == c_table(1, 3) - c_table(1, 2));
  CHECK_THROWS_AS(c_table(0, 1), domain_error);

  // c_{i-2,i} = (-1)^{i-1}/(i-1), c_{i-1,i} = (-1)^{i-1} H_{i-1}
  for (int i = 3; i <= 12; ++i) {
    Rational sgn = (i % 2 == 0) ? Rational(-1) : Rational(1);
    CHECK(c_table(i - 2, i) == sgn * make_rational(1, i - 1));
    CHECK(c_table(i - 1, i) == sgn * harmonic_number(i - 1));
  }

  // global recursion over the grid, including negative j
  for (long j = -10; j <= 20; ++j)
    for (long i = 3; i <= 12; ++i) CHECK(c_table(j, i) == c_table(j - 1, i) - c_table(j - 1, i - 1));
}

TEST_CASE("c_{j,i} anchor against the formal-sum identity") {
  // c_{-1,3} = -3, derived by reducing sum B_{2k}/(2k) (2k+1)(2k+2)/2 to the
  // base formal sums of the paper's first lemma
  CHECK(c_table(-1, 3) == Rational(-3));
  CHECK(c_table(0, 3) == Rational(-1));
}

TEST_CASE("n-r fixed regime: n! S_{n-2,1,n} closed form") {
  for (long n = 3; n <= 30; ++n) {
    Rational lhs = stirling_s(n - 2, 1, n) * factorial(static_cast<unsigned long>(n));
    Rational rhs = make_rational(Integer(n) * Integer(n + 1) * (Integer(3) * n * n - n - 2), 24);
    CHECK(lhs == rhs);
  }
}

TEST_CASE("leading Stirling asymptotics at n = 10^6") {
  // S_{r,1,n} ~ (log n)^r/r! + gamma (log n)^{r-1}/(r-1)!
  //             + (gamma^2 - zeta(2)) (log n)^{r-2}/(2 (r-2)!)
  const long n = 1000000;
  mpfr_prec_t prec = bits_for_digits(40);
  Real ln = log(Real(n, prec));
  Real g = const_euler(prec);
  Real z2 = zeta_ui(2, prec);

  // H_n^{(i)} at n = 10^6 from the Euler-Maclaurin forms (error far below
  // the tolerance of this check)
  auto hn = [&](int i) -> Real {
    if (i == 1) {
      Real v = ln + g + Real(make_rational(1, 2 * n), prec);
      for (int k = 1; k <= 3; ++k)
        v -= Real(Rational(bernoulli_number(2 * k) / Integer(2 * k)), prec) /
             pow_si(Real(n, prec), 2 * k);
      return v;
    }
    Real v = zeta_ui(static_cast<unsigned long>(i), prec);
    v -= Real(make_rational(1, i - 1), prec) / pow_si(Real(n, prec), i - 1);
    v += Real(make_rational(1, 2), prec) / pow_si(Real(n, prec), i);
    return v;
  };

  for (int r = 1; r <= 3; ++r) {
    // partition formula evaluated with Real harmonic values
    Real value(prec);
    for (const Partition& part : partitions(r)) {
      Real prod(1.0, prec);
      for (const auto& e : part.parts) {
        Real base = hn(static_cast<int>(e.part)) / Real(e.part, prec);
        Real fac = pow_si(base, e.mult) / Real(factorial(static_cast<unsigned long>(e.mult)), prec);
        if (e.mult % 2 == 1) fac = -fac;
        prod *= fac;
      }
      value += prod;
    }
    if (r % 2 == 1) value = -value;

    Real three_terms = pow_si(ln, r) / Real(factorial(static_cast<unsigned long>(r)), prec);
    three_terms += g * pow_si(ln, r - 1) / Real(factorial(static_cast<unsigned long>(r - 1)), prec);
    if (r >= 2)
      three_terms += (g * g - z2) * pow_si(ln, r - 2) /
                     (Real(2, prec) * Real(factorial(static_cast<unsigned long>(r - 2)), prec));

    Real bound = pow_si(ln, r - 3) * Real(10, prec);
    CHECK(abs(value - three_terms) < bound);
  }
}

TEST_CASE("memo caches are safe under concurrent use") {
  std::vector<std::thread> workers;
  std::vector<Rational> results(8);
  for (int t = 0; t < 8; ++t)
    workers.emplace_back([t, &results] {
      Rational acc(0);
      for (int n = 0; n <= 60; ++n) acc += bernoulli_number(n) + stirling_s(3, 1, n);
      results[static_cast<size_t>(t)] = acc;
    });
  for (auto& w : workers) w.join();
  for (int t = 1; t < 8; ++t) CHECK(results[static_cast<size_t>(t)] == results[0]);
}

TEST_CASE("rational serialization") {
  CHECK(to_string(make_rational(-11, 6)) == "-11/6");
  CHECK(to_string(make_rational(4, 2)) == "2");
  CHECK(rational_from_string("-11/6") == make_rational(-11, 6));
}
