// SPDX-License-Identifier: Apache-2.0
//
// Exact-rational combinatorics: Bernoulli numbers, generalized harmonic
// numbers, the S_{r,s,t} array, Stirling numbers of the first kind, integer
// partitions and the c_{j,i} constant table.
//
// All values are memoized; caches allow concurrent readers with serialized
// writers, and every returned value is immutable.

#ifndef ASYMLOG_EXACT_HPP
#define ASYMLOG_EXACT_HPP

#include <map>
#include <mutex>
#include <shared_mutex>
#include <tuple>
#include <vector>

#include "asymlog/rational.hpp"

namespace asymlog::exact {

namespace detail {

template <typename Key, typename Value>
class MemoTable {
 public:
  template <typename Fn>
  Value get_or_compute(const Key& key, Fn&& fn) {
    {
      std::shared_lock lock(mu_);
      auto it = map_.find(key);
      if (it != map_.end()) return it->second;
    }
    Value v = fn();  // may recurse into this table
    std::unique_lock lock(mu_);
    return map_.emplace(key, std::move(v)).first->second;
  }

 private:
  std::shared_mutex mu_;
  std::map<Key, Value> map_;
};

}  // namespace detail

// Bernoulli number B_n, convention B_1 = -1/2, so the recurrence
// sum_{r=0}^{n} C(n,r) B_r = B_n holds for n >= 2.
inline Rational bernoulli_number(long n) {
  if (n < 0) throw domain_error("bernoulli_number: n must be >= 0");
  if (n == 0) return Rational(1);
  if (n == 1) return make_rational(-1, 2);
  if (n % 2 == 1) return Rational(0);
  static detail::MemoTable<long, Rational> memo;
  return memo.get_or_compute(n, [n] {
    // From sum_{r=0}^{m-1} C(m,r) B_r = 0 with m = n+1.
    Rational acc(0);
    for (long r = 0; r < n; ++r)
      acc += Rational(binomial(n + 1, static_cast<unsigned long>(r))) * bernoulli_number(r);
    return Rational(-acc / Integer(n + 1));
  });
}

// Generalized harmonic number H_n^{(i)} = sum_{k=1}^{n} k^{-i}; H_0 = 0.
inline Rational harmonic_number(long n, long i = 1) {
  if (n < 0) throw domain_error("harmonic_number: n must be >= 0");
  if (i < 1) throw domain_error("harmonic_number: i must be >= 1");
  static detail::MemoTable<std::pair<long, long>, Rational> memo;
  return memo.get_or_compute({n, i}, [n, i] {
    if (n == 0) return Rational(0);
    return Rational(harmonic_number(n - 1, i) +
                    make_rational(Integer(1), pow_int(Integer(n), static_cast<unsigned long>(i))));
  });
}

// S_{r,s,t} = sum over s <= i_1 < ... < i_r <= t of 1/(i_1 ... i_r).
// Zero for r < 0 or t < r+s-1; S_{0,s,t} = 1 when t >= s-1.
inline Rational stirling_s(long r, long s, long t) {
  if (s < 1) throw domain_error("stirling_s: s must be >= 1");
  if (r < 0) return Rational(0);
  if (r == 0) return t >= s - 1 ? Rational(1) : Rational(0);
  if (t < r + s - 1) return Rational(0);
  static detail::MemoTable<std::tuple<long, long, long>, Rational> memo;
  return memo.get_or_compute({r, s, t}, [r, s, t] {
    // Split on whether i_r = t.
    return Rational(stirling_s(r, s, t - 1) + stirling_s(r - 1, s, t - 1) / Integer(t));
  });
}

// Unsigned Stirling number of the first kind [n, k],
// sum_k [n,k] x^k = x(x+1)...(x+n-1).
inline Integer stirling_first_kind(long n, long k) {
  if (n < 1) throw domain_error("stirling_first_kind: n must be >= 1");
  if (k < 0 || k > n) throw domain_error("stirling_first_kind: need 0 <= k <= n");
  static detail::MemoTable<std::pair<long, long>, Integer> memo;
  return memo.get_or_compute({n, k}, [n, k]() -> Integer {
    if (n == 1) return Integer(k == 1 ? 1 : 0);
    if (k == 0) return Integer(0);
    // [n,k] = [n-1,k-1] + (n-1)[n-1,k]
    Integer v = stirling_first_kind(n - 1, k - 1);
    if (k <= n - 1) v += Integer(n - 1) * stirling_first_kind(n - 1, k);
    return v;
  });
}

// A partition r = sum_j mult_j * part_j with distinct parts in increasing
// order.
struct Partition {
  struct Entry {
    long part;
    long mult;
  };
  std::vector<Entry> parts;
};

// All partitions of r, parts listed in increasing value order.
inline std::vector<Partition> partitions(long r) {
  if (r < 0) throw domain_error("partitions: r must be >= 0");
  std::vector<Partition> out;
  Partition cur;
  // Recursive enumeration with strictly increasing part values.
  auto rec = [&](auto&& self, long remaining, long min_part) -> void {
    if (remaining == 0) {
      out.push_back(cur);
      return;
    }
    for (long part = min_part; part <= remaining; ++part) {
      for (long mult = 1; mult * part <= remaining; ++mult) {
        cur.parts.push_back({part, mult});
        self(self, remaining - mult * part, part + 1);
        cur.parts.pop_back();
      }
    }
  };
  rec(rec, r, 1);
  return out;
}

// S_{r,1,n} via the partition sum
//   (-1)^r sum_{{r}} prod_j (-1)^{i_j}/i_j! (H_n^{(r_j)}/r_j)^{i_j}.
inline Rational stirling_from_partitions(long r, long n) {
  if (r < 0 || n < 0) throw domain_error("stirling_from_partitions: need r,n >= 0");
  Rational total(0);
  for (const Partition& part : partitions(r)) {
    Rational prod(1);
    for (const auto& e : part.parts) {
      Rational base = harmonic_number(n, e.part) / Integer(e.part);
      Rational fac = pow_rat(base, e.mult) / factorial(static_cast<unsigned long>(e.mult));
      if (e.mult % 2 == 1) fac = -fac;
      prod *= fac;
    }
    total += prod;
  }
  if (r % 2 == 1) total = -total;
  return total;
}

// Inverse of the partition formula:
//   H_n^{(r)} = (-1)^r r sum_{{r}} (-1)^{i_1+...+i_l}
//               (i_1+...+i_l-1)!/(i_1!...i_l!) prod_j S_{r_j,1,n}^{i_j}.
inline Rational harmonic_from_stirlings(long r, long n) {
  if (r < 1) throw domain_error("harmonic_from_stirlings: r must be >= 1");
  if (n < 0) throw domain_error("harmonic_from_stirlings: n must be >= 0");
  Rational total(0);
  for (const Partition& part : partitions(r)) {
    long msum = 0;
    Rational prod(1);
    for (const auto& e : part.parts) {
      msum += e.mult;
      prod *= pow_rat(stirling_s(e.part, 1, n), e.mult);
      prod /= factorial(static_cast<unsigned long>(e.mult));
    }
    prod *= factorial(static_cast<unsigned long>(msum - 1));
    if (msum % 2 == 1) prod = -prod;
    total += prod;
  }
  total *= Integer(r);
  if (r % 2 == 1) total = -total;
  return total;
}

namespace detail {

// Closed form c_{j,i} = (-1)^{j+1} j! / ((i-1)(i-2)...(i-j-1)),
// valid for 1 <= j <= i-2.
inline Rational c_table_closed(long j, long i) {
  Integer den = 1;
  for (long f = i - 1; f >= i - j - 1; --f) den *= Integer(f);
  Rational v = make_rational(factorial(static_cast<unsigned long>(j)), den);
  if (j % 2 == 0) v = -v;
  return v;
}

}  // namespace detail

// Constants c_{j,i} of the zeta-value decomposition of the formal sums
// sum B_{2k}/(2k) (2k-j)...(2k+i-2-j)/(i-1)!. Seeded by c_{j,2} = (j-3)/2
// and by the closed form on 1 <= j <= i-2; extended over all j in Z by the
// recursion c_{j,i} = c_{j-1,i} - c_{j-1,i-1}.
inline Rational c_table(long j, long i) {
  if (i < 2) throw domain_error("c_table: i must be >= 2");
  if (i == 2) return make_rational(j - 3, 2);
  if (j >= 1 && j <= i - 2) return detail::c_table_closed(j, i);
  static detail::MemoTable<std::pair<long, long>, Rational> memo;
  return memo.get_or_compute({j, i}, [j, i]() -> Rational {
    if (j >= i - 1) return c_table(j - 1, i) - c_table(j - 1, i - 1);
    return c_table(j + 1, i) + c_table(j, i - 1);  // descending j <= 0
  });
}

}  // namespace asymlog::exact

#endif  // ASYMLOG_EXACT_HPP
