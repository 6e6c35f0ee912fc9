// SPDX-License-Identifier: Apache-2.0
//
// Sequence acceleration by the asymp_k trick: applying (1/k!) Delta^k n^k to
// a sequence with 1/n-power asymptotics annihilates the first k correction
// terms and gains roughly k digits of the limit.

#ifndef ASYMLOG_ACCEL_HPP
#define ASYMLOG_ACCEL_HPP

#include <vector>

#include "asymlog/real.hpp"

namespace asymlog::accel {

struct Sequence {
  long first_index = 1;
  std::vector<Real> values;

  size_t size() const { return values.size(); }
  long last_index() const { return first_index + static_cast<long>(values.size()) - 1; }
};

// t_n = (1/k!) Delta^k (n^k s_n), with n the absolute index and Delta the
// forward difference. Output keeps first_index; the length shrinks by k.
inline Sequence asympk_transform(const Sequence& s, long k) {
  if (k < 1) throw domain_error("asympk_transform: k must be >= 1");
  if (static_cast<size_t>(k) >= s.size())
    throw domain_error("asympk_transform: k must be smaller than the sequence length");

  // elevated working precision: the differences amplify cancellation by
  // ~ k*log2(n) bits
  mpfr_prec_t base = s.values.front().prec();
  double log2n = std::log2(static_cast<double>(s.last_index()) + 2.0);
  mpfr_prec_t prec = base + static_cast<mpfr_prec_t>(static_cast<double>(k) * log2n) + 32;

  std::vector<Real> work;
  work.reserve(s.size());
  for (size_t i = 0; i < s.size(); ++i) {
    long n = s.first_index + static_cast<long>(i);
    work.push_back(pow_si(Real(n, prec), k) * s.values[i].at_prec(prec));
  }
  for (long pass = 0; pass < k; ++pass) {
    for (size_t i = 0; i + 1 < work.size() - static_cast<size_t>(pass); ++i)
      work[i] = work[i + 1] - work[i];
  }
  work.resize(s.size() - static_cast<size_t>(k));

  Real kfact(factorial(static_cast<unsigned long>(k)), prec);
  Sequence out;
  out.first_index = s.first_index;
  out.values.reserve(work.size());
  for (auto& v : work) out.values.push_back(v / kfact);
  return out;
}

// Coefficient c_j of s_n = c_0 + c_1/n + c_2/n^2 + ... by iterating
// "subtract the constant, multiply by n", accelerating each level with
// asymp_k. Returns the estimate at the deepest available index.
inline Real extract_coefficient(const Sequence& s, long j, long k) {
  if (j < 0) throw domain_error("extract_coefficient: j must be >= 0");
  if (static_cast<size_t>(k + j) >= s.size())
    throw domain_error("extract_coefficient: sequence too short for k + j levels");

  Sequence cur = s;
  for (long level = 0;; ++level) {
    Sequence accel = asympk_transform(cur, k);
    Real c = accel.values.back();
    if (level == j) return c;
    // peel off the constant and promote the next coefficient
    mpfr_prec_t prec = accel.values.back().prec();
    Sequence next;
    next.first_index = cur.first_index;
    next.values.reserve(cur.size());
    for (size_t i = 0; i < cur.size(); ++i) {
      long n = cur.first_index + static_cast<long>(i);
      next.values.push_back((cur.values[i].at_prec(prec) - c) * Real(n, prec));
    }
    cur = std::move(next);
  }
}

// Count of leading decimal digits on which every stride-th term (up to five
// samples, counted back from the end) agrees; the claimed precision of the
// limit.
inline long digit_agreement(const Sequence& s, long stride = 80) {
  if (stride < 1) throw domain_error("digit_agreement: stride must be >= 1");
  if (s.size() < 2 * static_cast<size_t>(stride))
    throw domain_error("digit_agreement: need at least 2*stride terms");

  std::vector<Real> samples;
  long idx = static_cast<long>(s.size()) - 1;
  while (idx >= 0 && samples.size() < 5) {
    samples.push_back(s.values[static_cast<size_t>(idx)]);
    idx -= stride;
  }
  mpfr_prec_t prec = samples.front().prec();
  Real max_diff(prec);
  for (size_t i = 1; i < samples.size(); ++i) {
    Real d = abs(samples[i] - samples.front());
    if (d > max_diff) max_diff = d;
  }
  Real scale = abs(samples.front());
  if (scale.is_zero()) scale = Real(1.0, prec);
  long prec_digits = static_cast<long>(static_cast<double>(prec) / Precision::kLog2Of10) - 2;
  if (max_diff.is_zero()) return prec_digits;
  double rel = (max_diff / scale).to_double();
  if (rel <= 0) return prec_digits;
  long digits = static_cast<long>(std::floor(-std::log10(rel)));
  if (digits < 0) digits = 0;
  return std::min(digits, prec_digits);
}

}  // namespace asymlog::accel

#endif  // ASYMLOG_ACCEL_HPP
