// SPDX-License-Identifier: Apache-2.0
//
// ConstExpr: exact linear combinations over Q of named mathematical
// constants (gamma, Stieltjes gamma_p, zeta(s), zeta^(p)(a), C_{p,q},
// Glaisher constants). These are the coefficients and constant terms of the
// asymptotic expansions.

#ifndef ASYMLOG_CONST_EXPR_HPP
#define ASYMLOG_CONST_EXPR_HPP

#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "asymlog/exact.hpp"
#include "asymlog/rational.hpp"
#include "asymlog/real.hpp"

namespace asymlog {

struct Symbol {
  enum class Kind {
    One,         // the rational unit
    Gamma,       // Euler's gamma
    Stieltjes,   // gamma_p, p >= 1 (gamma_0 canonicalizes to Gamma)
    Zeta,        // zeta(a), integer a >= 2
    ZetaDeriv,   // zeta^(p)(a), p >= 1, integer a (a >= 2 or a <= 0)
    Log2PiHalf,  // (1/2) log(2 pi)
    Cpq,         // C_{p,q} constants of the fourth family
    Glaisher,    // generalized Glaisher constant of index q
  };

  Kind kind = Kind::One;
  int p = 0;
  int a = 0;
  int q = 0;

  static Symbol one() { return {}; }
  static Symbol gamma() { return {Kind::Gamma, 0, 0, 0}; }
  static Symbol stieltjes(int p) {
    if (p == 0) return gamma();
    return {Kind::Stieltjes, p, 0, 0};
  }
  static Symbol zeta(int a) { return {Kind::Zeta, 0, a, 0}; }
  static Symbol zeta_deriv(int p, int a) {
    if (p == 0) return zeta(a);
    return {Kind::ZetaDeriv, p, a, 0};
  }
  static Symbol log2pi_half() { return {Kind::Log2PiHalf, 0, 0, 0}; }
  static Symbol cpq(int p, int q) { return {Kind::Cpq, p, 0, q}; }
  static Symbol glaisher(int q) { return {Kind::Glaisher, 0, 0, q}; }

  friend bool operator<(const Symbol& x, const Symbol& y) {
    return std::tie(x.kind, x.p, x.a, x.q) < std::tie(y.kind, y.p, y.a, y.q);
  }
  friend bool operator==(const Symbol& x, const Symbol& y) {
    return std::tie(x.kind, x.p, x.a, x.q) == std::tie(y.kind, y.p, y.a, y.q);
  }

  std::string name() const {
    std::ostringstream os;
    switch (kind) {
      case Kind::One: return "1";
      case Kind::Gamma: return "gamma";
      case Kind::Stieltjes: os << "gamma_" << p; break;
      case Kind::Zeta: os << "zeta(" << a << ")"; break;
      case Kind::ZetaDeriv: os << "zeta^(" << p << ")(" << a << ")"; break;
      case Kind::Log2PiHalf: return "log(2pi)/2";
      case Kind::Cpq: os << "C_{" << p << "," << q << "}"; break;
      case Kind::Glaisher: os << "glaisher(" << q << ")"; break;
    }
    return os.str();
  }
};

// Resolves a symbol to a numeric value at the requested digit count.
using Resolver = std::function<Real(const Symbol&, long digits)>;

class ConstExpr {
 public:
  ConstExpr() = default;
  /*implicit*/ ConstExpr(Rational r) { add(Symbol::one(), std::move(r)); }
  ConstExpr(const Symbol& s, Rational coeff) { add(s, std::move(coeff)); }

  static ConstExpr zero() { return ConstExpr(); }

  // zeta(a) and zeta^(p)(a) with the rational special cases folded in:
  // zeta(0) = -1/2 and zeta(-q) = -B_{q+1}/(q+1) for q >= 1 (the fold for
  // q = 0 flips under the B_1 = -1/2 convention).
  static ConstExpr zeta_value(int p, int a, Rational coeff) {
    ConstExpr e;
    if (p == 0 && a <= 0) {
      Rational z = a == 0 ? make_rational(-1, 2)
                          : Rational(-exact::bernoulli_number(-a + 1) / Integer(-a + 1));
      e.add(Symbol::one(), coeff * z);
    } else {
      e.add(Symbol::zeta_deriv(p, a), std::move(coeff));
    }
    return e;
  }

  void add(const Symbol& s, Rational coeff) {
    if (coeff == 0) return;
    auto [it, fresh] = terms_.emplace(s, coeff);
    if (!fresh) {
      it->second += coeff;
      if (it->second == 0) terms_.erase(it);
    }
  }

  ConstExpr& operator+=(const ConstExpr& o) {
    for (const auto& [s, c] : o.terms_) add(s, c);
    return *this;
  }
  friend ConstExpr operator+(ConstExpr a, const ConstExpr& b) { return a += b; }
  friend ConstExpr operator-(ConstExpr a, const ConstExpr& b) {
    for (const auto& [s, c] : b.terms_) a.add(s, -c);
    return a;
  }
  ConstExpr& operator*=(const Rational& r) {
    if (r == 0) {
      terms_.clear();
      return *this;
    }
    for (auto& [s, c] : terms_) c *= r;
    return *this;
  }
  friend ConstExpr operator*(ConstExpr a, const Rational& r) { return a *= r; }

  bool is_zero() const { return terms_.empty(); }
  bool is_rational() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == Symbol::one());
  }
  Rational rational_part() const {
    auto it = terms_.find(Symbol::one());
    return it == terms_.end() ? Rational(0) : it->second;
  }
  Rational coefficient_of(const Symbol& s) const {
    auto it = terms_.find(s);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  const std::map<Symbol, Rational>& terms() const { return terms_; }

  Real evaluate(const Resolver& resolve, long digits) const {
    mpfr_prec_t prec = bits_for_digits(digits);
    Real acc(prec);
    for (const auto& [s, c] : terms_) {
      Real coeff(c, prec);
      if (s == Symbol::one()) {
        acc += coeff;
      } else {
        acc += coeff * resolve(s, digits);
      }
    }
    return acc;
  }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [s, c] : terms_) {
      if (!first) os << " + ";
      first = false;
      os << asymlog::to_string(c);
      if (!(s == Symbol::one())) os << "*" << s.name();
    }
    return os.str();
  }

 private:
  std::map<Symbol, Rational> terms_;
};

// Resolver over an explicit symbol table, with the universal constants
// (gamma, zeta(s), log(2pi)/2) served by MPFR as a fallback. Anything else
// missing raises a descriptive error naming the symbol.
inline Resolver map_resolver(std::map<Symbol, Real> values) {
  return [values = std::move(values)](const Symbol& s, long digits) -> Real {
    auto it = values.find(s);
    if (it != values.end()) return it->second;
    mpfr_prec_t prec = bits_for_digits(digits);
    switch (s.kind) {
      case Symbol::Kind::Gamma:
        return const_euler(prec);
      case Symbol::Kind::Zeta:
        if (s.a >= 2) return zeta_ui(static_cast<unsigned long>(s.a), prec);
        break;
      case Symbol::Kind::Log2PiHalf:
        return const_log2pi_half(prec);
      default:
        break;
    }
    throw domain_error("unresolved constant symbol: " + s.name());
  };
}

}  // namespace asymlog

#endif  // ASYMLOG_CONST_EXPR_HPP
