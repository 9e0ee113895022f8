#pragma once

/**
 * Exact Laurent polynomials in one variable q with arbitrary-precision
 * integer coefficients, plus the quantum integers [a], quantum factorials
 * [b]! and Gaussian binomials qbin(a, b).
 *
 * Terms are kept in a sorted sparse map exponent -> coefficient; zero
 * coefficients are never stored, so equality is plain map equality.
 */

#include <boost/multiprecision/cpp_int.hpp>

#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

namespace qweb {

using BigInt = boost::multiprecision::cpp_int;

class LaurentPoly {
public:
  using Map = std::map<long, BigInt>;

  LaurentPoly() = default;

  static LaurentPoly zero() { return LaurentPoly(); }

  static LaurentPoly monomial(long exp, BigInt coeff = 1) {
    LaurentPoly p;
    if (coeff != 0) p.coeffs_[exp] = std::move(coeff);
    return p;
  }

  static LaurentPoly one() { return monomial(0); }

  static LaurentPoly from_map(Map m) {
    LaurentPoly p;
    for (auto &[e, c] : m)
      if (c != 0) p.coeffs_.emplace(e, std::move(c));
    return p;
  }

  const Map &coeffs() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }

  BigInt coeff(long exp) const {
    auto it = coeffs_.find(exp);
    return it == coeffs_.end() ? BigInt(0) : it->second;
  }

  friend bool operator==(const LaurentPoly &a, const LaurentPoly &b) {
    return a.coeffs_ == b.coeffs_;
  }
  friend bool operator!=(const LaurentPoly &a, const LaurentPoly &b) {
    return !(a == b);
  }

  LaurentPoly &operator+=(const LaurentPoly &o) {
    for (const auto &[e, c] : o.coeffs_) add_term(e, c);
    return *this;
  }
  LaurentPoly &operator-=(const LaurentPoly &o) {
    for (const auto &[e, c] : o.coeffs_) add_term(e, -c);
    return *this;
  }

  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly &b) {
    a += b;
    return a;
  }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly &b) {
    a -= b;
    return a;
  }
  friend LaurentPoly operator-(const LaurentPoly &a) {
    LaurentPoly r;
    for (const auto &[e, c] : a.coeffs_) r.coeffs_[e] = -c;
    return r;
  }

  friend LaurentPoly operator*(const LaurentPoly &a, const LaurentPoly &b) {
    LaurentPoly r;
    for (const auto &[ea, ca] : a.coeffs_)
      for (const auto &[eb, cb] : b.coeffs_) r.add_term(ea + eb, ca * cb);
    return r;
  }
  LaurentPoly &operator*=(const LaurentPoly &o) { return *this = *this * o; }

  /** Multiply by q^exp. */
  LaurentPoly shifted(long exp) const {
    LaurentPoly r;
    for (const auto &[e, c] : coeffs_) r.coeffs_[e + exp] = c;
    return r;
  }

  LaurentPoly scaled(const BigInt &k) const {
    LaurentPoly r;
    if (k == 0) return r;
    for (const auto &[e, c] : coeffs_) r.coeffs_[e] = c * k;
    return r;
  }

  /** Substitute q -> q^{-1}. */
  LaurentPoly bar() const {
    LaurentPoly r;
    for (const auto &[e, c] : coeffs_) r.coeffs_[-e] = c;
    return r;
  }

  bool bar_invariant() const { return *this == bar(); }

  /** Sum of coefficients, i.e. the value at q = 1. */
  BigInt at_one() const {
    BigInt s = 0;
    for (const auto &[e, c] : coeffs_) s += c;
    return s;
  }

  bool has_negative_coeff() const {
    for (const auto &[e, c] : coeffs_)
      if (c < 0) return true;
    return false;
  }

  /**
   * Membership in 1 + qN[q]: constant term 1, everything else in strictly
   * positive exponents with nonnegative coefficients.
   */
  bool is_positive_normalized() const {
    if (coeff(0) != 1) return false;
    for (const auto &[e, c] : coeffs_)
      if (e < 0 || c < 0) return false;
    return true;
  }

  /**
   * Exact division by d in Z[q, q^{-1}]; throws if d is zero or the
   * quotient does not exist in the ring.
   */
  LaurentPoly exact_div(const LaurentPoly &d) const {
    if (d.is_zero()) throw std::domain_error("exact_div: division by zero");
    LaurentPoly rem = *this, quot;
    if (rem.is_zero()) return quot;
    const long lead_exp = d.coeffs_.rbegin()->first;
    const BigInt lead_coeff = d.coeffs_.rbegin()->second;
    // any quotient exponent must stay within the range forced by the
    // lowest terms; falling below it proves non-divisibility
    const long low_bound = coeffs_.begin()->first - d.coeffs_.begin()->first;
    while (!rem.is_zero()) {
      const long top_exp = rem.coeffs_.rbegin()->first;
      const BigInt top_coeff = rem.coeffs_.rbegin()->second;
      if (top_coeff % lead_coeff != 0)
        throw std::domain_error("exact_div: non-divisible leading coefficient");
      const long e = top_exp - lead_exp;
      if (e < low_bound) throw std::domain_error("exact_div: not divisible");
      const BigInt c = top_coeff / lead_coeff;
      quot.add_term(e, c);
      rem -= d.shifted(e).scaled(c);
      if (!rem.is_zero() && rem.coeffs_.rbegin()->first >= top_exp)
        throw std::domain_error("exact_div: no progress (not divisible)");
    }
    return quot;
  }

  /** Canonical text form: terms by increasing exponent, e.g. "q^-1 + q". */
  std::string str() const {
    if (coeffs_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto &[e, c] : coeffs_) {
      BigInt a = c;
      if (first) {
        if (a < 0) {
          os << "-";
          a = -a;
        }
      } else {
        os << (a < 0 ? " - " : " + ");
        if (a < 0) a = -a;
      }
      if (e == 0) {
        os << a;
      } else {
        if (a != 1) os << a;
        os << "q";
        if (e != 1) os << "^" << e;
      }
      first = false;
    }
    return os.str();
  }

private:
  void add_term(long exp, const BigInt &c) {
    if (c == 0) return;
    auto [it, inserted] = coeffs_.try_emplace(exp, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) coeffs_.erase(it);
    }
  }

  Map coeffs_;
};

/** Quantum integer [a] = q^{a-1} + q^{a-3} + ... + q^{1-a}; [0]=0, [-a]=-[a]. */
inline LaurentPoly qnum(long a) {
  if (a == 0) return LaurentPoly::zero();
  if (a < 0) return -qnum(-a);
  LaurentPoly::Map m;
  for (long e = -(a - 1); e <= a - 1; e += 2) m[e] = 1;
  return LaurentPoly::from_map(std::move(m));
}

/** Quantum factorial [b]! = [b][b-1]...[1]; [0]! = 1. */
inline LaurentPoly qfac(long b) {
  if (b < 0) throw std::domain_error("qfac: negative argument");
  LaurentPoly r = LaurentPoly::one();
  for (long i = 2; i <= b; ++i) r *= qnum(i);
  return r;
}

/** Gaussian binomial [a][a-1]...[a-b+1] / [b]! (exact). */
inline LaurentPoly qbin(long a, long b) {
  if (b < 0) throw std::domain_error("qbin: negative lower argument");
  LaurentPoly num = LaurentPoly::one();
  for (long i = 0; i < b; ++i) num *= qnum(a - i);
  return num.exact_div(qfac(b));
}

} // namespace qweb
