#pragma once

/**
 * Independent ground truth: webs act on tensor products of quantum
 * exterior powers of C^n.  A basis state assigns each strand a subset of
 * {1..n} (stored as a bitmask; a label-k strand carries a k-element
 * subset), and a state is a sparse Laurent-coefficient combination of
 * such assignments.  Merge/split act with the signed q-power coefficients
 *
 *   merge: v_S (x) v_T -> 0 if S and T meet, else q^{-ell(S,T)} v_{S u T}
 *   split: v_U -> sum_{U = S u T} q^{ell(T,S)} v_S (x) v_T
 *
 * with ell(A,B) = #{(a,b) in A x B : a > b}.  These coefficients are a
 * calibration choice; the relation self-test below (digon, associativity,
 * coassociativity, dumbbell-crossing, circle values, Reidemeister 2/3,
 * kink scalars) pins them and is the evidence that the calibration is a
 * valid model of the web category.
 */

#include "qlaurent.hpp"
#include "webforms.hpp"

#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qweb {
namespace oracle {

using Mask = std::uint32_t;
using StateKey = std::vector<Mask>;
using State = std::map<StateKey, LaurentPoly>;

/** All k-element subsets of {1..n} as bitmasks, in increasing mask order. */
inline std::vector<Mask> subsets(int n, int k) {
  std::vector<Mask> out;
  for (Mask m = 0; m < (Mask{1} << n); ++m)
    if (std::popcount(m) == k) out.push_back(m);
  return out;
}

/** ell(A, B) = number of pairs a in A, b in B with a > b. */
inline int ell_stat(Mask A, Mask B) {
  int count = 0;
  for (int b = 0; b < 32; ++b)
    if (B & (Mask{1} << b)) count += std::popcount(A & ~((Mask{2} << b) - 1));
  return count;
}

/** c(S) = sum_{i in S} (n + 1 - 2i), the pivotal weight of a basis vector. */
inline int pivotal_weight(Mask S, int n) {
  int c = 0;
  for (int i = 1; i <= n; ++i)
    if (S & (Mask{1} << (i - 1))) c += n + 1 - 2 * i;
  return c;
}

inline void accumulate(State &out, StateKey key, LaurentPoly v) {
  if (v.is_zero()) return;
  auto [it, inserted] = out.try_emplace(std::move(key), std::move(v));
  if (!inserted) {
    it->second += v;
    if (it->second.is_zero()) out.erase(it);
  }
}

/** Strands pos, pos+1 merge into one (0-based position). */
inline State apply_merge(const State &state, int pos) {
  State out;
  for (const auto &[key, c] : state) {
    const Mask S = key[pos], T = key[pos + 1];
    if (S & T) continue;
    StateKey nk(key.begin(), key.begin() + pos);
    nk.push_back(S | T);
    nk.insert(nk.end(), key.begin() + pos + 2, key.end());
    accumulate(out, std::move(nk), c.shifted(-ell_stat(S, T)));
  }
  return out;
}

/** Strand pos of size k+l splits into sizes (k, l). */
inline State apply_split(const State &state, int pos, int k, int l) {
  State out;
  for (const auto &[key, c] : state) {
    const Mask U = key[pos];
    if (std::popcount(U) != k + l)
      throw std::invalid_argument("oracle: split size mismatch");
    // enumerate k-element sub-masks S of U
    std::vector<int> elems;
    for (int b = 0; b < 32; ++b)
      if (U & (Mask{1} << b)) elems.push_back(b);
    const int sz = static_cast<int>(elems.size());
    for (Mask choice = 0; choice < (Mask{1} << sz); ++choice) {
      if (std::popcount(choice) != k) continue;
      Mask S = 0;
      for (int j = 0; j < sz; ++j)
        if (choice & (Mask{1} << j)) S |= Mask{1} << elems[j];
      const Mask T = U & ~S;
      StateKey nk(key.begin(), key.begin() + pos);
      nk.push_back(S);
      nk.push_back(T);
      nk.insert(nk.end(), key.begin() + pos + 1, key.end());
      accumulate(out, std::move(nk), c.shifted(ell_stat(T, S)));
    }
  }
  return out;
}

/**
 * The (k, l)-crossing on strands pos, pos+1 (left color k passes over
 * when positive, under when negative); output colors (l, k).  Built as
 * the skein sum (-1)^{kl} sum_b (-q)^{+-(k-b)} x [b-rung right, a-rung
 * left] with a = b - (k - l); terms whose intermediate label exceeds n
 * vanish inside merge (subsets of {1..n} cannot grow past n).
 */
inline State apply_crossing(const State &state, int pos, int k, int l, int n, bool positive) {
  State total;
  for (int b = 0; b <= std::min(k, n); ++b) {
    const int a = b - (k - l);
    if (a < 0 || a > l) continue;
    State st = apply_split(state, pos, k - b, b);
    st = apply_merge(st, pos + 1);
    st = apply_split(st, pos + 1, a, l + b - a);
    st = apply_merge(st, pos);
    const long exp = positive ? (k - b) : -(k - b);
    const BigInt sign = (k - b) % 2 == 0 ? 1 : -1;
    for (const auto &[key, c] : st)
      accumulate(total, key, c.shifted(exp).scaled(sign));
  }
  const BigInt pref = (k * l) % 2 == 0 ? 1 : -1;
  State out;
  for (const auto &[key, c] : total) accumulate(out, key, c.scaled(pref));
  return out;
}

inline State basis_state(StateKey key) {
  State st;
  st.emplace(std::move(key), LaurentPoly::one());
  return st;
}

/** Apply one Morse slice. */
inline State apply_slice(const State &state, const MorseSlice &s, int n) {
  switch (s.kind) {
  case MorseSlice::Merge:
    return apply_merge(state, s.pos);
  case MorseSlice::Split:
    return apply_split(state, s.pos, s.k, s.l);
  case MorseSlice::OverCross:
    return apply_crossing(state, s.pos, s.k, s.l, n, true);
  case MorseSlice::UnderCross:
    return apply_crossing(state, s.pos, s.k, s.l, n, false);
  }
  throw std::logic_error("oracle: unknown slice");
}

/**
 * Evaluate a closed Morse word: all boundary labels must be 0 or n (empty
 * or phantom strands, both one-dimensional), so bottom and top each have a
 * single basis vector and the word is a scalar.
 */
inline LaurentPoly evaluate_morse(const MorseWord &word) {
  StateKey bottom;
  for (int lab : word.bottom) {
    if (lab != 0 && lab != word.n)
      throw std::invalid_argument("oracle: open boundary (labels must be 0 or n)");
    bottom.push_back(lab == 0 ? Mask{0} : (Mask{1} << word.n) - 1);
  }
  State st = basis_state(bottom);
  for (const MorseSlice &s : word.slices) st = apply_slice(st, s, word.n);
  StateKey top;
  for (int lab : word.top()) {
    if (lab != 0 && lab != word.n)
      throw std::invalid_argument("oracle: open boundary (labels must be 0 or n)");
    top.push_back(lab == 0 ? Mask{0} : (Mask{1} << word.n) - 1);
  }
  auto it = st.find(top);
  return it == st.end() ? LaurentPoly::zero() : it->second;
}

/** The oracle value of a pairing: the scalar of the closed diagram. */
inline LaurentPoly pair_scalar(const FForm &u, const FForm &w) {
  return evaluate_morse(pair_to_closed(u, w));
}

// ---------------------------------------------------------------------------
// Relation self-test: every identity the category imposes, as exact matrix
// identities over all basis vectors.
// ---------------------------------------------------------------------------

struct SelftestReport {
  bool ok = true;
  std::string first_failure;

  void fail(std::string what) {
    if (ok) first_failure = std::move(what);
    ok = false;
  }
};

/** split then merge on a (k+l)-strand = qbin(k+l, k) * identity. */
inline bool digon_check(int n, int k, int l) {
  for (Mask U : subsets(n, k + l)) {
    State st = basis_state({U});
    st = apply_merge(apply_split(st, 0, k, l), 0);
    State want;
    accumulate(want, {U}, qbin(k + l, k));
    if (st != want) return false;
  }
  return true;
}

/** merge(merge(a,b),c) = merge(a,merge(b,c)). */
inline bool assoc_check(int n, int a, int b, int c) {
  for (Mask A : subsets(n, a))
    for (Mask B : subsets(n, b))
      for (Mask C : subsets(n, c)) {
        State st = basis_state({A, B, C});
        State lhs = apply_merge(apply_merge(st, 0), 0);
        State rhs = apply_merge(apply_merge(st, 1), 0);
        if (lhs != rhs) return false;
      }
  return true;
}

/** (split(a,b) x id) split(a+b, c) = (id x split(b,c)) split(a, b+c). */
inline bool coassoc_check(int n, int a, int b, int c) {
  for (Mask U : subsets(n, a + b + c)) {
    State st = basis_state({U});
    State lhs = apply_split(apply_split(st, 0, a + b, c), 0, a, b);
    State rhs = apply_split(apply_split(st, 0, a, b + c), 1, b, c);
    if (lhs != rhs) return false;
  }
  return true;
}

/** Closed circle labeled k: sum_S q^{c(S)} = qbin(n, k). */
inline bool circle_check(int n, int k) {
  LaurentPoly tot;
  for (Mask S : subsets(n, k)) tot += LaurentPoly::monomial(pivotal_weight(S, n));
  return tot == qbin(n, k);
}

/**
 * Dumbbell-crossing: split(r,s) after merge(k,l) equals, for either
 * crossing sign, sum over a - b = k - r of
 *   (-1)^{ab} q^{+-(k-a)(l-b)} x [split off a right and b left, cross the
 *   two rungs (over: +, under: -), merge into the opposite strands].
 * The (-1)^{ab} compensates the (-1)^{ab} the skein-normalized crossing
 * carries relative to the category's crossing generator.
 */
inline bool dumbbell_check(int n, int k, int l, int r, int s, bool over) {
  const int sgn = over ? 1 : -1;
  for (Mask K : subsets(n, k))
    for (Mask L : subsets(n, l)) {
      State src = basis_state({K, L});
      State lhs = apply_split(apply_merge(src, 0), 0, r, s);
      State rhs;
      for (int a = 0; a <= k; ++a) {
        const int b = a - (k - r);
        if (b < 0 || b > l) continue;
        State st = apply_split(src, 0, k - a, a);
        st = apply_split(st, 2, b, l - b);
        st = apply_crossing(st, 1, a, b, n, over);
        st = apply_merge(st, 0);
        st = apply_merge(st, 1);
        const long e = static_cast<long>(sgn) * (k - a) * (l - b);
        const BigInt sign = (a * b) % 2 == 0 ? 1 : -1;
        for (const auto &[key, c] : st) accumulate(rhs, key, c.shifted(e).scaled(sign));
      }
      if (lhs != rhs) return false;
    }
  return true;
}

/** over then under = identity on every basis vector. */
inline bool r2_check(int n, int k, int l) {
  for (Mask A : subsets(n, k))
    for (Mask B : subsets(n, l)) {
      State st = basis_state({A, B});
      st = apply_crossing(st, 0, k, l, n, true);
      st = apply_crossing(st, 0, l, k, n, false);
      if (st != basis_state({A, B})) return false;
    }
  return true;
}

/** Braid relation (Reidemeister 3) for colors (a, b, c), all over. */
inline bool r3_check(int n, int a, int b, int c) {
  for (Mask A : subsets(n, a))
    for (Mask B : subsets(n, b))
      for (Mask C : subsets(n, c)) {
        State st = basis_state({A, B, C});
        State lhs = apply_crossing(st, 0, a, b, n, true);
        lhs = apply_crossing(lhs, 1, a, c, n, true);
        lhs = apply_crossing(lhs, 0, b, c, n, true);
        State rhs = apply_crossing(st, 1, b, c, n, true);
        rhs = apply_crossing(rhs, 0, a, c, n, true);
        rhs = apply_crossing(rhs, 1, a, b, n, true);
        if (lhs != rhs) return false;
      }
  return true;
}

/**
 * Reidemeister 1 scalar: closing the right strand of a (k,k)-crossing
 * through the pivotal twist q^{c(S)} must give q^{k(-k+n+1)} x identity
 * for the positive crossing and the inverse power for the negative one.
 * Returns the scalar or nullopt.
 */
inline std::optional<LaurentPoly> kink_scalar(int n, int k, bool positive) {
  std::optional<LaurentPoly> scal;
  for (Mask T : subsets(n, k)) {
    std::map<Mask, LaurentPoly> col;
    for (Mask S : subsets(n, k)) {
      State st = apply_crossing(basis_state({T, S}), 0, k, k, n, positive);
      for (const auto &[key, c] : st)
        if (key[1] == S) col[key[0]] += c.shifted(pivotal_weight(S, n));
    }
    for (auto it = col.begin(); it != col.end();)
      it = it->second.is_zero() ? col.erase(it) : std::next(it);
    if (col.size() != 1 || col.begin()->first != T) return std::nullopt;
    if (!scal)
      scal = col.begin()->second;
    else if (*scal != col.begin()->second)
      return std::nullopt;
  }
  return scal;
}

/**
 * Run the full relation suite for all admissible labels with rank <= n_max.
 * Stops at (records) the first violated identity.
 */
inline SelftestReport relation_selftest(int n_max = 4) {
  SelftestReport rep;
  auto tag = [](const char *what, std::initializer_list<int> xs) {
    std::string s = what;
    for (int x : xs) s += " " + std::to_string(x);
    return s;
  };
  for (int n = 1; n <= n_max && rep.ok; ++n) {
    for (int k = 0; k <= n; ++k) {
      if (!circle_check(n, k)) rep.fail(tag("circle", {n, k}));
      for (int l = 0; k + l <= n; ++l) {
        if (!digon_check(n, k, l)) rep.fail(tag("digon", {n, k, l}));
        if (!r2_check(n, k, l)) rep.fail(tag("R2", {n, k, l}));
        for (int r = 0; r <= k + l; ++r)
          for (bool over : {true, false})
            if (!dumbbell_check(n, k, l, r, k + l - r, over))
              rep.fail(tag("dumbbell", {n, k, l, r, over}));
        for (int c = 0; k + l + c <= n; ++c) {
          if (!assoc_check(n, k, l, c)) rep.fail(tag("assoc", {n, k, l, c}));
          if (!coassoc_check(n, k, l, c)) rep.fail(tag("coassoc", {n, k, l, c}));
        }
      }
      for (int l = 0; l <= n; ++l)
        for (int c = 0; c <= n; ++c)
          if (k && l && c && !r3_check(n, k, l, c)) rep.fail(tag("R3", {n, k, l, c}));
      for (bool pos : {true, false}) {
        auto sc = kink_scalar(n, k, pos);
        const long e = static_cast<long>(k) * (-k + n + 1);
        if (!sc || *sc != LaurentPoly::monomial(pos ? e : -e))
          rep.fail(tag("kink", {n, k, pos}));
      }
    }
    // phantom triviality: a phantom circle is 1, the phantom pairing
    // (trivial, trivial) is 1
    if (!(evaluate_morse(pair_to_closed(trivial_fform(n, 1, 2), trivial_fform(n, 1, 2))) ==
          LaurentPoly::one()))
      rep.fail(tag("phantom pairing", {n}));
  }
  return rep;
}

} // namespace oracle
} // namespace qweb
