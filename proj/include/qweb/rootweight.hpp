#pragma once

/**
 * Type-A weight combinatorics: gl-weights, levels (n^ell, 0^{m-ell}),
 * simple roots alpha_i = e_i - e_{i+1}, the Cartan pairing and the action
 * of divided-power E/F operators on weights.
 *
 * Entries outside [0, n] mark a zero web; that is data, not an error, and
 * the flag propagates to the evaluator which then returns 0.
 */

#include <numeric>
#include <stdexcept>
#include <vector>

namespace qweb {

using Weight = std::vector<int>;

/** The level Lambda = (n^ell, 0^{m-ell}) on m columns. */
struct Level {
  int n = 1;
  int ell = 0;
  int m = 1;

  Level() = default;
  Level(int n_, int ell_, int m_) : n(n_), ell(ell_), m(m_) {
    if (n < 1 || ell < 0 || m < 1 || ell > m)
      throw std::invalid_argument("Level: need n >= 1 and 0 <= ell <= m");
  }

  Weight weight() const {
    Weight w(m, 0);
    for (int i = 0; i < ell; ++i) w[i] = n;
    return w;
  }

  friend bool operator==(const Level &a, const Level &b) {
    return a.n == b.n && a.ell == b.ell && a.m == b.m;
  }
};

/**
 * Cartan pairing <v, alpha_i> = v_i - v_{i+1}; the same rule applied to a
 * root vector reproduces the Cartan matrix (2 on the diagonal, -1 next to
 * it, 0 elsewhere).  i is 1-based, 1 <= i <= m-1.
 */
inline int cartan_pair(const Weight &v, int i) {
  if (i < 1 || static_cast<size_t>(i) >= v.size())
    throw std::out_of_range("cartan_pair: root index out of range");
  return v[i - 1] - v[i];
}

/** Is any entry outside [0, n]? */
inline bool out_of_range(const Weight &w, int n) {
  for (int k : w)
    if (k < 0 || k > n) return true;
  return false;
}

/** w - a*alpha_i: moves a units from column i to column i+1 (1-based i). */
inline Weight apply_F(Weight w, int i, int a) {
  if (i < 1 || static_cast<size_t>(i) >= w.size())
    throw std::out_of_range("apply_F: index out of range");
  w[i - 1] -= a;
  w[i] += a;
  return w;
}

/** w + a*alpha_i, the inverse displacement of apply_F. */
inline Weight apply_E(Weight w, int i, int a) { return apply_F(std::move(w), i, -a); }

/**
 * The degree shift d(k) = -1/2 (n(n-1) ell - sum_i k_i(k_i - 1)).
 * Requires weight conservation sum k_i = n*ell, which also makes the
 * division by 2 exact.
 */
inline long d_shift(const Level &lv, const Weight &k) {
  long total = std::accumulate(k.begin(), k.end(), 0L);
  if (total != static_cast<long>(lv.n) * lv.ell)
    throw std::invalid_argument("d_shift: weight sum differs from n*ell");
  long s = 0;
  for (int ki : k) s += static_cast<long>(ki) * (ki - 1);
  long num = static_cast<long>(lv.n) * (lv.n - 1) * lv.ell - s;
  if (num % 2 != 0) throw std::logic_error("d_shift: non-integral shift");
  return -num / 2;
}

} // namespace qweb
