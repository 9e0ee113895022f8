#pragma once

/**
 * Enumeration of the set of possible crossings: all permutations sigma
 * with sigma . ru = rw under the convention (sigma . s)_{sigma(j)} = s_j,
 * i.e. rw[sigma(j)] == ru[j] for every position j.  The stream is the
 * product over distinct letters of all bijections between that letter's
 * position sets; it is empty iff the sequences are not rearrangements of
 * one another.
 *
 * Enumeration is depth-first over positions 1..r with per-letter candidate
 * lists in increasing order, so images are yielded in lexicographic order
 * and the stream never materializes more than O(r) state.
 */

#include "webforms.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <vector>

namespace qweb {

/** images[j-1] = sigma(j), a bijection on {1..r} (1-based values). */
using Permutation = std::vector<int>;

/** J_sigma^{<t} = { 1 <= j <= t : sigma(j) < sigma(t) } (t excludes itself). */
inline std::vector<int> j_before(const Permutation &sigma, int t) {
  std::vector<int> out;
  for (int j = 1; j < t; ++j)
    if (sigma[j - 1] < sigma[t - 1]) out.push_back(j);
  return out;
}

/**
 * Pruned streaming enumeration.  factor_zero(prefix, t) is consulted after
 * position t of the prefix is filled (prefix[0..t-1] valid; 1-based values)
 * and may return true to cut the whole subtree; pass nullptr for the
 * unpruned stream.  yield may return false to stop early.
 */
inline void matching_permutations_pruned(
    const ExplodedSeq &ru, const ExplodedSeq &rw,
    const std::function<bool(const Permutation &, int)> &factor_zero,
    const std::function<bool(const Permutation &)> &yield) {
  const int r = static_cast<int>(ru.size());
  if (rw.size() != ru.size()) return;
  // positions of each letter in rw, increasing
  std::map<int, std::vector<int>> pos_w;
  for (int p = 1; p <= r; ++p) pos_w[rw[p - 1]].push_back(p);
  {
    std::map<int, int> cnt_u;
    for (int x : ru) ++cnt_u[x];
    if (cnt_u.size() != pos_w.size()) return;
    for (const auto &[letter, ps] : pos_w) {
      auto it = cnt_u.find(letter);
      if (it == cnt_u.end() || it->second != static_cast<int>(ps.size())) return;
    }
  }
  Permutation sigma(r, 0);
  std::vector<bool> used(r + 1, false);
  bool stop = false;
  std::function<void(int)> dfs = [&](int t) {
    if (stop) return;
    if (t > r) {
      if (!yield(sigma)) stop = true;
      return;
    }
    for (int img : pos_w[ru[t - 1]]) {
      if (used[img]) continue;
      sigma[t - 1] = img;
      used[img] = true;
      if (!(factor_zero && factor_zero(sigma, t))) dfs(t + 1);
      used[img] = false;
      if (stop) break;
    }
    sigma[t - 1] = 0;
  };
  dfs(1);
}

/** Unpruned stream; see matching_permutations_pruned. */
inline void matching_permutations(const ExplodedSeq &ru, const ExplodedSeq &rw,
                                  const std::function<bool(const Permutation &)> &yield) {
  matching_permutations_pruned(ru, rw, nullptr, yield);
}

/** Materialized variant for small instances and tests. */
inline std::vector<Permutation> matching_permutations_list(const ExplodedSeq &ru,
                                                           const ExplodedSeq &rw) {
  std::vector<Permutation> out;
  matching_permutations(ru, rw, [&](const Permutation &s) {
    out.push_back(s);
    return true;
  });
  return out;
}

} // namespace qweb
