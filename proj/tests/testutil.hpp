#pragma once

/** Shared helpers for the test suite: seeded random F-form generation. */

#include "qweb/webforms.hpp"

#include <algorithm>
#include <random>

namespace qweb::testutil {

/** A random valid F-form at the given level with at most max_steps steps. */
inline FForm random_fform(std::mt19937 &rng, const Level &lv, int max_steps) {
  Weight w = lv.weight();
  std::vector<FStep> steps;
  const int nsteps = static_cast<int>(rng() % (max_steps + 1));
  for (int s = 0; s < nsteps; ++s) {
    std::vector<FStep> moves;
    for (int i = 1; i < lv.m; ++i)
      for (int a = 1; a <= w[i - 1] && w[i] + a <= lv.n; ++a) moves.push_back({i, a});
    if (moves.empty()) break;
    const FStep mv = moves[rng() % moves.size()];
    steps.push_back(mv);
    w = apply_F(std::move(w), mv.index, mv.power);
  }
  return FForm(lv, std::move(steps));
}

/**
 * A random pair of F-forms with equal level and target.  The second form
 * reuses the first one's letters in shuffled order with random regrouping
 * into divided powers — the target depends only on the letter multiset,
 * so the pair always matches (shuffles that leave the weight path out of
 * range are rejected and retried).
 */
inline std::pair<FForm, FForm> random_pair(std::mt19937 &rng, int max_n, int max_m,
                                           int max_steps) {
  for (;;) {
    const int n = 1 + static_cast<int>(rng() % max_n);
    const int m = 2 + static_cast<int>(rng() % (max_m - 1));
    const int ell = 1 + static_cast<int>(rng() % m);
    const Level lv{n, ell, m};
    FForm u = random_fform(rng, lv, max_steps);
    if (u.is_zero_web() || u.steps().empty()) continue;
    ExplodedSeq letters = u.exploded();
    for (int attempt = 0; attempt < 30; ++attempt) {
      std::shuffle(letters.begin(), letters.end(), rng);
      std::vector<FStep> steps;
      for (int i : letters) {
        if (!steps.empty() && steps.back().index == i && rng() % 2)
          ++steps.back().power;
        else
          steps.push_back({i, 1});
      }
      FForm w(lv, std::move(steps));
      if (!w.is_zero_web()) return {u, w};
    }
  }
}

} // namespace qweb::testutil
