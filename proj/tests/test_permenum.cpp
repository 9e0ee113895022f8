#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qweb/permenum.hpp"
#include "testutil.hpp"

#include <algorithm>
#include <random>

using namespace qweb;

namespace {

/** Reference: filter all permutations of S_r for the rearrangement rule. */
std::vector<Permutation> brute_force(const ExplodedSeq &ru, const ExplodedSeq &rw) {
  std::vector<Permutation> out;
  if (ru.size() != rw.size()) return out;
  const int r = static_cast<int>(ru.size());
  Permutation sigma(r);
  for (int i = 0; i < r; ++i) sigma[i] = i + 1;
  do {
    bool ok = true;
    for (int j = 1; j <= r && ok; ++j) ok = rw[sigma[j - 1] - 1] == ru[j - 1];
    if (ok) out.push_back(sigma);
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return out;
}

} // namespace

TEST_CASE("j_before") {
  const Permutation sigma{1, 2, 5, 4, 3};
  CHECK(j_before(sigma, 1).empty());
  CHECK(j_before(sigma, 3) == std::vector<int>{1, 2});
  CHECK(j_before(sigma, 4) == std::vector<int>{1, 2});
  CHECK(j_before(sigma, 5) == std::vector<int>{1, 2});
}

TEST_CASE("matching permutations, small cases") {
  // distinct letters: exactly one matching permutation
  CHECK(matching_permutations_list({1, 2, 3}, {3, 1, 2}) ==
        std::vector<Permutation>{{2, 3, 1}});
  // repeated letters multiply the count by the multiplicity factorials
  CHECK(matching_permutations_list({1, 1}, {1, 1}).size() == 2);
  CHECK(matching_permutations_list({2, 1, 2}, {2, 2, 1}).size() == 2);
  // incompatible multisets: empty
  CHECK(matching_permutations_list({1, 2}, {1, 1}).empty());
  CHECK(matching_permutations_list({1}, {1, 1}).empty());
}

TEST_CASE("stream size equals product of multiset multiplicities") {
  std::mt19937 rng(23);
  for (int trial = 0; trial < 40; ++trial) {
    auto [u, w] = testutil::random_pair(rng, 3, 4, 6);
    const ExplodedSeq ru = u.exploded(), rw = w.exploded();
    auto perms = matching_permutations_list(ru, rw);
    std::map<int, long> mult;
    for (int x : ru) ++mult[x];
    std::map<int, long> multw;
    for (int x : rw) ++multw[x];
    long want = 1;
    if (mult == multw)
      for (auto &[letter, c] : mult)
        for (long j = 2; j <= c; ++j) want *= j;
    else
      want = 0;
    CHECK(static_cast<long>(perms.size()) == want);
  }
}

TEST_CASE("enumeration agrees with brute force and is lexicographic") {
  std::mt19937 rng(31);
  for (int trial = 0; trial < 25; ++trial) {
    auto [u, w] = testutil::random_pair(rng, 3, 4, 5);
    if (u.exploded().size() > 7) continue;
    auto fast = matching_permutations_list(u.exploded(), w.exploded());
    auto slow = brute_force(u.exploded(), w.exploded());
    CHECK(fast == slow);  // brute force emits lexicographically too
    CHECK(std::is_sorted(fast.begin(), fast.end()));
  }
}

TEST_CASE("pruning hook cuts subtrees without changing survivors") {
  const ExplodedSeq ru{2, 3, 2, 2, 1}, rw{2, 3, 1, 2, 2};
  auto all = matching_permutations_list(ru, rw);
  CHECK(all.size() == 6);
  // a prune that rejects nothing reproduces the full list
  std::vector<Permutation> kept;
  matching_permutations_pruned(
      ru, rw, [](const Permutation &, int) { return false; },
      [&](const Permutation &sigma) {
        kept.push_back(sigma);
        return true;
      });
  CHECK(kept == all);
  // a prune on position 1 keeps exactly the survivors of the full filter
  std::vector<Permutation> partial;
  matching_permutations_pruned(
      ru, rw, [](const Permutation &sigma, int t) { return t == 1 && sigma[0] != 1; },
      [&](const Permutation &sigma) {
        partial.push_back(sigma);
        return true;
      });
  for (const Permutation &sigma : partial) CHECK(sigma[0] == 1);
  size_t want = 0;
  for (const Permutation &sigma : all)
    if (sigma[0] == 1) ++want;
  CHECK(partial.size() == want);
  // early stop via the yield return value
  int seen = 0;
  matching_permutations_pruned(
      ru, rw, [](const Permutation &, int) { return false; },
      [&](const Permutation &) { return ++seen < 2; });
  CHECK(seen == 2);
}
