/**
 * Acceptance suite: one pass/fail line per criterion, exit code = number
 * of failed criteria.  All comparisons are exact symbolic equality.
 */

#include "qweb/linkcomp.hpp"
#include "testutil.hpp"

#include <chrono>
#include <functional>
#include <iostream>
#include <random>

using namespace qweb;

namespace {

// every pairing value produced while running criteria 1-6 is recorded here
// so criterion 7 can check the positivity contract across all of them
std::vector<LaurentPoly> g_offdiag;
std::vector<LaurentPoly> g_diag;

LaurentPoly record_pair(const FForm &u, const FForm &w) {
  LaurentPoly v = evaluate_pair(u, w);
  (u == w ? g_diag : g_offdiag).push_back(v);
  return v;
}

bool criterion1() {
  const Level lv{2, 1, 2};
  FForm u(lv, {{1, 1}});
  FForm triv = trivial_fform(2, 1, 2);
  FForm f11(lv, {{1, 1}, {1, 1}});
  bool ok = record_pair(u, u) == qnum(2);
  ok = ok && record_pair(triv, f11) == qnum(2);
  EvalContext c1(u, u), c2(triv, f11);
  ok = ok && x_sigma(c1, {1}) == LaurentPoly::one() + LaurentPoly::monomial(2);
  ok = ok && x_sigma(c2, {2, 1}) == qnum(2) * qnum(2);
  ok = ok && c1.d == -1 && c2.d == 0;
  return ok;
}

bool criterion2() {
  FForm u = parse_fform("level n=3 l=2 m=4 : F2 F3 F2(2) F1");
  FForm w = parse_fform("level n=3 l=2 m=4 : F2 F3 F1 F2(2)");
  EvalContext ctx(u, w);
  auto perms = matching_permutations_list(ctx.ru, ctx.rw);
  bool ok = perms.size() == 6;
  // the unique contributing permutation is the transposition swapping
  // positions 3 and 5, with X = q^4 [2]^2 [3]; the other five X vanish
  const Permutation star{1, 2, 5, 4, 3};
  for (const Permutation &sigma : perms) {
    const LaurentPoly x = x_sigma(ctx, sigma);
    if (sigma == star)
      ok = ok && x == (qnum(2) * qnum(2) * qnum(3)).shifted(4);
    else
      ok = ok && x.is_zero();
  }
  ok = ok && record_pair(u, w) == qnum(3);
  FForm closed = parse_fform("level n=3 l=2 m=4 : F2 F3 F2(2) F1 F2 F1(2) F3(2) F2(2)");
  ok = ok && record_pair(trivial_fform(3, 2, 4), closed) == qnum(3);
  return ok;
}

bool criterion3() {
  ColoredBraid hopf{{1, 1}, {{1, true}, {1, true}}};
  WebCombination comb = compile_braid_closure_compact(hopf, 2);
  bool ok = comb.terms.size() == 4;
  const std::vector<LaurentPoly> want{LaurentPoly::monomial(2), LaurentPoly::monomial(1, -1),
                                      LaurentPoly::monomial(1, -1), LaurentPoly::one()};
  for (size_t i = 0; ok && i < 4; ++i) ok = comb.terms[i].first == want[i];
  LaurentPoly v;
  FForm triv = trivial_fform(2, comb.level.ell, comb.level.m);
  for (const auto &[coeff, f] : comb.terms) v += coeff * record_pair(triv, f);
  bool power_found = false;
  for (long s = -8; s <= 8; ++s) power_found = power_found || v == qnum(4).shifted(s);
  ok = ok && power_found;
  ok = ok && evaluate_combination(compile_braid_closure(hopf, 2)) == v;
  return ok;
}

bool criterion4() {
  auto rep = oracle::relation_selftest(4);
  if (!rep.ok) std::cout << "    first failing relation: " << rep.first_failure << "\n";
  return rep.ok;
}

bool criterion5() {
  std::mt19937 rng(1729);
  for (int trial = 0; trial < 200; ++trial) {
    auto [u, w] = testutil::random_pair(rng, 3, 5, 8);
    if (record_pair(u, w) != oracle::pair_scalar(u, w)) return false;
  }
  return true;
}

bool criterion6() {
  // worked padding pattern: the same three-rung web presented in three
  // and in four columns, the spare column cleared by a final transfer
  const Level lv3{3, 1, 3}, lv4{3, 1, 4};
  FForm a3(lv3, {{1, 1}, {2, 1}, {1, 1}});
  FForm a4(lv4, {{1, 1}, {2, 1}, {1, 1}, {3, 1}});
  bool ok = record_pair(a3, a3) == record_pair(a4, a4);
  std::mt19937 rng(8128);
  for (int trial = 0; trial < 20; ++trial) {
    auto [u, w] = testutil::random_pair(rng, 3, 4, 6);
    const Level lv = u.level();
    const int a = u.target()[lv.m - 1];
    const Level wide{lv.n, lv.ell, lv.m + 1};
    auto pad = [&](const FForm &f) {
      std::vector<FStep> steps = f.steps();
      if (a > 0) steps.push_back({lv.m, a});
      return FForm(wide, std::move(steps));
    };
    ok = ok && record_pair(u, w) == record_pair(pad(u), pad(w));
  }
  return ok;
}

bool criterion7() {
  bool ok = !g_diag.empty() && !g_offdiag.empty();
  for (const LaurentPoly &v : g_offdiag) ok = ok && !v.has_negative_coeff();
  for (const LaurentPoly &v : g_diag)
    ok = ok && !v.has_negative_coeff() && v.bar_invariant();
  return ok;
}

bool criterion8() {
  FForm u(Level{2, 1, 2}, {{1, 1}});
  auto good = is_dual_canonical(u);
  bool ok = good.dual_canonical &&
            good.certificate == LaurentPoly::one() + LaurentPoly::monomial(2);
  // frozen regression found by seeded search: the doubled rung F1 F1
  FForm f11(Level{2, 1, 2}, {{1, 1}, {1, 1}});
  auto bad = is_dual_canonical(f11);
  ok = ok && !bad.dual_canonical;
  ok = ok && bad.certificate == LaurentPoly::monomial(-2) + LaurentPoly::monomial(0, 2) +
                                    LaurentPoly::monomial(2);
  return ok;
}

bool criterion9() {
  // conjugation invariance: closures of s1 s1 and s2 s1 s1 s2^{-1} in B3
  ColoredBraid plain{{1, 1, 1}, {{1, true}, {1, true}}};
  ColoredBraid conj{{1, 1, 1}, {{2, true}, {1, true}, {1, true}, {2, false}}};
  bool ok = link_invariant(plain, 2) == link_invariant(conj, 2);
  // R2 closure: s1 s1^{-1} equals the two-component unlink, all colors
  for (int n = 1; n <= 3; ++n)
    for (int c1 = 1; c1 <= n; ++c1)
      for (int c2 = 1; c2 <= n; ++c2) {
        ColoredBraid unl{{c1, c2}, {{1, true}, {1, false}}};
        ok = ok && link_invariant(unl, n) == qbin(n, c1) * qbin(n, c2);
      }
  return ok;
}

int run(int id, const char *what, const std::function<bool()> &fn) {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = false;
  std::string err;
  try {
    ok = fn();
  } catch (const std::exception &e) {
    err = e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cout << "criterion " << id << " (" << what << "): " << (ok ? "PASS" : "FAIL");
  std::printf("  [%.2fs]\n", secs);
  if (!err.empty()) std::cout << "    exception: " << err << "\n";
  return ok ? 0 : 1;
}

} // namespace

int main() {
  int failures = 0;
  failures += run(1, "one-box example suite", criterion1);
  failures += run(2, "rank-three example suite", criterion2);
  failures += run(3, "Hopf link compilation and value", criterion3);
  failures += run(4, "oracle relation suite, n <= 4", criterion4);
  failures += run(5, "200 randomized formula-vs-oracle pairs", criterion5);
  failures += run(6, "padded-column choice independence", criterion6);
  failures += run(7, "positivity and bar-invariance contract", criterion7);
  failures += run(8, "dual-canonical certification", criterion8);
  failures += run(9, "link invariance smoke test", criterion9);
  std::cout << (failures == 0 ? "all criteria passed" : "FAILURES PRESENT") << "\n";
  return failures == 0 ? 0 : 1;
}
