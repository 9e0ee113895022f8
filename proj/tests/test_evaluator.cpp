#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qweb/evaluator.hpp"
#include "testutil.hpp"

#include <random>

using namespace qweb;

TEST_CASE("one-box diagonal pairing") {
  const Level lv{2, 1, 2};
  FForm u(lv, {{1, 1}});
  CHECK(evaluate_pair(u, u) == qnum(2));
  EvalContext ctx(u, u);
  CHECK(ctx.d == -1);
  CHECK(x_sigma(ctx, {1}) == LaurentPoly::one() + LaurentPoly::monomial(2));
}

TEST_CASE("one-box squared pairing") {
  const Level lv{2, 1, 2};
  FForm triv = trivial_fform(2, 1, 2);
  FForm f11(lv, {{1, 1}, {1, 1}});
  CHECK(evaluate_pair(triv, f11) == qnum(2));
  EvalContext ctx(triv, f11);
  CHECK(ctx.d == 0);
  CHECK(ctx.scaling_denominator == qfac(2));
  CHECK(x_sigma(ctx, {1, 2}).is_zero());
  CHECK(x_sigma(ctx, {2, 1}) == qnum(2) * qnum(2));
}

TEST_CASE("rank-three pairing with repeated letters") {
  FForm u = parse_fform("level n=3 l=2 m=4 : F2 F3 F2(2) F1");
  FForm w = parse_fform("level n=3 l=2 m=4 : F2 F3 F1 F2(2)");
  CHECK(evaluate_pair(u, w) == qnum(3));
  EvalContext ctx(u, w);
  auto perms = matching_permutations_list(ctx.ru, ctx.rw);
  REQUIRE(perms.size() == 6);
  int nonzero = 0;
  for (const Permutation &sigma : perms) {
    const LaurentPoly x = x_sigma(ctx, sigma);
    if (!x.is_zero()) {
      ++nonzero;
      CHECK(sigma == Permutation{1, 2, 5, 4, 3});
      CHECK(x == qnum(2) * qnum(2) * qnum(3).shifted(4));
    }
  }
  CHECK(nonzero == 1);
}

TEST_CASE("level or target mismatches") {
  const Level lv{2, 1, 2};
  FForm u(lv, {{1, 1}});
  FForm t = trivial_fform(2, 1, 2);
  CHECK(evaluate_pair(u, t).is_zero());  // different targets
  FForm other(Level{2, 1, 3}, {{1, 1}});
  CHECK_THROWS_AS(evaluate_pair(u, other), std::invalid_argument);
  FForm dead(lv, {{1, 1}, {1, 1}, {1, 1}});
  CHECK(evaluate_pair(dead, dead).is_zero());  // zero web
}

TEST_CASE("closed evaluation") {
  FForm cl = parse_fform("level n=3 l=2 m=4 : F2 F3 F2(2) F1 F2 F1(2) F3(2) F2(2)");
  CHECK(evaluate_closed(cl) == qnum(3));
  CHECK(evaluate_closed(trivial_fform(3, 2, 4)) == LaurentPoly::one());
}

TEST_CASE("both engines agree") {
  std::mt19937 rng(41);
  for (int trial = 0; trial < 40; ++trial) {
    auto [u, w] = testutil::random_pair(rng, 3, 5, 7);
    const LaurentPoly flow = evaluate_pair(u, w, 1, EvalEngine::Flow);
    const LaurentPoly sigma = evaluate_pair(u, w, 1, EvalEngine::Sigma);
    CHECK(flow == sigma);
  }
}

TEST_CASE("worker count does not change the value") {
  FForm u = parse_fform("level n=3 l=2 m=4 : F2 F3 F2(2) F1");
  FForm w = parse_fform("level n=3 l=2 m=4 : F2 F3 F1 F2(2)");
  const LaurentPoly serial = evaluate_pair(u, w, 1);
  for (int workers : {2, 3, 8}) CHECK(evaluate_pair(u, w, workers) == serial);
  std::mt19937 rng(43);
  for (int trial = 0; trial < 10; ++trial) {
    auto [a, b] = testutil::random_pair(rng, 3, 5, 7);
    CHECK(evaluate_pair(a, b, 4) == evaluate_pair(a, b, 1));
  }
}

TEST_CASE("positivity and diagonal bar-invariance") {
  std::mt19937 rng(47);
  for (int trial = 0; trial < 30; ++trial) {
    auto [u, w] = testutil::random_pair(rng, 3, 5, 7);
    const LaurentPoly v = evaluate_pair(u, w);
    CHECK_FALSE(v.has_negative_coeff());
    const LaurentPoly diag = evaluate_pair(u, u);
    CHECK(diag.bar_invariant());
    CHECK_FALSE(diag.is_zero());
  }
}

TEST_CASE("dual canonical detection") {
  const Level lv{2, 1, 2};
  FForm u(lv, {{1, 1}});
  auto rep = is_dual_canonical(u);
  CHECK(rep.dual_canonical);
  CHECK(rep.certificate == LaurentPoly::one() + LaurentPoly::monomial(2));
  // frozen regression: the doubled rung is [2] times a basis web
  FForm f11(lv, {{1, 1}, {1, 1}});
  auto bad = is_dual_canonical(f11);
  CHECK_FALSE(bad.dual_canonical);
  CHECK(bad.certificate == LaurentPoly::monomial(-2) + LaurentPoly::monomial(0, 2) +
                               LaurentPoly::monomial(2));
}
