#pragma once

/**
 * The closed evaluation formula for pairings of two F-forms u, w with a
 * common level and target:
 *
 *   (u, w) = q^d / ([r_u]! [r_w]!) * sum_{sigma} X_sigma,
 *   X_sigma = prod_t [N(sigma, t)] q^{N(e, t) - 1},
 *   N(sigma, t) = < Lambda - sum_{j in J_sigma^{<t}} alpha_{(ru)_j}, alpha_{(ru)_t} >,
 *
 * where sigma ranges over the permutations matching the exploded sequence
 * of u onto that of w.
 *
 * Two engines compute sum_sigma X_sigma:
 *
 *  - sigma_sum: the literal pruned depth-first enumeration (exponential in
 *    the multiplicities; fine for small examples and used as arbiter);
 *  - flow_sum: both Lehmer-code collapses applied, summing over "flows"
 *    (how many exploded letters of each u-step go to each w-step) with
 *    closed-form quantum-binomial weights.  Identical totals by
 *    construction, re-verified by property tests.
 *
 * The final division by [r_u]![r_w]! is exact and the result must land in
 * N[q, q^{-1}]; violations throw qweb::IntegrityError since they indicate
 * a convention bug, not bad input.
 */

#include "permenum.hpp"
#include "qlaurent.hpp"
#include "rootweight.hpp"
#include "webforms.hpp"

#include <future>
#include <optional>
#include <vector>

namespace qweb {

/** Internal-contract violation (positivity / exact-division failures). */
class IntegrityError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

struct EvalContext {
  Level level;
  Weight target;
  ExplodedSeq ru, rw;
  LaurentPoly scaling_denominator; // [r_u]! [r_w]!
  long d = 0;

  EvalContext(const FForm &u, const FForm &w) : level(u.level()) {
    if (!(u.level() == w.level()))
      throw std::invalid_argument("EvalContext: level mismatch");
    if (u.target() != w.target())
      throw std::invalid_argument("EvalContext: target weight mismatch");
    target = u.target();
    ru = u.exploded();
    rw = w.exploded();
    scaling_denominator = u.scaling_factorial() * w.scaling_factorial();
    d = d_shift(level, target);
  }
};

/**
 * N^Lambda(sigma, seq, t): the Cartan pairing of Lambda minus the roots of
 * the sigma-earlier positions against alpha at position t (all 1-based).
 */
inline int count_weight_before(const Level &level, const ExplodedSeq &seq,
                               const Permutation &sigma, int t) {
  const int let = seq[t - 1];
  Weight v = level.weight();
  for (int j : j_before(sigma, t)) v = apply_F(std::move(v), seq[j - 1], 1);
  return cartan_pair(v, let);
}

/** N for the identity permutation (sigma = e), position t. */
inline int count_weight_identity(const Level &level, const ExplodedSeq &seq, int t) {
  Weight v = level.weight();
  for (int j = 1; j < t; ++j) v = apply_F(std::move(v), seq[j - 1], 1);
  return cartan_pair(v, seq[t - 1]);
}

/** X_sigma = prod_t [N(sigma,t)] q^{N(e,t)-1} over the exploded u-sequence. */
inline LaurentPoly x_sigma(const EvalContext &ctx, const Permutation &sigma) {
  LaurentPoly out = LaurentPoly::one();
  const int r = static_cast<int>(ctx.ru.size());
  for (int t = 1; t <= r; ++t) {
    int N = count_weight_before(ctx.level, ctx.ru, sigma, t);
    if (N == 0) return LaurentPoly::zero();
    int Ne = count_weight_identity(ctx.level, ctx.ru, t);
    out *= qnum(N).shifted(Ne - 1);
  }
  return out;
}

namespace detail {

/**
 * sum_sigma X_sigma by pruned depth-first enumeration.  The factor [N]
 * for position t only depends on sigma's prefix, so a zero N cuts the
 * subtree.  The overall q-power sum_t (N(e,t) - 1) is a constant shift
 * applied once at the end.
 */
inline LaurentPoly sigma_sum(const EvalContext &ctx) {
  const int r = static_cast<int>(ctx.ru.size());
  const Weight Lam = ctx.level.weight();
  long qpow = -r;
  {
    Weight v = Lam;
    for (int t = 1; t <= r; ++t) {
      qpow += cartan_pair(v, ctx.ru[t - 1]);
      v = apply_F(std::move(v), ctx.ru[t - 1], 1);
    }
  }
  LaurentPoly tot;
  std::vector<LaurentPoly> stack(r + 1);
  stack[0] = LaurentPoly::one();
  auto factor_zero = [&](const Permutation &sigma, int t) {
    const int let = ctx.ru[t - 1];
    const int img = sigma[t - 1];
    int v1 = Lam[let - 1], v2 = Lam[let];
    for (int j = 1; j < t; ++j) {
      if (sigma[j - 1] < img) {
        const int rj = ctx.ru[j - 1];
        if (rj == let) {
          --v1;
          ++v2;
        } else if (rj == let - 1) {
          ++v1;
        } else if (rj == let + 1) {
          --v2;
        }
      }
    }
    const int N = v1 - v2;
    if (N == 0) return true;
    stack[t] = stack[t - 1] * qnum(N);
    return false;
  };
  matching_permutations_pruned(ctx.ru, ctx.rw, factor_zero, [&](const Permutation &) {
    tot += stack[r];
    return true;
  });
  return tot.shifted(qpow);
}

/** Flow-collapse engine for sum_sigma X_sigma. */
class FlowEngine {
  struct State {
    std::vector<int> remaining;           // unfilled capacity per w-group
    std::vector<int> fill;                // letters already assigned to h
    std::vector<std::vector<int>> counts; // counts[h][letter]
  };

  struct BranchSink {
    LaurentPoly acc;
    State state;
  };

  struct Snapshot {
    std::vector<std::vector<int>> counts;
    std::vector<int> fill;
  };

public:
  FlowEngine(const EvalContext &ctx, const ResidueSeq &ug, const ResidueSeq &wg)
      : Lam_(ctx.level.weight()), ug_(ug), wg_(wg) {
    const int m = ctx.level.m;
    for (int hi = 0; hi < static_cast<int>(wg_.size()); ++hi)
      cand_[wg_[hi].index].push_back(hi);
    st_.remaining.reserve(wg_.size());
    for (const FStep &s : wg_) st_.remaining.push_back(s.power);
    st_.fill.assign(wg_.size(), 0);
    st_.counts.assign(wg_.size(), std::vector<int>(m + 2, 0));
  }

  /** sum over flows of prod_g (1/prod_h [f_gh]!) prod factors; times the
   *  factorials of both sides this equals sum_sigma X_sigma (up to the
   *  constant q-power handled by the caller). */
  LaurentPoly run(int workers) {
    if (workers <= 1 || ug_.empty()) {
      LaurentPoly tot;
      dfs(0, LaurentPoly::one(), tot);
      return tot;
    }
    // Partition the branches of the first u-group across workers; each
    // branch carries its own committed state copy.  Summation order is the
    // branch order, independent of the worker count.
    std::vector<BranchSink> branches;
    collect_ = &branches;
    {
      LaurentPoly ignored;
      dfs(0, LaurentPoly::one(), ignored);
    }
    collect_ = nullptr;
    std::vector<std::future<LaurentPoly>> futs;
    const int nb = static_cast<int>(branches.size());
    const int nw = std::min(workers, std::max(nb, 1));
    for (int wk = 0; wk < nw; ++wk) {
      futs.push_back(std::async(std::launch::async, [this, &branches, wk, nw]() {
        LaurentPoly part;
        for (int b = wk; b < static_cast<int>(branches.size()); b += nw) {
          FlowEngine sub(*this);
          sub.st_ = branches[b].state;
          sub.collect_ = nullptr;
          LaurentPoly tot;
          sub.dfs(1, branches[b].acc, tot);
          part += tot;
        }
        return part;
      }));
    }
    LaurentPoly tot;
    for (auto &f : futs) tot += f.get();
    return tot;
  }

private:
  void dfs(size_t g, const LaurentPoly &acc, LaurentPoly &tot) {
    if (g == ug_.size()) {
      tot += acc;
      return;
    }
    const int let = ug_[g].index;
    const int a = ug_[g].power;
    auto it = cand_.find(let);
    if (it == cand_.end()) return;
    // B values use only the state advanced by earlier u-groups: snapshot
    // at group entry, within-group commits are encoded by the offsets.
    const Snapshot snap{st_.counts, st_.fill};
    distribute(g, snap, it->second, 0, a, acc, 0, tot);
  }

  void distribute(size_t g, const Snapshot &snap, const std::vector<int> &hs, size_t idx,
                  int left, const LaurentPoly &acc, int offs, LaurentPoly &tot) {
    if (idx == hs.size()) {
      if (left != 0) return;
      if (collect_ && g == 0) {
        collect_->push_back({acc, st_});
        return;
      }
      dfs(g + 1, acc, tot);
      return;
    }
    const int h = hs[idx];
    const int let = ug_[g].index;
    const int mx = std::min(left, st_.remaining[h]);
    for (int f = 0; f <= mx; ++f) {
      if (f == 0) {
        distribute(g, snap, hs, idx + 1, left, acc, offs, tot);
        continue;
      }
      long v = Lam_[let - 1] - Lam_[let];
      for (int h2 = 0; h2 < h; ++h2) {
        const std::vector<int> &c = snap.counts[h2];
        v += -2L * c[let] + c[let - 1] + c[let + 1];
      }
      const long B = v - snap.fill[h];
      LaurentPoly x = LaurentPoly::one();
      for (int j = 0; j < f && !x.is_zero(); ++j) x *= qnum(B - offs - j);
      if (x.is_zero()) continue;
      x = x.exact_div(qfac(f));
      st_.remaining[h] -= f;
      st_.fill[h] += f;
      st_.counts[h][let] += f;
      distribute(g, snap, hs, idx + 1, left - f, acc * x, offs + f, tot);
      st_.counts[h][let] -= f;
      st_.fill[h] -= f;
      st_.remaining[h] += f;
    }
  }

  Weight Lam_;
  ResidueSeq ug_, wg_;
  std::map<int, std::vector<int>> cand_;
  State st_;
  std::vector<BranchSink> *collect_ = nullptr; // branch sink (run() only)
};

/** sum_sigma X_sigma via the flow collapse; equals sigma_sum(ctx). */
inline LaurentPoly flow_sum(const EvalContext &ctx, const FForm &u, const FForm &w,
                            int workers) {
  const int r = static_cast<int>(ctx.ru.size());
  long qpow = -r;
  {
    Weight v = ctx.level.weight();
    for (int t = 1; t <= r; ++t) {
      qpow += cartan_pair(v, ctx.ru[t - 1]);
      v = apply_F(std::move(v), ctx.ru[t - 1], 1);
    }
  }
  FlowEngine eng(ctx, u.residues(), w.residues());
  LaurentPoly tot = eng.run(workers);
  // flows carry 1/prod[f]!; multiplying by [r_u]![r_w]! gives the sigma sum
  tot = tot * ctx.scaling_denominator;
  return tot.shifted(qpow);
}

} // namespace detail

enum class EvalEngine { Flow, Sigma };

/**
 * The pairing (u, w).  Returns 0 when the forms are zero-flagged, have
 * different targets, or their exploded sequences are not rearrangements.
 */
inline LaurentPoly evaluate_pair(const FForm &u, const FForm &w, int workers = 1,
                                 EvalEngine engine = EvalEngine::Flow) {
  if (!(u.level() == w.level()))
    throw std::invalid_argument("evaluate_pair: level mismatch");
  if (u.is_zero_web() || w.is_zero_web()) return LaurentPoly::zero();
  if (u.target() != w.target()) return LaurentPoly::zero();
  {
    ExplodedSeq a = u.exploded(), b = w.exploded();
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) return LaurentPoly::zero();
  }
  EvalContext ctx(u, w);
  LaurentPoly total = engine == EvalEngine::Flow ? detail::flow_sum(ctx, u, w, workers)
                                                 : detail::sigma_sum(ctx);
  LaurentPoly value;
  try {
    value = total.exact_div(ctx.scaling_denominator).shifted(ctx.d);
  } catch (const std::domain_error &e) {
    throw IntegrityError(std::string("evaluate_pair: scaling division failed: ") + e.what());
  }
  if (value.has_negative_coeff())
    throw IntegrityError("evaluate_pair: negative coefficient violates positivity contract");
  return value;
}

/** Pairing against the trivial web of the same level data. */
inline LaurentPoly evaluate_closed(const FForm &w, int workers = 1) {
  const Level &lv = w.level();
  return evaluate_pair(trivial_fform(lv.n, lv.ell, lv.m), w, workers);
}

/** q^{-d} (w, w) in 1 + qN[q]?  Returns the certificate polynomial too. */
struct DualCanonicalReport {
  bool dual_canonical = false;
  LaurentPoly certificate; // q^{-d} (w, w)
};

inline DualCanonicalReport is_dual_canonical(const FForm &w, int workers = 1) {
  DualCanonicalReport rep;
  if (w.is_zero_web()) return rep; // 0 is not in 1 + qN[q]
  EvalContext ctx(w, w);
  rep.certificate = evaluate_pair(w, w, workers).shifted(-ctx.d);
  rep.dual_canonical = rep.certificate.is_positive_normalized();
  return rep;
}

} // namespace qweb
