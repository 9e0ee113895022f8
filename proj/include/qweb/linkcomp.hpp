#pragma once

/**
 * Braid-closure link compiler: turn a colored braid word into a linear
 * combination of F-forms whose closed evaluation is the link polynomial.
 *
 * Crossings are removed by the skein expansion
 *
 *   (k,l)-crossing = (-1)^{kl} sum_{b-a=k-l} (-q)^{+-(k-b)} x [b-rung right,
 *                     a-rung left]
 *
 * and each surviving term becomes a small F-word "gadget" that carries the
 * two strands across a scratch column.  Every gadget template is validated
 * against the oracle crossing (exact matrix equality on its local window)
 * before it is used, so an unsupported color/rank combination fails loudly.
 *
 * Two layout schemes are provided: a compact one for uniformly colored
 * braids (column budget m = 2r + W, reproducing the minimal layouts) and a
 * general one for arbitrary colors (m = 3r + W - 1, explicit column
 * simulation).  Both close the braid with nested cups below and caps above
 * so the result lives at the level (n^r, 0^{m-r}).
 */

#include "evaluator.hpp"
#include "oracle.hpp"

#include <future>
#include <map>
#include <mutex>
#include <sstream>
#include <tuple>

namespace qweb {

/** One signed braid generator: strands index, index+1 cross (1-based). */
struct BraidLetter {
  int index = 1;
  bool positive = true;

  friend bool operator==(const BraidLetter &a, const BraidLetter &b) {
    return a.index == b.index && a.positive == b.positive;
  }
};

/** A colored braid whose closure is the link. */
struct ColoredBraid {
  std::vector<int> colors;        // color of input strand j (1-based j)
  std::vector<BraidLetter> word;  // bottom to top

  int strand_count() const { return static_cast<int>(colors.size()); }

  /** perm[j] = input strand (0-based) arriving at top position j. */
  std::vector<int> permutation() const {
    std::vector<int> perm(colors.size());
    for (size_t j = 0; j < perm.size(); ++j) perm[j] = static_cast<int>(j);
    for (const BraidLetter &s : word) std::swap(perm[s.index - 1], perm[s.index]);
    return perm;
  }

  /** Closure orbits as lists of input-strand indices (0-based). */
  std::vector<std::vector<int>> components() const {
    const int r = strand_count();
    std::vector<int> perm = permutation(), next(r);
    for (int j = 0; j < r; ++j) next[perm[j]] = j;
    std::vector<bool> seen(r, false);
    std::vector<std::vector<int>> comps;
    for (int s = 0; s < r; ++s) {
      if (seen[s]) continue;
      std::vector<int> comp{s};
      seen[s] = true;
      for (int t = next[s]; t != s; t = next[t]) {
        comp.push_back(t);
        seen[t] = true;
      }
      comps.push_back(std::move(comp));
    }
    return comps;
  }

  /** Colors must be constant along closure orbits. */
  bool color_consistent() const {
    for (const auto &comp : components())
      for (int s : comp)
        if (colors[s] != colors[comp[0]]) return false;
    return true;
  }

  /**
   * Self-writhe of each component: signed count of crossings where both
   * strands belong to that component.  Indexed like components().
   */
  std::vector<int> self_writhes() const {
    const int r = strand_count();
    auto comps = components();
    std::vector<int> owner(r);
    for (size_t c = 0; c < comps.size(); ++c)
      for (int s : comps[c]) owner[s] = static_cast<int>(c);
    std::vector<int> writhe(comps.size(), 0);
    std::vector<int> at(r);  // at[pos] = input strand currently at pos
    for (int j = 0; j < r; ++j) at[j] = j;
    for (const BraidLetter &s : word) {
      const int a = at[s.index - 1], b = at[s.index];
      if (owner[a] == owner[b]) writhe[owner[a]] += s.positive ? 1 : -1;
      std::swap(at[s.index - 1], at[s.index]);
    }
    return writhe;
  }
};

/** A Laurent-linear combination of F-forms with a common level and target. */
struct WebCombination {
  Level level;
  std::vector<std::pair<LaurentPoly, FForm>> terms;
};

struct SkeinTerm {
  int b = 0;  // right-rung size
  int a = 0;  // left-rung size, a - b = l - k
  LaurentPoly coeff;
};

/**
 * The crossing expansion: terms (a, b) with b - a = k - l, both rung
 * labels admissible, coefficient (-1)^{kl} (-q)^{+-(k-b)}.
 */
inline std::vector<SkeinTerm> skein_expand_crossing(int k, int l, bool positive) {
  if (k < 0 || l < 0) throw std::invalid_argument("skein_expand_crossing: negative color");
  std::vector<SkeinTerm> out;
  for (int b = 0; b <= k; ++b) {
    const int a = b - (k - l);
    if (a < 0 || a > l) continue;
    const long e = positive ? (k - b) : -(k - b);
    const BigInt sign = (k * l + (k - b)) % 2 == 0 ? 1 : -1;
    out.push_back({b, a, LaurentPoly::monomial(e).scaled(sign)});
  }
  return out;
}

namespace detail {

/**
 * Gadget for one skein term at columns (p, p+1) with scratch p+2, in
 * application order: F_p^(b), F_{p+1}^(k), F_p^(k-b).  Maps column
 * contents (k, l, 0) -> (0, l, k).  Terms whose middle label l+b would
 * exceed n are zero webs and dropped.
 */
inline std::vector<std::pair<LaurentPoly, ResidueSeq>> gadget_words(int k, int l, bool positive,
                                                                    int p, int n) {
  std::vector<std::pair<LaurentPoly, ResidueSeq>> out;
  for (const SkeinTerm &t : skein_expand_crossing(k, l, positive)) {
    if (l + t.b > n) continue;
    ResidueSeq w;
    if (t.b) w.push_back({p, t.b});
    w.push_back({p + 1, k});
    if (k - t.b) w.push_back({p, k - t.b});
    out.push_back({t.coeff, std::move(w)});
  }
  return out;
}

/**
 * Validate a gadget template against the oracle: on the local 3-column
 * window with contents (k, l, 0), the coefficient-weighted sum of gadget
 * words must equal the oracle crossing followed by the column shift, on
 * every basis vector.  Results are memoized per (k, l, n, sign).
 */
inline bool gadget_validated(int k, int l, int n, bool positive) {
  static std::map<std::tuple<int, int, int, bool>, bool> cache;
  static std::mutex mtx;
  {
    std::lock_guard<std::mutex> g(mtx);
    auto it = cache.find({k, l, n, positive});
    if (it != cache.end()) return it->second;
  }
  bool ok = true;
  auto gws = gadget_words(k, l, positive, 1, n);
  for (oracle::Mask S : oracle::subsets(n, k)) {
    for (oracle::Mask T : oracle::subsets(n, l)) {
      // expected: crossing output (A, B) reseated as (0, A, B)
      oracle::State expect;
      for (const auto &[key, c] :
           oracle::apply_crossing(oracle::basis_state({S, T}), 0, k, l, n, positive))
        oracle::accumulate(expect, {0, key[0], key[1]}, c);
      oracle::State got;
      for (const auto &[coeff, letters] : gws) {
        oracle::State st = oracle::basis_state({S, T, 0});
        std::vector<int> cols{k, l, 0};
        for (const FStep &s : letters) {
          st = oracle::apply_split(st, s.index - 1, cols[s.index - 1] - s.power, s.power);
          st = oracle::apply_merge(st, s.index);
          cols[s.index - 1] -= s.power;
          cols[s.index] += s.power;
        }
        for (const auto &[key, c] : st) oracle::accumulate(got, key, c * coeff);
      }
      if (got != expect) ok = false;
    }
    if (!ok) break;
  }
  std::lock_guard<std::mutex> g(mtx);
  cache[{k, l, n, positive}] = ok;
  return ok;
}

inline void require_gadget(int k, int l, int n, bool positive) {
  if (!gadget_validated(k, l, n, positive)) {
    std::ostringstream os;
    os << "unsupported color/rank combination: (" << k << "," << l << ") crossing at n=" << n
       << " failed oracle validation";
    throw IntegrityError(os.str());
  }
}

/** A partial compiled term: coefficient, letters so far, column contents. */
struct CompileTerm {
  LaurentPoly coeff;
  ResidueSeq letters;
  std::vector<int> cols;

  /** Emit F_p^(a), checking column validity. */
  void emit(int p, int a, int n) {
    if (a == 0) return;
    const int m = static_cast<int>(cols.size());
    if (p < 1 || p >= m || a < 0 || a > cols[p - 1] || cols[p] + a > n)
      throw IntegrityError("link compiler: invalid column move");
    cols[p - 1] -= a;
    cols[p] += a;
    letters.push_back({p, a});
  }
};

} // namespace detail

/**
 * General-colors compiler: column budget m = 3r + W - 1.  Nested cups
 * below, a rightward sweep per braid letter with the validated crossing
 * gadget, caps above; the compiled forms all target the trivial web.
 */
inline WebCombination compile_braid_closure(const ColoredBraid &braid, int n) {
  const int r = braid.strand_count();
  if (r == 0) throw std::invalid_argument("compile_braid_closure: empty braid");
  for (int c : braid.colors)
    if (c < 1 || c > n) throw std::invalid_argument("compile_braid_closure: color out of range");
  for (const BraidLetter &s : braid.word)
    if (s.index < 1 || s.index >= r)
      throw std::invalid_argument("compile_braid_closure: generator index out of range");
  if (!braid.color_consistent())
    throw std::invalid_argument("compile_braid_closure: colors not constant on closure orbits");

  const int W = static_cast<int>(braid.word.size());
  const int m = 3 * r + W - 1;
  const Level level{n, r, m};

  detail::CompileTerm seed;
  seed.coeff = LaurentPoly::one();
  seed.cols.assign(m, 0);
  for (int j = 0; j < r; ++j) seed.cols[j] = n;

  // cups: for cup j the phantom starts at column r+1-j, hops right over the
  // previously created actives to column r, splits off color c_j, and its
  // return travels to station m+1-j.
  for (int j = 1; j <= r; ++j) {
    const int cj = braid.colors[j - 1];
    for (int p = r + 1 - j; p <= r - 1; ++p) seed.emit(p, n - seed.cols[p], n);
    seed.emit(r, n - cj, n);
    for (int p = r + 1; p <= m - j; ++p) seed.emit(p, n - cj, n);
  }
  for (int j = 0; j < r; ++j)
    if (seed.cols[j] != braid.colors[j]) throw IntegrityError("link compiler: cup layout broken");

  std::vector<detail::CompileTerm> terms{std::move(seed)};
  std::vector<int> strandcolor = braid.colors;
  int t = 0;
  for (const BraidLetter &s : braid.word) {
    ++t;
    const int i = s.index;
    const int k = strandcolor[i - 1], l = strandcolor[i];
    detail::require_gadget(k, l, n, s.positive);
    auto gws = detail::gadget_words(k, l, s.positive, t + i - 1, n);
    std::vector<detail::CompileTerm> next;
    for (detail::CompileTerm &term : terms) {
      // shift strands i+2..r one column right, rightmost first
      for (int sidx = r; sidx >= i + 2; --sidx) term.emit(t + sidx - 1, strandcolor[sidx - 1], n);
      for (const auto &[gc, gw] : gws) {
        detail::CompileTerm branch = term;
        branch.coeff = branch.coeff * gc;
        for (const FStep &st : gw) branch.emit(st.index, st.power, n);
        for (int sidx = i - 1; sidx >= 1; --sidx)
          branch.emit(t + sidx - 1, strandcolor[sidx - 1], n);
        next.push_back(std::move(branch));
      }
    }
    terms = std::move(next);
    std::swap(strandcolor[i - 1], strandcolor[i]);
  }

  // caps: outputs sit at columns W+1..W+r; shift right by r-1 then cap the
  // rightmost remaining output with the leftmost remaining return, hopping
  // spent phantoms out of the way.
  for (detail::CompileTerm &term : terms) {
    for (int sidx = r; sidx >= 1; --sidx)
      for (int sh = 0; sh < r - 1; ++sh) term.emit(W + sidx + sh, strandcolor[sidx - 1], n);
    for (int tt = 1; tt <= r; ++tt) {
      const int oc = W + 2 * r - 1;  // rightmost remaining output column
      auto has_return_right = [&](int from) {
        for (int x = from; x < m; ++x)
          if (term.cols[x] < n) return true;
        return false;
      };
      while (term.cols[oc] == n && has_return_right(oc + 1)) {
        int p = oc + 1;
        while (p < m && term.cols[p] < n) {
          term.emit(p, n - term.cols[p], n);
          ++p;
        }
      }
      term.emit(oc, term.cols[oc - 1], n);
      for (int sidx = r - tt; sidx >= 1; --sidx) {
        const int p = W + r + sidx + tt - 2;
        term.emit(p, term.cols[p - 1], n);
      }
    }
    // push phantoms right through empty columns into their final stations
    bool moved = true;
    while (moved) {
      moved = false;
      for (int p = m - 1; p >= 1; --p)
        if (term.cols[p - 1] == n && term.cols[p] == 0) {
          term.emit(p, n, n);
          moved = true;
        }
    }
    for (int p = 0; p < m; ++p) {
      const int want = p < m - r ? 0 : n;
      if (term.cols[p] != want) throw IntegrityError("link compiler: cap layout broken");
    }
  }

  WebCombination comb;
  comb.level = level;
  const Weight target = trivial_fform(n, r, m).target();
  for (detail::CompileTerm &term : terms) {
    FForm f(level, term.letters);
    if (f.is_zero_web() || f.target() != target)
      throw IntegrityError("link compiler: compiled term misses the trivial target");
    comb.terms.push_back({std::move(term.coeff), std::move(f)});
  }
  return comb;
}

/**
 * Compact compiler for uniformly colored braids: column budget m = 2r + W.
 * Kept as an independent layout for regression against the general scheme.
 */
inline WebCombination compile_braid_closure_compact(const ColoredBraid &braid, int n) {
  const int r = braid.strand_count();
  if (r == 0) throw std::invalid_argument("compile: empty braid");
  const int c = braid.colors[0];
  for (int cc : braid.colors)
    if (cc != c) throw std::invalid_argument("compact layout requires equal colors");
  if (c < 1 || c > n) throw std::invalid_argument("compile: color out of range");
  for (const BraidLetter &s : braid.word)
    if (s.index < 1 || s.index >= r) throw std::invalid_argument("compile: generator index");

  const int W = static_cast<int>(braid.word.size());
  const int m = 2 * r + W;
  const Level level{n, r, m};
  const int nc = n - c;

  detail::CompileTerm seed;
  seed.coeff = LaurentPoly::one();
  seed.cols.assign(m, 0);
  for (int j = 0; j < r; ++j) seed.cols[j] = n;
  for (int j = r; j >= 1; --j) seed.emit(j, nc, n);
  for (int s = 1; s <= r - 1; ++s)
    for (int j = r + s; j >= s + 1; --j) seed.emit(j, nc, n);
  for (int i = r; i >= 1; --i)
    for (int j = r + i; j <= m - r + i - 1; ++j) seed.emit(j, nc, n);

  std::vector<detail::CompileTerm> terms{std::move(seed)};
  int t = 0;
  for (const BraidLetter &s : braid.word) {
    ++t;
    const int i = s.index;
    detail::require_gadget(c, c, n, s.positive);
    auto gws = detail::gadget_words(c, c, s.positive, t + i - 1, n);
    std::vector<detail::CompileTerm> next;
    for (detail::CompileTerm &term : terms) {
      for (int sidx = r; sidx >= i + 2; --sidx) term.emit(t + sidx - 1, c, n);
      for (const auto &[gc, gw] : gws) {
        detail::CompileTerm branch = term;
        branch.coeff = branch.coeff * gc;
        for (const FStep &st : gw) branch.emit(st.index, st.power, n);
        for (int sidx = i - 1; sidx >= 1; --sidx) branch.emit(t + sidx - 1, c, n);
        next.push_back(std::move(branch));
      }
    }
    terms = std::move(next);
  }

  for (detail::CompileTerm &term : terms) {
    for (int tt = 1; tt <= r; ++tt) {
      term.emit(m - r, c, n);
      for (int j = m - r - 1; j >= W + tt; --j) term.emit(j, c, n);
      for (int j = m - r + 1; j <= m - tt; ++j) term.emit(j, c, n);
    }
    for (int p = 0; p < m; ++p) {
      const int want = p < m - r ? 0 : n;
      if (term.cols[p] != want) throw IntegrityError("link compiler: cap layout broken");
    }
  }

  WebCombination comb;
  comb.level = level;
  const Weight target = trivial_fform(n, r, m).target();
  for (detail::CompileTerm &term : terms) {
    FForm f(level, term.letters);
    if (f.is_zero_web() || f.target() != target)
      throw IntegrityError("link compiler: compiled term misses the trivial target");
    comb.terms.push_back({std::move(term.coeff), std::move(f)});
  }
  return comb;
}

/** Linear extension of evaluate_closed; terms evaluate independently. */
inline LaurentPoly evaluate_combination(const WebCombination &comb, int workers = 1) {
  if (comb.terms.empty()) return LaurentPoly::zero();
  for (const auto &[coeff, f] : comb.terms)
    if (!(f.level() == comb.level) || f.target() != comb.terms[0].second.target())
      throw std::invalid_argument("evaluate_combination: mixed levels or targets");
  const int nterms = static_cast<int>(comb.terms.size());
  const int nw = std::max(1, std::min(workers, nterms));
  if (nw == 1) {
    LaurentPoly total;
    for (const auto &[coeff, f] : comb.terms) total += coeff * evaluate_closed(f);
    return total;
  }
  std::vector<std::future<LaurentPoly>> futs;
  for (int w = 0; w < nw; ++w)
    futs.push_back(std::async(std::launch::async, [&, w] {
      LaurentPoly part;
      for (int i = w; i < nterms; i += nw)
        part += comb.terms[i].first * evaluate_closed(comb.terms[i].second);
      return part;
    }));
  LaurentPoly total;
  for (auto &f : futs) total += f.get();
  return total;
}

/**
 * The link polynomial of the braid closure.  Framed by default; with
 * framed = false each color-c component with self-writhe w contributes a
 * correction factor q^{-w * c(-c+n+1)}.
 */
inline LaurentPoly link_invariant(const ColoredBraid &braid, int n, bool framed = true,
                                  int workers = 1) {
  LaurentPoly v = evaluate_combination(compile_braid_closure(braid, n), workers);
  if (!framed) {
    const auto comps = braid.components();
    const auto writhes = braid.self_writhes();
    long shift = 0;
    for (size_t i = 0; i < comps.size(); ++i) {
      const long c = braid.colors[comps[i][0]];
      shift -= writhes[i] * c * (-c + n + 1);
    }
    v = v.shifted(shift);
  }
  return v;
}

/** A braid description together with its ambient rank. */
struct BraidSpec {
  int n = 1;
  ColoredBraid braid;
};

/**
 * Parse the braid DSL: `n=2; colors=1,1; word=s1 S2` — lowercase s for a
 * positive generator, uppercase S for a negative one; the word may be
 * empty.
 */
inline BraidSpec parse_braid(const std::string &text) {
  detail::TextCursor cur(text);
  BraidSpec spec;
  cur.expect("n=", "braid header");
  spec.n = static_cast<int>(cur.expect_int("n="));
  cur.expect(";", "braid header");
  cur.expect("colors=", "braid header");
  spec.braid.colors.push_back(static_cast<int>(cur.expect_int("colors")));
  while (cur.eat(","))
    spec.braid.colors.push_back(static_cast<int>(cur.expect_int("colors")));
  cur.expect(";", "braid header");
  cur.expect("word=", "braid header");
  while (!cur.done()) {
    BraidLetter letter;
    if (cur.eat("s"))
      letter.positive = true;
    else if (cur.eat("S"))
      letter.positive = false;
    else
      throw std::invalid_argument("braid DSL: expected 's' or 'S' generator");
    letter.index = static_cast<int>(cur.expect_int("generator index"));
    spec.braid.word.push_back(letter);
  }
  if (spec.n < 1) throw std::invalid_argument("braid DSL: n must be positive");
  return spec;
}

} // namespace qweb
