#pragma once

/**
 * F-forms, residue/exploded sequences, trivial webs, Morse words and the
 * textual input DSL.
 *
 * Every step list in this project is stored in APPLICATION order (the
 * first element acts on the level first, i.e. bottom-to-top in pictures).
 * The operator notation F_{i_r}...F_{i_1} of the literature reads the
 * other way around; keeping one order everywhere avoids the classic
 * reversal bug, and the residue sequence is just the step list itself.
 */

#include "qlaurent.hpp"
#include "rootweight.hpp"

#include <cctype>
#include <optional>
#include <string>
#include <vector>

namespace qweb {

/** One divided-power F-step: move `power` units from column `index` to `index+1`. */
struct FStep {
  int index = 1;
  int power = 1;
  friend bool operator==(const FStep &a, const FStep &b) {
    return a.index == b.index && a.power == b.power;
  }
};

using ResidueSeq = std::vector<FStep>;
using ExplodedSeq = std::vector<int>;

class FForm {
public:
  FForm() = default;

  /** Steps in application order; zero-power steps are normalized away. */
  FForm(Level level, std::vector<FStep> steps) : level_(level) {
    steps_.reserve(steps.size());
    for (const FStep &s : steps) {
      if (s.index < 1 || s.index >= level_.m)
        throw std::out_of_range("FForm: step index out of range");
      if (s.power < 0) throw std::invalid_argument("FForm: negative power");
      if (s.power > 0) steps_.push_back(s);
    }
    target_ = level_.weight();
    for (const FStep &s : steps_) {
      target_ = apply_F(std::move(target_), s.index, s.power);
      if (out_of_range(target_, level_.n)) zero_ = true;
    }
  }

  const Level &level() const { return level_; }
  const std::vector<FStep> &steps() const { return steps_; }
  const Weight &target() const { return target_; }
  bool is_zero_web() const { return zero_; }

  /** The residue sequence: steps in application order with their powers. */
  const ResidueSeq &residues() const { return steps_; }

  /** Each i^(a) repeated a times with power 1. */
  ExplodedSeq exploded() const {
    ExplodedSeq out;
    for (const FStep &s : steps_)
      for (int j = 0; j < s.power; ++j) out.push_back(s.index);
    return out;
  }

  /** [r]! = prod_t [a_t]! over the residue sequence. */
  LaurentPoly scaling_factorial() const {
    LaurentPoly p = LaurentPoly::one();
    for (const FStep &s : steps_) p *= qfac(s.power);
    return p;
  }

  friend bool operator==(const FForm &a, const FForm &b) {
    return a.level_ == b.level_ && a.steps_ == b.steps_;
  }

private:
  Level level_;
  std::vector<FStep> steps_;
  Weight target_;
  bool zero_ = false;
};

/**
 * The trivial web from (n^ell, 0^{m-ell}) to (0^{m-ell}, n^ell): in
 * application order, rows t = 0..ell-1 of full-power steps
 * F_{ell-t} ... F_{m-1-t}, i.e. residue sequence
 * (ell^(n), ..., (m-1)^(n), (ell-1)^(n), ..., (m-2)^(n), ...).
 */
inline FForm trivial_fform(int n, int ell, int m) {
  Level lv(n, ell, m);
  std::vector<FStep> steps;
  for (int t = 0; t < ell; ++t)
    for (int i = ell - t; i <= m - 1 - t; ++i) steps.push_back({i, n});
  return FForm(lv, std::move(steps));
}

// ---------------------------------------------------------------------------
// Morse words: vertical compositions of elementary slices.  Boundaries are
// sequences of edge labels in [0, n]; label-n edges are the removable
// phantom strands.
// ---------------------------------------------------------------------------

struct MorseSlice {
  enum Kind { Merge, Split, OverCross, UnderCross } kind = Merge;
  int pos = 0; // 0-based strand position (leftmost strand of the slice)
  int k = 0;   // Split: sizes (k, l) produced; crossings: left color k
  int l = 0;   // crossings: right color l
};

struct MorseWord {
  int n = 1;
  std::vector<int> bottom; // boundary labels, left to right
  std::vector<MorseSlice> slices;

  /** Slice-by-slice boundary bookkeeping; throws on mismatch. */
  std::vector<int> top() const {
    std::vector<int> b = bottom;
    for (const MorseSlice &s : slices) {
      switch (s.kind) {
      case MorseSlice::Merge:
        if (s.pos + 1 >= static_cast<int>(b.size()))
          throw std::invalid_argument("MorseWord: merge out of range");
        b[s.pos] += b[s.pos + 1];
        b.erase(b.begin() + s.pos + 1);
        break;
      case MorseSlice::Split:
        if (s.pos >= static_cast<int>(b.size()) || b[s.pos] != s.k + s.l)
          throw std::invalid_argument("MorseWord: split label mismatch");
        b[s.pos] = s.k;
        b.insert(b.begin() + s.pos + 1, s.l);
        break;
      case MorseSlice::OverCross:
      case MorseSlice::UnderCross:
        if (s.pos + 1 >= static_cast<int>(b.size()) || b[s.pos] != s.k ||
            b[s.pos + 1] != s.l)
          throw std::invalid_argument("MorseWord: crossing label mismatch");
        std::swap(b[s.pos], b[s.pos + 1]);
        break;
      }
    }
    return b;
  }
};

/**
 * The ladder picture of an F-form: each step F_i^(a) is a split of column i
 * into (k_i - a, a) followed by a merge of the a-edge into column i+1.
 * Columns with label 0 are still present as genuine 0-labeled strands; the
 * oracle treats them as one-dimensional, which is the same thing.
 */
inline MorseWord fform_to_morse(const FForm &f) {
  if (f.is_zero_web())
    throw std::invalid_argument("fform_to_morse: zero web has no diagram");
  MorseWord w;
  w.n = f.level().n;
  w.bottom = f.level().weight();
  Weight cur = w.bottom;
  for (const FStep &s : f.steps()) {
    int i = s.index - 1; // to 0-based strand position
    w.slices.push_back({MorseSlice::Split, i, cur[i] - s.power, s.power});
    w.slices.push_back({MorseSlice::Merge, i + 1, 0, 0});
    cur = apply_F(std::move(cur), s.index, s.power);
  }
  return w;
}

/**
 * The closed diagram of a pairing (u, w) = w^* composed on top of u: u's
 * slices bottom-to-top, then w's slices reversed with merges and splits
 * exchanged (the upside-down flip of w).  The boundary strands that remain
 * are u's source = w's source = the level, all phantom (label n) or empty
 * (label 0), so the oracle extracts a scalar.
 */
inline MorseWord pair_to_closed(const FForm &u, const FForm &w) {
  if (!(u.level() == w.level()))
    throw std::invalid_argument("pair_to_closed: level mismatch");
  if (u.target() != w.target())
    throw std::invalid_argument("pair_to_closed: target weight mismatch");
  MorseWord word = fform_to_morse(u);
  MorseWord flip = fform_to_morse(w);
  const size_t ubase = word.slices.size();
  for (auto it = flip.slices.rbegin(); it != flip.slices.rend(); ++it) {
    MorseSlice s = *it;
    if (s.kind == MorseSlice::Split) {
      // upside down, a split reads as a merge of its two outputs
      word.slices.push_back({MorseSlice::Merge, s.pos, 0, 0});
    } else {
      // a merge of (a, b) reads as a split into (a, b); recover the sizes
      // by replaying w's weights — simpler: defer to the flip pass below.
      word.slices.push_back({MorseSlice::Split, s.pos, s.k, s.l});
    }
  }
  // Fill in the split sizes for the flipped merges: replay w bottom-to-top
  // recording each merge's input sizes, then assign them in reverse.
  std::vector<std::pair<int, int>> merge_sizes;
  {
    std::vector<int> b = flip.bottom;
    for (const MorseSlice &s : flip.slices) {
      if (s.kind == MorseSlice::Merge) {
        merge_sizes.emplace_back(b[s.pos], b[s.pos + 1]);
        b[s.pos] += b[s.pos + 1];
        b.erase(b.begin() + s.pos + 1);
      } else if (s.kind == MorseSlice::Split) {
        b[s.pos] = s.k;
        b.insert(b.begin() + s.pos + 1, s.l);
      }
    }
  }
  size_t mi = merge_sizes.size();
  for (size_t j = ubase; j < word.slices.size(); ++j) {
    MorseSlice &s = word.slices[j];
    if (s.kind == MorseSlice::Split) {
      --mi;
      s.k = merge_sizes[mi].first;
      s.l = merge_sizes[mi].second;
    }
  }
  return word;
}

// ---------------------------------------------------------------------------
// DSL:  fform := 'level' 'n=' int 'l=' int 'm=' int ':' step+
//       step  := 'F' int ('(' int ')')?
// ---------------------------------------------------------------------------

namespace detail {

class TextCursor {
public:
  explicit TextCursor(const std::string &s) : s_(s) {}

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(const std::string &tok) {
    skip_ws();
    if (s_.compare(pos_, tok.size(), tok) == 0) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }

  void expect(const std::string &tok, const std::string &what) {
    if (!eat(tok)) fail("expected '" + tok + "' in " + what);
  }

  std::optional<long> try_int() {
    skip_ws();
    size_t p = pos_;
    bool neg = false;
    if (p < s_.size() && (s_[p] == '-' || s_[p] == '+')) {
      neg = s_[p] == '-';
      ++p;
    }
    if (p >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[p]))) return std::nullopt;
    long v = 0;
    while (p < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p]))) {
      v = v * 10 + (s_[p] - '0');
      ++p;
    }
    pos_ = p;
    return neg ? -v : v;
  }

  long expect_int(const std::string &what) {
    auto v = try_int();
    if (!v) fail("expected integer in " + what);
    return *v;
  }

  bool done() {
    skip_ws();
    return pos_ >= s_.size();
  }

  [[noreturn]] void fail(const std::string &msg) const {
    throw std::invalid_argument("parse error at offset " + std::to_string(pos_) + ": " + msg);
  }

  size_t pos() const { return pos_; }

private:
  const std::string &s_;
  size_t pos_ = 0;
};

} // namespace detail

/** Parse `level n=<int> l=<int> m=<int> : F<i> F<i>(<a>) ...`. */
inline FForm parse_fform(const std::string &text) {
  detail::TextCursor c(text);
  c.expect("level", "F-form header");
  c.expect("n=", "F-form header");
  long n = c.expect_int("n=");
  c.expect("l=", "F-form header");
  long ell = c.expect_int("l=");
  c.expect("m=", "F-form header");
  long m = c.expect_int("m=");
  c.expect(":", "F-form header");
  std::vector<FStep> steps;
  while (!c.done()) {
    c.expect("F", "F-form step");
    long i = c.expect_int("step index");
    long a = 1;
    if (c.eat("(")) {
      a = c.expect_int("divided power");
      c.expect(")", "divided power");
    }
    steps.push_back({static_cast<int>(i), static_cast<int>(a)});
  }
  return FForm(Level(static_cast<int>(n), static_cast<int>(ell), static_cast<int>(m)),
               std::move(steps));
}

} // namespace qweb
