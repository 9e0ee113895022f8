/**
 * qweb: command-line surface for the web evaluator.
 *
 * Subcommands: eval-pair, eval-closed, link, dual-canonical,
 * oracle-compare, selftest.  Exit codes: 0 on success, 1 on an internal
 * integrity failure (the exactness assertions tripped), 2 on bad user
 * input.  Output is deterministic for fixed inputs regardless of the
 * worker count.
 */

#include "qweb/linkcomp.hpp"
#include "qweb/oracle.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <iostream>
#include <random>

using namespace qweb;
using nlohmann::json;

namespace {

int default_workers() {
  if (const char *env = std::getenv("QWEB_WORKERS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  return 1;
}

struct Output {
  bool as_json = false;
  json doc;

  void set(const std::string &key, const json &v) { doc[key] = v; }

  void emit_text(const std::string &text) {
    if (!as_json) std::cout << text << "\n";
  }

  void finish() {
    if (as_json) std::cout << doc.dump() << "\n";
  }
};

[[noreturn]] void die(bool as_json, int code, const std::string &msg) {
  if (as_json)
    std::cout << json{{"error", msg}, {"exit_code", code}}.dump() << "\n";
  else
    std::cerr << "error: " << msg << "\n";
  std::exit(code);
}

std::string seq_str(const ExplodedSeq &seq) {
  std::string s = "(";
  for (size_t i = 0; i < seq.size(); ++i) s += (i ? "," : "") + std::to_string(seq[i]);
  return s + ")";
}

/** A random valid F-form pair with equal level and target. */
std::pair<FForm, FForm> random_pair(std::mt19937 &rng, int max_n) {
  auto random_form = [&rng](const Level &lv) {
    Weight v = lv.weight();
    std::vector<FStep> steps;
    const int nsteps = static_cast<int>(rng() % 9);
    for (int s = 0; s < nsteps; ++s) {
      std::vector<FStep> moves;
      for (int i = 1; i < lv.m; ++i)
        for (int a = 1; a <= v[i - 1] && v[i] + a <= lv.n; ++a) moves.push_back({i, a});
      if (moves.empty()) break;
      const FStep mv = moves[rng() % moves.size()];
      steps.push_back(mv);
      v = apply_F(std::move(v), mv.index, mv.power);
    }
    return FForm(lv, std::move(steps));
  };
  for (;;) {
    const int n = 1 + static_cast<int>(rng() % max_n);
    const int m = 2 + static_cast<int>(rng() % 4);
    const int ell = 1 + static_cast<int>(rng() % m);
    const Level lv{n, ell, m};
    FForm u = random_form(lv), w = random_form(lv);
    if (!u.is_zero_web() && !w.is_zero_web() && u.target() == w.target()) return {u, w};
  }
}

void require_same_target(const FForm &u, const FForm &w, bool as_json) {
  if (!(u.level() == w.level())) die(as_json, 2, "level mismatch between the two forms");
  if (u.target() != w.target())
    die(as_json, 2, "weight mismatch: the two forms have different targets");
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"exact evaluator for type A webs and link polynomials"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string format = "text";
  int workers = default_workers();
  int nopt = 4;
  long seed = 0;
  int count = 20;
  app.add_option("--format", format, "output format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--n", nopt, "rank bound (selftest, oracle-compare random runs)");
  app.add_option("--seed", seed, "seed for randomized oracle-compare runs");

  std::string form_u, form_w, form_single, braid_text;
  bool framed = true, unframed = false;

  auto *evalpair = app.add_subcommand("eval-pair", "evaluate a pairing of two F-forms");
  evalpair->add_option("u", form_u, "first F-form")->required();
  evalpair->add_option("w", form_w, "second F-form")->required();

  auto *evalclosed = app.add_subcommand("eval-closed", "evaluate a closed web against the trivial one");
  evalclosed->add_option("w", form_single, "closed F-form")->required();

  auto *link = app.add_subcommand("link", "link polynomial of a colored braid closure");
  link->add_option("braid", braid_text, "braid DSL, e.g. 'n=2; colors=1,1; word=s1 s1'")
      ->required();
  link->add_flag("--framed", framed, "framed invariant (default)");
  link->add_flag("--unframed", unframed, "apply the framing correction");

  auto *dual = app.add_subcommand("dual-canonical", "self-pairing membership certificate");
  dual->add_option("w", form_single, "F-form")->required();

  auto *oraclecmp = app.add_subcommand("oracle-compare", "cross-check the formula against the tensor oracle");
  oraclecmp->add_option("u", form_u, "first F-form (omit for a seeded random run)");
  oraclecmp->add_option("w", form_w, "second F-form");
  oraclecmp->add_option("--count", count, "number of random pairs in a seeded run");

  auto *selftest = app.add_subcommand("selftest", "oracle relation suite");

  CLI11_PARSE(app, argc, argv);

  Output out;
  out.as_json = format == "json";

  try {
    if (evalpair->parsed()) {
      FForm u = parse_fform(form_u), w = parse_fform(form_w);
      require_same_target(u, w, out.as_json);
      const LaurentPoly v = evaluate_pair(u, w, workers);
      EvalContext ctx(u, w);
      size_t total = 0, contributing = 0;
      for (const Permutation &sigma : matching_permutations_list(ctx.ru, ctx.rw)) {
        ++total;
        if (!x_sigma(ctx, sigma).is_zero()) ++contributing;
      }
      out.emit_text(v.str());
      out.emit_text("d = " + std::to_string(ctx.d));
      out.emit_text("ru = " + seq_str(ctx.ru) + "  rw = " + seq_str(ctx.rw));
      out.emit_text("|S| = " + std::to_string(total) + ", contributing " +
                    std::to_string(contributing));
      out.set("value", v.str());
      out.set("d", ctx.d);
      out.set("ru", ctx.ru);
      out.set("rw", ctx.rw);
      out.set("permutations", total);
      out.set("contributing", contributing);
    } else if (evalclosed->parsed()) {
      FForm w = parse_fform(form_single);
      FForm triv = trivial_fform(w.level().n, w.level().ell, w.level().m);
      if (w.target() != triv.target())
        die(out.as_json, 2, "weight mismatch: the form does not target the trivial web");
      const LaurentPoly v = evaluate_closed(w, workers);
      out.emit_text(v.str());
      out.set("value", v.str());
    } else if (link->parsed()) {
      if (link->count("--framed") && link->count("--unframed"))
        die(out.as_json, 2, "choose one of --framed/--unframed");
      BraidSpec spec = parse_braid(braid_text);
      const LaurentPoly v = link_invariant(spec.braid, spec.n, !unframed, workers);
      out.emit_text(v.str());
      out.set("value", v.str());
      out.set("framed", !unframed);
      out.set("components", spec.braid.components().size());
    } else if (dual->parsed()) {
      FForm w = parse_fform(form_single);
      auto rep = is_dual_canonical(w, workers);
      out.emit_text(std::string(rep.dual_canonical ? "true" : "false") +
                    "  certificate: " + rep.certificate.str());
      out.set("dual_canonical", rep.dual_canonical);
      out.set("certificate", rep.certificate.str());
    } else if (oraclecmp->parsed()) {
      size_t mismatches = 0;
      json cases = json::array();
      auto compare = [&](const FForm &u, const FForm &w) {
        const LaurentPoly formula = evaluate_pair(u, w, workers);
        const LaurentPoly scalar = oracle::pair_scalar(u, w);
        const bool match = formula == scalar;
        if (!match) ++mismatches;
        out.emit_text(std::string(match ? "MATCH: " : "MISMATCH: formula ") + formula.str() +
                      (match ? "" : " vs oracle " + scalar.str()));
        cases.push_back({{"match", match},
                         {"formula", formula.str()},
                         {"oracle", scalar.str()}});
      };
      if (!form_u.empty() && !form_w.empty()) {
        FForm u = parse_fform(form_u), w = parse_fform(form_w);
        require_same_target(u, w, out.as_json);
        compare(u, w);
      } else if (form_u.empty() && form_w.empty()) {
        std::mt19937 rng(static_cast<unsigned>(seed));
        for (int i = 0; i < count; ++i) {
          auto [u, w] = random_pair(rng, std::min(nopt, 3));
          compare(u, w);
        }
      } else {
        die(out.as_json, 2, "oracle-compare needs two F-forms or none");
      }
      out.set("cases", cases);
      out.set("mismatches", mismatches);
      if (mismatches > 0) {
        out.finish();
        return 1;
      }
    } else if (selftest->parsed()) {
      auto rep = oracle::relation_selftest(nopt);
      out.emit_text(rep.ok ? "selftest passed"
                           : "selftest FAILED at: " + rep.first_failure);
      out.set("ok", rep.ok);
      if (!rep.ok) out.set("first_failure", rep.first_failure);
      if (!rep.ok) {
        out.finish();
        return 1;
      }
    }
  } catch (const IntegrityError &e) {
    die(out.as_json, 1, std::string("integrity failure: ") + e.what());
  } catch (const std::exception &e) {
    die(out.as_json, 2, e.what());
  }
  out.finish();
  return 0;
}
