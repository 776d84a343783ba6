#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "eldec/decider.hpp"
#include "eldec/parse.hpp"

using namespace eldec;

namespace {

FormulaPtr parse_in(const std::string& theory_id, const std::string& text) {
  return parse_formula(theory(theory_id).surface_sig, text);
}

constexpr uint64_t kBudget = 1000000;

}  // namespace

TEST_CASE("sentence numbering round-trips and stays injective") {
  const Signature& sig = theory("succ").surface_sig;
  std::vector<std::string> seen;
  for (uint64_t c = 0; c < 400; ++c) {
    FormulaPtr s = sentence_at(sig, c);
    CHECK(free_vars(s).empty());
    seen.push_back(to_string(s));
  }
  std::sort(seen.begin(), seen.end());
  CHECK(std::adjacent_find(seen.begin(), seen.end()) == seen.end());
  // inverse lookup agrees
  for (uint64_t c : {0ull, 7ull, 55ull, 190ull}) {
    FormulaPtr s = sentence_at(sig, c);
    auto back = sentence_code(sig, s, 400);
    REQUIRE(back.has_value());
    CHECK(*back == c);
  }
  // the key sentence of the nonuniform-copy argument has a small code
  auto code = sentence_code(sig, parse_in("succ", "exists x. S(x) = #1"), 500);
  REQUIRE(code.has_value());
  CHECK(*code < 500);
}

TEST_CASE("decide_mc agrees with hand semantics on the zero-marked line") {
  const auto& t = theory("succ0");
  Presentation p = make_builtin("succ0");

  auto dec = [&](const std::string& s) {
    DecisionTrace tr;
    Verdict v = decide_mc(t, p, parse_in("succ0", s), kBudget, &tr);
    REQUIRE(v != Verdict::Timeout);
    CHECK(tr.witness_matrix != 0);
    return v == Verdict::True;
  };
  CHECK(dec("exists y. S(y) = #3"));
  CHECK_FALSE(dec("exists y. S(y) = #0"));
  CHECK(dec("exists y. S(y) = #1"));
  CHECK(dec("#2 = S(S(zero))"));
  CHECK_FALSE(dec("#2 = S(zero)"));
  CHECK(dec("forall x. (Zero(x) | exists y. x = S(y))"));

  SUBCASE("pullback translation preserves verdicts") {
    Presentation q = pullback(p, Permutation::swap_pair(0, 5));
    // q's #5 plays p's #0 and vice versa
    CHECK(decide_mc(t, q, parse_in("succ0", "exists y. S(y) = #5"), kBudget) ==
          Verdict::False);
    CHECK(decide_mc(t, q, parse_in("succ0", "exists y. S(y) = #0"), kBudget) ==
          Verdict::True);
    CHECK(decide_mc(t, q, parse_in("succ0", "Zero(#5)"), kBudget) ==
          Verdict::True);
  }
}

TEST_CASE("decide_mc matches the classical oracle on random sentences") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<uint64_t> pick_code(0, 1500);
  for (const std::string id : {"succ0", "dlo++", "adj"}) {
    const auto& t = theory(id);
    Presentation canon = make_builtin(t.canonical_spec);
    std::vector<Presentation> pres{canon, pullback(canon, Permutation::swap_pair(0, 4)),
                                   pullback(canon, Permutation::fin_supp(
                                                       {{1, 6}, {6, 2}, {2, 1}}))};
    unsigned checked = 0;
    for (uint64_t tries = 0; tries < 120 && checked < 25; ++tries) {
      FormulaPtr s = sentence_at(t.surface_sig, pick_code(rng));
      if (quantifier_rank(s) > 2) continue;
      ++checked;
      CAPTURE(id);
      CAPTURE(to_string(s));
      for (const auto& p : pres) {
        Verdict v = decide_mc(t, p, s, kBudget);
        REQUIRE(v != Verdict::Timeout);
        CHECK((v == Verdict::True) == classical_truth(p, s));
      }
    }
    CHECK(checked == 25);
  }
}

TEST_CASE("nonuniform decision over unmarked successor copies") {
  FormulaPtr s1 = parse_in("succ", "exists x. S(x) = #1");
  FormulaPtr s0 = parse_in("succ", "exists x. S(x) = #0");

  Presentation a = make_builtin("succ");          // least element is 0
  Presentation b = make_builtin("succ:shift=1");  // least element is 1

  DecisionTrace tr;
  CHECK(decide_succ_nonuniform(a, s1, kBudget, &tr) == Verdict::True);
  CHECK(tr.least_element == 0);
  // identical atomic diagrams, different verdict-relevant element: in the
  // shifted copy #0 is the least element, so nothing maps to it
  DecisionTrace tr2;
  CHECK(decide_succ_nonuniform(b, s0, kBudget, &tr2) == Verdict::False);
  CHECK(tr2.least_element == 0);
  CHECK(decide_succ_nonuniform(a, s0, kBudget) == Verdict::False);
  CHECK(decide_succ_nonuniform(b, s1, kBudget) == Verdict::True);

  SUBCASE("pullbacks relocate the least element but not the verdicts") {
    for (const auto& g : {Permutation::swap_pair(0, 7),
                          Permutation::fin_supp({{0, 2}, {2, 5}, {5, 0}})}) {
      Presentation q = pullback(a, g);
      DecisionTrace trq;
      CHECK(decide_succ_nonuniform(q, s1, kBudget, &trq) == Verdict::True);
      CHECK(trq.least_element == q.index_of_abstract(0));
      // the constant that names the least element moves with the pullback
      uint64_t zidx = *q.index_of_abstract(0);
      FormulaPtr s_least = mk_exists(
          "x", mk_eq(Term::app("S", {Term::var("x")}), Term::dom_const(zidx)));
      CHECK(decide_succ_nonuniform(q, s_least, kBudget) == Verdict::False);
    }
  }
}

TEST_CASE("functional wrapper: prefix discipline, uniformity, divergence") {
  const auto& t = theory("succ0");
  Functional gamma = as_functional(t);
  Functional gamma2 = as_functional(t);
  CHECK(gamma.program_text == gamma2.program_text);  // byte-identical

  Presentation p = make_builtin("succ0");
  FormulaPtr s = parse_in("succ0", "exists x. S(x) = #1");
  auto scode = sentence_code(t.surface_sig, s, 2000);
  REQUIRE(scode.has_value());

  std::vector<bool> big = initial_segment(p, 12);
  FunctionalRun r = gamma.run(big, *scode, kBudget);
  REQUIRE(r.converged);
  CHECK(r.bit == 1);
  CHECK(r.use <= big.size());
  for (uint64_t q : r.queries) CHECK(q < r.use);

  // same sentence, prefix shorter than the use: must diverge, not guess
  std::vector<bool> small(big.begin(), big.begin() + (r.use > 2 ? r.use - 2 : 0));
  FunctionalRun r2 = gamma.run(small, *scode, kBudget);
  CHECK_FALSE(r2.converged);

  // runs against different presentations use the same program text and
  // produce matching verdicts on isomorphic copies
  Presentation q = pullback(p, Permutation::swap_pair(3, 9));
  FormulaPtr sq = parse_in("succ0", "exists x. S(x) = #1");  // 1 not moved
  FunctionalRun rq = gamma.run(initial_segment(q, 12), *scode, kBudget);
  REQUIRE(rq.converged);
  CHECK(rq.bit == 1);
  (void)sq;
}

TEST_CASE("local search finds evidence for the uniform decider") {
  const auto& t = theory("succ0");
  Functional gamma = as_functional(t);
  Presentation canon = make_builtin("succ0");

  FormulaPtr phi = parse_in("succ0", "exists x. S(x) = #1");
  Condition empty;
  LocalEvidence ev =
      local_search_decide(gamma, canon, empty, phi, {1}, 4000000);
  REQUIRE(ev.found);
  CHECK(ev.bit == 1);
  CHECK(ev.b.size() == ev.n + 1);
  CHECK(ev.b.at(1) == 1);  // fixed element stays put
  CHECK(ev.sigma.size() == block_length(canon.signature(), ev.n));
  // replay: the functional on the recorded string reproduces the bit
  auto scode = sentence_code(t.surface_sig, phi, 2000);
  REQUIRE(scode.has_value());
  FunctionalRun rep = gamma.run(ev.sigma, *scode, kBudget);
  REQUIRE(rep.converged);
  CHECK(rep.bit == ev.bit);

  SUBCASE("identity completion comes first on a trivial sentence") {
    FormulaPtr triv = parse_in("succ0", "S(#0,#1)");
    LocalEvidence e2 = local_search_decide(gamma, canon, empty, triv, {}, 4000000);
    REQUIRE(e2.found);
    CHECK(e2.bit == 1);
    for (size_t i = 0; i < e2.b.size(); ++i) CHECK(e2.b[i] == i);
  }

  SUBCASE("a never-converging functional yields no evidence") {
    Functional div;
    div.id = "diverge";
    div.sentence_sig = t.surface_sig;
    div.program_text = "on any input: loop";
    div.run = [](const std::vector<bool>&, uint64_t, uint64_t) {
      return FunctionalRun{};
    };
    LocalEvidence e3 = local_search_decide(div, canon, empty, phi, {1}, 20000);
    CHECK_FALSE(e3.found);
  }
}

TEST_CASE("timeout is a distinct outcome, never a coerced bit") {
  const auto& t = theory("succ0");
  Presentation p = make_builtin("succ0");
  FormulaPtr s = parse_in("succ0", "exists y. S(y) = #3");
  DecisionTrace tr;
  CHECK(decide_mc(t, p, s, 1, &tr) == Verdict::Timeout);
  CHECK(tr.witness_matrix == 0);
  CHECK_THROWS_AS(decide_mc(theory("succ"), p, s, kBudget), FormulaError);
}
