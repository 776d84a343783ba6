#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "eldec/presentations.hpp"

using namespace eldec;

namespace {

uint64_t code(const Presentation& p, const std::string& rel,
              std::vector<uint64_t> idx) {
  std::vector<Term> args;
  for (auto i : idx) args.push_back(Term::dom_const(i));
  return encode_atomic(p.signature(), mk_atom(rel, args));
}

}  // namespace

TEST_CASE("successor line semantics and shifts") {
  auto p0 = make_builtin("succ");
  CHECK(p0.query(code(p0, "S", {0, 1})));
  CHECK_FALSE(p0.query(code(p0, "S", {1, 0})));
  CHECK_FALSE(p0.query(code(p0, "S", {0, 0})));

  // A shifted copy has the same atomic diagram for the S relation …
  auto p1 = make_builtin("succ:shift=1");
  for (uint64_t c = 0; c < block_length(p0.signature(), 6); ++c)
    CHECK(p0.query(c) == p1.query(c));

  // … but the Zero-marked structure distinguishes element 0.
  auto z = make_builtin("succ0");
  CHECK(z.query(code(z, "Zero", {0})));
  CHECK_FALSE(z.query(code(z, "Zero", {3})));
  CHECK_THROWS_AS(SuccessorLineFamily(1, true), FormulaError);
}

TEST_CASE("dense order families agree with rational comparison") {
  auto d = make_builtin("dlo01");
  auto* fam = dynamic_cast<const Dlo01Family*>(d.family().get());
  REQUIRE(fam);
  CHECK(d.query(code(d, "<", {0, 1})));
  CHECK(d.query(code(d, "IsLo", {0})));
  CHECK(d.query(code(d, "IsHi", {1})));
  CHECK_FALSE(d.query(code(d, "IsLo", {5})));
  std::set<Rational> seen;
  for (uint64_t i = 0; i < 40; ++i) {
    Rational v = fam->value(i);
    CHECK(seen.insert(v).second);  // enumeration is injective
    CHECK_FALSE(v < Rational(0));
    CHECK_FALSE(Rational(1) < v);
    for (uint64_t j = 0; j < i; ++j)
      CHECK(d.query(code(d, "<", {j, i})) == (fam->value(j) < v));
  }
}

TEST_CASE("interval union endpoints and gaps") {
  auto a = make_builtin("a_n:n=2");
  auto* fam = dynamic_cast<const IntervalUnionFamily*>(a.family().get());
  REQUIRE(fam);
  for (uint64_t e = 0; e < 6; ++e) {
    CHECK(fam->value(e) == Rational(static_cast<int64_t>(e)));
    CHECK(a.query(code(a, "E" + std::to_string(e), {e})));
  }
  for (uint64_t i = 6; i < 30; ++i) {
    Rational v = fam->value(i);
    // interior points avoid the gaps (2k+1, 2k+2)
    bool in_domain = false;
    for (int64_t k = 0; k <= 2; ++k)
      if (!(v < Rational(2 * k)) && !(Rational(2 * k + 1) < v)) in_domain = true;
    CHECK(in_domain);
  }
}

TEST_CASE("shuffle doubles every rational; Adj holds exactly on pairs") {
  auto b = make_builtin("shuffle+adj");
  for (uint64_t k = 0; k < 15; ++k) {
    CHECK(b.query(code(b, "Adj", {2 * k, 2 * k + 1})));
    CHECK(b.query(code(b, "<", {2 * k, 2 * k + 1})));
    CHECK_FALSE(b.query(code(b, "Adj", {2 * k + 1, 2 * k})));
    for (uint64_t j = 0; j < 2 * k; ++j)
      CHECK_FALSE(b.query(code(b, "Adj", {j, 2 * k})));
  }
  // nothing lies strictly between an adjacent pair
  auto* fam = dynamic_cast<const ShuffleFamily*>(b.family().get());
  for (uint64_t i = 0; i < 40; ++i) {
    auto v = fam->value(i);
    auto lo = fam->value(6), hi = fam->value(7);  // an Adj pair
    bool between = (lo.first < v.first ||
                    (lo.first == v.first && lo.second < v.second)) &&
                   (v.first < hi.first ||
                    (v.first == hi.first && v.second < hi.second));
    CHECK_FALSE(between);
  }
}

TEST_CASE("equality discipline across builtins") {
  for (const auto& spec : {std::string("succ"), std::string("succ0"),
                           std::string("dlo01"), std::string("a_n:n=1"),
                           std::string("shuffle+adj")}) {
    auto p = make_builtin(spec);
    for (uint64_t i = 0; i <= 20; ++i)
      for (uint64_t j = i + 1; j <= 20; ++j)
        CHECK_FALSE(p.query(
            encode_atomic(p.signature(),
                          mk_eq(Term::dom_const(i), Term::dom_const(j)))));
  }
}

TEST_CASE("initial segments form a chain of prefixes") {
  auto p = make_builtin("succ0");
  auto prev = initial_segment(p, 0);
  CHECK(prev.size() == block_length(p.signature(), 0));
  for (uint64_t n = 1; n <= 6; ++n) {
    auto cur = initial_segment(p, n);
    CHECK(cur.size() == block_length(p.signature(), n));
    CHECK(std::equal(prev.begin(), prev.end(), cur.begin()));
    prev = cur;
  }
}

TEST_CASE("pullback satisfies the isomorphism law") {
  auto p = make_builtin("succ");
  auto f = Permutation::swap_pair(0, 5);
  auto q = pullback(p, f);
  // element 5 of the copy plays 0, so its successor edge goes to 1
  CHECK(q.query(code(q, "S", {5, 1})));
  CHECK_FALSE(q.query(code(q, "S", {0, 1})));
  CHECK(q.query(code(q, "S", {4, 0})));  // 4's successor is abstract 5 = copy 0

  for (uint64_t a = 0; a <= 10; ++a)
    for (uint64_t b = 0; b <= 10; ++b) {
      if (a == b) continue;
      CHECK(q.query(code(q, "S", {a, b})) ==
            p.query(code(p, "S", {f.apply(a), f.apply(b)})));
    }

  // double pullback restores the base copy
  auto r = pullback(q, f.inverse());
  for (uint64_t c = 0; c < block_length(p.signature(), 10); ++c)
    CHECK(r.query(c) == p.query(c));

  // identity pullback is a no-op
  auto s = pullback(p, Permutation::identity());
  for (uint64_t c = 0; c < 50; ++c) CHECK(s.query(c) == p.query(c));
}

TEST_CASE("staged permutations fail loudly past their prefix") {
  auto p = make_builtin("succ");
  Condition cond{{3, 0, 1}};
  auto q = pullback(p, Permutation::staged(cond));
  CHECK(q.query(code(q, "S", {1, 2})));   // plays 0 -> 1
  CHECK_FALSE(q.query(code(q, "S", {0, 1})));
  CHECK_THROWS_AS(q.query(code(q, "S", {0, 3})), InsufficientStages);
  CHECK(q.try_query(code(q, "S", {0, 3})) == std::nullopt);
}

TEST_CASE("gamma_sigma describes a finite diagram") {
  auto p = make_builtin("succ");
  const auto& sig = p.signature();
  CHECK(to_string(gamma_sigma(sig, {false})) == "~S(#0,#0)");
  CHECK_THROWS_AS(gamma_sigma(sig, std::vector<bool>(3)), FormulaError);

  auto seg = initial_segment(p, 2);
  FormulaPtr g = gamma_sigma(sig, seg);
  // conjunction must contain the positive edges 0->1->2 and distinctness
  std::string s = to_string(g);
  CHECK(s.find("S(#0,#1)") != std::string::npos);
  CHECK(s.find("S(#1,#2)") != std::string::npos);
  CHECK(s.find("~(#0 = #1)") != std::string::npos);
  CHECK(s.find("~(#0 = #2)") != std::string::npos);
  CHECK(s.find("~(#1 = #2)") != std::string::npos);
}

TEST_CASE("delta_restrict lists exactly the facts over a tuple") {
  auto p = make_builtin("succ");
  CHECK(delta_restrict(p, {}).empty());
  auto lits = delta_restrict(p, {0, 1});
  std::set<std::string> texts;
  for (const auto& l : lits) texts.insert(to_string(l));
  CHECK(texts == std::set<std::string>{"S(#0,#1)", "~S(#1,#0)", "~S(#0,#0)",
                                       "~S(#1,#1)", "~(#0 = #1)"});
  CHECK_THROWS_AS(delta_restrict(p, {2, 2}), FormulaError);

  // reordering the tuple yields the same facts up to renaming
  auto swapped = delta_restrict(p, {1, 0});
  CHECK(swapped.size() == lits.size());
}

TEST_CASE("canonicalize aligns a copy with a condition") {
  auto e = make_builtin("succ");
  Condition p{{3}};
  auto c = canonicalize(e, {3}, p);
  // element 0 of C plays E's element 3
  CHECK(c.abstract_of(0) == 3);
  CHECK(c.query(code(c, "S", {0, 4})) == e.query(code(e, "S", {3, 4})));

  // empty condition leaves the copy untouched
  auto same = canonicalize(e, {}, Condition{});
  for (uint64_t cc = 0; cc < block_length(e.signature(), 10); ++cc)
    CHECK(same.query(cc) == e.query(cc));

  CHECK_THROWS_AS(canonicalize(e, {1, 2}, Condition{{0}}), FormulaError);
}

TEST_CASE("builtin spec parsing") {
  CHECK(make_builtin("succ:shift=3").family()->tag() == "succ:shift=3");
  CHECK(make_builtin("pullback:succ:shift=0:0=5,5=0").spec() ==
        "pullback:succ:shift=0:0=5,5=0");
  CHECK_THROWS_AS(make_builtin("nope"), FormulaError);
  CHECK_THROWS_AS(make_builtin("pullback:succ:0=5"), FormulaError);
  CHECK_THROWS_AS(Permutation::fin_supp({{0, 5}}), FormulaError);
}
