#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "confluence/terms.hpp"
#include "support/examples.hpp"
#include "support/oracles.hpp"
#include "support/properties.hpp"
#include "support/random_terms.hpp"

using namespace confluence;
using examples::term;

namespace {

std::vector<std::string> pos_strings(const std::vector<Position> &ps) {
  std::vector<std::string> out;
  for (const auto &p : ps) out.push_back(position_to_string(p));
  return out;
}

} // namespace

TEST_CASE("positions and filtered views") {
  CHECK(pos_strings(positions(term("x"))) == std::vector<std::string>{"e"});
  Term t = term("+(0,y)");
  CHECK(pos_strings(positions(t)) == std::vector<std::string>{"e", "1", "2"});
  CHECK(pos_strings(positions_fun(t)) == std::vector<std::string>{"e", "1"});
  CHECK(pos_strings(positions_var(t)) == std::vector<std::string>{"2"});
  CHECK(pos_strings(positions_fun(term("+(+(x,y),z)"))) ==
        std::vector<std::string>{"e", "1"});
}

TEST_CASE("position order and parallelism") {
  CHECK(is_prefix({}, {1, 2}));
  CHECK(is_strict_prefix({1}, {1, 2}));
  CHECK_FALSE(is_strict_prefix({1}, {1}));
  CHECK(parallel({1}, {2}));
  CHECK_FALSE(parallel({1}, {1, 1}));
  CHECK(pairwise_parallel({{1, 1}, {1, 2}, {2}}));
  CHECK_FALSE(pairwise_parallel({{1}, {2}, {2, 1}}));
}

TEST_CASE("subterm and replacement") {
  Term t = term("+(+(x,y),z)");
  CHECK(subterm_at(t, {1}) == term("+(x,y)"));
  Term w = Term::var(99, "w");
  CHECK(replace_at(t, {1}, w) == Term::app("+", {w, term("z")}));
  CHECK(replace_parallel(term("f(g(x),g(y))"), {{{1}, term("h(x)")}, {{2}, term("h(y)")}}) ==
        term("f(h(x),h(y))"));
  CHECK_THROWS_AS(subterm_at(t, {3}), std::out_of_range);
  CHECK_THROWS_AS(replace_parallel(t, {{{1}, w}, {{1, 1}, w}}), std::invalid_argument);
}

TEST_CASE("arity is checked on construction") {
  intern_symbol("pair2", 2);
  CHECK_THROWS_AS(Term::app(intern_symbol("pair2", 2), {term("x")}),
                  std::invalid_argument);
}

TEST_CASE("substitution application") {
  Term t = term("+(x,y)");
  CHECK(apply(Substitution{}, t) == t);
  Substitution s;
  s.bind(term("x").var_id(), term("0"));
  CHECK(apply(s, t) == term("+(0,y)"));
}

TEST_CASE("renaming apart") {
  Term t = term("+(x,y)");
  auto [r, ren] = rename_apart(t, t);
  CHECK(variant(r, t));
  for (VarId v : var_set(r)) CHECK_FALSE(var_set(t).count(v));
  CHECK(ren.size() == 2);
  auto [g, ren2] = rename_apart(term("f(x)"), term("g(y)"));
  CHECK(variant(g, term("g(y)")));
}

TEST_CASE("matching") {
  auto m = match_term(term("+(0,y)"), term("+(0,s(z))"));
  REQUIRE(m);
  CHECK(apply(*m, term("y")) == term("s(z)"));
  CHECK_FALSE(match_term(term("+(x,x)"), term("+(0,s(0))")));
  auto m2 = match_term(term("x"), term("f(x)"));
  REQUIRE(m2);
  CHECK(apply(*m2, term("x")) == term("f(x)"));
}

TEST_CASE("unification examples") {
  auto u = unify(term("x"), term("x"));
  REQUIRE(u);
  CHECK(u->empty());
  CHECK_FALSE(unify(term("x"), term("f(x)")));
  Term x2 = Term::var(20, "x2"), y2 = Term::var(21, "y2");
  auto mgu = unify(term("+(0,y)"), Term::app("+", {x2, y2}));
  REQUIRE(mgu);
  CHECK(apply(*mgu, x2) == term("0"));
  CHECK(apply(*mgu, Term::app("+", {x2, y2})) == term("+(0,y)"));
}

TEST_CASE("variants and canonical keys") {
  CHECK(variant(term("f(x,y)"), Term::app("f", {Term::var(7, "u"), Term::var(8, "v")})));
  CHECK_FALSE(variant(term("f(x,x)"), term("f(x,y)")));
  CHECK(canonical_key({term("f(x,y)")}) == canonical_key({term("f(y,x)")}));
  CHECK(canonical_key({term("f(x,y)"), term("x")}) !=
        canonical_key({term("f(y,x)"), term("x")}));
}

TEST_CASE("printing keeps distinct variables apart") {
  Term a = Term::var(1, "x"), b = Term::var(2, "x");
  Printer pr;
  CHECK(pr.print(Term::app("f", {a, b})) == "f(x,x_1)");
  CHECK(to_string(term("+(s(x),0)")) == "+(s(x),0)");
}

TEST_CASE("replace_at inverts subterm_at on random terms") {
  gen::TermGen g(11, 3);
  for (int i = 0; i < 300; ++i) {
    Term t = g.term(4);
    for (const auto &p : positions(t)) CHECK(replace_at(t, p, subterm_at(t, p)) == t);
  }
}

TEST_CASE("parallel replacement agrees with sequential replacement") {
  gen::TermGen g(12, 3);
  int checked = 0;
  while (checked < 300) {
    Term t = g.term(4);
    auto ps = positions(t);
    std::vector<std::pair<Position, Term>> reps;
    for (const auto &p : ps) {
      bool ok = true;
      for (const auto &r : reps) ok = ok && parallel(r.first, p);
      if (ok && g.coin(0.4)) reps.emplace_back(p, g.term(1));
    }
    Term expect = t;
    for (const auto &r : reps) expect = replace_at(expect, r.first, r.second);
    Term rev = t;
    for (auto it = reps.rbegin(); it != reps.rend(); ++it)
      rev = replace_at(rev, it->first, it->second);
    Term got = replace_parallel(t, reps);
    CHECK(got == expect);
    CHECK(got == rev);
    ++checked;
  }
}

TEST_CASE("matcher agrees with brute-force enumeration") {
  auto st = props::matcher_agreement(21, 2000);
  CHECK(st.cases == 2000);
  CHECK(st.unsound == 0);
  CHECK(st.disagreements == 0);
  CHECK(st.found > 500);
}

TEST_CASE("unifier laws: soundness, idempotence, generality") {
  auto st = props::unifier_laws(31, 1000);
  CHECK(st.unifiable == 1000);
  CHECK(st.rejected == 1000);
  CHECK(st.unsound == 0);
  CHECK(st.not_idempotent == 0);
  CHECK(st.not_general == 0);
  CHECK(st.missed == 0);
  CHECK(st.generality_checks > 1000);
}
