#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "confluence/termination.hpp"
#include "support/examples.hpp"
#include "support/random_terms.hpp"

#include <chrono>

using namespace confluence;
using examples::build;
using examples::term;
using M = TerminationCertificate::Method;

namespace {

// Numeric value of a polynomial in shifted variables at the given point.
long long value(const Poly &p, const std::map<VarId, long long> &at, int floor) {
  long long sum = 0;
  for (const auto &[m, c] : p) {
    long long prod = c;
    for (VarId v : m) prod *= at.at(v) - floor;
    sum += prod;
  }
  return sum;
}

Term plug(const Term &ctx, const Term &hole_var, const Term &t) {
  Substitution s;
  s.bind(hole_var.var_id(), t);
  return apply(s, ctx);
}

} // namespace

TEST_CASE("four addition rules terminate") {
  clear_termination_cache();
  Trs s = build(examples::add_both);
  auto res = prove_termination(s);
  REQUIRE(res);
  CHECK(res.certificate->method == M::Lpo);
  CHECK(replay_certificate(*res.certificate, s, Trs{}));
}

TEST_CASE("self-embedding rule is not proved terminating") {
  Trs s({examples::rule("f(x) -> f(f(x))")});
  auto res = prove_termination(s);
  CHECK_FALSE(res);
  CHECK(res.reason.find("embeds") != std::string::npos);
}

TEST_CASE("empty system terminates trivially") {
  auto res = prove_termination(Trs{});
  REQUIRE(res);
  CHECK(res.certificate->method == M::Trivial);
  CHECK(replay_certificate(*res.certificate, Trs{}, Trs{}));
  CHECK(prove_relative_termination(Trs{}, build(examples::ac)));
}

TEST_CASE("relative termination with an empty weak part matches plain termination") {
  Trs s = build(examples::add_both);
  CHECK(static_cast<bool>(prove_relative_termination(s, Trs{})) ==
        static_cast<bool>(prove_termination(s)));
}

TEST_CASE("swapped successor rule is terminating relative to associativity") {
  Trs s = build({"zero_left", "succ_left", "zero_right", "succ_right_swap"});
  Trs w = build({"assoc"});
  auto res = prove_relative_termination(s, w);
  REQUIRE(res);
  CHECK(res.certificate->method == M::Polynomial);
  CHECK(replay_certificate(*res.certificate, s, w));

  SUBCASE("tampering with one rule's orientation breaks replay") {
    Trs bad = s;
    bad.rules[1] = Rule(s.rules[1].rhs, s.rules[1].lhs, "flipped");
    CHECK_FALSE(replay_certificate(*res.certificate, bad, w));
  }
  SUBCASE("tampering with a stage's claims breaks replay") {
    TerminationCertificate c = *res.certificate;
    REQUIRE_FALSE(c.stages.empty());
    c.stages.pop_back();
    CHECK_FALSE(replay_certificate(c, s, w));
  }
}

TEST_CASE("commutativity loop blocks relative termination") {
  auto ex = examples::shift_doubling_ac();
  auto res = prove_relative_termination(ex.s_rules(), build({"comm"}));
  CHECK_FALSE(res);
  CHECK_FALSE(res.reason.empty());
}

TEST_CASE("successor example relative to the shrinking rule") {
  auto ex = examples::successor_loop_ac();
  Trs w = build({"succ_shrink"});
  auto res = prove_relative_termination(ex.s_rules(), w);
  REQUIRE(res);
  CHECK(replay_certificate(*res.certificate, ex.s_rules(), w));
  // The growing rule cannot be added on either side.
  CHECK_FALSE(prove_relative_termination(ex.s_rules(), build({"succ_grow"})));
}

TEST_CASE("doubling system is terminating relative to AC in both directions") {
  auto ex = examples::doubling_ac();
  Trs w = with_inverses(ex.p_rules());
  auto res = prove_relative_termination(ex.s_rules(), w);
  REQUIRE(res);
  CHECK(replay_certificate(*res.certificate, ex.s_rules(), w));
}

TEST_CASE("pair system needs dependency pairs") {
  auto ex = examples::pair_swap();
  Trs s = ex.s_rules();
  auto dps = dependency_pairs(s);
  CHECK(dps.size() == 4);
  auto res = prove_termination(s);
  REQUIRE(res);
  CHECK(res.certificate->method == M::DependencyPairs);
  CHECK(replay_certificate(*res.certificate, s, Trs{}));
  TerminationCertificate bad = *res.certificate;
  bad.stages.clear();
  CHECK_FALSE(replay_certificate(bad, s, Trs{}));
}

TEST_CASE("malformed certificates are reported") {
  Trs s = build(examples::add_both);
  TerminationCertificate c;
  c.method = M::Polynomial;
  RemovalStage st;
  st.interp.symbols[s.rules[0].lhs.head()] = SymbolPoly{0, 0, {1, 1}, 1};
  st.removed.push_back(rule_key(s.rules[0]));
  c.stages.push_back(st);
  CHECK_THROWS_AS(replay_certificate(c, s, Trs{}), MalformedCertificate);

  TerminationCertificate l;
  l.method = M::Lpo;
  CHECK_THROWS_AS(replay_certificate(l, s, Trs{}), MalformedCertificate);
}

TEST_CASE("results are deterministic") {
  Trs s = build({"zero_left", "succ_left", "zero_right", "succ_right_swap"});
  Trs w = build({"assoc"});
  clear_termination_cache();
  auto a = prove_relative_termination(s, w);
  clear_termination_cache();
  auto b = prove_relative_termination(s, w);
  REQUIRE(a);
  REQUIRE(b);
  REQUIRE(a.certificate->stages.size() == b.certificate->stages.size());
  for (std::size_t i = 0; i < a.certificate->stages.size(); ++i) {
    CHECK(a.certificate->stages[i].removed == b.certificate->stages[i].removed);
    CHECK(a.certificate->stages[i].interp.symbols == b.certificate->stages[i].interp.symbols);
  }
}

TEST_CASE("LPO decrease is closed under contexts and substitutions") {
  gen::TermGen g(81, 2);
  Term hole = Term::var(50, "hole");
  std::map<SymId, int> rank = {{intern_symbol("f", 2), 3},
                               {intern_symbol("g", 1), 2},
                               {intern_symbol("a", 0), 1}};
  int oriented = 0;
  for (int i = 0; oriented < 300 && i < 20000; ++i) {
    Term l = g.nonvar_term(3), r = g.term(2);
    if (!is_valid_rule(l, r) || !lpo_greater(l, r, rank)) continue;
    ++oriented;
    CHECK_FALSE(lpo_greater(r, l, rank));
    Substitution sub;
    for (const auto &v : g.vars()) sub.bind(v.var_id(), g.term(2));
    Term ctx = g.term_over(2, {hole});
    if (!occurs(hole.var_id(), ctx)) ctx = Term::app("g", {hole});
    CHECK(lpo_greater(plug(ctx, hole, apply(sub, l)), plug(ctx, hole, apply(sub, r)), rank));
  }
  CHECK(oriented == 300);
}

TEST_CASE("polynomial decrease is closed under contexts and substitutions") {
  gen::TermGen g(91, 2);
  Term hole = Term::var(50, "hole");
  int strict = 0;
  for (int i = 0; strict < 300 && i < 20000; ++i) {
    Interpretation in;
    in.floor = g.pick(2);
    in.symbols[intern_symbol("f", 2)] = {g.pick(2), 0, {1 + g.pick(2), 1 + g.pick(2)}, g.pick(3)};
    in.symbols[intern_symbol("g", 1)] = {0, g.pick(2), {1 + g.pick(2)}, g.pick(3)};
    in.symbols[intern_symbol("a", 0)] = {0, 0, {}, in.floor + g.pick(2)};
    REQUIRE(well_formed(in, {intern_symbol("f", 2), intern_symbol("g", 1), intern_symbol("a", 0)},
                        true));
    Term l = g.nonvar_term(2), r = g.term(2);
    if (!is_valid_rule(l, r)) continue;
    Rule rule(l, r);
    Decrease d = compare(in, rule);
    if (d == Decrease::None) continue;
    Substitution sub;
    for (const auto &v : g.vars()) sub.bind(v.var_id(), g.term(1));
    Term ctx = g.term_over(1, {hole});
    if (!occurs(hole.var_id(), ctx)) ctx = Term::app("g", {hole});
    Rule closed(plug(ctx, hole, apply(sub, l)), plug(ctx, hole, apply(sub, r)));
    Decrease dc = compare(in, closed);
    CHECK(dc != Decrease::None);
    if (d == Decrease::Strict) {
      ++strict;
      CHECK(dc == Decrease::Strict);
    }
    // Numeric spot check on carrier points.
    std::map<VarId, long long> at;
    for (VarId v : var_set(l)) at[v] = in.floor + g.pick(4);
    long long lv = value(in.eval(l), at, in.floor), rv = value(in.eval(r), at, in.floor);
    CHECK(lv >= rv + (d == Decrease::Strict ? 1 : 0));
  }
  CHECK(strict == 300);
}

TEST_CASE("search stays fast on the example systems") {
  clear_termination_cache();
  auto start = std::chrono::steady_clock::now();
  for (const auto &ex : examples::all())
    prove_termination(ex.s_rules());
  auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  CHECK(secs < 5.0);
}
