#pragma once

// Randomized property suites shared by the unit tests and the acceptance run.
// Each returns counts so that callers decide how to report failures.

#include "confluence/critical_pairs.hpp"
#include "support/oracles.hpp"
#include "support/random_terms.hpp"

#include <functional>
#include <set>
#include <string>
#include <vector>

namespace props {

using namespace confluence;

inline Term tuple(const std::vector<Term> &ts) {
  return Term::app("#tuple" + std::to_string(ts.size()), ts);
}

struct PeakStats {
  int peaks = 0;     // peaks that must be covered by an emitted pair
  int variable = 0;  // peaks handled by the variable case analysis
  int misses = 0;
};

// Peaks of two single steps where the inner redex sits at a function position
// of the outer lhs; each must be an instance of a pair from cp(R, R).
inline PeakStats single_overlap_peaks(unsigned seed, int target) {
  gen::TermGen g(seed, 3);
  PeakStats st;
  for (int round = 0; st.peaks < target && round < 4000; ++round) {
    Trs r = g.trs(3, 2);
    auto cps = cp(r, r);
    for (int k = 0; k < 10; ++k) {
      Term s = g.term(3);
      auto steps = reducts(s, r);
      for (const auto &outer : steps) {
        for (const auto &inner : steps) {
          if (!is_prefix(outer.position, inner.position)) continue;
          Position q(inner.position.begin() +
                         static_cast<std::ptrdiff_t>(outer.position.size()),
                     inner.position.end());
          if (q.empty() && same_rule(inner.rule, outer.rule)) continue;
          if (!valid_position(outer.rule.lhs, q) || subterm_at(outer.rule.lhs, q).is_var()) {
            ++st.variable;
            continue;
          }
          ++st.peaks;
          // Pairs are deduplicated modulo renaming, so coverage is judged on
          // the pair itself rather than on its provenance.
          Term actual = tuple({subterm_at(inner.target, outer.position),
                               subterm_at(outer.target, outer.position)});
          bool covered = false;
          for (const auto &c : cps)
            if (match_term(tuple({c.left, c.right}), actual)) covered = true;
          if (!covered) ++st.misses;
        }
      }
    }
  }
  return st;
}

// Peaks of a root step against a parallel step below the root. Parallel steps
// touching no function position of the lhs fall to the variable case; the
// others must be instances of a pair from pcp_in(R, R).
inline PeakStats parallel_overlap_peaks(unsigned seed, int target) {
  gen::TermGen g(seed, 3);
  PeakStats st;
  for (int round = 0; st.peaks < target && round < 4000; ++round) {
    Trs r = g.trs(3, 2);
    auto pcps = pcp_in(r, r);
    for (int k = 0; k < 10; ++k) {
      Term s = g.term(3);
      for (const auto &top : root_reducts(s, r)) {
        auto fun = positions_fun(top.rule.lhs);
        std::set<Position> fun_set(fun.begin(), fun.end());
        std::vector<Position> ps = positions(s);
        ps.erase(ps.begin());
        std::vector<std::pair<Position, Rule>> chosen;
        std::function<void(std::size_t)> rec = [&](std::size_t i) {
          if (i == ps.size()) {
            if (chosen.empty()) return;
            std::vector<std::pair<Position, Term>> reps;
            for (const auto &[p, rl] : chosen) {
              if (!fun_set.count(p)) continue;
              auto m = match_term(rl.lhs, subterm_at(s, p));
              reps.emplace_back(p, apply(*m, rl.rhs));
            }
            if (reps.empty()) {
              ++st.variable;
              return;
            }
            ++st.peaks;
            Term actual = tuple({replace_parallel(s, reps), top.target});
            bool covered = false;
            for (const auto &c : pcps)
              if (match_term(tuple({c.left, c.right}), actual)) covered = true;
            if (!covered) ++st.misses;
            return;
          }
          rec(i + 1);
          for (const auto &c : chosen)
            if (!parallel(c.first, ps[i])) return;
          for (const auto &rl : r.rules) {
            if (!match_term(rl.lhs, subterm_at(s, ps[i]))) continue;
            chosen.emplace_back(ps[i], rl);
            rec(i + 1);
            chosen.pop_back();
          }
        };
        rec(0);
      }
    }
  }
  return st;
}

struct MatchStats {
  int cases = 0;
  int found = 0;
  int unsound = 0;       // the matcher's substitution does not yield the subject
  int disagreements = 0; // differs from brute-force enumeration
};

inline MatchStats matcher_agreement(unsigned seed, int cases) {
  gen::TermGen g(seed, 2);
  MatchStats st;
  for (; st.cases < cases; ++st.cases) {
    Term pattern = g.term(3, 0.5);
    Term subject = g.coin(0.5) ? g.term(3, 0.3) : [&] {
      Substitution s;
      for (const auto &v : g.vars()) s.bind(v.var_id(), g.term(2));
      return apply(s, pattern);
    }();
    auto m = match_term(pattern, subject);
    bool brute = oracle::brute_match(pattern, subject);
    if (m) {
      ++st.found;
      bool ok = apply(*m, pattern) == subject;
      for (const auto &[x, t] : m->bindings()) ok = ok && occurs(x, pattern);
      st.unsound += !ok;
    }
    st.disagreements += m.has_value() != brute;
  }
  return st;
}

struct UnifyStats {
  int unifiable = 0;
  int rejected = 0;
  int unsound = 0;         // sigma(s) != sigma(t)
  int not_idempotent = 0;
  int not_general = 0;     // an enumerated unifier is not an instance of sigma
  int missed = 0;          // an enumerated unifier exists for a rejected pair
  int generality_checks = 0;
  int failures() const { return unsound + not_idempotent + not_general + missed; }
};

// Generality is checked against every substitution into a small range of
// candidate terms, which covers all unifiers of that shape.
inline UnifyStats unifier_laws(unsigned seed, int cases) {
  gen::TermGen g(seed, 3);
  std::vector<Term> range = {Term::app("a"), Term::app("g", {Term::app("a")})};
  for (const auto &v : g.vars()) range.push_back(v);
  range.push_back(Term::app("g", {g.vars()[0]}));
  range.push_back(Term::app("f", {g.vars()[0], g.vars()[1]}));

  auto each_substitution = [&](const std::vector<Term> &vs,
                               const std::function<void(const Substitution &)> &f) {
    std::vector<std::size_t> idx(vs.size(), 0);
    for (;;) {
      Substitution th;
      for (std::size_t k = 0; k < vs.size(); ++k) th.bind(vs[k].var_id(), range[idx[k]]);
      f(th);
      std::size_t k = 0;
      while (k < idx.size() && ++idx[k] == range.size()) idx[k++] = 0;
      if (k == idx.size()) break;
    }
  };

  UnifyStats st;
  for (int i = 0; (st.unifiable < cases || st.rejected < cases) && i < 200000; ++i) {
    Term s = g.term(3, 0.5), t = g.term(3, 0.5);
    auto sigma = unify(s, t);
    std::vector<Term> vs = variables(tuple({s, t}));
    if (!sigma) {
      if (st.rejected >= cases) continue;
      ++st.rejected;
      each_substitution(vs, [&](const Substitution &th) {
        st.missed += apply(th, s) == apply(th, t);
      });
      continue;
    }
    if (st.unifiable >= cases) continue;
    ++st.unifiable;
    st.unsound += apply(*sigma, s) != apply(*sigma, t);
    st.not_idempotent += !sigma->is_idempotent() ||
                         apply(*sigma, apply(*sigma, s)) != apply(*sigma, s);
    std::vector<Term> sig_img;
    for (const auto &v : vs) sig_img.push_back(apply(*sigma, v));
    each_substitution(vs, [&](const Substitution &th) {
      if (apply(th, s) != apply(th, t)) return;
      ++st.generality_checks;
      std::vector<Term> img;
      for (const auto &v : vs) img.push_back(apply(th, v));
      st.not_general += !match_term(tuple(sig_img), tuple(img)).has_value();
    });
  }
  return st;
}

} // namespace props
