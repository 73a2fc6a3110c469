#include "confluence/critical_pairs.hpp"

#include <algorithm>
#include <unordered_set>

namespace confluence {

namespace {

VarId rule_max_var(const Rule &r) {
  return std::max(max_var_id(r.lhs), max_var_id(r.rhs));
}

Rule rename_rule(const Rule &r, VarPool &pool) {
  auto [l, ren] = rename_fresh(r.lhs, pool);
  return Rule(l, apply(ren, r.rhs), r.label);
}

Term vars_marker(const std::set<VarId> &xs, const Term &peak) {
  std::vector<Term> args;
  for (const auto &v : variables(peak))
    if (xs.count(v.var_id())) args.push_back(v);
  // Symbols are keyed by arity, so the marker name carries it too.
  SymId marker = intern_symbol("#vars" + std::to_string(args.size()),
                               static_cast<int>(args.size()));
  return Term::app(marker, std::move(args));
}

class Dedup {
public:
  Dedup() = default;
  explicit Dedup(bool with_vars) : with_vars_(with_vars) {}
  bool insert(const CriticalPair &c) {
    std::string k = with_vars_ ? c.key() : canonical_key({c.left, c.right});
    return seen_.insert((c.inner ? "i:" : "o:") + k).second;
  }

private:
  bool with_vars_ = true;
  std::unordered_set<std::string> seen_;
};

} // namespace

std::string CriticalPair::key() const {
  return canonical_key({left, right, vars_marker(vars, peak)});
}

std::vector<CriticalPair> cp(const Trs &r, const Trs &q) {
  std::vector<CriticalPair> out;
  Dedup dedup(false);
  for (const auto &outer : q.rules) {
    for (const auto &inner0 : r.rules) {
      VarPool pool(std::max(rule_max_var(outer), rule_max_var(inner0)) + 1);
      Rule inner = rename_rule(inner0, pool);
      for (const auto &p : positions_fun(outer.lhs)) {
        // A rule overlapping itself at the root gives only trivial pairs.
        if (p.empty() && same_rule(inner0, outer)) continue;
        // Binding the fresh copy's variables keeps the outer rule's names.
        auto mgu = unify(subterm_at(outer.lhs, p), inner.lhs);
        if (!mgu) continue;
        CriticalPair c;
        c.peak = apply(*mgu, outer.lhs);
        c.left = replace_at(c.peak, p, apply(*mgu, inner.rhs));
        c.right = apply(*mgu, outer.rhs);
        c.inner = !p.empty();
        c.inner_rules = {inner0};
        c.outer_rule = outer;
        c.positions = {p};
        c.mgu = *mgu;
        c.vars = var_set_below(c.peak, c.positions);
        if (dedup.insert(c)) out.push_back(std::move(c));
      }
    }
  }
  return out;
}

std::vector<CriticalPair> cp_in(const Trs &r, const Trs &q) {
  auto all = cp(r, q);
  std::vector<CriticalPair> out;
  for (auto &c : all)
    if (c.inner) out.push_back(std::move(c));
  return out;
}

std::vector<CriticalPair> cp_out(const Trs &r, const Trs &q) {
  auto all = cp(r, q);
  std::vector<CriticalPair> out;
  for (auto &c : all)
    if (!c.inner) out.push_back(std::move(c));
  return out;
}

namespace {

struct PcpSearch {
  const Trs &q;
  const Rule &outer;
  std::vector<Position> cand;
  VarPool pool;
  std::vector<Position> chosen;
  std::vector<Rule> chosen_rules;  // original rules
  std::vector<Rule> renamed_rules; // fresh copies
  std::vector<std::pair<Term, Term>> eqs;
  Dedup dedup;
  std::vector<CriticalPair> out;

  void emit(const Substitution &mgu) {
    CriticalPair c;
    c.peak = apply(mgu, outer.lhs);
    std::vector<std::pair<Position, Term>> reps;
    for (std::size_t i = 0; i < chosen.size(); ++i)
      reps.emplace_back(chosen[i], apply(mgu, renamed_rules[i].rhs));
    c.left = replace_parallel(c.peak, reps);
    c.right = apply(mgu, outer.rhs);
    c.inner = true;
    c.inner_rules = chosen_rules;
    c.outer_rule = outer;
    c.positions = chosen;
    c.mgu = mgu;
    c.vars = var_set_below(c.peak, chosen);
    if (dedup.insert(c)) out.push_back(std::move(c));
  }

  void rec(std::size_t k) {
    if (k == cand.size()) {
      if (chosen.empty()) return;
      if (auto mgu = unify_all(eqs)) emit(*mgu);
      return;
    }
    rec(k + 1);
    const Position &p = cand[k];
    for (const auto &c : chosen)
      if (!parallel(c, p)) return;
    for (const auto &rule : q.rules) {
      Rule copy = rename_rule(rule, pool);
      eqs.emplace_back(subterm_at(outer.lhs, p), copy.lhs);
      if (unify_all(eqs)) {
        chosen.push_back(p);
        chosen_rules.push_back(rule);
        renamed_rules.push_back(copy);
        rec(k + 1);
        chosen.pop_back();
        chosen_rules.pop_back();
        renamed_rules.pop_back();
      }
      eqs.pop_back();
    }
  }
};

} // namespace

std::vector<CriticalPair> pcp_in(const Trs &q, const Trs &r) {
  std::vector<CriticalPair> out;
  Dedup dedup;
  VarId top = 0;
  for (const auto &x : q.rules) top = std::max(top, rule_max_var(x));
  for (const auto &outer : r.rules) {
    PcpSearch s{q, outer, {}, VarPool(std::max(top, rule_max_var(outer)) + 1),
                {}, {}, {}, {}, {}, {}};
    for (const auto &p : positions_fun(outer.lhs))
      if (!p.empty()) s.cand.push_back(p);
    s.rec(0);
    for (auto &c : s.out)
      if (dedup.insert(c)) out.push_back(std::move(c));
  }
  return out;
}

bool replay_critical_pair(const CriticalPair &c) {
  if (c.positions.size() != c.inner_rules.size() || c.positions.empty()) return false;
  if (!pairwise_parallel(c.positions)) return false;
  std::vector<std::pair<Position, Term>> reps;
  for (std::size_t i = 0; i < c.positions.size(); ++i) {
    if (!valid_position(c.peak, c.positions[i])) return false;
    auto m = match_term(c.inner_rules[i].lhs, subterm_at(c.peak, c.positions[i]));
    if (!m) return false;
    reps.emplace_back(c.positions[i], apply(*m, c.inner_rules[i].rhs));
  }
  if (!(replace_parallel(c.peak, reps) == c.left)) return false;
  auto m = match_term(c.outer_rule.lhs, c.peak);
  if (!m || !(apply(*m, c.outer_rule.rhs) == c.right)) return false;
  bool inner = !(c.positions.size() == 1 && c.positions[0].empty());
  return inner == c.inner && var_set_below(c.peak, c.positions) == c.vars;
}

std::string to_string(const CriticalPair &c, Printer &pr, bool with_vars) {
  std::string out = "<" + pr.print(c.left) + ", " + pr.print(c.right) + ">";
  if (with_vars) {
    out += "_{";
    bool first = true;
    for (const auto &v : variables(c.peak)) {
      if (!c.vars.count(v.var_id())) continue;
      if (!first) out += ",";
      out += pr.name_of(v.var_id(), v.var_name());
      first = false;
    }
    out += "}";
  }
  return out;
}

std::string to_string(const CriticalPair &c, bool with_vars) {
  Printer pr;
  return to_string(c, pr, with_vars);
}

} // namespace confluence
