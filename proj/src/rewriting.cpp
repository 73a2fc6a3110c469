#include "confluence/rewriting.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace confluence {

Rule::Rule(Term l, Term r, std::string lab)
    : lhs(std::move(l)), rhs(std::move(r)), label(std::move(lab)) {}

bool is_valid_rule(const Term &l, const Term &r) {
  if (!l.valid() || !r.valid() || l.is_var()) return false;
  auto lv = var_set(l);
  for (VarId x : var_set(r))
    if (!lv.count(x)) return false;
  return true;
}

void Rule::validate() const {
  if (!lhs.valid() || !rhs.valid()) throw std::invalid_argument("empty rule");
  if (lhs.is_var())
    throw std::invalid_argument("left-hand side is a variable: " + to_string(*this));
  if (!is_valid_rule(lhs, rhs))
    throw std::invalid_argument("right-hand side has extra variables: " +
                                to_string(*this));
}

bool Rule::well_formed() const { return is_valid_rule(lhs, rhs); }

bool Rule::bidirectional() const {
  return is_valid_rule(lhs, rhs) && is_valid_rule(rhs, lhs);
}

Rule Rule::inverse() const {
  std::string lab = label;
  if (lab.size() > 3 && lab.compare(lab.size() - 3, 3, "^-1") == 0)
    lab.resize(lab.size() - 3);
  else
    lab += "^-1";
  return Rule(rhs, lhs, lab);
}

bool same_rule(const Rule &a, const Rule &b) {
  return variant({a.lhs, a.rhs}, {b.lhs, b.rhs});
}

std::string rule_key(const Rule &r) { return canonical_key({r.lhs, r.rhs}); }

std::string to_string(const Rule &r, Printer &pr) {
  return pr.print(r.lhs) + " -> " + pr.print(r.rhs);
}

std::string to_string(const Rule &r) {
  Printer pr;
  return to_string(r, pr);
}

bool Trs::contains(const Rule &r) const {
  for (const auto &x : rules)
    if (same_rule(x, r)) return true;
  return false;
}

const Rule *Trs::find_label(const std::string &label) const {
  for (const auto &x : rules)
    if (x.label == label) return &x;
  return nullptr;
}

bool Trs::left_linear() const {
  return std::all_of(rules.begin(), rules.end(),
                     [](const Rule &r) { return r.left_linear(); });
}

bool Trs::linear() const {
  return std::all_of(rules.begin(), rules.end(),
                     [](const Rule &r) { return r.linear(); });
}

bool Trs::bidirectional() const {
  return std::all_of(rules.begin(), rules.end(),
                     [](const Rule &r) { return r.bidirectional(); });
}

std::set<SymId> Trs::signature() const {
  std::set<SymId> out;
  for (const auto &r : rules) {
    auto a = fun_symbols(r.lhs);
    auto b = fun_symbols(r.rhs);
    out.insert(a.begin(), a.end());
    out.insert(b.begin(), b.end());
  }
  return out;
}

std::set<SymId> Trs::defined_symbols() const {
  std::set<SymId> out;
  for (const auto &r : rules)
    if (!r.lhs.is_var()) out.insert(r.lhs.head());
  return out;
}

VarId Trs::max_var() const {
  VarId m = 0;
  for (const auto &r : rules) m = std::max({m, max_var_id(r.lhs), max_var_id(r.rhs)});
  return m;
}

Trs trs_union(const Trs &r, const Trs &q) {
  Trs out;
  for (const auto &x : r.rules)
    if (!out.contains(x)) out.add(x);
  for (const auto &x : q.rules)
    if (!out.contains(x)) out.add(x);
  return out;
}

Trs trs_minus(const Trs &r, const Trs &q) {
  Trs out;
  for (const auto &x : r.rules)
    if (!q.contains(x)) out.add(x);
  return out;
}

Trs inverse(const Trs &r) {
  Trs out;
  for (const auto &x : r.rules) out.add(x.inverse());
  return out;
}

Trs with_inverses(const Trs &r) {
  Trs out = trs_union(r, Trs{});
  for (const auto &x : r.rules) {
    Rule inv = x.inverse();
    if (inv.well_formed() && !out.contains(inv)) out.add(inv);
  }
  return out;
}

bool same_rule_set(const Trs &a, const Trs &b) {
  for (const auto &x : a.rules)
    if (!b.contains(x)) return false;
  for (const auto &x : b.rules)
    if (!a.contains(x)) return false;
  return true;
}

std::string trs_key(const Trs &r) {
  std::vector<std::string> keys;
  for (const auto &x : r.rules) keys.push_back(rule_key(x));
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  std::string out;
  for (const auto &k : keys) out += k + "|";
  return out;
}

Trs select(const Trs &r, const std::vector<std::string> &labels) {
  Trs out;
  for (const auto &l : labels) {
    const Rule *x = r.find_label(l);
    if (!x) throw std::invalid_argument("no rule labelled " + l);
    out.add(*x);
  }
  return out;
}

bool replay_step(const Step &s) {
  if (!s.rule.well_formed()) return false;
  if (!valid_position(s.source, s.position)) return false;
  auto m = match_term(s.rule.lhs, subterm_at(s.source, s.position));
  if (!m) return false;
  // The recorded substitution must agree on the rule variables.
  for (const auto &[x, t] : m->bindings()) {
    const Term *b = s.subst.lookup(x);
    if (!b || !(*b == t)) return false;
  }
  return replace_at(s.source, s.position, apply(*m, s.rule.rhs)) == s.target;
}

bool replay_sequence(const Term &from, const std::vector<Step> &steps,
                     const Term &to) {
  Term cur = from;
  for (const auto &s : steps) {
    if (!(s.source == cur) || !replay_step(s)) return false;
    cur = s.target;
  }
  return cur == to;
}

bool steps_use_only(const std::vector<Step> &steps, const Trs &rules) {
  for (const auto &s : steps)
    if (!rules.contains(s.rule)) return false;
  return true;
}

std::vector<Position> ParallelStep::positions() const {
  std::vector<Position> out;
  for (const auto &r : redexes) out.push_back(r.position);
  return out;
}

bool replay_parallel_step(const ParallelStep &p) {
  std::vector<std::pair<Position, Term>> reps;
  std::vector<Position> ps;
  for (const auto &r : p.redexes) {
    if (!r.rule.well_formed() || !valid_position(p.source, r.position)) return false;
    auto m = match_term(r.rule.lhs, subterm_at(p.source, r.position));
    if (!m) return false;
    reps.emplace_back(r.position, apply(*m, r.rule.rhs));
    ps.push_back(r.position);
  }
  if (!pairwise_parallel(ps)) return false;
  return replace_parallel(p.source, reps) == p.target;
}

namespace {

void reducts_rec(const Term &whole, const Term &t, Position &pos, const Trs &r,
                 std::vector<Step> &out) {
  if (t.is_var()) return;
  for (const auto &rule : r.rules) {
    auto m = match_term(rule.lhs, t);
    if (!m) continue;
    out.push_back(Step{whole, replace_at(whole, pos, apply(*m, rule.rhs)), pos, rule,
                       *m});
  }
  for (std::size_t i = 0; i < t.arity(); ++i) {
    pos.push_back(static_cast<int>(i) + 1);
    reducts_rec(whole, t.arg(i), pos, r, out);
    pos.pop_back();
  }
}

bool has_redex(const Term &t, const Trs &r) {
  if (t.is_var()) return false;
  for (const auto &rule : r.rules)
    if (match_term(rule.lhs, t)) return true;
  for (const auto &a : t.args())
    if (has_redex(a, r)) return true;
  return false;
}

Term normalize_rec(const Term &t, const Trs &s, long &fuel) {
  if (t.is_var()) return t;
  Term cur = t;
  for (;;) {
    if (cur.is_var()) return cur;
    std::vector<Term> args;
    args.reserve(cur.arity());
    bool changed = false;
    for (const auto &a : cur.args()) {
      args.push_back(normalize_rec(a, s, fuel));
      if (!(args.back() == a)) changed = true;
    }
    if (changed) cur = Term::app(cur.head(), std::move(args));
    bool stepped = false;
    for (const auto &rule : s.rules) {
      auto m = match_term(rule.lhs, cur);
      if (!m) continue;
      if (--fuel < 0) throw FuelExhausted();
      cur = apply(*m, rule.rhs);
      stepped = true;
      break;
    }
    if (!stepped) return cur;
  }
}

} // namespace

std::vector<Step> reducts(const Term &t, const Trs &r) {
  std::vector<Step> out;
  Position pos;
  reducts_rec(t, t, pos, r, out);
  return out;
}

std::vector<Step> root_reducts(const Term &t, const Trs &r) {
  std::vector<Step> out;
  if (t.is_var()) return out;
  for (const auto &rule : r.rules) {
    auto m = match_term(rule.lhs, t);
    if (m) out.push_back(Step{t, apply(*m, rule.rhs), {}, rule, *m});
  }
  return out;
}

bool is_normal(const Term &t, const Trs &r) { return !has_redex(t, r); }

Term normalize(const Term &t, const Trs &s, long fuel) {
  return normalize_rec(t, s, fuel);
}

namespace {

bool parallel_rec(const Term &s, const Term &t, const Trs &q, Position &pos,
                  std::vector<Redex> &out) {
  if (s == t) return true;
  if (!s.is_var() && !t.is_var() && s.head() == t.head()) {
    std::size_t mark = out.size();
    bool ok = true;
    for (std::size_t i = 0; i < s.arity() && ok; ++i) {
      pos.push_back(static_cast<int>(i) + 1);
      ok = parallel_rec(s.arg(i), t.arg(i), q, pos, out);
      pos.pop_back();
    }
    if (ok) return true;
    out.resize(mark);
  }
  if (s.is_var()) return false;
  for (const auto &rule : q.rules) {
    auto m = match_term(rule.lhs, s);
    if (!m) continue;
    if (apply(*m, rule.rhs) == t) {
      out.push_back(Redex{pos, rule, *m});
      return true;
    }
  }
  return false;
}

} // namespace

std::optional<ParallelStep> parallel_step_exists(const Term &s, const Term &t,
                                                 const Trs &q) {
  ParallelStep p{s, t, {}};
  Position pos;
  if (!parallel_rec(s, t, q, pos, p.redexes)) return std::nullopt;
  return p;
}

std::optional<std::size_t> ReachSet::find(const Term &t) const {
  auto it = index_.find(t);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<Step> ReachSet::path_to(std::size_t idx) const {
  std::vector<Step> out;
  for (int i = static_cast<int>(idx); nodes_[static_cast<std::size_t>(i)].parent >= 0;
       i = nodes_[static_cast<std::size_t>(i)].parent)
    out.push_back(*nodes_[static_cast<std::size_t>(i)].via);
  std::reverse(out.begin(), out.end());
  return out;
}

ReachSet explore(const Term &start, const Trs &first, const Trs &rest, int depth,
                 std::size_t max_terms) {
  ReachSet rs;
  rs.nodes_.push_back(ReachSet::Node{start, -1, 0, std::nullopt});
  rs.index_.emplace(start, 0);
  for (std::size_t i = 0; i < rs.nodes_.size(); ++i) {
    if (rs.nodes_[i].depth >= depth) continue;
    const Term cur = rs.nodes_[i].term;
    const int d = rs.nodes_[i].depth;
    for (auto &st : reducts(cur, i == 0 ? first : rest)) {
      if (rs.index_.count(st.target)) continue;
      if (rs.nodes_.size() >= max_terms) {
        rs.truncated_ = true;
        return rs;
      }
      Term target = st.target;
      rs.index_.emplace(target, rs.nodes_.size());
      rs.nodes_.push_back(ReachSet::Node{target, static_cast<int>(i), d + 1,
                                         std::move(st)});
    }
  }
  return rs;
}

std::optional<std::vector<Step>> reach_bounded(const Term &s,
                                               const TermPredicate &goal,
                                               const Trs &r, int depth,
                                               std::size_t max_terms) {
  if (goal(s)) return std::vector<Step>{};
  std::vector<ReachSet::Node> nodes{{s, -1, 0, std::nullopt}};
  std::unordered_map<Term, std::size_t, TermHash> seen{{s, 0}};
  auto path = [&](std::size_t idx) {
    std::vector<Step> out;
    for (int i = static_cast<int>(idx); nodes[static_cast<std::size_t>(i)].parent >= 0;
         i = nodes[static_cast<std::size_t>(i)].parent)
      out.push_back(*nodes[static_cast<std::size_t>(i)].via);
    std::reverse(out.begin(), out.end());
    return out;
  };
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].depth >= depth) continue;
    const Term cur = nodes[i].term;
    const int d = nodes[i].depth;
    for (auto &st : reducts(cur, r)) {
      if (seen.count(st.target)) continue;
      if (nodes.size() >= max_terms) return std::nullopt;
      Term target = st.target;
      seen.emplace(target, nodes.size());
      nodes.push_back({target, static_cast<int>(i), d + 1, std::move(st)});
      if (goal(target)) return path(nodes.size() - 1);
    }
  }
  return std::nullopt;
}

std::optional<std::vector<Step>> conversion_bounded(const Term &s, const Term &t,
                                                    const Trs &e, int depth,
                                                    std::size_t max_terms) {
  Trs both = with_inverses(e);
  return reach_bounded(s, [&t](const Term &x) { return x == t; }, both, depth,
                       max_terms);
}

std::string to_string(const Step &s, Printer &pr) {
  std::string out = pr.print(s.source) + " -[" + s.rule.label + " @ " +
                    position_to_string(s.position) + "]-> " + pr.print(s.target);
  return out;
}

} // namespace confluence
