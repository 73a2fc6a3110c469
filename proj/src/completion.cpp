#include "confluence/completion.hpp"

#include <chrono>
#include <deque>
#include <set>

namespace confluence {

Criterion criterion_for_index(int i) {
  switch (i) {
  case 0: return Criterion::Pcp;
  case 1: return Criterion::Linear;
  default: return Criterion::Huet;
  }
}

std::string inference_kind_name(InferenceStep::Kind k) {
  switch (k) {
  case InferenceStep::Kind::Partition: return "partition";
  case InferenceStep::Kind::Replacement: return "replacement";
  case InferenceStep::Kind::Addition: return "addition";
  }
  return "?";
}

bool symmetric_rule(const Rule &rule, const Trs &r) {
  if (r.contains(Rule(rule.rhs, rule.lhs))) return true;
  if (rule.lhs.is_var() || rule.rhs.is_var()) return false;
  return rule.lhs.head() == rule.rhs.head() && fun_symbols(rule.lhs) == fun_symbols(rule.rhs);
}

namespace {

bool undone(const Rule &rule, const Trs &p, int k) {
  if (!rule.bidirectional()) return false;
  const Term &goal = rule.lhs;
  return reach_bounded(rule.rhs, [&](const Term &t) { return t == goal; }, p, k).has_value();
}

Trs without(const Trs &r, std::size_t i) {
  Trs out = r;
  out.rules.erase(out.rules.begin() + static_cast<std::ptrdiff_t>(i));
  return out;
}

// First rule of s equal to r modulo renaming.
const Rule *find_same(const Trs &s, const Rule &r) {
  for (const auto &x : s.rules)
    if (same_rule(x, r)) return &x;
  return nullptr;
}

std::optional<Step> make_step(const Term &t, const Position &pos, const Rule &rule) {
  if (!valid_position(t, pos)) return std::nullopt;
  auto m = match_term(rule.lhs, subterm_at(t, pos));
  if (!m) return std::nullopt;
  return Step{t, replace_at(t, pos, apply(*m, rule.rhs)), pos, rule, *m};
}

// Leftmost-innermost redex of t.
bool innermost(const Term &t, const Trs &s, Position &pos, const Rule *&rule) {
  if (t.is_var()) return false;
  for (std::size_t i = 0; i < t.arity(); ++i) {
    pos.push_back(static_cast<int>(i) + 1);
    if (innermost(t.arg(i), s, pos, rule)) return true;
    pos.pop_back();
  }
  for (const auto &r : s.rules)
    if (match_term(r.lhs, t)) {
      rule = &r;
      return true;
    }
  return false;
}

// Leftmost-innermost normalization with the steps taken.
std::vector<Step> normalize_trace(const Term &t, const Trs &s, int fuel = 10000) {
  std::vector<Step> out;
  Term cur = t;
  for (;;) {
    Position pos;
    const Rule *rule = nullptr;
    if (!innermost(cur, s, pos, rule)) return out;
    if (fuel-- <= 0) throw FuelExhausted();
    out.push_back(*make_step(cur, pos, *rule));
    cur = out.back().target;
  }
}

Term end_of(const Term &start, const std::vector<Step> &steps) {
  return steps.empty() ? start : steps.back().target;
}

void append(std::vector<Step> &to, const std::vector<Step> &from) {
  to.insert(to.end(), from.begin(), from.end());
}

InferenceStep addition(Rule rule, std::vector<Step> conversion, std::vector<Step> reduction,
                       std::string note) {
  InferenceStep st;
  st.kind = InferenceStep::Kind::Addition;
  st.rule = std::move(rule);
  st.conversion = std::move(conversion);
  st.reduction = std::move(reduction);
  st.note = std::move(note);
  return st;
}

// Addition candidates for one failing pair.
std::vector<InferenceStep> additions_for(const FailedPair &f, const Trs &s, const Trs &p,
                                         int depth) {
  std::vector<InferenceStep> out;
  const CriticalPair &c = f.pair;
  switch (f.cls) {
  case PairClass::SP: {
    // v <-_P peak ->_S u ->*_S u_hat: add v -> u_hat.
    auto trace = normalize_trace(c.left, s);
    Term u_hat = end_of(c.left, trace);
    if (c.right == u_hat || !is_valid_rule(c.right, u_hat) || c.positions.size() != 1) break;
    auto conv = conversion_bounded(c.right, c.peak, p, 1);
    auto inner = make_step(c.peak, c.positions[0], c.inner_rules[0]);
    if (!conv || !inner || inner->target != c.left) break;
    std::vector<Step> red{*inner};
    append(red, trace);
    out.push_back(addition(Rule(c.right, u_hat), *conv, red, "normal form of an S/P pair"));
    break;
  }
  case PairClass::PS:
  case PairClass::Pcp: {
    // u <-*_P peak ->_S v ->*_S v_hat: add u -> v_hat.
    auto trace = normalize_trace(c.right, s);
    Term v_hat = end_of(c.right, trace);
    if (c.left == v_hat || !is_valid_rule(c.left, v_hat)) break;
    auto conv = conversion_bounded(c.left, c.peak, p, static_cast<int>(c.positions.size()));
    auto root = make_step(c.peak, {}, c.outer_rule);
    if (!conv || !root || root->target != c.right) break;
    std::vector<Step> red{*root};
    append(red, trace);
    out.push_back(addition(Rule(c.left, v_hat), *conv, red, "inner pair of P on S"));
    break;
  }
  case PairClass::SS: {
    // u_hat <->*_P v_hat: add both orientations.
    Term u_hat = end_of(c.left, normalize_trace(c.left, s));
    Term v_hat = end_of(c.right, normalize_trace(c.right, s));
    if (u_hat == v_hat) break;
    for (auto [l, r] : {std::pair{u_hat, v_hat}, std::pair{v_hat, u_hat}}) {
      if (!is_valid_rule(l, r)) continue;
      auto conv = conversion_bounded(l, r, p, depth);
      if (conv) out.push_back(addition(Rule(l, r), *conv, {}, "normal forms of an S/S pair"));
    }
    break;
  }
  }
  return out;
}

// Drops candidates whose lhs is reducible by another candidate.
std::vector<InferenceStep> inter_reduced(const std::vector<InferenceStep> &cands) {
  std::vector<InferenceStep> out;
  for (std::size_t i = 0; i < cands.size(); ++i) {
    bool reducible = false;
    for (std::size_t j = 0; j < cands.size() && !reducible; ++j)
      if (i != j && !same_rule(cands[i].rule, cands[j].rule))
        reducible = !reducts(cands[i].rule.lhs, Trs({cands[j].rule})).empty();
    if (!reducible) out.push_back(cands[i]);
  }
  return out;
}

Trs with_additions(const Trs &q, const std::vector<InferenceStep> &adds) {
  Trs out = q;
  for (const auto &a : adds) out.add(a.rule);
  return out;
}

} // namespace

std::vector<CandidatePartition> decompose(const Trs &r, int rev_k) {
  Trs p;
  for (const auto &rule : r.rules)
    if (symmetric_rule(rule, r)) p.add(rule);
  // Shrink to a reversible set, dropping the first rule that cannot be undone.
  for (;;) {
    std::size_t bad = p.size();
    for (std::size_t i = 0; i < p.size() && bad == p.size(); ++i)
      if (!undone(p.rules[i], p, rev_k)) bad = i;
    if (bad == p.size()) break;
    p = without(p, bad);
  }

  std::vector<CandidatePartition> out;
  std::set<std::string> seen;
  auto emit = [&](const Trs &pp) {
    if (!seen.insert(trs_key(pp)).second) return;
    auto rev = is_reversible(pp, rev_k);
    if (!rev) return;
    out.push_back({trs_minus(r, pp), pp, *rev.witness});
  };
  emit(p);
  for (std::size_t i = 0; i < p.size(); ++i) emit(without(p, i));
  return out;
}

ProofState initial_state(const Trs &r) {
  ProofState st;
  st.s = r;
  return st;
}

bool audit_step(const InferenceStep &step, const Trs &s, const Trs &p) {
  Trs p_pm = with_inverses(p);
  switch (step.kind) {
  case InferenceStep::Kind::Partition:
    return same_rule_set(trs_union(s, p), trs_union(step.s, step.p)) &&
           replay_reversibility(step.reversibility, step.p);
  case InferenceStep::Kind::Addition: {
    if (!step.rule.well_formed()) return false;
    // lhs <->*_P m, hence lhs ->*_P m as P is reversible.
    Term m = end_of(step.rule.lhs, step.conversion);
    return replay_sequence(step.rule.lhs, step.conversion, m) &&
           steps_use_only(step.conversion, p_pm) &&
           replay_sequence(m, step.reduction, step.rule.rhs) &&
           steps_use_only(step.reduction, s);
  }
  case InferenceStep::Kind::Replacement:
    // Both l -> r' and l -> r are simulated by the other rule and r <->*_P r'.
    return step.rule.well_formed() && s.contains(step.old_rule) &&
           step.rule.lhs == step.old_rule.lhs &&
           replay_sequence(step.old_rule.rhs, step.conversion, step.rule.rhs) &&
           steps_use_only(step.conversion, p_pm);
  }
  return false;
}

ProofState apply_step(const ProofState &st, const InferenceStep &step) {
  if (!audit_step(step, st.s, st.p))
    throw SideConditionError("unverified " + inference_kind_name(step.kind) + " step" +
                             (step.kind == InferenceStep::Kind::Partition
                                  ? std::string()
                                  : " for " + to_string(step.rule)));
  ProofState next = st;
  switch (step.kind) {
  case InferenceStep::Kind::Partition:
    next.s = step.s;
    next.p = step.p;
    break;
  case InferenceStep::Kind::Addition:
    next.s = trs_union(next.s, Trs({step.rule}));
    break;
  case InferenceStep::Kind::Replacement: {
    Trs s;
    bool dropped = false;
    for (const auto &r : next.s.rules) {
      if (!dropped && same_rule(r, step.old_rule)) {
        dropped = true;
        continue;
      }
      s.add(r);
    }
    next.s = trs_union(s, Trs({step.rule}));
    break;
  }
  }
  next.history.push_back(step);
  return next;
}

ProofState apply_partition(const ProofState &st, const Trs &s, const Trs &p, int rev_k) {
  if (!same_rule_set(st.rules(), trs_union(s, p)))
    throw SideConditionError("partition does not cover the same rules");
  auto rev = is_reversible(p, rev_k);
  if (!rev) throw SideConditionError("P is not reversible: " + rev.reason);
  InferenceStep step;
  step.kind = InferenceStep::Kind::Partition;
  step.s = s;
  step.p = p;
  step.reversibility = *rev.witness;
  return apply_step(st, step);
}

ProofState apply_replacement(const ProofState &st, const Rule &old_rule, const Rule &rule,
                             int depth) {
  const Rule *old = find_same(st.s, old_rule);
  if (!old) throw SideConditionError("rule to replace is not in S: " + to_string(old_rule));
  if (old->lhs != rule.lhs || !rule.well_formed())
    throw SideConditionError("replacement must keep the left-hand side: " + to_string(rule));
  auto conv = conversion_bounded(old->rhs, rule.rhs, st.p, depth);
  if (!conv)
    throw SideConditionError("no conversion by P between the right-hand sides of " +
                             to_string(*old) + " and " + to_string(rule));
  InferenceStep step;
  step.kind = InferenceStep::Kind::Replacement;
  step.old_rule = *old;
  step.rule = rule;
  step.conversion = *conv;
  return apply_step(st, step);
}

ProofState apply_addition(const ProofState &st, const Rule &rule, int depth) {
  if (!rule.well_formed()) throw SideConditionError("not a rewrite rule: " + to_string(rule));
  Trs p_pm = with_inverses(st.p);
  ReachSet cls = explore(rule.lhs, p_pm, p_pm, depth, 2000);
  const Term &goal = rule.rhs;
  for (std::size_t i = 0; i < cls.nodes().size(); ++i) {
    auto red = reach_bounded(cls.nodes()[i].term, [&](const Term &t) { return t == goal; },
                             st.s, depth, 2000);
    if (red) return apply_step(st, addition(rule, cls.path_to(i), *red, "given"));
  }
  throw SideConditionError("no conversion by P followed by S steps justifies " +
                           to_string(rule));
}

std::vector<Successor> trans(const Trs &s, const Trs &p, const std::vector<FailedPair> &nj,
                             int depth) {
  Trs q = trs_union(s, p);
  Trs p_pm = with_inverses(p);

  std::vector<InferenceStep> cands;
  std::set<std::string> seen;
  for (const auto &f : nj) {
    std::vector<InferenceStep> found;
    try {
      found = additions_for(f, s, p, depth);
    } catch (const FuelExhausted &) {
      continue;
    }
    for (auto &a : found) {
      if (q.contains(a.rule) || !seen.insert(rule_key(a.rule)).second) continue;
      a.rule.label = "added" + std::to_string(q.size() + cands.size() + 1);
      cands.push_back(std::move(a));
    }
  }

  std::vector<Successor> out;
  auto reduced = inter_reduced(cands);
  if (!reduced.empty()) out.push_back({with_additions(q, reduced), reduced});
  if (reduced.size() != cands.size()) out.push_back({with_additions(q, cands), cands});

  // S rules involved in a failure, in order of first appearance.
  std::vector<Rule> implicated;
  auto note = [&](const Rule &r) {
    const Rule *x = find_same(s, r);
    if (!x) return;
    for (const auto &y : implicated)
      if (same_rule(y, *x)) return;
    implicated.push_back(*x);
  };
  for (const auto &f : nj) {
    note(f.pair.outer_rule);
    for (const auto &r : f.pair.inner_rules) note(r);
  }
  for (const auto &old : implicated) {
    for (const auto &st : reducts(old.rhs, p_pm)) {
      Rule rule(old.lhs, st.target, old.label + "'");
      if (!rule.well_formed() || q.contains(rule)) continue;
      InferenceStep step;
      step.kind = InferenceStep::Kind::Replacement;
      step.old_rule = old;
      step.rule = rule;
      step.conversion = {st};
      step.note = "right-hand side rewritten by P";
      Trs next;
      for (const auto &r : q.rules)
        if (!same_rule(r, old)) next.add(r);
      next.add(rule);
      out.push_back({next, {step}});
    }
  }
  return out;
}

Certificate check_confluence(const Trs &r, const CompletionOptions &opt) {
  using Clock = std::chrono::steady_clock;
  auto deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                     std::chrono::duration<double>(opt.timeout_seconds));
  CriteriaOptions copt = opt.criteria;
  copt.deadline = deadline;

  Certificate cert;
  cert.input = r;

  struct Item {
    ProofState st;
    int index;
  };
  std::deque<Item> work;
  std::set<std::string> visited{trs_key(r)};
  std::vector<int> indices = opt.only ? std::vector<int>{0} : std::vector<int>{0, 1, 2};

  auto enqueue = [&](const ProofState &base) {
    for (const auto &cand : decompose(base.rules(), copt.rev_k)) {
      InferenceStep step;
      step.kind = InferenceStep::Kind::Partition;
      step.s = cand.s;
      step.p = cand.p;
      step.reversibility = cand.reversibility;
      ProofState st = apply_step(base, step);
      for (int i : indices) work.push_back({st, i});
    }
  };
  auto maybe = [&](std::string why) {
    cert.verdict = Verdict::Maybe;
    cert.reason = std::move(why);
    return cert;
  };

  enqueue(initial_state(r));
  bool limited = false;
  while (!work.empty()) {
    if (Clock::now() > deadline) return maybe("timeout");
    Item item = std::move(work.front());
    work.pop_front();
    Criterion c = opt.only ? *opt.only : criterion_for_index(item.index);
    Partition pt{item.st.s, item.st.p, PrimeMode::Auto, {}};
    CriterionReport rep = check(c, pt, copt);
    ++cert.checks;
    if (rep.timed_out) return maybe("timeout");
    if (rep.holds()) {
      cert.verdict = Verdict::Yes;
      cert.reason.clear();
      cert.history = item.st.history;
      cert.final_partition = pt;
      cert.steps = item.st.depth;
      cert.report = std::move(rep);
      return cert;
    }
    if (opt.only || rep.outcome == Outcome::NotApplicable) continue;
    if (item.st.depth >= opt.max_steps) {
      limited = true;
      continue;
    }
    std::vector<FailedPair> nj = rep.failing;
    nj.insert(nj.end(), rep.needs_prime.begin(), rep.needs_prime.end());
    if (nj.empty()) continue;
    for (const auto &succ : trans(item.st.s, item.st.p, nj, copt.depth)) {
      if (!visited.insert(trs_key(succ.rules)).second) continue;
      ProofState next = item.st;
      try {
        for (const auto &step : succ.steps) next = apply_step(next, step);
      } catch (const SideConditionError &) {
        continue;
      }
      ++next.depth;
      enqueue(next);
    }
  }
  return maybe(limited ? "step-limit" : "exhausted");
}

bool verify(const Certificate &c, const Trs &input, std::string *why) {
  auto fail = [&](std::string msg) {
    if (why) *why = std::move(msg);
    return false;
  };
  if (c.verdict != Verdict::Yes) return fail("verdict is not YES");
  if (!c.report) return fail("no criterion report");
  if (c.history.empty() || c.history.back().kind != InferenceStep::Kind::Partition)
    return fail("history does not end with a partition");
  Trs s = input, p;
  for (std::size_t i = 0; i < c.history.size(); ++i) {
    const auto &step = c.history[i];
    if (!audit_step(step, s, p))
      return fail("step " + std::to_string(i + 1) + " (" + inference_kind_name(step.kind) +
                  ") fails its audit");
    ProofState st;
    st.s = s;
    st.p = p;
    st = apply_step(st, step);
    s = st.s;
    p = st.p;
  }
  if (!same_rule_set(s, c.final_partition.s) || !same_rule_set(p, c.final_partition.p))
    return fail("final partition differs from the replayed one");
  Partition pt{s, p, c.report->prime, c.report->p_prime};
  if (!replay_report(*c.report, pt)) return fail("criterion report does not replay");
  return true;
}

} // namespace confluence
