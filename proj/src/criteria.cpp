#include "confluence/criteria.hpp"

#include <algorithm>

namespace confluence {

std::string criterion_name(Criterion c) {
  switch (c) {
  case Criterion::Linear: return "linear";
  case Criterion::Parallel: return "parallel";
  case Criterion::Pcp: return "pcp";
  case Criterion::Huet: return "huet";
  }
  return "?";
}

std::string prime_mode_name(PrimeMode m) {
  switch (m) {
  case PrimeMode::Empty: return "empty";
  case PrimeMode::Fixed: return "fixed";
  case PrimeMode::Auto: return "auto";
  }
  return "?";
}

std::string pair_class_name(PairClass c) {
  switch (c) {
  case PairClass::SS: return "SS";
  case PairClass::PS: return "PS";
  case PairClass::SP: return "SP";
  case PairClass::Pcp: return "PCP";
  }
  return "?";
}

JoinShape required_shape(Criterion c, PairClass cls) {
  using S = SegmentKind;
  using M = MiddleKind;
  switch (c) {
  case Criterion::Linear:
    if (cls == PairClass::SS) return {S::Star, M::StepBack, S::Star, false};
    if (cls == PairClass::PS) return {S::SThenStar, M::StepBack, S::Star, false};
    return {S::Star, M::StepForward, S::SThenStar, false};
  case Criterion::Parallel:
  case Criterion::Pcp:
    if (cls == PairClass::SS) return {S::Star, M::ParallelBack, S::Star, false};
    if (cls == PairClass::Pcp) return {S::SThenStar, M::ParallelBack, S::Star, true};
    if (cls == PairClass::PS) return {S::SThenStar, M::ParallelBack, S::Star, false};
    return {S::Star, M::ParallelForward, S::SThenStar, false};
  case Criterion::Huet:
    if (cls == PairClass::SS) return {S::StarS, M::Conversion, S::StarS, false};
    if (cls == PairClass::PS) return {S::PlusS, M::Conversion, S::StarS, false};
    return {S::StarS, M::Conversion, S::PlusS, false};
  }
  return {};
}

namespace {

bool past(const CriteriaOptions &opt) {
  return opt.deadline && std::chrono::steady_clock::now() > *opt.deadline;
}

struct Segment {
  ReachSet reach;
  bool skip_start = false;
};

Segment explore_segment(const Term &t, SegmentKind k, const Trs &s, const Trs &x,
                        const CriteriaOptions &opt) {
  switch (k) {
  case SegmentKind::Star: return {explore(t, x, x, opt.depth, opt.max_terms), false};
  case SegmentKind::StarS: return {explore(t, s, s, opt.depth, opt.max_terms), false};
  case SegmentKind::SThenStar: return {explore(t, s, x, opt.depth, opt.max_terms), false};
  case SegmentKind::PlusS: return {explore(t, s, s, opt.depth, opt.max_terms), true};
  }
  return {};
}

std::optional<std::size_t> find_in(const Segment &seg, const Term &t) {
  auto i = seg.reach.find(t);
  if (!i || (seg.skip_start && *i == 0)) return std::nullopt;
  return i;
}

bool variable_condition(const Term &a, const std::vector<Position> &ps,
                        const std::set<VarId> &x) {
  for (VarId v : var_set_below(a, ps))
    if (!x.count(v)) return false;
  return true;
}

// Searches a join of the pair in the given shape; x is the rule set of the
// ->* segments besides S.
std::optional<JoinEvidence> find_join(const CriticalPair &c, PairClass cls,
                                      const JoinShape &shape, const Trs &s,
                                      const Trs &x, const Trs &p_pm,
                                      const CriteriaOptions &opt) {
  Segment a = explore_segment(c.left, shape.left, s, x, opt);
  Segment b = explore_segment(c.right, shape.right, s, x, opt);
  const auto &an = a.reach.nodes();
  const auto &bn = b.reach.nodes();
  JoinEvidence ev;
  ev.pair = c;
  ev.cls = cls;
  ev.shape = shape;
  auto finish = [&](std::size_t ia, std::size_t ib) {
    ev.left = a.reach.path_to(ia);
    ev.right = b.reach.path_to(ib);
    return ev;
  };
  // Common end first; every middle relation is reflexive except when it is
  // a conversion, which is reflexive as well.
  for (std::size_t i = a.skip_start ? 1 : 0; i < an.size(); ++i)
    if (auto j = find_in(b, an[i].term)) return finish(i, *j);

  switch (shape.middle) {
  case MiddleKind::Equal:
    return std::nullopt;
  case MiddleKind::StepBack:
    for (std::size_t j = b.skip_start ? 1 : 0; j < bn.size(); ++j)
      for (auto &st : reducts(bn[j].term, p_pm))
        if (auto i = find_in(a, st.target)) {
          ev.step = st;
          return finish(*i, j);
        }
    return std::nullopt;
  case MiddleKind::StepForward:
    for (std::size_t i = a.skip_start ? 1 : 0; i < an.size(); ++i)
      for (auto &st : reducts(an[i].term, p_pm))
        if (auto j = find_in(b, st.target)) {
          ev.step = st;
          return finish(i, *j);
        }
    return std::nullopt;
  case MiddleKind::ParallelBack:
  case MiddleKind::ParallelForward:
    for (std::size_t i = a.skip_start ? 1 : 0; i < an.size(); ++i) {
      if (past(opt)) return std::nullopt;
      for (std::size_t j = b.skip_start ? 1 : 0; j < bn.size(); ++j) {
        bool back = shape.middle == MiddleKind::ParallelBack;
        const Term &src = back ? bn[j].term : an[i].term;
        const Term &tgt = back ? an[i].term : bn[j].term;
        auto ps = parallel_step_exists(src, tgt, p_pm);
        if (!ps) continue;
        if (shape.variable_condition && !variable_condition(an[i].term, ps->positions(), c.vars))
          continue;
        ev.parallel = *ps;
        return finish(i, j);
      }
    }
    return std::nullopt;
  case MiddleKind::Conversion: {
    std::unordered_map<Term, bool, TermHash> covered;
    for (std::size_t i = a.skip_start ? 1 : 0; i < an.size(); ++i) {
      if (past(opt)) return std::nullopt;
      if (covered.count(an[i].term)) continue;
      ReachSet cls_set = explore(an[i].term, p_pm, p_pm, opt.depth, opt.max_terms);
      for (std::size_t k = 0; k < cls_set.nodes().size(); ++k) {
        const Term &t = cls_set.nodes()[k].term;
        covered.emplace(t, true);
        if (auto j = find_in(b, t)) {
          ev.conversion = cls_set.path_to(k);
          return finish(i, *j);
        }
      }
    }
    return std::nullopt;
  }
  }
  return std::nullopt;
}

FailedPair failed(const CriticalPair &c, PairClass cls, const Trs &s) {
  FailedPair f;
  f.pair = c;
  f.cls = cls;
  try {
    f.u_hat = normalize(c.left, s);
    f.v_hat = normalize(c.right, s);
    f.normalized = true;
    f.v_normal = is_normal(c.right, s);
  } catch (const FuelExhausted &) {
    f.normalized = false;
  }
  return f;
}

bool segment_ok(const std::vector<Step> &steps, SegmentKind k, const Trs &s,
                const Trs &x) {
  switch (k) {
  case SegmentKind::Star: return steps_use_only(steps, x);
  case SegmentKind::StarS: return steps_use_only(steps, s);
  case SegmentKind::SThenStar:
    if (steps.empty()) return true;
    return s.contains(steps.front().rule) &&
           steps_use_only({steps.begin() + 1, steps.end()}, x);
  case SegmentKind::PlusS: return !steps.empty() && steps_use_only(steps, s);
  }
  return false;
}

Term end_of(const Term &start, const std::vector<Step> &steps) {
  return steps.empty() ? start : steps.back().target;
}

struct PairSet {
  PairClass cls;
  std::vector<CriticalPair> pairs;
};

std::vector<PairSet> required_pairs(Criterion c, const Trs &s, const Trs &p_pm) {
  std::vector<PairSet> out;
  out.push_back({PairClass::SS, cp(s, s)});
  switch (c) {
  case Criterion::Linear:
  case Criterion::Huet:
    out.push_back({PairClass::PS, cp(p_pm, s)});
    break;
  case Criterion::Parallel:
    // Must be empty; any member fails the criterion.
    out.push_back({PairClass::PS, cp_in(p_pm, s)});
    break;
  case Criterion::Pcp:
    out.push_back({PairClass::Pcp, pcp_in(p_pm, s)});
    break;
  }
  out.push_back({PairClass::SP, cp(s, p_pm)});
  return out;
}

std::string rules_text(const Trs &r) {
  std::string out = "{";
  for (std::size_t i = 0; i < r.size(); ++i) out += (i ? ", " : "") + to_string(r.rules[i]);
  return out + "}";
}

} // namespace

Trs collect_p_prime(const std::vector<JoinEvidence> &evidence, const Trs &s,
                    const Trs &p_pm) {
  Trs out;
  auto note = [&](const std::vector<Step> &steps) {
    for (const auto &st : steps)
      if (!s.contains(st.rule) && p_pm.contains(st.rule) && !out.contains(st.rule))
        out.add(st.rule);
  };
  for (const auto &e : evidence) {
    note(e.left);
    note(e.right);
  }
  return out;
}

bool replay_join(const JoinEvidence &e, const Trs &s, const Trs &p_pm,
                 const Trs &p_prime) {
  Trs x = trs_union(s, p_prime);
  const Term a = end_of(e.pair.left, e.left), b = end_of(e.pair.right, e.right);
  if (!replay_sequence(e.pair.left, e.left, a) || !replay_sequence(e.pair.right, e.right, b))
    return false;
  if (!segment_ok(e.left, e.shape.left, s, x) || !segment_ok(e.right, e.shape.right, s, x))
    return false;
  switch (e.shape.middle) {
  case MiddleKind::Equal:
    return a == b;
  case MiddleKind::StepBack:
  case MiddleKind::StepForward: {
    if (!e.step) return a == b;
    bool back = e.shape.middle == MiddleKind::StepBack;
    const Step &st = *e.step;
    return st.source == (back ? b : a) && st.target == (back ? a : b) && replay_step(st) &&
           p_pm.contains(st.rule);
  }
  case MiddleKind::ParallelBack:
  case MiddleKind::ParallelForward: {
    if (!e.parallel) return a == b;
    bool back = e.shape.middle == MiddleKind::ParallelBack;
    const ParallelStep &ps = *e.parallel;
    if (ps.source != (back ? b : a) || ps.target != (back ? a : b)) return false;
    if (!replay_parallel_step(ps)) return false;
    for (const auto &r : ps.redexes)
      if (!p_pm.contains(r.rule)) return false;
    if (e.shape.variable_condition && !variable_condition(a, ps.positions(), e.pair.vars))
      return false;
    return true;
  }
  case MiddleKind::Conversion:
    return replay_sequence(a, e.conversion, b) && steps_use_only(e.conversion, p_pm);
  }
  return false;
}

CriterionReport check(Criterion c, const Partition &pt, const CriteriaOptions &opt) {
  CriterionReport rep;
  rep.criterion = c;
  rep.prime = c == Criterion::Huet ? PrimeMode::Empty : pt.prime;
  const Trs &s = pt.s;
  Trs p_pm = with_inverses(pt.p);

  auto not_applicable = [&](std::string why) {
    rep.outcome = Outcome::NotApplicable;
    rep.reason = std::move(why);
    return rep;
  };

  if (c == Criterion::Linear ? !s.linear() : !s.left_linear())
    return not_applicable(c == Criterion::Linear ? "S is not linear" : "S is not left-linear");
  auto rev = is_reversible(pt.p, opt.rev_k);
  if (!rev) return not_applicable("P is not reversible: " + rev.reason);
  rep.reversibility = rev.witness;

  // Termination facts that do not depend on the joins.
  Trs x = s;
  if (c == Criterion::Huet) {
    auto t = prove_relative_termination(s, pt.p, opt.termination);
    if (!t) return not_applicable("S is not terminating relative to P: " + t.reason);
    rep.termination = t.certificate;
  } else if (rep.prime == PrimeMode::Fixed) {
    for (const auto &r : pt.p_prime.rules)
      if (!p_pm.contains(r))
        return not_applicable("P' is not contained in P and its inverse: " + to_string(r));
    auto t = prove_relative_termination(s, pt.p_prime, opt.termination);
    if (!t) return not_applicable("S is not terminating relative to P': " + t.reason);
    rep.termination = t.certificate;
    rep.p_prime = pt.p_prime;
    x = trs_union(s, pt.p_prime);
  } else {
    auto t = prove_termination(s, opt.termination);
    if (!t) return not_applicable("S is not terminating: " + t.reason);
    rep.termination = t.certificate;
  }

  std::vector<std::size_t> used_prime; // evidence indices that needed P'
  for (const auto &set : required_pairs(c, s, p_pm)) {
    for (const auto &pair : set.pairs) {
      if (past(opt)) {
        rep.timed_out = true;
        return not_applicable("timeout");
      }
      if (c == Criterion::Parallel && set.cls == PairClass::PS) {
        rep.failing.push_back(failed(pair, set.cls, s));
        continue;
      }
      JoinShape shape = required_shape(c, set.cls);
      auto ev = find_join(pair, set.cls, shape, s, x, p_pm, opt);
      if (!ev && rep.prime == PrimeMode::Auto) {
        // Keep P' small and relatively terminating: reuse the rules collected
        // so far, then add one rule at a time, and only then allow all of P
        // and its inverse.
        std::vector<Trs> tries;
        if (!rep.p_prime.empty()) tries.push_back(rep.p_prime);
        for (const auto &r : p_pm.rules)
          if (!rep.p_prime.contains(r)) tries.push_back(trs_union(rep.p_prime, Trs({r})));
        for (const auto &extra : tries) {
          if (!prove_relative_termination(s, extra, opt.termination)) continue;
          ev = find_join(pair, set.cls, shape, s, trs_union(s, extra), p_pm, opt);
          if (ev) break;
        }
        if (!ev) ev = find_join(pair, set.cls, shape, s, trs_union(s, p_pm), p_pm, opt);
        if (ev) {
          used_prime.push_back(rep.evidence.size());
          rep.p_prime = trs_union(rep.p_prime, collect_p_prime({*ev}, s, p_pm));
        }
      }
      if (ev) rep.evidence.push_back(std::move(*ev));
      else rep.failing.push_back(failed(pair, set.cls, s));
    }
  }

  if (rep.prime == PrimeMode::Auto) {
    if (!rep.p_prime.empty()) {
      auto t = prove_relative_termination(s, rep.p_prime, opt.termination);
      if (t) {
        rep.termination = t.certificate;
      } else {
        for (std::size_t i : used_prime)
          rep.needs_prime.push_back(failed(rep.evidence[i].pair, rep.evidence[i].cls, s));
        rep.outcome = Outcome::Fails;
        rep.reason = "S is not terminating relative to P' = " + rules_text(rep.p_prime) +
                     ": " + t.reason;
        return rep;
      }
    }
  }

  if (!rep.failing.empty()) {
    rep.outcome = Outcome::Fails;
    const FailedPair &f = rep.failing.front();
    rep.reason = std::to_string(rep.failing.size()) + " critical pair(s) not joinable, first " +
                 pair_class_name(f.cls) + " " + to_string(f.pair, f.cls == PairClass::Pcp);
    if (c == Criterion::Parallel && f.cls == PairClass::PS)
      rep.reason = "inner critical pairs of P and its inverse on S are not empty";
    return rep;
  }
  rep.outcome = Outcome::Holds;
  return rep;
}

CriterionReport check_linear(const Partition &pt, const CriteriaOptions &opt) {
  return check(Criterion::Linear, pt, opt);
}
CriterionReport check_parallel(const Partition &pt, const CriteriaOptions &opt) {
  return check(Criterion::Parallel, pt, opt);
}
CriterionReport check_pcp(const Partition &pt, const CriteriaOptions &opt) {
  return check(Criterion::Pcp, pt, opt);
}
CriterionReport check_huet(const Partition &pt, const CriteriaOptions &opt) {
  return check(Criterion::Huet, pt, opt);
}

bool replay_report(const CriterionReport &r, const Partition &pt) {
  if (r.outcome != Outcome::Holds) return false;
  const Trs &s = pt.s;
  Trs p_pm = with_inverses(pt.p);
  if (r.criterion == Criterion::Linear ? !s.linear() : !s.left_linear()) return false;
  if (!r.reversibility || !replay_reversibility(*r.reversibility, pt.p)) return false;
  if (!r.termination) return false;

  Trs prime;
  if (r.criterion == Criterion::Huet) {
    if (!replay_certificate(*r.termination, s, pt.p)) return false;
  } else {
    if (r.prime == PrimeMode::Empty && !r.p_prime.empty()) return false;
    if (r.prime == PrimeMode::Fixed && !same_rule_set(r.p_prime, pt.p_prime)) return false;
    for (const auto &rule : r.p_prime.rules)
      if (!p_pm.contains(rule)) return false;
    if (!replay_certificate(*r.termination, s, r.p_prime)) return false;
    prime = r.p_prime;
  }

  // Coverage: every required pair carries a join of the required shape.
  std::multiset<std::string> need, have;
  for (const auto &set : required_pairs(r.criterion, s, p_pm)) {
    if (r.criterion == Criterion::Parallel && set.cls == PairClass::PS) {
      if (!set.pairs.empty()) return false;
      continue;
    }
    for (const auto &c : set.pairs)
      need.insert(pair_class_name(set.cls) + canonical_key({c.left, c.right}));
  }
  for (const auto &e : r.evidence) {
    if (!replay_critical_pair(e.pair)) return false;
    JoinShape want = required_shape(r.criterion, e.cls);
    if (e.shape.left != want.left || e.shape.middle != want.middle ||
        e.shape.right != want.right || e.shape.variable_condition != want.variable_condition)
      return false;
    if (!replay_join(e, s, p_pm, prime)) return false;
    have.insert(pair_class_name(e.cls) + canonical_key({e.pair.left, e.pair.right}));
  }
  return need == have;
}

} // namespace confluence
