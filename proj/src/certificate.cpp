#include "confluence/certificate.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace confluence {

namespace {

using Method = TerminationCertificate::Method;

const char *segment_name(SegmentKind k) {
  switch (k) {
  case SegmentKind::Star: return "star";
  case SegmentKind::StarS: return "star-s";
  case SegmentKind::SThenStar: return "s-then-star";
  case SegmentKind::PlusS: return "plus-s";
  }
  return "?";
}

const char *middle_name(MiddleKind k) {
  switch (k) {
  case MiddleKind::Equal: return "equal";
  case MiddleKind::StepBack: return "step-back";
  case MiddleKind::StepForward: return "step-forward";
  case MiddleKind::ParallelBack: return "parallel-back";
  case MiddleKind::ParallelForward: return "parallel-forward";
  case MiddleKind::Conversion: return "conversion";
  }
  return "?";
}

[[noreturn]] void malformed(const std::string &msg) {
  throw MalformedCertificate("certificate: " + msg);
}

template <typename E, std::size_t N>
E enum_from(const std::string &s, const E (&values)[N], std::string (*name)(E),
            const char *what) {
  for (E v : values)
    if (name(v) == s) return v;
  malformed(std::string("unknown ") + what + " '" + s + "'");
}

std::string seg_str(SegmentKind k) { return segment_name(k); }
std::string mid_str(MiddleKind k) { return middle_name(k); }

constexpr SegmentKind kSegments[] = {SegmentKind::Star, SegmentKind::StarS,
                                     SegmentKind::SThenStar, SegmentKind::PlusS};
constexpr MiddleKind kMiddles[] = {MiddleKind::Equal,         MiddleKind::StepBack,
                                   MiddleKind::StepForward,   MiddleKind::ParallelBack,
                                   MiddleKind::ParallelForward, MiddleKind::Conversion};
constexpr Criterion kCriteria[] = {Criterion::Linear, Criterion::Parallel, Criterion::Pcp,
                                   Criterion::Huet};
constexpr PrimeMode kPrimes[] = {PrimeMode::Empty, PrimeMode::Fixed, PrimeMode::Auto};
constexpr PairClass kClasses[] = {PairClass::SS, PairClass::PS, PairClass::SP, PairClass::Pcp};
constexpr Method kMethods[] = {Method::Trivial, Method::Lpo, Method::Polynomial,
                               Method::DependencyPairs, Method::External};

std::string symbol_text(SymId f) {
  const Symbol &s = symbol_info(f);
  return s.name + "/" + std::to_string(s.arity);
}

class Writer {
public:
  std::string term(const Term &t) {
    if (t.is_var()) {
      std::string name = pr_.name_of(t.var_id(), t.var_name().empty() ? "v" : t.var_name());
      if (seen_.insert(name).second) names_.push_back(name);
      return name;
    }
    std::string out = symbol_info(t.head()).name;
    if (t.arity() == 0) return out;
    out += '(';
    for (std::size_t i = 0; i < t.arity(); ++i) out += (i ? "," : "") + term(t.arg(i));
    return out + ')';
  }
  std::string rule(const Rule &r) { return term(r.lhs) + " -> " + term(r.rhs); }
  std::string labelled(const Rule &r) {
    return (r.label.empty() ? "-" : r.label) + " | " + rule(r);
  }
  std::string step(const Step &s) {
    return term(s.source) + " @ " + position_to_string(s.position) + " @ " + rule(s.rule);
  }
  std::string steps(const std::vector<Step> &ss) {
    if (ss.empty()) return "-";
    std::string out;
    for (std::size_t i = 0; i < ss.size(); ++i) out += (i ? " ; " : "") + step(ss[i]);
    return out;
  }
  void line(const std::string &l) { body_ += l + "\n"; }

  std::string finish() const {
    std::string vars = "VARS";
    for (const auto &n : names_) vars += " " + n;
    return "BEGIN CERTIFICATE\n" + vars + "\n" + body_ + "END CERTIFICATE\n";
  }

private:
  Printer pr_;
  std::vector<std::string> names_;
  std::set<std::string> seen_;
  std::string body_;
};

void write_termination(Writer &w, const TerminationCertificate &t,
                       const std::map<std::string, Rule> &by_key) {
  w.line("TERMINATION " + method_name(t.method));
  if (t.method == Method::Lpo) {
    std::string prec;
    for (std::size_t i = 0; i < t.precedence.size(); ++i)
      prec += (i ? " ; " : "") + symbol_text(t.precedence[i]);
    w.line("PRECEDENCE " + (prec.empty() ? "-" : prec));
  }
  for (const auto &st : t.stages) {
    std::string polys;
    bool first = true;
    for (const auto &[f, sp] : st.interp.symbols) {
      std::string coeffs;
      for (std::size_t i = 0; i < sp.coeffs.size(); ++i)
        coeffs += (i ? "," : "") + std::to_string(sp.coeffs[i]);
      polys += (first ? "" : " ; ") + symbol_text(f) + ":" + std::to_string(sp.product) + ":" +
               std::to_string(sp.square) + ":" + (coeffs.empty() ? "-" : coeffs) + ":" +
               std::to_string(sp.constant);
      first = false;
    }
    std::string removed;
    for (std::size_t i = 0; i < st.removed.size(); ++i) {
      auto it = by_key.find(st.removed[i]);
      if (it == by_key.end()) throw std::logic_error("removed rule not found for certificate");
      removed += (i ? " ; " : "") + w.rule(it->second);
    }
    w.line("STAGE " + std::to_string(st.interp.floor) + " | " + (polys.empty() ? "-" : polys) +
           " | " + (removed.empty() ? "-" : removed));
  }
  if (t.method == Method::External) w.line("COMMAND " + t.command);
}

void write_evidence(Writer &w, const JoinEvidence &e) {
  w.line("JOIN " + pair_class_name(e.cls) + " | " + segment_name(e.shape.left) + " | " +
         middle_name(e.shape.middle) + " | " + segment_name(e.shape.right) + " | " +
         (e.shape.variable_condition ? "1" : "0"));
  const CriticalPair &c = e.pair;
  std::string inner;
  for (std::size_t i = 0; i < c.positions.size(); ++i)
    inner += (i ? " ; " : "") + position_to_string(c.positions[i]) + " @ " +
             w.rule(c.inner_rules[i]);
  std::string vars;
  for (const auto &v : variables(c.peak))
    if (c.vars.count(v.var_id())) vars += (vars.empty() ? "" : " ") + w.term(v);
  w.line("PAIR " + w.term(c.left) + " | " + w.term(c.right) + " | " + w.term(c.peak) + " | " +
         (c.inner ? "1" : "0") + " | " + w.rule(c.outer_rule) + " | " +
         (inner.empty() ? "-" : inner) + " | " + (vars.empty() ? "-" : vars));
  w.line("LEFT " + w.steps(e.left));
  w.line("RIGHT " + w.steps(e.right));
  if (e.step) w.line("MIDDLE " + w.step(*e.step));
  if (e.parallel) {
    std::string reds;
    for (std::size_t i = 0; i < e.parallel->redexes.size(); ++i)
      reds += (i ? " ; " : "") + position_to_string(e.parallel->redexes[i].position) + " @ " +
              w.rule(e.parallel->redexes[i].rule);
    w.line("PARALLEL " + w.term(e.parallel->source) + " | " + (reds.empty() ? "-" : reds));
  }
  w.line("CONVERSION " + w.steps(e.conversion));
}

// Reading -------------------------------------------------------------------

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && (s[a] == ' ' || s[a] == '\t' || s[a] == '\r')) ++a;
  while (b > a && (s[b - 1] == ' ' || s[b - 1] == '\t' || s[b - 1] == '\r')) --b;
  return std::string(s.substr(a, b - a));
}

std::vector<std::string> split(std::string_view s, std::string_view sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    std::size_t at = s.find(sep, start);
    if (at == std::string_view::npos) {
      out.push_back(trim(s.substr(start)));
      return out;
    }
    out.push_back(trim(s.substr(start, at - start)));
    start = at + sep.size();
  }
}

std::vector<std::string> split_list(const std::string &s) {
  if (s == "-") return {};
  return split(s, " ; ");
}

int to_int(const std::string &s) {
  try {
    std::size_t used = 0;
    int v = std::stoi(s, &used);
    if (used != s.size()) malformed("bad number '" + s + "'");
    return v;
  } catch (const std::logic_error &) {
    malformed("bad number '" + s + "'");
  }
}

class Reader {
public:
  void set_vars(const std::vector<std::string> &names) {
    for (std::size_t i = 0; i < names.size(); ++i)
      vars_[names[i]] = static_cast<VarId>(i + 1);
  }

  Term term(const std::string &text) {
    std::size_t i = 0;
    Term t = term_at(text, i);
    if (i != text.size()) malformed("trailing text in term '" + text + "'");
    return t;
  }

  Rule rule(const std::string &text, std::string label = {}) {
    if (label == "-") label.clear();
    auto parts = split(text, " -> ");
    if (parts.size() != 2) malformed("bad rule '" + text + "'");
    Rule r(term(parts[0]), term(parts[1]), std::move(label));
    if (!r.well_formed()) malformed("not a rewrite rule '" + text + "'");
    return r;
  }

  Position position(const std::string &s) {
    if (s == "e") return {};
    Position p;
    for (const auto &x : split(s, ".")) p.push_back(to_int(x));
    return p;
  }

  Step step(const std::string &text) {
    auto parts = split(text, " @ ");
    if (parts.size() != 3) malformed("bad step '" + text + "'");
    return make(term(parts[0]), position(parts[1]), rule(parts[2]));
  }

  std::vector<Step> steps(const std::string &text) {
    std::vector<Step> out;
    for (const auto &s : split_list(text)) out.push_back(step(s));
    return out;
  }

  SymId symbol(const std::string &text) {
    auto slash = text.rfind('/');
    if (slash == std::string::npos || slash == 0) malformed("bad symbol '" + text + "'");
    return intern_symbol(text.substr(0, slash), to_int(text.substr(slash + 1)));
  }

  std::pair<Position, Rule> redex(const std::string &text) {
    auto parts = split(text, " @ ");
    if (parts.size() != 2) malformed("bad redex '" + text + "'");
    return {position(parts[0]), rule(parts[1])};
  }

private:
  static Step make(const Term &src, const Position &pos, const Rule &r) {
    if (!valid_position(src, pos)) malformed("position outside the term");
    auto m = match_term(r.lhs, subterm_at(src, pos));
    if (!m) malformed("rule does not apply in step of " + to_string(src));
    return Step{src, replace_at(src, pos, apply(*m, r.rhs)), pos, r, *m};
  }

  static bool ident_char(char c) {
    return c != '(' && c != ')' && c != ',' && c != ' ' && c != '\t';
  }

  Term term_at(const std::string &s, std::size_t &i) {
    std::size_t start = i;
    while (i < s.size() && ident_char(s[i])) ++i;
    if (i == start) malformed("expected a term in '" + s + "'");
    std::string name = s.substr(start, i - start);
    std::vector<Term> args;
    if (i < s.size() && s[i] == '(') {
      ++i;
      for (;;) {
        args.push_back(term_at(s, i));
        if (i < s.size() && s[i] == ',') {
          ++i;
          continue;
        }
        if (i < s.size() && s[i] == ')') {
          ++i;
          break;
        }
        malformed("expected ',' or ')' in '" + s + "'");
      }
    } else if (auto v = vars_.find(name); v != vars_.end()) {
      return Term::var(v->second, name);
    }
    SymId f = intern_symbol(name, static_cast<int>(args.size()));
    return Term::app(f, std::move(args));
  }

  std::map<std::string, VarId> vars_;
};

std::vector<std::string> fields(const std::string &rest, std::size_t n, const char *what) {
  auto f = split(rest, " | ");
  if (f.size() != n) malformed(std::string("expected ") + std::to_string(n) +
                               " fields in " + what + " line");
  return f;
}

} // namespace

std::string serialize_certificate(const Certificate &c) {
  Writer w;
  w.line(std::string("VERDICT ") + (c.verdict == Verdict::Yes ? "YES" : "MAYBE") + " | " +
         (c.reason.empty() ? "-" : c.reason));
  w.line("ROUNDS " + std::to_string(c.steps) + " | " + std::to_string(c.checks));
  for (const auto &r : c.input.rules) w.line("INPUT " + w.labelled(r));
  for (const auto &h : c.history) {
    switch (h.kind) {
    case InferenceStep::Kind::Partition:
      w.line("PARTITION");
      for (const auto &r : h.s.rules) w.line("S " + w.labelled(r));
      for (const auto &r : h.p.rules) w.line("P " + w.labelled(r));
      for (const auto &e : h.reversibility.entries)
        w.line("BACK " + w.rule(e.rule) + " | " + w.steps(e.back));
      break;
    case InferenceStep::Kind::Addition:
      w.line("ADDITION " + w.labelled(h.rule) + " | " + w.steps(h.conversion) + " | " +
             w.steps(h.reduction) + " | " + (h.note.empty() ? "-" : h.note));
      break;
    case InferenceStep::Kind::Replacement:
      w.line("REPLACEMENT " + w.labelled(h.old_rule) + " | " + w.labelled(h.rule) + " | " +
             w.steps(h.conversion) + " | " + (h.note.empty() ? "-" : h.note));
      break;
    }
  }
  if (c.verdict == Verdict::Yes) {
    for (const auto &r : c.final_partition.s.rules) w.line("FINAL-S " + w.labelled(r));
    for (const auto &r : c.final_partition.p.rules) w.line("FINAL-P " + w.labelled(r));
  }
  if (c.report) {
    const CriterionReport &rep = *c.report;
    w.line("CRITERION " + criterion_name(rep.criterion) + " | " + prime_mode_name(rep.prime));
    for (const auto &r : rep.p_prime.rules) w.line("PPRIME " + w.labelled(r));
    if (rep.reversibility)
      for (const auto &e : rep.reversibility->entries)
        w.line("REVERSIBLE " + w.rule(e.rule) + " | " + w.steps(e.back));
    if (rep.termination) {
      std::map<std::string, Rule> by_key;
      const Partition &pt = c.final_partition;
      for (const Trs *t : {&pt.s, &pt.p, &rep.p_prime})
        for (const auto &r : t->rules) by_key.emplace(rule_key(r), r);
      for (const auto &r : inverse(pt.p).rules) by_key.emplace(rule_key(r), r);
      for (const auto &dp : dependency_pairs(pt.s)) by_key.emplace(rule_key(dp.rule), dp.rule);
      write_termination(w, *rep.termination, by_key);
    }
    for (const auto &e : rep.evidence) write_evidence(w, e);
  }
  return w.finish();
}

Certificate parse_certificate(std::string_view text) {
  std::vector<std::string> lines;
  {
    std::istringstream in{std::string(text)};
    std::string l;
    bool inside = false;
    while (std::getline(in, l)) {
      l = trim(l);
      if (l == "BEGIN CERTIFICATE") {
        inside = true;
        continue;
      }
      if (l == "END CERTIFICATE") {
        if (!inside) malformed("END without BEGIN");
        inside = false;
        break;
      }
      if (inside && !l.empty()) lines.push_back(l);
    }
    if (inside) malformed("missing END CERTIFICATE");
  }
  if (lines.empty() || lines[0].rfind("VARS", 0) != 0) malformed("missing VARS line");

  Reader rd;
  {
    auto names = split(lines[0].substr(4), " ");
    names.erase(std::remove(names.begin(), names.end(), std::string()), names.end());
    rd.set_vars(names);
  }

  Certificate c;
  bool saw_verdict = false;
  InferenceStep *partition = nullptr;
  TerminationCertificate *term = nullptr;
  JoinEvidence *join = nullptr;
  auto report = [&]() -> CriterionReport & {
    if (!c.report) malformed("report line before CRITERION");
    return *c.report;
  };

  for (std::size_t n = 1; n < lines.size(); ++n) {
    const std::string &l = lines[n];
    std::size_t sp = l.find(' ');
    std::string key = l.substr(0, sp);
    std::string rest = sp == std::string::npos ? "" : trim(l.substr(sp + 1));

    if (key == "VERDICT") {
      auto f = fields(rest, 2, "VERDICT");
      if (f[0] != "YES" && f[0] != "MAYBE") malformed("bad verdict");
      c.verdict = f[0] == "YES" ? Verdict::Yes : Verdict::Maybe;
      c.reason = f[1] == "-" ? "" : f[1];
      saw_verdict = true;
    } else if (key == "ROUNDS") {
      auto f = fields(rest, 2, "ROUNDS");
      c.steps = to_int(f[0]);
      c.checks = to_int(f[1]);
    } else if (key == "INPUT") {
      auto f = fields(rest, 2, "INPUT");
      c.input.add(rd.rule(f[1], f[0]));
    } else if (key == "PARTITION") {
      InferenceStep st;
      st.kind = InferenceStep::Kind::Partition;
      c.history.push_back(std::move(st));
      partition = &c.history.back();
    } else if (key == "S" || key == "P" || key == "BACK") {
      if (!partition) malformed(key + " line outside a partition");
      if (key == "BACK") {
        auto f = fields(rest, 2, "BACK");
        Rule r = rd.rule(f[0]);
        partition->reversibility.entries.push_back({r, rd.steps(f[1])});
      } else {
        auto f = fields(rest, 2, key.c_str());
        (key == "S" ? partition->s : partition->p).add(rd.rule(f[1], f[0]));
      }
    } else if (key == "ADDITION") {
      auto f = fields(rest, 5, "ADDITION");
      InferenceStep st;
      st.kind = InferenceStep::Kind::Addition;
      st.rule = rd.rule(f[1], f[0]);
      st.conversion = rd.steps(f[2]);
      st.reduction = rd.steps(f[3]);
      st.note = f[4] == "-" ? "" : f[4];
      c.history.push_back(std::move(st));
      partition = nullptr;
    } else if (key == "REPLACEMENT") {
      auto f = fields(rest, 6, "REPLACEMENT");
      InferenceStep st;
      st.kind = InferenceStep::Kind::Replacement;
      st.old_rule = rd.rule(f[1], f[0]);
      st.rule = rd.rule(f[3], f[2]);
      st.conversion = rd.steps(f[4]);
      st.note = f[5] == "-" ? "" : f[5];
      c.history.push_back(std::move(st));
      partition = nullptr;
    } else if (key == "FINAL-S" || key == "FINAL-P") {
      auto f = fields(rest, 2, key.c_str());
      (key == "FINAL-S" ? c.final_partition.s : c.final_partition.p).add(rd.rule(f[1], f[0]));
    } else if (key == "CRITERION") {
      auto f = fields(rest, 2, "CRITERION");
      CriterionReport rep;
      rep.criterion = enum_from(f[0], kCriteria, criterion_name, "criterion");
      rep.prime = enum_from(f[1], kPrimes, prime_mode_name, "prime mode");
      rep.outcome = Outcome::Holds;
      c.report = std::move(rep);
      c.final_partition.prime = c.report->prime;
      term = nullptr;
      join = nullptr;
    } else if (key == "PPRIME") {
      auto f = fields(rest, 2, "PPRIME");
      report().p_prime.add(rd.rule(f[1], f[0]));
    } else if (key == "REVERSIBLE") {
      auto f = fields(rest, 2, "REVERSIBLE");
      auto &rep = report();
      if (!rep.reversibility) rep.reversibility = ReversibilityWitness{};
      rep.reversibility->entries.push_back({rd.rule(f[0]), rd.steps(f[1])});
    } else if (key == "TERMINATION") {
      auto &rep = report();
      rep.termination = TerminationCertificate{};
      rep.termination->method = enum_from(rest, kMethods, method_name, "termination method");
      term = &*rep.termination;
    } else if (key == "PRECEDENCE" || key == "STAGE" || key == "COMMAND") {
      if (!term) malformed(key + " line before TERMINATION");
      if (key == "PRECEDENCE") {
        for (const auto &s : split_list(rest)) term->precedence.push_back(rd.symbol(s));
      } else if (key == "COMMAND") {
        term->command = rest;
      } else {
        auto f = fields(rest, 3, "STAGE");
        RemovalStage st;
        st.interp.floor = to_int(f[0]);
        for (const auto &poly : split_list(f[1])) {
          auto parts = split(poly, ":");
          if (parts.size() != 5) malformed("bad interpretation '" + poly + "'");
          SymbolPoly p;
          p.product = to_int(parts[1]);
          p.square = to_int(parts[2]);
          if (parts[3] != "-")
            for (const auto &x : split(parts[3], ",")) p.coeffs.push_back(to_int(x));
          p.constant = to_int(parts[4]);
          st.interp.symbols[rd.symbol(parts[0])] = p;
        }
        for (const auto &r : split_list(f[2])) st.removed.push_back(rule_key(rd.rule(r)));
        term->stages.push_back(std::move(st));
      }
    } else if (key == "JOIN") {
      auto f = fields(rest, 5, "JOIN");
      JoinEvidence e;
      e.cls = enum_from(f[0], kClasses, pair_class_name, "pair class");
      e.shape.left = enum_from(f[1], kSegments, seg_str, "segment");
      e.shape.middle = enum_from(f[2], kMiddles, mid_str, "middle");
      e.shape.right = enum_from(f[3], kSegments, seg_str, "segment");
      e.shape.variable_condition = f[4] == "1";
      auto &rep = report();
      rep.evidence.push_back(std::move(e));
      join = &rep.evidence.back();
    } else if (key == "PAIR" || key == "LEFT" || key == "RIGHT" || key == "MIDDLE" ||
               key == "PARALLEL" || key == "CONVERSION") {
      if (!join) malformed(key + " line before JOIN");
      if (key == "PAIR") {
        auto f = fields(rest, 7, "PAIR");
        CriticalPair &cp = join->pair;
        cp.left = rd.term(f[0]);
        cp.right = rd.term(f[1]);
        cp.peak = rd.term(f[2]);
        cp.inner = f[3] == "1";
        cp.outer_rule = rd.rule(f[4]);
        for (const auto &x : split_list(f[5])) {
          auto [pos, r] = rd.redex(x);
          cp.positions.push_back(pos);
          cp.inner_rules.push_back(r);
        }
        if (f[6] != "-")
          for (const auto &v : split(f[6], " ")) {
            Term t = rd.term(v);
            if (!t.is_var()) malformed("pair variable is not a variable");
            cp.vars.insert(t.var_id());
          }
      } else if (key == "LEFT") {
        join->left = rd.steps(rest);
      } else if (key == "RIGHT") {
        join->right = rd.steps(rest);
      } else if (key == "MIDDLE") {
        join->step = rd.step(rest);
      } else if (key == "CONVERSION") {
        join->conversion = rd.steps(rest);
      } else {
        auto f = fields(rest, 2, "PARALLEL");
        ParallelStep ps;
        ps.source = rd.term(f[0]);
        std::vector<std::pair<Position, Term>> reps;
        for (const auto &x : split_list(f[1])) {
          auto [pos, r] = rd.redex(x);
          if (!valid_position(ps.source, pos)) malformed("parallel redex outside the term");
          auto m = match_term(r.lhs, subterm_at(ps.source, pos));
          if (!m) malformed("parallel redex does not match");
          reps.emplace_back(pos, apply(*m, r.rhs));
          ps.redexes.push_back({pos, r, *m});
        }
        std::vector<Position> ps_pos;
        for (const auto &r : reps) ps_pos.push_back(r.first);
        if (!pairwise_parallel(ps_pos)) malformed("parallel redexes overlap");
        ps.target = replace_parallel(ps.source, reps);
        join->parallel = std::move(ps);
      }
    } else {
      malformed("unknown line '" + key + "'");
    }
  }
  if (!saw_verdict) malformed("missing VERDICT line");
  return c;
}

bool verify_text(std::string_view text, const Trs &input, std::string *why) {
  try {
    return verify(parse_certificate(text), input, why);
  } catch (const MalformedCertificate &e) {
    if (why) *why = e.what();
    return false;
  }
}

} // namespace confluence
