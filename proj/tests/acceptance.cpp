// Prints one PASS/FAIL line per acceptance criterion and exits non-zero if
// any criterion fails.

#include "confluence/ars_oracle.hpp"
#include "confluence/certificate.hpp"
#include "confluence/cli.hpp"
#include "confluence/completion.hpp"
#include "confluence/critical_pairs.hpp"
#include "confluence/criteria.hpp"
#include "confluence/reversibility.hpp"
#include "support/examples.hpp"
#include "support/properties.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

using namespace confluence;
using examples::build;
using examples::term;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Collects the failures of one criterion.
struct CriterionResult {
  std::vector<std::string> problems;
  std::string summary;

  void require(bool ok, const std::string &what) {
    if (!ok) problems.push_back(what);
  }
};

// Number of YES verdicts replayed and how many of them failed, over all
// criteria that produce verdicts.
struct ReplayTally {
  int yes = 0;
  int rejected = 0;
  std::vector<std::string> failures;

  void record(bool ok, const std::string &what) {
    ++yes;
    if (!ok) {
      ++rejected;
      failures.push_back(what);
    }
  }
};

ReplayTally tally;

std::multiset<std::string> keys_of(const std::vector<CriticalPair> &cps) {
  std::multiset<std::string> out;
  for (const auto &c : cps) out.insert(canonical_key({c.left, c.right}));
  return out;
}

std::multiset<std::string> keys_of(const std::vector<std::pair<std::string, std::string>> &ps) {
  std::multiset<std::string> out;
  for (const auto &[u, v] : ps) out.insert(canonical_key({term(u), term(v)}));
  return out;
}

CriterionResult relation_matrix() {
  using C = Criterion;
  using P = PrimeMode;
  struct Row {
    examples::Example ex;
    C criterion;
    P mode;
    std::vector<std::string> prime;
    bool expected;
  };
  const std::vector<std::string> shrink = {"succ_shrink"};
  const std::vector<Row> rows = {
      {examples::addition_both_sides_ac(), C::Linear, P::Auto, {}, true},
      {examples::addition_both_sides_ac(), C::Pcp, P::Auto, {}, true},
      {examples::addition_both_sides_ac(), C::Huet, P::Auto, {}, true},
      {examples::doubling_ac(), C::Pcp, P::Empty, {}, true},
      {examples::doubling_ac(), C::Linear, P::Auto, {}, false},
      {examples::doubling_ac(), C::Huet, P::Auto, {}, true},
      {examples::successor_loop_ac(), C::Linear, P::Empty, {}, true},
      {examples::successor_loop_ac(), C::Pcp, P::Empty, {}, false},
      {examples::successor_loop_ac(), C::Pcp, P::Fixed, shrink, true},
      {examples::successor_loop_ac(), C::Huet, P::Auto, {}, false},
      {examples::shift_doubling_ac(), C::Pcp, P::Auto, {}, true},
      {examples::shift_doubling_ac(), C::Linear, P::Auto, {}, false},
      {examples::shift_doubling_ac(), C::Huet, P::Auto, {}, false},
      {examples::doubling_successor_loop_ac(), C::Pcp, P::Fixed, shrink, true},
      {examples::doubling_successor_loop_ac(), C::Pcp, P::Empty, {}, false},
      {examples::doubling_successor_loop_ac(), C::Linear, P::Auto, {}, false},
      {examples::doubling_successor_loop_ac(), C::Huet, P::Auto, {}, false},
      {examples::pair_swap(), C::Linear, P::Empty, {}, true},
      {examples::pair_swap(), C::Pcp, P::Auto, {}, false},
      {examples::pair_swap(), C::Huet, P::Auto, {}, false},
  };
  CriterionResult o;
  double slowest = 0;
  for (const auto &row : rows) {
    Partition pt{row.ex.s_rules(), row.ex.p_rules(), row.mode, build(row.prime)};
    std::string name = row.ex.name + " " + criterion_name(row.criterion) + "/" +
                       prime_mode_name(row.mode);
    auto t0 = Clock::now();
    auto rep = check(row.criterion, pt);
    double secs = seconds_since(t0);
    slowest = std::max(slowest, secs);
    o.require(secs <= 5.0, name + " took " + std::to_string(secs) + "s");
    o.require(rep.holds() == row.expected,
              name + (row.expected ? " expected to hold: " : " expected to fail: ") +
                  rep.reason);
    if (rep.holds()) tally.record(replay_report(rep, pt), name);
  }
  std::ostringstream s;
  s << rows.size() << " cells, slowest " << slowest << "s";
  o.summary = s.str();
  return o;
}

CriterionResult completion_end_to_end() {
  CriterionResult o;
  auto ex = examples::addition_ac();
  auto t0 = Clock::now();
  Certificate c = check_confluence(ex.all());
  double secs = seconds_since(t0);
  o.require(c.verdict == Verdict::Yes, "addition_ac gave MAYBE: " + c.reason);
  o.require(secs <= 60, "addition_ac took " + std::to_string(secs) + "s");
  o.require(c.steps <= 20, "addition_ac used " + std::to_string(c.steps) + " completion steps");
  if (c.verdict == Verdict::Yes) {
    Trs final_rules = trs_union(c.final_partition.s, c.final_partition.p);
    o.require(final_rules.contains(examples::rule("+(x,0) -> x")),
              "addition_ac final rules lack the right zero rule");
    o.require(final_rules.contains(examples::rule("+(x,s(y)) -> s(+(x,y))")) ||
                  final_rules.contains(examples::rule("+(x,s(y)) -> s(+(y,x))")),
              "addition_ac final rules lack a right successor rule");
    std::string why;
    bool ok = verify(c, ex.all(), &why);
    o.require(ok, "addition_ac certificate does not replay: " + why);
  }
  std::ostringstream s;
  s << "addition_ac in " << c.steps << " steps, " << c.checks << " checks, " << secs << "s";
  for (const auto &e : examples::all()) {
    if (e.name == ex.name) continue;
    Certificate d = check_confluence(e.all());
    o.require(d.verdict == Verdict::Yes, e.name + " gave MAYBE: " + d.reason);
  }
  s << "; the other examples checked";
  o.summary = s.str();
  return o;
}

CriterionResult golden_pairs() {
  CriterionResult o;
  Trs pp_ac = with_inverses(build(examples::ac));
  {
    Trs s = build(examples::add_base), p = build(examples::ac);
    o.require(keys_of(cp_out(s, p)) ==
                  keys_of({{"y", "+(y,0)"}, {"s(+(x,y))", "+(y,s(x))"}}),
              "addition_ac outer pairs");
    o.require(keys_of(cp_in(s, p)) == keys_of({
                                          {"+(y,z)", "+(0,+(y,z))"},
                                          {"+(s(+(x,y)),z)", "+(s(x),+(y,z))"},
                                      }),
              "addition_ac inner pairs");
    o.require(cp_in(pp_ac, s).empty(), "addition_ac has no P-inner pairs");
  }
  {
    Trs s = build(examples::add_both);
    o.require(keys_of(cp(s, s)) == keys_of({
                                       {"0", "0"},
                                       {"s(y)", "s(+(0,y))"},
                                       {"s(+(x,0))", "s(x)"},
                                       {"s(x)", "s(+(x,0))"},
                                       {"s(+(0,y))", "s(y)"},
                                       {"s(+(x,s(y)))", "s(+(s(x),y))"},
                                       {"s(+(s(x),y))", "s(+(x,s(y)))"},
                                   }),
              "addition_both_sides_ac pairs among S");
    o.require(keys_of(cp(s, pp_ac)) == keys_of({
                                           {"y", "+(y,0)"},
                                           {"+(y,z)", "+(0,+(y,z))"},
                                           {"+(y,z)", "+(+(0,y),z)"},
                                           {"+(x,z)", "+(+(x,0),z)"},
                                           {"s(+(x,y))", "+(y,s(x))"},
                                           {"+(s(+(x,y)),z)", "+(s(x),+(y,z))"},
                                           {"s(+(x,+(y,z)))", "+(+(s(x),y),z)"},
                                           {"+(x,s(+(y,z)))", "+(+(x,s(y)),z)"},
                                           {"x", "+(0,x)"},
                                           {"+(x,y)", "+(x,+(y,0))"},
                                           {"+(y,z)", "+(y,+(0,z))"},
                                           {"+(x,y)", "+(+(x,y),0)"},
                                           {"s(+(x,y))", "+(s(y),x)"},
                                           {"s(+(+(x,y),z))", "+(x,+(y,s(z)))"},
                                           {"+(s(+(x,y)),z)", "+(x,+(s(y),z))"},
                                           {"+(x,s(+(y,z)))", "+(+(x,y),s(z))"},
                                       }),
              "addition_both_sides_ac pairs between S and P");
    o.require(cp_in(pp_ac, s).empty(), "addition_both_sides_ac has no P-inner pairs");
  }
  {
    Trs q = build({"g_to_h"});
    Trs r({examples::rule("f(g(x),g(y)) -> h(g(x))", "outer")});
    std::set<std::string> got;
    for (const auto &c : pcp_in(q, r)) got.insert(to_string(c, true));
    o.require(got == std::set<std::string>{"<f(h(x),h(y)), h(g(x))>_{x,y}",
                                           "<f(g(x),h(y)), h(g(x))>_{y}",
                                           "<f(h(x),g(y)), h(g(x))>_{x}"},
              "f/g/h parallel pairs");
  }
  o.summary = "addition_ac, addition_both_sides_ac and f/g/h sets";
  return o;
}

CriterionResult pair_completeness() {
  CriterionResult o;
  auto t0 = Clock::now();
  auto single = props::single_overlap_peaks(61, 600);
  auto par = props::parallel_overlap_peaks(71, 600);
  double secs = seconds_since(t0);
  o.require(single.peaks >= 500, "too few single peaks");
  o.require(par.peaks >= 500, "too few parallel peaks");
  o.require(single.misses == 0, std::to_string(single.misses) + " single peaks missed");
  o.require(par.misses == 0, std::to_string(par.misses) + " parallel peaks missed");
  o.require(secs <= 60, "took " + std::to_string(secs) + "s");
  std::ostringstream s;
  s << single.peaks << " single peaks (" << single.variable << " variable), " << par.peaks
    << " parallel peaks (" << par.variable << " variable), " << secs << "s";
  o.summary = s.str();
  return o;
}

CriterionResult abstract_fuzz() {
  CriterionResult o;
  auto t0 = Clock::now();
  ars::FuzzOptions opt;
  opt.instances = 1000;
  auto st = ars::fuzz(opt);
  double secs = seconds_since(t0);
  const auto &crits = ars::all_criteria();
  int unsound = 0, one_sided = 0;
  for (std::size_t i = 0; i < crits.size(); ++i) {
    unsound += st.unsound[i];
    one_sided += st.not_needed[i];
    o.require(st.hypotheses[i] > 0,
              ars::criterion_name(crits[i]) + " hypotheses never hold");
  }
  o.require(st.instances >= 1000, "too few instances");
  o.require(unsound == 0, std::to_string(unsound) + " unsound cases");
  o.require(one_sided == 0, std::to_string(one_sided) + " necessity failures");
  o.require(secs <= 120, "took " + std::to_string(secs) + "s");
  std::ostringstream s;
  s << st.instances << " instances, " << st.crm << " CRM, " << secs << "s";
  o.summary = s.str();
  return o;
}

std::string slurp(const std::filesystem::path &p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Proves every example and data file, then replays each YES certificate
// through its text form.
CriterionResult replay_all() {
  CriterionResult o;
  std::vector<std::pair<std::string, Trs>> problems;
  for (const auto &ex : examples::all()) problems.emplace_back(ex.name, ex.all());
  std::vector<std::filesystem::path> files;
  for (const auto &e : std::filesystem::directory_iterator(DATA_DIR))
    if (e.path().extension() == ".trs") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  for (const auto &f : files) problems.emplace_back(f.filename().string(), parse_trs(slurp(f)));

  CompletionOptions lin;
  lin.only = Criterion::Linear;
  for (const auto &[name, r] : problems) {
    for (bool single : {false, true}) {
      Certificate c = single ? check_confluence(r, lin) : check_confluence(r);
      if (c.verdict != Verdict::Yes) continue;
      std::string why;
      bool ok = verify_text(serialize_certificate(c), r, &why);
      tally.record(ok, name + ": " + why);
    }
  }
  o.require(tally.yes > 0, "no YES verdicts");
  for (const auto &f : tally.failures) o.require(false, f);
  std::ostringstream s;
  s << tally.yes << " YES verdicts replayed, " << tally.rejected << " rejected";
  o.summary = s.str();
  return o;
}

CriterionResult reversibility() {
  CriterionResult o;
  Trs p = build(examples::ac);
  auto res = is_reversible(p, 10);
  o.require(bool(res), "AC not found reversible");
  if (res) {
    o.require(replay_reversibility(*res.witness, p), "AC witness does not replay");
    std::size_t len = 0;
    for (const auto &e : res.witness->entries)
      if (e.rule.label == "assoc") len = e.back.size();
    o.require(len == 5, "associativity witness has length " + std::to_string(len));
  }
  o.require(!is_reversible(build({"zero_left"}), 10), "zero rule found reversible");
  o.summary = "associativity undone in 5 steps, zero rule irreversible";
  return o;
}

CriterionResult unification_laws() {
  CriterionResult o;
  auto m = props::matcher_agreement(21, 2000);
  auto u = props::unifier_laws(31, 1000);
  o.require(m.cases >= 1000 && m.unsound == 0 && m.disagreements == 0, "matcher laws");
  o.require(u.unifiable >= 1000 && u.rejected >= 1000, "too few unification cases");
  o.require(u.failures() == 0, std::to_string(u.failures()) + " unifier law failures");
  std::ostringstream s;
  s << m.cases << " matching cases, " << u.unifiable << " unifiable and " << u.rejected
    << " non-unifiable pairs, " << u.generality_checks << " generality checks";
  o.summary = s.str();
  return o;
}

} // namespace

int main() {
  struct Item {
    int number;
    const char *title;
    CriterionResult (*run)();
  };
  // Replay runs last so that it also counts the YES cells of the matrix.
  const std::vector<Item> items = {
      {1, "criterion matrix of the example systems", relation_matrix},
      {2, "completion end to end", completion_end_to_end},
      {3, "critical pair golden sets", golden_pairs},
      {4, "critical pair completeness", pair_completeness},
      {5, "abstract criteria soundness", abstract_fuzz},
      {7, "reversibility witnesses", reversibility},
      {8, "unification and matching laws", unification_laws},
      {6, "soundness by replay", replay_all},
  };
  std::vector<std::pair<int, std::string>> lines;
  bool all = true;
  for (const auto &it : items) {
    CriterionResult o;
    try {
      o = it.run();
    } catch (const std::exception &e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    bool pass = o.problems.empty();
    all = all && pass;
    std::ostringstream line;
    line << (pass ? "PASS" : "FAIL") << " " << it.number << " " << it.title << ": "
         << o.summary;
    for (const auto &p : o.problems) line << "\n  " << p;
    lines.emplace_back(it.number, line.str());
  }
  std::sort(lines.begin(), lines.end());
  for (const auto &l : lines) std::cout << l.second << "\n";
  return all ? 0 : 1;
}
