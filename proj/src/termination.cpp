#include "confluence/termination.hpp"

#include "confluence/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <unistd.h>

namespace confluence {

// ---------------------------------------------------------------------------
// Polynomial arithmetic

namespace {

long long checked_mul(long long a, long long b) {
  long long out;
  if (__builtin_mul_overflow(a, b, &out)) throw PolynomialOverflow();
  return out;
}

long long checked_add(long long a, long long b) {
  long long out;
  if (__builtin_add_overflow(a, b, &out)) throw PolynomialOverflow();
  return out;
}

Poly constant_poly(long long c) {
  Poly p;
  if (c != 0) p[{}] = c;
  return p;
}

void add_into(Poly &acc, const Poly &p, long long scale = 1) {
  for (const auto &[m, c] : p) {
    long long &slot = acc[m];
    slot = checked_add(slot, checked_mul(c, scale));
    if (slot == 0) acc.erase(m);
  }
}

Poly mul(const Poly &a, const Poly &b) {
  Poly out;
  for (const auto &[ma, ca] : a)
    for (const auto &[mb, cb] : b) {
      Monomial m = ma;
      m.insert(m.end(), mb.begin(), mb.end());
      std::sort(m.begin(), m.end());
      long long &slot = out[m];
      slot = checked_add(slot, checked_mul(ca, cb));
      if (slot == 0) out.erase(m);
    }
  return out;
}

Poly scaled(const Poly &p, long long k) {
  Poly out;
  if (k == 0) return out;
  for (const auto &[m, c] : p) out[m] = checked_mul(c, k);
  return out;
}

} // namespace

Poly Interpretation::eval(const Term &t) const {
  if (t.is_var()) {
    Poly p = constant_poly(floor);
    p[{t.var_id()}] = 1;
    return p;
  }
  auto it = symbols.find(t.head());
  if (it == symbols.end())
    throw MalformedCertificate("no interpretation for symbol " +
                               symbol_info(t.head()).name);
  const SymbolPoly &f = it->second;
  if (f.coeffs.size() != t.arity())
    throw MalformedCertificate("interpretation of " + symbol_info(t.head()).name +
                               " has the wrong number of coefficients");
  std::vector<Poly> args;
  for (const auto &a : t.args()) args.push_back(eval(a));
  Poly out = constant_poly(f.constant);
  for (std::size_t i = 0; i < args.size(); ++i) add_into(out, scaled(args[i], f.coeffs[i]));
  if (f.product != 0 && args.size() == 2) add_into(out, scaled(mul(args[0], args[1]), f.product));
  if (f.square != 0 && args.size() == 1) add_into(out, scaled(mul(args[0], args[0]), f.square));
  return out;
}

Decrease compare(const Interpretation &in, const Rule &r) {
  Poly diff;
  try {
    diff = in.eval(r.lhs);
    add_into(diff, in.eval(r.rhs), -1);
  } catch (const PolynomialOverflow &) {
    return Decrease::None;
  }
  for (const auto &[m, c] : diff)
    if (c < 0) return Decrease::None;
  auto it = diff.find({});
  return (it != diff.end() && it->second >= 1) ? Decrease::Strict : Decrease::Weak;
}

bool well_formed(const Interpretation &in, const std::set<SymId> &sig,
                 bool strictly_monotone) {
  if (in.floor < 0) return false;
  for (SymId f : sig) {
    auto it = in.symbols.find(f);
    if (it == in.symbols.end())
      throw MalformedCertificate("no interpretation for symbol " + symbol_info(f).name);
    const SymbolPoly &p = it->second;
    int n = symbol_info(f).arity;
    if (static_cast<int>(p.coeffs.size()) != n) return false;
    if (p.constant < 0 || p.product < 0 || p.square < 0) return false;
    if (p.product != 0 && n != 2) return false;
    if (p.square != 0 && n != 1) return false;
    for (int c : p.coeffs)
      if (c < (strictly_monotone ? 1 : 0)) return false;
    // Least value on the carrier, reached with every argument at the floor.
    long long least = p.constant;
    for (int c : p.coeffs) least += static_cast<long long>(c) * in.floor;
    least += static_cast<long long>(p.product) * in.floor * in.floor;
    least += static_cast<long long>(p.square) * in.floor * in.floor;
    if (least < in.floor) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Lexicographic path order

bool lpo_greater(const Term &s, const Term &t, const std::map<SymId, int> &rank) {
  if (s.is_var()) return false;
  if (t.is_var()) return occurs(t.var_id(), s);
  for (const auto &si : s.args())
    if (si == t || lpo_greater(si, t, rank)) return true;
  auto rank_of = [&](SymId f) {
    auto it = rank.find(f);
    if (it == rank.end())
      throw MalformedCertificate("precedence misses symbol " + symbol_info(f).name);
    return it->second;
  };
  auto dominates_args = [&] {
    for (const auto &tj : t.args())
      if (!lpo_greater(s, tj, rank)) return false;
    return true;
  };
  int rf = rank_of(s.head()), rg = rank_of(t.head());
  if (rf > rg) return dominates_args();
  if (s.head() != t.head()) return false;
  for (std::size_t i = 0; i < s.arity(); ++i) {
    if (s.arg(i) == t.arg(i)) continue;
    return lpo_greater(s.arg(i), t.arg(i), rank) && dominates_args();
  }
  return false;
}

namespace {

std::vector<SymId> symbols_in_order(const std::vector<Rule> &rules) {
  std::vector<SymId> out;
  std::set<SymId> seen;
  std::function<void(const Term &)> walk = [&](const Term &t) {
    if (t.is_var()) return;
    if (seen.insert(t.head()).second) out.push_back(t.head());
    for (const auto &a : t.args()) walk(a);
  };
  for (const auto &r : rules) {
    walk(r.lhs);
    walk(r.rhs);
  }
  return out;
}

std::set<SymId> symbols_of(const std::vector<Rule> &rules) {
  auto v = symbols_in_order(rules);
  return {v.begin(), v.end()};
}

// For each rule, the number of leading symbols of `order` that must be fixed
// before the rule can be checked.
std::vector<std::size_t> ready_depth(const std::vector<Rule> &rules,
                                     const std::vector<SymId> &order) {
  std::map<SymId, std::size_t> pos;
  for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
  std::vector<std::size_t> out;
  for (const auto &r : rules) {
    std::size_t need = 0;
    for (SymId f : symbols_of({r})) need = std::max(need, pos.at(f) + 1);
    out.push_back(need);
  }
  return out;
}

std::optional<std::vector<SymId>> search_lpo(const Trs &s, long &budget) {
  std::vector<SymId> syms = symbols_in_order(s.rules);
  std::vector<SymId> placed;
  std::map<SymId, int> rank;
  std::vector<bool> used(syms.size(), false);
  std::function<bool()> rec = [&]() -> bool {
    if (--budget < 0) return false;
    // Rules whose symbols are all ranked must already be oriented.
    for (const auto &r : s.rules) {
      bool ready = true;
      for (SymId f : symbols_of({r})) ready = ready && rank.count(f);
      if (ready && !lpo_greater(r.lhs, r.rhs, rank)) return false;
    }
    if (placed.size() == syms.size()) return true;
    for (std::size_t i = 0; i < syms.size(); ++i) {
      if (used[i]) continue;
      used[i] = true;
      placed.push_back(syms[i]);
      rank[syms[i]] = -static_cast<int>(placed.size());
      if (rec()) return true;
      rank.erase(syms[i]);
      placed.pop_back();
      used[i] = false;
    }
    return false;
  };
  if (rec()) return placed;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Interpretation search

enum class Shape { StrictMonotone, WeakMonotone, Marked };

std::vector<SymbolPoly> candidates(int arity, Shape shape, int floor) {
  std::vector<SymbolPoly> out;
  std::vector<int> coeff_range;
  std::vector<int> const_range;
  switch (shape) {
  case Shape::StrictMonotone:
    coeff_range = {1, 2};
    const_range = {0, 1, 2, 3};
    break;
  case Shape::WeakMonotone:
    coeff_range = {0, 1, 2};
    const_range = {0, 1, 2};
    break;
  case Shape::Marked:
    coeff_range = {0, 1};
    const_range = {0};
    break;
  }
  if (arity == 0) {
    for (int d : const_range)
      if (d >= floor || shape == Shape::Marked) out.push_back({0, 0, {}, d});
    if (out.empty()) out.push_back({0, 0, {}, floor});
    return out;
  }
  std::vector<int> extra = {0};
  if (shape == Shape::StrictMonotone && arity <= 2) extra = {0, 1};
  for (int e : extra) {
    std::vector<int> cs(static_cast<std::size_t>(arity), coeff_range.front());
    for (;;) {
      for (int d : const_range) {
        SymbolPoly p{0, 0, cs, d};
        if (arity == 2) p.product = e;
        if (arity == 1) p.square = e;
        out.push_back(p);
      }
      std::size_t k = 0;
      while (k < cs.size()) {
        auto it = std::find(coeff_range.begin(), coeff_range.end(), cs[k]);
        if (++it != coeff_range.end()) {
          cs[k] = *it;
          break;
        }
        cs[k] = coeff_range.front();
        ++k;
      }
      if (k == cs.size()) break;
    }
  }
  return out;
}

struct SearchProblem {
  std::vector<Rule> rules;       // all must decrease weakly
  std::vector<bool> removable;   // strict decrease of these counts as progress
  std::vector<bool> preferred;   // progress on these is preferred
  std::set<SymId> marked;        // symbols using the Marked shape
  Shape shape = Shape::StrictMonotone;
  int floor = 0;
};

struct SearchHit {
  Interpretation interp;
  std::vector<std::size_t> strict;
};

std::optional<SearchHit> search_interpretation(const SearchProblem &pb, long &budget) {
  std::vector<SymId> order = symbols_in_order(pb.rules);
  std::vector<std::size_t> ready = ready_depth(pb.rules, order);
  std::vector<std::vector<SymbolPoly>> cands;
  for (SymId f : order) {
    Shape sh = pb.marked.count(f) ? Shape::Marked : pb.shape;
    auto cs = candidates(symbol_info(f).arity, sh, pb.floor);
    // Keep only candidates mapping the carrier into itself.
    std::vector<SymbolPoly> ok;
    for (auto &c : cs) {
      Interpretation probe;
      probe.floor = pb.floor;
      probe.symbols[f] = c;
      if (well_formed(probe, {f}, sh == Shape::StrictMonotone)) ok.push_back(c);
    }
    cands.push_back(std::move(ok));
  }
  Interpretation in;
  in.floor = pb.floor;
  std::optional<SearchHit> fallback;
  std::optional<SearchHit> found;
  std::function<bool(std::size_t)> rec = [&](std::size_t k) -> bool {
    if (--budget < 0) return true;
    for (std::size_t i = 0; i < pb.rules.size(); ++i)
      if (ready[i] == k && k > 0 && compare(in, pb.rules[i]) == Decrease::None)
        return false;
    if (k == order.size()) {
      std::vector<std::size_t> strict;
      bool preferred = false;
      for (std::size_t i = 0; i < pb.rules.size(); ++i)
        if (pb.removable[i] && compare(in, pb.rules[i]) == Decrease::Strict) {
          strict.push_back(i);
          preferred = preferred || pb.preferred[i];
        }
      if (strict.empty()) return false;
      if (preferred) {
        found = SearchHit{in, strict};
        return true;
      }
      if (!fallback) fallback = SearchHit{in, strict};
      return false;
    }
    for (const auto &c : cands[k]) {
      in.symbols[order[k]] = c;
      if (rec(k + 1)) return true;
    }
    in.symbols.erase(order[k]);
    return false;
  };
  rec(0);
  if (found) return found;
  return fallback;
}

// Iterated rule removal for S relative to W.
std::optional<std::vector<RemovalStage>> removal_proof(const Trs &s, const Trs &w,
                                                       long &budget) {
  std::vector<Rule> rules;
  std::vector<bool> is_s;
  for (const auto &r : s.rules) {
    rules.push_back(r);
    is_s.push_back(true);
  }
  for (const auto &r : w.rules) {
    rules.push_back(r);
    is_s.push_back(false);
  }
  std::vector<RemovalStage> stages;
  while (std::count(is_s.begin(), is_s.end(), true) > 0) {
    std::optional<SearchHit> hit;
    for (int floor : {0, 1}) {
      SearchProblem pb;
      pb.rules = rules;
      pb.removable = std::vector<bool>(rules.size(), true);
      pb.preferred = is_s;
      pb.floor = floor;
      hit = search_interpretation(pb, budget);
      if (hit) break;
      if (budget < 0) return std::nullopt;
    }
    if (!hit) return std::nullopt;
    RemovalStage st;
    st.interp = hit->interp;
    std::vector<bool> drop(rules.size(), false);
    for (std::size_t i : hit->strict) {
      drop[i] = true;
      st.removed.push_back(rule_key(rules[i]));
    }
    std::vector<Rule> keep_rules;
    std::vector<bool> keep_s;
    for (std::size_t i = 0; i < rules.size(); ++i)
      if (!drop[i]) {
        keep_rules.push_back(rules[i]);
        keep_s.push_back(is_s[i]);
      }
    rules = std::move(keep_rules);
    is_s = std::move(keep_s);
    stages.push_back(std::move(st));
  }
  return stages;
}

// ---------------------------------------------------------------------------
// Dependency pairs

SymId marked_symbol(SymId f) {
  const Symbol &s = symbol_info(f);
  return intern_symbol(s.name + "#", s.arity);
}

Term mark(const Term &t) { return Term::app(marked_symbol(t.head()), t.args()); }

Term cap(const Term &t, const std::set<SymId> &defined, VarPool &pool, bool top) {
  if (t.is_var()) return pool.fresh(t.var_name());
  if (!top && defined.count(t.head())) return pool.fresh("c");
  std::vector<Term> args;
  for (const auto &a : t.args()) args.push_back(cap(a, defined, pool, false));
  return Term::app(t.head(), std::move(args));
}

std::vector<bool> on_cycle(const std::vector<std::vector<int>> &g,
                           const std::vector<bool> &alive) {
  std::size_t n = g.size();
  // Reachability closure; the graphs are tiny.
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i)
    if (alive[i])
      for (int j : g[i])
        if (alive[static_cast<std::size_t>(j)]) reach[i][static_cast<std::size_t>(j)] = true;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (reach[i][k])
        for (std::size_t j = 0; j < n; ++j)
          if (reach[k][j]) reach[i][j] = true;
  std::vector<bool> out(n, false);
  for (std::size_t i = 0; i < n; ++i) out[i] = alive[i] && reach[i][i];
  return out;
}

std::set<SymId> marked_symbols(const std::vector<DependencyPair> &dps) {
  std::set<SymId> out;
  for (const auto &d : dps) {
    out.insert(d.rule.lhs.head());
    out.insert(d.rule.rhs.head());
  }
  return out;
}

std::optional<std::vector<RemovalStage>> dp_proof(const Trs &s, long &budget) {
  auto dps = dependency_pairs(s);
  auto g = dependency_graph(dps, s);
  std::vector<bool> alive(dps.size(), true);
  std::set<SymId> marked = marked_symbols(dps);
  std::vector<RemovalStage> stages;
  for (;;) {
    alive = on_cycle(g, alive);
    if (std::find(alive.begin(), alive.end(), true) == alive.end()) return stages;
    SearchProblem pb;
    pb.rules = s.rules;
    pb.removable.assign(s.size(), false);
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < dps.size(); ++i)
      if (alive[i]) {
        pb.rules.push_back(dps[i].rule);
        pb.removable.push_back(true);
        idx.push_back(i);
      }
    pb.preferred = pb.removable;
    pb.marked = marked;
    pb.shape = Shape::WeakMonotone;
    pb.floor = 0;
    auto hit = search_interpretation(pb, budget);
    if (!hit) return std::nullopt;
    RemovalStage st;
    st.interp = hit->interp;
    for (std::size_t k : hit->strict) {
      std::size_t i = idx[k - s.size()];
      alive[i] = false;
      st.removed.push_back(rule_key(dps[i].rule));
    }
    stages.push_back(std::move(st));
  }
}

bool lhs_embeds_in_rhs(const Term &l, const Term &r) {
  // Homeomorphic embedding l into r.
  std::function<bool(const Term &, const Term &)> emb = [&](const Term &a,
                                                            const Term &b) -> bool {
    if (a.is_var()) return b.is_var() ? a == b : occurs(a.var_id(), b);
    if (b.is_var()) return false;
    for (const auto &bi : b.args())
      if (emb(a, bi)) return true;
    if (a.head() != b.head()) return false;
    for (std::size_t i = 0; i < a.arity(); ++i)
      if (!emb(a.arg(i), b.arg(i))) return false;
    return true;
  };
  return emb(l, r);
}

std::string embedding_reason(const Trs &s) {
  for (const auto &r : s.rules)
    if (lhs_embeds_in_rhs(r.lhs, r.rhs))
      return "left-hand side of " + to_string(r) +
             " embeds in its right-hand side; no simplification order applies";
  return {};
}

// ---------------------------------------------------------------------------
// External prover and cache

std::optional<bool> run_external(const std::string &command, const Trs &s,
                                 const Trs &w) {
  auto dir = std::filesystem::temp_directory_path();
  std::string path =
      (dir / ("confluence-trs-" + std::to_string(::getpid()) + ".trs")).string();
  {
    std::ofstream f(path);
    if (!f) return std::nullopt;
    f << print_relative_trs(s, w);
  }
  std::string cmd = command + " < '" + path + "'";
  FILE *pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) {
    std::filesystem::remove(path);
    return std::nullopt;
  }
  std::string line;
  int c;
  while ((c = std::fgetc(pipe)) != EOF && c != '\n') line.push_back(static_cast<char>(c));
  while (c != EOF) c = std::fgetc(pipe);
  ::pclose(pipe);
  std::filesystem::remove(path);
  while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.pop_back();
  return line == "YES";
}

std::mutex cache_mu;
std::map<std::string, TerminationResult> &cache() {
  static std::map<std::string, TerminationResult> c;
  return c;
}

std::string cache_key(const char *kind, const Trs &s, const Trs &w,
                      const TerminationOptions &opt) {
  return std::string(kind) + "|" + trs_key(s) + "|" + trs_key(w) + "|" +
         std::to_string(opt.budget) + "|" + opt.external;
}

TerminationResult remember(const std::string &key, TerminationResult r) {
  std::lock_guard<std::mutex> lock(cache_mu);
  cache()[key] = r;
  return r;
}

std::optional<TerminationResult> recall(const std::string &key) {
  std::lock_guard<std::mutex> lock(cache_mu);
  auto it = cache().find(key);
  if (it == cache().end()) return std::nullopt;
  return it->second;
}

TerminationResult try_external(const Trs &s, const Trs &w, const TerminationOptions &opt,
                               TerminationResult failed) {
  if (opt.external.empty()) return failed;
  auto ans = run_external(opt.external, s, w);
  if (ans && *ans) {
    TerminationCertificate c;
    c.method = TerminationCertificate::Method::External;
    c.command = opt.external;
    return TerminationResult{c, {}};
  }
  failed.reason += ans ? "; external prover answered MAYBE"
                       : "; external prover could not be run";
  return failed;
}

} // namespace

// ---------------------------------------------------------------------------
// Public entry points

std::vector<DependencyPair> dependency_pairs(const Trs &s) {
  std::set<SymId> defined = s.defined_symbols();
  std::vector<DependencyPair> out;
  std::set<std::string> seen;
  for (const auto &r : s.rules) {
    for (const auto &p : positions_fun(r.rhs)) {
      const Term &t = subterm_at(r.rhs, p);
      if (!defined.count(t.head())) continue;
      Rule dp(mark(r.lhs), mark(t), r.label + "#");
      if (seen.insert(rule_key(dp)).second) out.push_back(DependencyPair{dp});
    }
  }
  return out;
}

std::vector<std::vector<int>> dependency_graph(const std::vector<DependencyPair> &dps,
                                               const Trs &s) {
  std::set<SymId> defined = s.defined_symbols();
  VarId top = s.max_var();
  for (const auto &d : dps)
    top = std::max({top, max_var_id(d.rule.lhs), max_var_id(d.rule.rhs)});
  std::vector<std::vector<int>> g(dps.size());
  for (std::size_t i = 0; i < dps.size(); ++i) {
    VarPool pool(top + 1);
    Term capped = cap(dps[i].rule.rhs, defined, pool, true);
    for (std::size_t j = 0; j < dps.size(); ++j)
      if (unify(capped, dps[j].rule.lhs)) g[i].push_back(static_cast<int>(j));
  }
  return g;
}

std::string method_name(TerminationCertificate::Method m) {
  switch (m) {
  case TerminationCertificate::Method::Trivial: return "trivial";
  case TerminationCertificate::Method::Lpo: return "lpo";
  case TerminationCertificate::Method::Polynomial: return "poly";
  case TerminationCertificate::Method::DependencyPairs: return "dp";
  case TerminationCertificate::Method::External: return "external";
  }
  return "?";
}

TerminationResult prove_termination(const Trs &s, const TerminationOptions &opt) {
  using M = TerminationCertificate::Method;
  if (s.empty()) return TerminationResult{TerminationCertificate{}, {}};
  std::string key = cache_key("T", s, Trs{}, opt);
  if (auto hit = recall(key)) return *hit;
  long budget = opt.budget;
  if (auto prec = search_lpo(s, budget)) {
    TerminationCertificate c;
    c.method = M::Lpo;
    c.precedence = *prec;
    return remember(key, TerminationResult{c, {}});
  }
  budget = opt.budget;
  if (auto stages = removal_proof(s, Trs{}, budget)) {
    TerminationCertificate c;
    c.method = M::Polynomial;
    c.stages = *stages;
    return remember(key, TerminationResult{c, {}});
  }
  budget = opt.budget;
  if (auto stages = dp_proof(s, budget)) {
    TerminationCertificate c;
    c.method = M::DependencyPairs;
    c.stages = *stages;
    return remember(key, TerminationResult{c, {}});
  }
  std::string reason = embedding_reason(s);
  if (reason.empty()) reason = "search exhausted (lpo, polynomial, dependency pairs)";
  return remember(key, try_external(s, Trs{}, opt, TerminationResult{std::nullopt, reason}));
}

TerminationResult prove_relative_termination(const Trs &s, const Trs &weak,
                                             const TerminationOptions &opt) {
  if (weak.empty()) return prove_termination(s, opt);
  if (s.empty()) return TerminationResult{TerminationCertificate{}, {}};
  std::string key = cache_key("R", s, weak, opt);
  if (auto hit = recall(key)) return *hit;
  long budget = opt.budget;
  if (auto stages = removal_proof(s, weak, budget)) {
    TerminationCertificate c;
    c.method = TerminationCertificate::Method::Polynomial;
    c.stages = *stages;
    return remember(key, TerminationResult{c, {}});
  }
  std::string reason = budget < 0 ? "search budget exhausted (polynomial)"
                                  : "search exhausted (polynomial)";
  return remember(key, try_external(s, weak, opt, TerminationResult{std::nullopt, reason}));
}

void clear_termination_cache() {
  std::lock_guard<std::mutex> lock(cache_mu);
  cache().clear();
}

bool replay_certificate(const TerminationCertificate &cert, const Trs &s,
                        const Trs &weak) {
  using M = TerminationCertificate::Method;
  switch (cert.method) {
  case M::Trivial:
    return s.empty();
  case M::External: {
    if (cert.command.empty()) throw MalformedCertificate("external certificate without command");
    auto ans = run_external(cert.command, s, weak);
    return ans && *ans;
  }
  case M::Lpo: {
    if (!weak.empty()) return false;
    std::map<SymId, int> rank;
    for (std::size_t i = 0; i < cert.precedence.size(); ++i)
      if (!rank.emplace(cert.precedence[i], -static_cast<int>(i)).second)
        throw MalformedCertificate("symbol ranked twice in precedence");
    for (const auto &r : s.rules)
      if (!lpo_greater(r.lhs, r.rhs, rank)) return false;
    return true;
  }
  case M::Polynomial: {
    std::vector<Rule> rules = s.rules;
    std::vector<bool> is_s(rules.size(), true);
    for (const auto &r : weak.rules) {
      rules.push_back(r);
      is_s.push_back(false);
    }
    for (const auto &st : cert.stages) {
      if (!well_formed(st.interp, symbols_of(rules), true)) return false;
      std::vector<bool> drop(rules.size(), false);
      for (std::size_t i = 0; i < rules.size(); ++i) {
        Decrease d = compare(st.interp, rules[i]);
        if (d == Decrease::None) return false;
        bool claimed = std::find(st.removed.begin(), st.removed.end(),
                                 rule_key(rules[i])) != st.removed.end();
        if (claimed && d != Decrease::Strict) return false;
        drop[i] = claimed;
      }
      if (std::find(drop.begin(), drop.end(), true) == drop.end()) return false;
      std::vector<Rule> keep;
      std::vector<bool> keep_s;
      for (std::size_t i = 0; i < rules.size(); ++i)
        if (!drop[i]) {
          keep.push_back(rules[i]);
          keep_s.push_back(is_s[i]);
        }
      rules = std::move(keep);
      is_s = std::move(keep_s);
    }
    return std::find(is_s.begin(), is_s.end(), true) == is_s.end();
  }
  case M::DependencyPairs: {
    if (!weak.empty()) return false;
    auto dps = dependency_pairs(s);
    auto g = dependency_graph(dps, s);
    std::vector<bool> alive(dps.size(), true);
    for (const auto &st : cert.stages) {
      alive = on_cycle(g, alive);
      std::vector<Rule> all = s.rules;
      for (std::size_t i = 0; i < dps.size(); ++i)
        if (alive[i]) all.push_back(dps[i].rule);
      std::set<SymId> sig = symbols_of(all);
      if (!well_formed(st.interp, sig, false)) return false;
      for (const auto &r : s.rules)
        if (compare(st.interp, r) == Decrease::None) return false;
      bool progress = false;
      for (std::size_t i = 0; i < dps.size(); ++i) {
        if (!alive[i]) continue;
        Decrease d = compare(st.interp, dps[i].rule);
        if (d == Decrease::None) return false;
        bool claimed = std::find(st.removed.begin(), st.removed.end(),
                                 rule_key(dps[i].rule)) != st.removed.end();
        if (claimed) {
          if (d != Decrease::Strict) return false;
          alive[i] = false;
          progress = true;
        }
      }
      if (!progress) return false;
    }
    alive = on_cycle(g, alive);
    return std::find(alive.begin(), alive.end(), true) == alive.end();
  }
  }
  throw MalformedCertificate("unknown termination method");
}

} // namespace confluence
