#include "confluence/terms.hpp"

#include <algorithm>
#include <deque>
#include <mutex>
#include <sstream>
#include <unordered_map>

namespace confluence {

namespace {

struct SymbolTable {
  std::mutex mu;
  std::deque<Symbol> symbols; // stable references
  std::map<std::pair<std::string, int>, SymId> index;
};

SymbolTable &table() {
  static SymbolTable t;
  return t;
}

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

} // namespace

SymId intern_symbol(std::string_view name, int arity) {
  auto &t = table();
  std::lock_guard<std::mutex> lock(t.mu);
  auto key = std::make_pair(std::string(name), arity);
  auto it = t.index.find(key);
  if (it != t.index.end()) return it->second;
  SymId id = static_cast<SymId>(t.symbols.size());
  t.symbols.push_back(Symbol{std::string(name), arity});
  t.index.emplace(std::move(key), id);
  return id;
}

const Symbol &symbol_info(SymId id) {
  auto &t = table();
  std::lock_guard<std::mutex> lock(t.mu);
  if (id < 0 || static_cast<std::size_t>(id) >= t.symbols.size())
    throw std::out_of_range("unknown symbol id");
  return t.symbols[static_cast<std::size_t>(id)];
}

std::optional<SymId> find_symbol(std::string_view name, int arity) {
  auto &t = table();
  std::lock_guard<std::mutex> lock(t.mu);
  auto it = t.index.find(std::make_pair(std::string(name), arity));
  if (it == t.index.end()) return std::nullopt;
  return it->second;
}

struct Term::Node {
  bool is_var = false;
  int id = 0; // variable id or symbol id
  std::string name;
  std::vector<Term> args;
  std::size_t hash = 0;
  int size = 1;
  int depth = 0;
};

Term Term::var(VarId id, std::string name) {
  auto n = std::make_shared<Node>();
  n->is_var = true;
  n->id = id;
  n->name = name.empty() ? "v" + std::to_string(id) : std::move(name);
  n->hash = mix(0x51ed27u, static_cast<std::size_t>(id));
  Term t;
  t.node_ = std::move(n);
  return t;
}

Term Term::app(SymId f, std::vector<Term> args) {
  const Symbol &sym = symbol_info(f);
  if (static_cast<std::size_t>(sym.arity) != args.size())
    throw std::invalid_argument("arity mismatch for symbol " + sym.name);
  auto n = std::make_shared<Node>();
  n->id = f;
  std::size_t h = mix(0xa11ce5u, static_cast<std::size_t>(f));
  int size = 1, depth = 0;
  for (const auto &a : args) {
    h = mix(h, a.hash());
    size += a.size();
    depth = std::max(depth, a.depth() + 1);
  }
  n->args = std::move(args);
  n->hash = h;
  n->size = size;
  n->depth = depth;
  Term t;
  t.node_ = std::move(n);
  return t;
}

Term Term::app(std::string_view f, std::vector<Term> args) {
  SymId id = intern_symbol(f, static_cast<int>(args.size()));
  return app(id, std::move(args));
}

bool Term::is_var() const { return node_->is_var; }
VarId Term::var_id() const { return node_->id; }
const std::string &Term::var_name() const { return node_->name; }
SymId Term::head() const { return node_->id; }
const std::vector<Term> &Term::args() const { return node_->args; }
std::size_t Term::hash() const { return node_ ? node_->hash : 0; }
int Term::size() const { return node_->size; }
int Term::depth() const { return node_->depth; }

bool operator==(const Term &a, const Term &b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  if (a.node_->hash != b.node_->hash) return false;
  if (a.node_->is_var != b.node_->is_var) return false;
  if (a.node_->id != b.node_->id) return false;
  if (a.node_->is_var) return true;
  const auto &xs = a.node_->args;
  const auto &ys = b.node_->args;
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (!(xs[i] == ys[i])) return false;
  return true;
}

bool operator<(const Term &a, const Term &b) {
  if (a.node_ == b.node_) return false;
  if (a.is_var() != b.is_var()) return a.is_var();
  if (a.is_var()) return a.var_id() < b.var_id();
  if (a.head() != b.head()) return a.head() < b.head();
  const auto &xs = a.args();
  const auto &ys = b.args();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i] < ys[i]) return true;
    if (ys[i] < xs[i]) return false;
  }
  return false;
}

bool is_prefix(const Position &p, const Position &q) {
  return p.size() <= q.size() && std::equal(p.begin(), p.end(), q.begin());
}

bool is_strict_prefix(const Position &p, const Position &q) {
  return p.size() < q.size() && is_prefix(p, q);
}

bool parallel(const Position &p, const Position &q) {
  return !is_prefix(p, q) && !is_prefix(q, p);
}

bool pairwise_parallel(const std::vector<Position> &ps) {
  for (std::size_t i = 0; i < ps.size(); ++i)
    for (std::size_t j = i + 1; j < ps.size(); ++j)
      if (!parallel(ps[i], ps[j])) return false;
  return true;
}

std::string position_to_string(const Position &p) {
  if (p.empty()) return "e";
  std::string s;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) s += '.';
    s += std::to_string(p[i]);
  }
  return s;
}

namespace {

void collect_positions(const Term &t, Position &cur, std::vector<Position> &out,
                       int filter) {
  // filter: 0 all, 1 function positions, 2 variable positions
  if (filter == 0 || (filter == 1 && !t.is_var()) || (filter == 2 && t.is_var()))
    out.push_back(cur);
  if (t.is_var()) return;
  for (std::size_t i = 0; i < t.arity(); ++i) {
    cur.push_back(static_cast<int>(i) + 1);
    collect_positions(t.arg(i), cur, out, filter);
    cur.pop_back();
  }
}

} // namespace

std::vector<Position> positions(const Term &t) {
  std::vector<Position> out;
  Position cur;
  collect_positions(t, cur, out, 0);
  return out;
}

std::vector<Position> positions_fun(const Term &t) {
  std::vector<Position> out;
  Position cur;
  collect_positions(t, cur, out, 1);
  return out;
}

std::vector<Position> positions_var(const Term &t) {
  std::vector<Position> out;
  Position cur;
  collect_positions(t, cur, out, 2);
  return out;
}

bool valid_position(const Term &t, const Position &p) {
  const Term *cur = &t;
  for (int i : p) {
    if (cur->is_var() || i < 1 || static_cast<std::size_t>(i) > cur->arity())
      return false;
    cur = &cur->arg(static_cast<std::size_t>(i) - 1);
  }
  return true;
}

const Term &subterm_at(const Term &t, const Position &p) {
  const Term *cur = &t;
  for (int i : p) {
    if (cur->is_var() || i < 1 || static_cast<std::size_t>(i) > cur->arity())
      throw std::out_of_range("invalid position " + position_to_string(p));
    cur = &cur->arg(static_cast<std::size_t>(i) - 1);
  }
  return *cur;
}

namespace {

Term replace_rec(const Term &t, const Position &p, std::size_t k, const Term &s) {
  if (k == p.size()) return s;
  int i = p[k];
  if (t.is_var() || i < 1 || static_cast<std::size_t>(i) > t.arity())
    throw std::out_of_range("invalid position " + position_to_string(p));
  std::vector<Term> args = t.args();
  args[static_cast<std::size_t>(i) - 1] =
      replace_rec(args[static_cast<std::size_t>(i) - 1], p, k + 1, s);
  return Term::app(t.head(), std::move(args));
}

} // namespace

Term replace_at(const Term &t, const Position &p, const Term &s) {
  return replace_rec(t, p, 0, s);
}

Term replace_parallel(const Term &t,
                      const std::vector<std::pair<Position, Term>> &reps) {
  std::vector<Position> ps;
  for (const auto &r : reps) {
    if (!valid_position(t, r.first))
      throw std::out_of_range("invalid position " + position_to_string(r.first));
    ps.push_back(r.first);
  }
  if (!pairwise_parallel(ps))
    throw std::invalid_argument("positions are not pairwise parallel");
  Term out = t;
  for (const auto &r : reps) out = replace_at(out, r.first, r.second);
  return out;
}

namespace {

void collect_vars(const Term &t, std::vector<Term> &out, std::set<VarId> &seen) {
  if (t.is_var()) {
    if (seen.insert(t.var_id()).second) out.push_back(t);
    return;
  }
  for (const auto &a : t.args()) collect_vars(a, out, seen);
}

void collect_var_ids(const Term &t, std::set<VarId> &out) {
  if (t.is_var()) {
    out.insert(t.var_id());
    return;
  }
  for (const auto &a : t.args()) collect_var_ids(a, out);
}

bool linear_rec(const Term &t, std::set<VarId> &seen) {
  if (t.is_var()) return seen.insert(t.var_id()).second;
  for (const auto &a : t.args())
    if (!linear_rec(a, seen)) return false;
  return true;
}

void collect_funs(const Term &t, std::set<SymId> &out) {
  if (t.is_var()) return;
  out.insert(t.head());
  for (const auto &a : t.args()) collect_funs(a, out);
}

} // namespace

std::vector<Term> variables(const Term &t) {
  std::vector<Term> out;
  std::set<VarId> seen;
  collect_vars(t, out, seen);
  return out;
}

std::set<VarId> var_set(const Term &t) {
  std::set<VarId> out;
  collect_var_ids(t, out);
  return out;
}

std::set<VarId> var_set_below(const Term &t, const std::vector<Position> &ps) {
  std::set<VarId> out;
  for (const auto &p : ps) collect_var_ids(subterm_at(t, p), out);
  return out;
}

bool is_linear(const Term &t) {
  std::set<VarId> seen;
  return linear_rec(t, seen);
}

bool is_ground(const Term &t) {
  if (t.is_var()) return false;
  for (const auto &a : t.args())
    if (!is_ground(a)) return false;
  return true;
}

std::set<SymId> fun_symbols(const Term &t) {
  std::set<SymId> out;
  collect_funs(t, out);
  return out;
}

bool occurs(VarId x, const Term &t) {
  if (t.is_var()) return t.var_id() == x;
  for (const auto &a : t.args())
    if (occurs(x, a)) return true;
  return false;
}

const Term *Substitution::lookup(VarId x) const {
  auto it = map_.find(x);
  return it == map_.end() ? nullptr : &it->second;
}

Term apply(const Substitution &s, const Term &t) {
  if (s.empty()) return t;
  if (t.is_var()) {
    const Term *b = s.lookup(t.var_id());
    return b ? *b : t;
  }
  if (t.arity() == 0) return t;
  std::vector<Term> args;
  args.reserve(t.arity());
  bool changed = false;
  for (const auto &a : t.args()) {
    args.push_back(apply(s, a));
    if (!(args.back() == a)) changed = true;
  }
  if (!changed) return t;
  return Term::app(t.head(), std::move(args));
}

Substitution Substitution::then(const Substitution &other) const {
  Substitution out;
  for (const auto &[x, t] : map_) out.map_[x] = apply(other, t);
  for (const auto &[x, t] : other.map_)
    if (!out.map_.count(x)) out.map_[x] = t;
  for (auto it = out.map_.begin(); it != out.map_.end();) {
    if (it->second.is_var() && it->second.var_id() == it->first)
      it = out.map_.erase(it);
    else
      ++it;
  }
  return out;
}

bool Substitution::is_idempotent() const {
  for (const auto &[x, t] : map_) {
    (void)x;
    for (VarId y : var_set(t))
      if (map_.count(y)) return false;
  }
  return true;
}

bool match_into(const Term &pattern, const Term &subject, Substitution &s) {
  if (pattern.is_var()) {
    const Term *b = s.lookup(pattern.var_id());
    if (b) return *b == subject;
    s.bind(pattern.var_id(), subject);
    return true;
  }
  if (subject.is_var() || subject.head() != pattern.head()) return false;
  for (std::size_t i = 0; i < pattern.arity(); ++i)
    if (!match_into(pattern.arg(i), subject.arg(i), s)) return false;
  return true;
}

std::optional<Substitution> match_term(const Term &pattern, const Term &subject) {
  Substitution s;
  if (!match_into(pattern, subject, s)) return std::nullopt;
  return s;
}

namespace {

bool bind_var(Substitution &sigma, VarId x, const Term &t) {
  if (occurs(x, t)) return false;
  Substitution single;
  single.bind(x, t);
  Substitution next;
  for (const auto &[y, u] : sigma.bindings()) next.bind(y, apply(single, u));
  next.bind(x, t);
  sigma = std::move(next);
  return true;
}

} // namespace

std::optional<Substitution>
unify_all(const std::vector<std::pair<Term, Term>> &equations) {
  Substitution sigma;
  std::deque<std::pair<Term, Term>> work(equations.begin(), equations.end());
  while (!work.empty()) {
    auto [a, b] = work.front();
    work.pop_front();
    a = apply(sigma, a);
    b = apply(sigma, b);
    if (a == b) continue;
    if (b.is_var()) {
      if (!bind_var(sigma, b.var_id(), a)) return std::nullopt;
    } else if (a.is_var()) {
      if (!bind_var(sigma, a.var_id(), b)) return std::nullopt;
    } else {
      if (a.head() != b.head()) return std::nullopt;
      for (std::size_t i = 0; i < a.arity(); ++i)
        work.emplace_back(a.arg(i), b.arg(i));
    }
  }
  return sigma;
}

std::optional<Substitution> unify(const Term &s, const Term &t) {
  return unify_all({{s, t}});
}

Term VarPool::fresh(const std::string &name) { return Term::var(next_++, name); }

void VarPool::reserve_above(const Term &t) { reserve_above(max_var_id(t)); }

VarId max_var_id(const Term &t) {
  if (t.is_var()) return t.var_id();
  VarId m = 0;
  for (const auto &a : t.args()) m = std::max(m, max_var_id(a));
  return m;
}

std::pair<Term, Substitution> rename_fresh(const Term &t, VarPool &pool) {
  Substitution ren;
  for (const auto &v : variables(t)) ren.bind(v.var_id(), pool.fresh(v.var_name()));
  return {apply(ren, t), ren};
}

std::pair<Term, Substitution> rename_apart(const Term &t1, const Term &t2) {
  VarPool pool(std::max(max_var_id(t1), max_var_id(t2)) + 1);
  return rename_fresh(t2, pool);
}

namespace {

constexpr VarId kCanonicalBase = -1000000;

Term canon_rec(const Term &t, std::map<VarId, Term> &ren) {
  if (t.is_var()) {
    auto it = ren.find(t.var_id());
    if (it != ren.end()) return it->second;
    int k = static_cast<int>(ren.size());
    Term v = Term::var(kCanonicalBase - k, "x" + std::to_string(k + 1));
    ren.emplace(t.var_id(), v);
    return v;
  }
  if (t.arity() == 0) return t;
  std::vector<Term> args;
  for (const auto &a : t.args()) args.push_back(canon_rec(a, ren));
  return Term::app(t.head(), std::move(args));
}

void key_rec(const Term &t, std::map<VarId, int> &ren, std::string &out) {
  if (t.is_var()) {
    auto it = ren.find(t.var_id());
    int k;
    if (it == ren.end()) {
      k = static_cast<int>(ren.size());
      ren.emplace(t.var_id(), k);
    } else {
      k = it->second;
    }
    out += '#';
    out += std::to_string(k);
    return;
  }
  out += std::to_string(t.head());
  if (t.arity() == 0) return;
  out += '(';
  for (std::size_t i = 0; i < t.arity(); ++i) {
    if (i) out += ',';
    key_rec(t.arg(i), ren, out);
  }
  out += ')';
}

bool variant_rec(const Term &a, const Term &b, std::map<VarId, VarId> &fwd,
                 std::map<VarId, VarId> &bwd) {
  if (a.is_var() != b.is_var()) return false;
  if (a.is_var()) {
    auto f = fwd.find(a.var_id());
    auto g = bwd.find(b.var_id());
    if (f == fwd.end() && g == bwd.end()) {
      fwd.emplace(a.var_id(), b.var_id());
      bwd.emplace(b.var_id(), a.var_id());
      return true;
    }
    return f != fwd.end() && g != bwd.end() && f->second == b.var_id() &&
           g->second == a.var_id();
  }
  if (a.head() != b.head()) return false;
  for (std::size_t i = 0; i < a.arity(); ++i)
    if (!variant_rec(a.arg(i), b.arg(i), fwd, bwd)) return false;
  return true;
}

} // namespace

std::vector<Term> canonical(const std::vector<Term> &ts) {
  std::map<VarId, Term> ren;
  std::vector<Term> out;
  out.reserve(ts.size());
  for (const auto &t : ts) out.push_back(canon_rec(t, ren));
  return out;
}

Term canonical(const Term &t) { return canonical(std::vector<Term>{t}).front(); }

std::string canonical_key(const std::vector<Term> &ts) {
  std::map<VarId, int> ren;
  std::string out;
  for (const auto &t : ts) {
    key_rec(t, ren, out);
    out += ';';
  }
  return out;
}

std::optional<std::map<VarId, VarId>> variant_map(const std::vector<Term> &a,
                                                  const std::vector<Term> &b) {
  if (a.size() != b.size()) return std::nullopt;
  std::map<VarId, VarId> fwd, bwd;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!variant_rec(a[i], b[i], fwd, bwd)) return std::nullopt;
  return fwd;
}

bool variant(const std::vector<Term> &a, const std::vector<Term> &b) {
  return variant_map(a, b).has_value();
}

bool variant(const Term &a, const Term &b) {
  return variant(std::vector<Term>{a}, std::vector<Term>{b});
}

namespace {

void print_rec(const Term &t, std::string &out,
               const std::function<std::string(const Term &)> &var_name) {
  if (t.is_var()) {
    out += var_name(t);
    return;
  }
  out += symbol_info(t.head()).name;
  if (t.arity() == 0) return;
  out += '(';
  for (std::size_t i = 0; i < t.arity(); ++i) {
    if (i) out += ',';
    print_rec(t.arg(i), out, var_name);
  }
  out += ')';
}

} // namespace

std::string to_string(const Term &t) {
  std::string out;
  print_rec(t, out, [](const Term &v) { return v.var_name(); });
  return out;
}

std::string Printer::name_of(VarId id, const std::string &base) {
  auto it = names_.find(id);
  if (it != names_.end()) return it->second;
  std::string name = base;
  for (int k = 1; taken_.count(name) && taken_[name] != id; ++k)
    name = base + "_" + std::to_string(k);
  taken_[name] = id;
  names_[id] = name;
  return name;
}

void Printer::note(const Term &t) {
  for (const auto &v : variables(t)) name_of(v.var_id(), v.var_name());
}

std::string Printer::print(const Term &t) {
  std::string out;
  print_rec(t, out,
            [this](const Term &v) { return name_of(v.var_id(), v.var_name()); });
  return out;
}

} // namespace confluence
