#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace confluence {

using VarId = int;
using SymId = int;

struct Symbol {
  std::string name;
  int arity = 0;
};

// Symbols are interned process-wide by (name, arity).
SymId intern_symbol(std::string_view name, int arity);
const Symbol &symbol_info(SymId id);
std::optional<SymId> find_symbol(std::string_view name, int arity);

class Term {
public:
  Term() = default;

  static Term var(VarId id, std::string name = {});
  static Term app(SymId f, std::vector<Term> args = {});
  static Term app(std::string_view f, std::vector<Term> args = {});

  bool valid() const { return node_ != nullptr; }
  bool is_var() const;
  VarId var_id() const;
  const std::string &var_name() const;
  SymId head() const;
  const std::vector<Term> &args() const;
  std::size_t arity() const { return args().size(); }
  const Term &arg(std::size_t i) const { return args()[i]; }

  std::size_t hash() const;
  int size() const;
  int depth() const;

  friend bool operator==(const Term &a, const Term &b);
  friend bool operator!=(const Term &a, const Term &b) { return !(a == b); }
  // Total structural order, used only for deterministic containers.
  friend bool operator<(const Term &a, const Term &b);

private:
  struct Node;
  std::shared_ptr<const Node> node_;
};

struct TermHash {
  std::size_t operator()(const Term &t) const { return t.hash(); }
};

// Positions are paths of 1-based argument indices; the empty path is the root.
using Position = std::vector<int>;

bool is_prefix(const Position &p, const Position &q);
bool is_strict_prefix(const Position &p, const Position &q);
bool parallel(const Position &p, const Position &q);
bool pairwise_parallel(const std::vector<Position> &ps);
std::string position_to_string(const Position &p);

std::vector<Position> positions(const Term &t);
std::vector<Position> positions_fun(const Term &t);
std::vector<Position> positions_var(const Term &t);

const Term &subterm_at(const Term &t, const Position &p);
Term replace_at(const Term &t, const Position &p, const Term &s);
Term replace_parallel(const Term &t,
                      const std::vector<std::pair<Position, Term>> &reps);
bool valid_position(const Term &t, const Position &p);

// Variables in left-to-right order of first occurrence.
std::vector<Term> variables(const Term &t);
std::set<VarId> var_set(const Term &t);
std::set<VarId> var_set_below(const Term &t, const std::vector<Position> &ps);
bool is_linear(const Term &t);
bool is_ground(const Term &t);
std::set<SymId> fun_symbols(const Term &t);
bool occurs(VarId x, const Term &t);

class Substitution {
public:
  Substitution() = default;

  bool empty() const { return map_.empty(); }
  std::size_t size() const { return map_.size(); }
  bool contains(VarId x) const { return map_.count(x) != 0; }
  const Term *lookup(VarId x) const;
  void bind(VarId x, Term t) { map_[x] = std::move(t); }
  void erase(VarId x) { map_.erase(x); }
  const std::map<VarId, Term> &bindings() const { return map_; }

  // Applies this substitution to every range term and adds the bindings of
  // other that are not yet bound: the result behaves as other after this.
  Substitution then(const Substitution &other) const;
  bool is_idempotent() const;

  friend bool operator==(const Substitution &a, const Substitution &b) {
    return a.map_ == b.map_;
  }

private:
  std::map<VarId, Term> map_;
};

Term apply(const Substitution &s, const Term &t);

std::optional<Substitution> match_term(const Term &pattern, const Term &subject);
// Extends an existing matcher; returns false and leaves s unspecified on failure.
bool match_into(const Term &pattern, const Term &subject, Substitution &s);

std::optional<Substitution> unify(const Term &s, const Term &t);
std::optional<Substitution>
unify_all(const std::vector<std::pair<Term, Term>> &equations);

// Source of fresh variable ids. One pool per analysis session; not thread safe.
class VarPool {
public:
  explicit VarPool(VarId next = 1) : next_(next) {}
  Term fresh(const std::string &name);
  VarId fresh_id() { return next_++; }
  void reserve_above(const Term &t);
  void reserve_above(VarId id) {
    if (id >= next_) next_ = id + 1;
  }
  VarId peek() const { return next_; }

private:
  VarId next_;
};

VarId max_var_id(const Term &t);

// Renames every variable of t to a fresh one; the map sends old ids to the
// new variable terms.
std::pair<Term, Substitution> rename_fresh(const Term &t, VarPool &pool);
// Renames t2 so that it shares no variable with t1.
std::pair<Term, Substitution> rename_apart(const Term &t1, const Term &t2);

// Canonical numbering by first left-to-right occurrence across all terms.
std::vector<Term> canonical(const std::vector<Term> &ts);
Term canonical(const Term &t);
std::string canonical_key(const std::vector<Term> &ts);
bool variant(const Term &a, const Term &b);
bool variant(const std::vector<Term> &a, const std::vector<Term> &b);
// If a and b are variants, the bijection sending variables of a to those of b.
std::optional<std::map<VarId, VarId>> variant_map(const std::vector<Term> &a,
                                                  const std::vector<Term> &b);

// Plain printing in f(t1,...,tn) syntax using display names.
std::string to_string(const Term &t);

// Printing several terms with one consistent naming: variables sharing a
// display name but not an id get distinct suffixes.
class Printer {
public:
  void note(const Term &t);
  std::string print(const Term &t);
  std::string name_of(VarId id, const std::string &base);

private:
  std::map<VarId, std::string> names_;
  std::map<std::string, VarId> taken_;
};

} // namespace confluence

template <> struct std::hash<confluence::Term> {
  std::size_t operator()(const confluence::Term &t) const { return t.hash(); }
};
