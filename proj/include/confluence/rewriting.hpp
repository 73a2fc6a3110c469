#pragma once

#include "confluence/terms.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace confluence {

struct Rule {
  Term lhs;
  Term rhs;
  std::string label;

  Rule() = default;
  Rule(Term l, Term r, std::string lab = {});

  // Checks the rewrite-rule conditions; throws std::invalid_argument.
  void validate() const;
  bool well_formed() const;
  bool left_linear() const { return is_linear(lhs); }
  bool linear() const { return is_linear(lhs) && is_linear(rhs); }
  // r -> l is a rewrite rule as well.
  bool bidirectional() const;
  Rule inverse() const;
};

bool is_valid_rule(const Term &l, const Term &r);
// Equal up to a consistent renaming of the rule's variables.
bool same_rule(const Rule &a, const Rule &b);
std::string rule_key(const Rule &r);
std::string to_string(const Rule &r);
std::string to_string(const Rule &r, Printer &pr);

struct Trs {
  std::vector<Rule> rules;

  Trs() = default;
  explicit Trs(std::vector<Rule> rs) : rules(std::move(rs)) {}

  bool empty() const { return rules.empty(); }
  std::size_t size() const { return rules.size(); }
  void add(Rule r) { rules.push_back(std::move(r)); }
  bool contains(const Rule &r) const;
  const Rule *find_label(const std::string &label) const;

  bool left_linear() const;
  bool linear() const;
  bool bidirectional() const;
  std::set<SymId> signature() const;
  std::set<SymId> defined_symbols() const;
  VarId max_var() const;
};

// R union Q without duplicates modulo renaming; R's rules first.
Trs trs_union(const Trs &r, const Trs &q);
// R minus the rules occurring (modulo renaming) in Q.
Trs trs_minus(const Trs &r, const Trs &q);
Trs inverse(const Trs &r);
// R together with the inverse of every rule that is not already present.
Trs with_inverses(const Trs &r);
bool same_rule_set(const Trs &a, const Trs &b);
std::string trs_key(const Trs &r);
Trs select(const Trs &r, const std::vector<std::string> &labels);

struct Step {
  Term source;
  Term target;
  Position position;
  Rule rule;
  Substitution subst;
};

// Checks the step invariants against the recorded data.
bool replay_step(const Step &s);
bool replay_sequence(const Term &from, const std::vector<Step> &steps,
                     const Term &to);
bool steps_use_only(const std::vector<Step> &steps, const Trs &rules);

struct Redex {
  Position position;
  Rule rule;
  Substitution subst;
};

struct ParallelStep {
  Term source;
  Term target;
  std::vector<Redex> redexes;

  std::vector<Position> positions() const;
};

bool replay_parallel_step(const ParallelStep &p);

std::vector<Step> reducts(const Term &t, const Trs &r);
std::vector<Step> root_reducts(const Term &t, const Trs &r);
bool is_normal(const Term &t, const Trs &r);

class FuelExhausted : public std::runtime_error {
public:
  FuelExhausted() : std::runtime_error("normalization fuel exhausted") {}
};

// Leftmost-innermost normalization.
Term normalize(const Term &t, const Trs &s, long fuel = 100000);

std::optional<ParallelStep> parallel_step_exists(const Term &s, const Term &t,
                                                 const Trs &q);

// Bounded breadth-first exploration of a reduction graph. The first step
// from the start term may draw on a different rule set than later steps.
class ReachSet {
public:
  struct Node {
    Term term;
    int parent = -1;
    int depth = 0;
    std::optional<Step> via;
  };

  const std::vector<Node> &nodes() const { return nodes_; }
  std::optional<std::size_t> find(const Term &t) const;
  std::vector<Step> path_to(std::size_t idx) const;
  bool truncated() const { return truncated_; }

  friend ReachSet explore(const Term &start, const Trs &first, const Trs &rest,
                          int depth, std::size_t max_terms);

private:
  std::vector<Node> nodes_;
  std::unordered_map<Term, std::size_t, TermHash> index_;
  bool truncated_ = false;
};

ReachSet explore(const Term &start, const Trs &first, const Trs &rest, int depth,
                 std::size_t max_terms);

using TermPredicate = std::function<bool(const Term &)>;

std::optional<std::vector<Step>> reach_bounded(const Term &s,
                                               const TermPredicate &goal,
                                               const Trs &r, int depth,
                                               std::size_t max_terms = 20000);

// Bounded search for s <->*_E t, steps use rules of E in either orientation
// (only orientations that are rewrite rules).
std::optional<std::vector<Step>> conversion_bounded(const Term &s, const Term &t,
                                                    const Trs &e, int depth,
                                                    std::size_t max_terms = 20000);

std::string to_string(const Step &s, Printer &pr);

} // namespace confluence
