#pragma once

#include "confluence/rewriting.hpp"

#include <set>
#include <string>
#include <vector>

namespace confluence {

// A (parallel) critical pair <left, right>: the peak rewrites to left by the
// inner rules at `positions` and to right by the outer rule at the root.
struct CriticalPair {
  Term left;
  Term right;
  Term peak;
  bool inner = false;
  std::vector<Rule> inner_rules; // one per position
  Rule outer_rule;
  std::vector<Position> positions;
  Substitution mgu;
  // Variables of the peak at or below `positions`.
  std::set<VarId> vars;

  std::string key() const;
};

// CP(R, Q): rules of R overlap into left-hand sides of Q.
std::vector<CriticalPair> cp(const Trs &r, const Trs &q);
std::vector<CriticalPair> cp_in(const Trs &r, const Trs &q);
std::vector<CriticalPair> cp_out(const Trs &r, const Trs &q);

// Inner parallel critical pairs PCP_in(Q, R): several Q rules overlap
// simultaneously at pairwise parallel non-root positions of an R lhs.
std::vector<CriticalPair> pcp_in(const Trs &q, const Trs &r);

// Recomputes both sides from the recorded peak, rules and positions.
bool replay_critical_pair(const CriticalPair &c);

std::string to_string(const CriticalPair &c, Printer &pr, bool with_vars = false);
std::string to_string(const CriticalPair &c, bool with_vars = false);

} // namespace confluence
