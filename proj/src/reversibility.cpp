#include "confluence/reversibility.hpp"

namespace confluence {

ReversibilityResult is_reversible(const Trs &p, int k) {
  ReversibilityWitness w;
  for (const auto &r : p.rules) {
    if (!r.bidirectional())
      return {std::nullopt, to_string(r) + " is not bidirectional"};
    const Term &goal = r.lhs;
    auto seq = reach_bounded(r.rhs, [&](const Term &t) { return t == goal; }, p, k);
    if (!seq)
      return {std::nullopt,
              "no sequence of at most " + std::to_string(k) + " steps undoes " + to_string(r)};
    w.entries.push_back({r, std::move(*seq)});
  }
  return {std::move(w), {}};
}

bool replay_reversibility(const ReversibilityWitness &w, const Trs &p) {
  if (w.entries.size() != p.size()) return false;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto &e = w.entries[i];
    if (!same_rule(e.rule, p.rules[i]) || e.rule.lhs != p.rules[i].lhs ||
        e.rule.rhs != p.rules[i].rhs)
      return false;
    if (!replay_sequence(e.rule.rhs, e.back, e.rule.lhs)) return false;
    if (!steps_use_only(e.back, p)) return false;
  }
  return true;
}

} // namespace confluence
