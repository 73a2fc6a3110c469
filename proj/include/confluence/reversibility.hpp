#pragma once

#include "confluence/rewriting.hpp"

#include <optional>
#include <string>
#include <vector>

namespace confluence {

// For every rule l -> r of P, a sequence r ->*_P l.
struct ReversibilityWitness {
  struct Entry {
    Rule rule;
    std::vector<Step> back;
  };
  std::vector<Entry> entries;
};

struct ReversibilityResult {
  std::optional<ReversibilityWitness> witness;
  std::string reason; // filled on failure

  explicit operator bool() const { return witness.has_value(); }
};

// Bounded check of ->_P included in <-*_P: each rule must be undone within k
// steps. Non-bidirectional rules are rejected without search.
ReversibilityResult is_reversible(const Trs &p, int k = 10);

bool replay_reversibility(const ReversibilityWitness &w, const Trs &p);

} // namespace confluence
