#pragma once

#include "confluence/criteria.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace confluence {

// Criterion tried for index i of a worklist entry: 0 PCP, 1 linear, 2 Huet.
Criterion criterion_for_index(int i);

struct CandidatePartition {
  Trs s;
  Trs p;
  ReversibilityWitness reversibility;
};

// Rules l -> r with r -> l in R (modulo renaming), or with the same function
// symbols on both sides and the same root symbol.
bool symmetric_rule(const Rule &rule, const Trs &r);

// Partitions proposed by the symmetry heuristic: the largest reversible P
// among the heuristic rules, then that P with one rule moved back to S.
std::vector<CandidatePartition> decompose(const Trs &r, int rev_k = 10);

struct InferenceStep {
  enum class Kind { Partition, Replacement, Addition };
  Kind kind = Kind::Partition;

  // Partition: the new split and the reversibility witness of p.
  Trs s;
  Trs p;
  ReversibilityWitness reversibility;

  // Addition: rule l -> r with lhs <->*_P m (conversion) and m ->*_S r
  // (reduction). Replacement: old_rule l -> r' becomes rule l -> r, with
  // r' <->*_P r (conversion).
  Rule rule;
  Rule old_rule;
  std::vector<Step> conversion;
  std::vector<Step> reduction;
  std::string note; // which concrete step proposed it
};

std::string inference_kind_name(InferenceStep::Kind k);

struct ProofState {
  Trs s;
  Trs p;
  std::vector<InferenceStep> history;
  int depth = 0; // rounds of addition and replacement so far

  Trs rules() const { return trs_union(s, p); }
};

class SideConditionError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// The pair <R, {}> every derivation starts from.
ProofState initial_state(const Trs &r);

// Each application searches for (or checks) the side-condition witness and
// throws SideConditionError when none is found.
ProofState apply_partition(const ProofState &st, const Trs &s, const Trs &p, int rev_k = 10);
ProofState apply_replacement(const ProofState &st, const Rule &old_rule, const Rule &rule,
                             int depth = 10);
ProofState apply_addition(const ProofState &st, const Rule &rule, int depth = 10);
// Records a step whose witness is already known, after checking it.
ProofState apply_step(const ProofState &st, const InferenceStep &step);

// Checks one step against the state it is applied to: the rewrite relation
// before and after agree on the changed rules, using only the witness.
bool audit_step(const InferenceStep &step, const Trs &s, const Trs &p);

struct Successor {
  Trs rules;
  std::vector<InferenceStep> steps;
};

// Successor rule sets for the failing pairs of a check on (S, P): additions
// from the Step 3, Step 4 and Step 2b equations, and replacements r -> r' with
// r <->_P r' for the S rules involved in a failure.
std::vector<Successor> trans(const Trs &s, const Trs &p, const std::vector<FailedPair> &nj,
                             int depth = 10);

enum class Verdict { Yes, Maybe };

struct CompletionOptions {
  int max_steps = 20;
  double timeout_seconds = 60;
  CriteriaOptions criteria;
  // When set, only this criterion is tried and no completion is attempted.
  std::optional<Criterion> only;
};

struct Certificate {
  Verdict verdict = Verdict::Maybe;
  std::string reason; // for MAYBE: exhausted, step-limit or timeout
  Trs input;
  std::vector<InferenceStep> history; // ends with the final partition
  Partition final_partition;
  std::optional<CriterionReport> report;
  int steps = 0;  // completion rounds of the successful derivation
  int checks = 0; // criterion checks performed
};

Certificate check_confluence(const Trs &r, const CompletionOptions &opt = {});

// Re-derives a YES verdict from the certificate alone: replays the history
// from the input with the audit of every step and replays the final report.
bool verify(const Certificate &c, const Trs &input, std::string *why = nullptr);

} // namespace confluence
