#pragma once

#include "confluence/critical_pairs.hpp"
#include "confluence/reversibility.hpp"
#include "confluence/termination.hpp"

#include <chrono>
#include <optional>
#include <string>
#include <vector>

namespace confluence {

enum class Criterion { Linear, Parallel, Pcp, Huet };

// How the auxiliary rule set P' (a subset of P and its inverse) is chosen.
//   Empty: P' is empty.
//   Fixed: P' is given by the partition.
//   Auto:  joins are first sought with S alone; failing pairs may use P and
//          its inverse, and the rules used in ->* segments become P'.
enum class PrimeMode { Empty, Fixed, Auto };

std::string criterion_name(Criterion c);
std::string prime_mode_name(PrimeMode m);

struct Partition {
  Trs s;
  Trs p;
  PrimeMode prime = PrimeMode::Auto;
  Trs p_prime; // used when prime == Fixed
};

// Which condition of a criterion a pair falls under.
//   SS: CP(S,S); PS: CP(P+-,S); SP: CP(S,P+-); Pcp: PCP_in(P+-,S).
enum class PairClass { SS, PS, SP, Pcp };

std::string pair_class_name(PairClass c);

// How the two ends a (reached from u) and b (reached from v) are related.
enum class MiddleKind {
  Equal,        // a = b
  StepBack,     // a <-= b by at most one P+- step (source b)
  StepForward,  // a ->= b by at most one P+- step (source a)
  ParallelBack, // a <=|| b (source b)
  ParallelForward,
  Conversion    // a <->*_P b
};

// Shape of a ->* segment.
enum class SegmentKind {
  Star,         // ->*_{S u P'}
  StarS,        // ->*_S
  SThenStar,    // (->_S o ->*_{S u P'})^=
  PlusS         // ->+_S
};

struct JoinShape {
  SegmentKind left = SegmentKind::Star;
  MiddleKind middle = MiddleKind::Equal;
  SegmentKind right = SegmentKind::Star;
  bool variable_condition = false; // V_V(a) within the pair's variable set
};

struct JoinEvidence {
  CriticalPair pair;
  PairClass cls = PairClass::SS;
  JoinShape shape;
  std::vector<Step> left;        // u ->* a
  std::vector<Step> right;       // v ->* b
  std::optional<Step> step;      // middle single step, if not equal
  std::optional<ParallelStep> parallel;
  std::vector<Step> conversion;  // a ->* b over P+-
};

// A pair without a join, with the Step 3 bookkeeping of completion.
struct FailedPair {
  CriticalPair pair;
  PairClass cls = PairClass::SS;
  bool normalized = false; // u_hat / v_hat valid
  Term u_hat;
  Term v_hat;
  bool v_normal = false;   // v is an S-normal form
};

enum class Outcome { Holds, Fails, NotApplicable };

struct CriterionReport {
  Criterion criterion = Criterion::Linear;
  PrimeMode prime = PrimeMode::Auto;
  Outcome outcome = Outcome::NotApplicable;
  std::string reason;
  bool timed_out = false;

  Trs p_prime;
  std::optional<TerminationCertificate> termination;
  std::optional<ReversibilityWitness> reversibility;
  std::vector<JoinEvidence> evidence;
  std::vector<FailedPair> failing;
  // Pairs whose joins needed P' when its relative termination failed.
  std::vector<FailedPair> needs_prime;

  bool holds() const { return outcome == Outcome::Holds; }
};

struct CriteriaOptions {
  int depth = 10;
  int rev_k = 10;
  std::size_t max_terms = 600;
  TerminationOptions termination;
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

// Shape required of a pair of the given class.
JoinShape required_shape(Criterion c, PairClass cls);

CriterionReport check(Criterion c, const Partition &pt, const CriteriaOptions &opt = {});
CriterionReport check_linear(const Partition &pt, const CriteriaOptions &opt = {});
CriterionReport check_parallel(const Partition &pt, const CriteriaOptions &opt = {});
CriterionReport check_pcp(const Partition &pt, const CriteriaOptions &opt = {});
CriterionReport check_huet(const Partition &pt, const CriteriaOptions &opt = {});

// P+- rules used in the ->* segments of the evidence.
Trs collect_p_prime(const std::vector<JoinEvidence> &evidence, const Trs &s,
                    const Trs &p_pm);

// Replays one join against the given rule sets.
bool replay_join(const JoinEvidence &e, const Trs &s, const Trs &p_pm,
                 const Trs &p_prime);

// Replays every recorded fact of a report that holds: reversibility, relative
// termination, coverage of all required pairs and every join.
bool replay_report(const CriterionReport &r, const Partition &pt);

} // namespace confluence
