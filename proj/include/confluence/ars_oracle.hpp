#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace confluence::ars {

constexpr int kMaxCarrier = 10;

// Binary relation on {0, ..., size-1}; bit j of row i means i relates to j.
class Relation {
public:
  explicit Relation(int size = 0);

  int size() const { return n_; }
  bool has(int a, int b) const { return (rows_[a] >> b) & 1u; }
  void add(int a, int b) { rows_[a] |= static_cast<std::uint16_t>(1u << b); }
  std::uint16_t row(int a) const { return rows_[a]; }

  static Relation identity(int size);

  Relation operator|(const Relation &o) const;
  // Relational composition: a (R o S) c iff a R b and b S c for some b.
  Relation then(const Relation &o) const;
  Relation inverse() const;
  Relation reflexive() const;
  Relation transitive() const;
  Relation star() const;        // reflexive-transitive closure
  Relation equivalence() const; // equivalence closure

  bool subset_of(const Relation &o) const;
  bool symmetric() const;
  // No infinite descending chain, i.e. no cycle on a finite carrier.
  bool well_founded() const;
  bool empty() const;
  int edges() const;

  friend bool operator==(const Relation &a, const Relation &b) = default;

private:
  int n_;
  std::array<std::uint16_t, kMaxCarrier> rows_{};
};

// A reduction -> with a symmetric relation |-| and a part ~> of |-| that may be
// used inside joins.
struct FiniteArs {
  int size = 0;
  Relation arrow;
  Relation sym;
  Relation leads;

  explicit FiniteArs(int n = 0) : size(n), arrow(n), sym(n), leads(n) {}
  bool valid() const;
};

// Church-Rosser modulo the equivalence closure of |-|: every conversion by
// -> and |-| factors as ->* o ~ o <-*.
bool is_crm(const FiniteArs &a);

enum class Criterion {
  Mixed,          // joins use -> and ~>; -> o ~>* well-founded
  WellFounded,    // ~> empty; -> well-founded
  StepFirst,      // mixed, with a leading -> step on the |-| o -> side
  FullModulo,     // ~> = |-|; necessary and sufficient
  PlusModulo,     // ->+ o |-|* o <-* on the |-| o -> side; necessary and sufficient
  StarModulo,     // ->* o |-|* o <-* on the |-| o -> side; necessary and sufficient
  GlobalModulo    // |-|* o -> instead of |-| o ->, -> well-founded; necessary and sufficient
};

const std::vector<Criterion> &all_criteria();
std::string criterion_name(Criterion c);
// Throws std::invalid_argument for an unknown name.
Criterion criterion_from_name(const std::string &name);
// The criterion characterises CRM once its well-foundedness condition holds.
bool necessary_and_sufficient(Criterion c);

struct CriterionResult {
  bool well_founded = false; // the criterion's well-foundedness condition
  bool hypotheses = false;   // well_founded and both inclusions
  bool crm = false;
};

CriterionResult check_abstract_criterion(const FiniteArs &a, Criterion c);

struct FuzzOptions {
  unsigned seed = 20240917;
  int instances = 1000;
  int min_size = 3;
  int max_size = 6;
  double min_density = 0.1;
  double max_density = 0.4;
};

struct FuzzStats {
  int instances = 0;
  int crm = 0;
  // Per criterion, in the order of all_criteria().
  std::vector<int> hypotheses;
  std::vector<int> unsound;     // hypotheses hold but CRM fails
  std::vector<int> not_needed;  // necessary-and-sufficient criteria: CRM and
                                // well-founded but hypotheses fail
};

FiniteArs random_ars(unsigned seed, int size, double density);
FuzzStats fuzz(const FuzzOptions &opt = {});

} // namespace confluence::ars
