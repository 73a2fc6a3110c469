#pragma once

#include "confluence/rewriting.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace confluence {

// Interpretation of one symbol over the naturals:
//   arity 0: constant
//   arity 1: square * x^2 + coeffs[0] * x + constant
//   arity 2: product * x*y + coeffs[0] * x + coeffs[1] * y + constant
//   arity n: linear
struct SymbolPoly {
  int product = 0;
  int square = 0;
  std::vector<int> coeffs;
  int constant = 0;

  friend bool operator==(const SymbolPoly &, const SymbolPoly &) = default;
};

// Polynomials with integer coefficients; a monomial is a sorted list of
// variables (with repetition).
using Monomial = std::vector<VarId>;
using Poly = std::map<Monomial, long long>;

// Raised when a coefficient leaves the 64-bit range.
class PolynomialOverflow : public std::overflow_error {
public:
  PolynomialOverflow() : std::overflow_error("polynomial coefficient overflow") {}
};

struct Interpretation {
  // Carrier is the naturals >= floor.
  int floor = 0;
  std::map<SymId, SymbolPoly> symbols;

  // Polynomial in shifted variables x' = x - floor, so that a polynomial with
  // non-negative coefficients is non-negative on the whole carrier.
  Poly eval(const Term &t) const;
};

enum class Decrease { None, Weak, Strict };

// Compares lhs and rhs coefficient-wise.
Decrease compare(const Interpretation &in, const Rule &r);
// Every symbol of `sig` is interpreted, maps the carrier into itself and is
// strictly (or, with weak_only, weakly) monotone.
bool well_formed(const Interpretation &in, const std::set<SymId> &sig,
                 bool strictly_monotone);

bool lpo_greater(const Term &s, const Term &t, const std::map<SymId, int> &rank);

struct RemovalStage {
  Interpretation interp;
  std::vector<std::string> removed; // rule keys
};

struct DependencyPair {
  Rule rule; // marked lhs -> marked subterm of the rhs
};

struct TerminationCertificate {
  enum class Method { Trivial, Lpo, Polynomial, DependencyPairs, External };

  Method method = Method::Trivial;
  // Lpo: symbols from highest to lowest.
  std::vector<SymId> precedence;
  // Polynomial: stages of rule removal over S union P'.
  // DependencyPairs: stages of pair removal, rules only weakly oriented.
  std::vector<RemovalStage> stages;
  std::string command; // External
};

struct TerminationResult {
  std::optional<TerminationCertificate> certificate;
  std::string reason; // filled when no certificate was found

  explicit operator bool() const { return certificate.has_value(); }
};

struct TerminationOptions {
  long budget = 2000000;
  // Command for an external prover; empty means disabled.
  std::string external;
};

TerminationResult prove_termination(const Trs &s, const TerminationOptions &opt = {});
TerminationResult prove_relative_termination(const Trs &s, const Trs &weak,
                                             const TerminationOptions &opt = {});

class MalformedCertificate : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Independently re-checks every decrease claim of the certificate.
bool replay_certificate(const TerminationCertificate &cert, const Trs &s,
                        const Trs &weak);

std::vector<DependencyPair> dependency_pairs(const Trs &s);
// Estimated dependency graph: edge i -> j when the capped rhs of pair i
// unifies with the lhs of pair j.
std::vector<std::vector<int>> dependency_graph(const std::vector<DependencyPair> &dps,
                                               const Trs &s);

std::string method_name(TerminationCertificate::Method m);

// Drops cached termination results.
void clear_termination_cache();

} // namespace confluence
