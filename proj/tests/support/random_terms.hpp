#pragma once

#include "confluence/rewriting.hpp"

#include <random>
#include <string>
#include <vector>

namespace gen {

using confluence::Rule;
using confluence::Term;
using confluence::Trs;

// Signature f/2, g/1, a/0 with a pool of variables.
class TermGen {
public:
  TermGen(unsigned seed, int nvars) : rng_(seed) {
    for (int i = 0; i < nvars; ++i)
      vars_.push_back(Term::var(i + 1, std::string(1, static_cast<char>('x' + i))));
  }

  std::mt19937 &rng() { return rng_; }
  const std::vector<Term> &vars() const { return vars_; }

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
  bool coin(double p) { return std::bernoulli_distribution(p)(rng_); }

  Term term(int depth, double var_bias = 0.3) {
    if (depth <= 0) return leaf(var_bias);
    int k = pick(4);
    if (k == 0) return leaf(var_bias);
    if (k == 1) return Term::app("g", {term(depth - 1, var_bias)});
    if (k == 2 && coin(0.5)) return Term::app("g", {term(depth - 1, var_bias)});
    return Term::app("f", {term(depth - 1, var_bias), term(depth - 1, var_bias)});
  }

  Term nonvar_term(int depth, double var_bias = 0.3) {
    for (;;) {
      Term t = term(depth, var_bias);
      if (!t.is_var()) return t;
    }
  }

  Term ground(int depth) { return term(depth, 0.0); }

  // A term whose variables are drawn from `pool`; ground leaves otherwise.
  Term term_over(int depth, const std::vector<Term> &pool) {
    if (depth <= 0 || pick(3) == 0) {
      if (!pool.empty() && coin(0.6))
        return pool[static_cast<std::size_t>(pick(static_cast<int>(pool.size())))];
      return Term::app("a");
    }
    if (coin(0.5)) return Term::app("g", {term_over(depth - 1, pool)});
    return Term::app("f", {term_over(depth - 1, pool), term_over(depth - 1, pool)});
  }

  Rule rule(int depth, const std::string &label) {
    Term l = nonvar_term(depth, 0.45);
    return Rule(l, term_over(depth, confluence::variables(l)), label);
  }

  Trs trs(int n, int depth) {
    Trs r;
    for (int i = 0; i < n; ++i) r.add(rule(depth, "q" + std::to_string(i + 1)));
    return r;
  }

private:
  Term leaf(double var_bias) {
    if (!vars_.empty() && coin(var_bias))
      return vars_[static_cast<std::size_t>(pick(static_cast<int>(vars_.size())))];
    return Term::app("a");
  }

  std::mt19937 rng_;
  std::vector<Term> vars_;
};

} // namespace gen
