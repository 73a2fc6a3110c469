#pragma once

#include "confluence/rewriting.hpp"

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace confluence {

class ParseError : public std::runtime_error {
public:
  ParseError(int line, int column, const std::string &msg);
  int line() const { return line_; }
  int column() const { return column_; }

private:
  int line_;
  int column_;
};

// Reads `(VAR x y ...)(RULES l -> r ...)`. Other sections such as COMMENT are
// skipped. Rules are labelled r1, r2, ... in file order.
Trs parse_trs(std::string_view text);
// Parses a single term; names listed in `vars` are variables.
Term parse_term(std::string_view text, const std::vector<std::string> &vars);
std::string print_trs(const Trs &r);
// Writes S rules with -> and the rules of `weak` with ->=.
std::string print_relative_trs(const Trs &s, const Trs &weak);

enum class CriterionChoice { Auto, Linear, Parallel, Pcp, Huet, Completion };

std::optional<CriterionChoice> criterion_from_string(const std::string &s);

struct Config {
  CriterionChoice criterion = CriterionChoice::Auto;
  int max_steps = 20;
  double timeout_seconds = 60;
  int rev_k = 10;
  int depth = 10;
  bool certificate = false;
  std::string ext_termination;

  // Throws std::invalid_argument on a non-positive bound.
  void validate() const;
};

// Runs the prover on a problem text; returns 0 for YES, 1 for MAYBE.
// The first output line is the verdict. Parse errors propagate as ParseError.
int run(const Config &cfg, std::string_view text, std::ostream &out);
// Reads the file and calls run; I/O and parse errors go to `err`, exit 2.
int run_file(const Config &cfg, const std::string &path, std::ostream &out,
             std::ostream &err);
// Checks a certificate file against a problem file without searching; returns
// 0 when it verifies, 1 when it is rejected and 2 on I/O or parse errors.
int verify_file(const std::string &problem_path, const std::string &certificate_path,
                std::ostream &out, std::ostream &err);

} // namespace confluence
