#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "confluence/certificate.hpp"
#include "confluence/cli.hpp"
#include "support/examples.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace confluence;

namespace {

std::string data(const std::string &name) { return std::string(DATA_DIR) + "/" + name; }

std::string slurp(const std::string &path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string first_line(const std::string &s) { return s.substr(0, s.find('\n')); }

ParseError parse_failure(const std::string &text) {
  try {
    parse_trs(text);
  } catch (const ParseError &e) {
    return e;
  }
  FAIL("no parse error for: " << text);
  return ParseError(0, 0, "");
}

} // namespace

TEST_CASE("parsing and printing round-trip") {
  for (const auto &ex : examples::all()) {
    CAPTURE(ex.name);
    Trs r = ex.all();
    std::string text = print_trs(r);
    Trs back = parse_trs(text);
    CHECK(same_rule_set(back, r));
    CHECK(print_trs(back) == text);
  }
}

TEST_CASE("rules are labelled in file order and comments are skipped") {
  Trs r = parse_trs("(COMMENT a (nested) note)\n(VAR x)\n(RULES f(x) -> x a -> b)");
  REQUIRE(r.size() == 2);
  CHECK(r.rules[0].label == "r1");
  CHECK(r.rules[1].label == "r2");
  CHECK(r.rules[1].lhs.arity() == 0);
}

TEST_CASE("parse errors carry line and column") {
  SUBCASE("variable left-hand side") {
    auto e = parse_failure("(VAR x)\n(RULES x -> 0)");
    CHECK(e.line() == 2);
    CHECK(e.column() == 8);
    CHECK(std::string(e.what()).find("variable") != std::string::npos);
  }
  SUBCASE("arity clash") {
    auto e = parse_failure("(VAR x)\n(RULES\n  f(x) -> f(x, x)\n)");
    CHECK(e.line() == 3);
    CHECK(e.column() == 11);
    CHECK(std::string(e.what()).find("arity") != std::string::npos);
  }
  SUBCASE("fresh variable on the right") {
    auto e = parse_failure("(VAR x y)\n(RULES f(x) -> y)");
    CHECK(e.line() == 2);
    CHECK(std::string(e.what()).find("does not occur") != std::string::npos);
  }
  SUBCASE("relative rules") { parse_failure("(VAR x)(RULES f(x) ->= x)"); }
  SUBCASE("unbalanced parentheses") { parse_failure("(VAR x)(RULES f(x -> x)"); }
}

TEST_CASE("criterion names") {
  CHECK(criterion_from_string("auto") == CriterionChoice::Auto);
  CHECK(criterion_from_string("linear") == CriterionChoice::Linear);
  CHECK(criterion_from_string("parallel") == CriterionChoice::Parallel);
  CHECK(criterion_from_string("pcp") == CriterionChoice::Pcp);
  CHECK(criterion_from_string("huet") == CriterionChoice::Huet);
  CHECK(criterion_from_string("completion") == CriterionChoice::Completion);
  CHECK_FALSE(criterion_from_string("knuth"));
}

TEST_CASE("configuration bounds are validated") {
  Config ok;
  CHECK_NOTHROW(ok.validate());
  for (int field = 0; field < 4; ++field) {
    Config c;
    if (field == 0) c.max_steps = 0;
    if (field == 1) c.timeout_seconds = -1;
    if (field == 2) c.rev_k = 0;
    if (field == 3) c.depth = -3;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  }
}

TEST_CASE("the addition example is proved with a certificate that verifies") {
  Config cfg;
  cfg.certificate = true;
  std::ostringstream out, err;
  CHECK(run_file(cfg, data("addition_ac.trs"), out, err) == 0);
  std::string text = out.str();
  CHECK(first_line(text) == "YES");
  auto begin = text.find("BEGIN CERTIFICATE");
  REQUIRE(begin != std::string::npos);
  std::string cert = text.substr(begin);
  std::string why;
  CHECK_MESSAGE(verify_text(cert, parse_trs(slurp(data("addition_ac.trs"))), &why), why);

  auto path = std::filesystem::temp_directory_path() / "confluence_cli_cert.txt";
  {
    std::ofstream f(path);
    f << cert;
  }
  std::ostringstream vout, verr;
  CHECK(verify_file(data("addition_ac.trs"), path.string(), vout, verr) == 0);
  CHECK(first_line(vout.str()) == "VERIFIED");
  std::ostringstream rout, rerr;
  CHECK(verify_file(data("ac_only.trs"), path.string(), rout, rerr) == 1);
  CHECK(first_line(rout.str()).rfind("REJECTED", 0) == 0);
  std::filesystem::remove(path);
}

TEST_CASE("a single criterion proves the pair system") {
  Config cfg;
  cfg.criterion = CriterionChoice::Linear;
  std::ostringstream out, err;
  CHECK(run_file(cfg, data("pair_swap.trs"), out, err) == 0);
  CHECK(first_line(out.str()) == "YES");
  CHECK(out.str().find("criterion: linear") != std::string::npos);
}

TEST_CASE("every data file gets the expected verdict on the first line") {
  const std::vector<std::pair<std::string, std::string>> expected = {
      {"ac_only.trs", "YES"},
      {"addition_ac.trs", "YES"},
      {"addition_both_sides_ac.trs", "YES"},
      {"doubling_ac.trs", "YES"},
      {"successor_loop_ac.trs", "YES"},
      {"shift_doubling_ac.trs", "YES"},
      {"doubling_successor_loop_ac.trs", "YES"},
      {"pair_swap.trs", "YES"},
      {"self_embedding.trs", "MAYBE"}};
  for (const auto &[file, verdict] : expected) {
    CAPTURE(file);
    std::ostringstream out, err;
    int code = run_file(Config{}, data(file), out, err);
    CHECK(first_line(out.str()) == verdict);
    CHECK(code == (verdict == "YES" ? 0 : 1));
    CHECK(err.str().empty());
  }
}

TEST_CASE("the self-embedding rule reports why it gives up") {
  std::ostringstream out;
  CHECK(run(Config{}, "(VAR x)(RULES f(x) -> f(f(x)))", out) == 1);
  CHECK(out.str().find("reason: exhausted") != std::string::npos);
}

TEST_CASE("errors exit with code 2") {
  std::ostringstream out, err;
  CHECK(run_file(Config{}, data("missing.trs"), out, err) == 2);
  CHECK_FALSE(err.str().empty());
  CHECK(out.str().empty());

  auto path = std::filesystem::temp_directory_path() / "confluence_cli_bad.trs";
  {
    std::ofstream f(path);
    f << "(VAR x)\n(RULES x -> 0)\n";
  }
  std::ostringstream out2, err2;
  CHECK(run_file(Config{}, path.string(), out2, err2) == 2);
  CHECK(err2.str().find("line 2") != std::string::npos);
  std::filesystem::remove(path);

  Config bad;
  bad.depth = 0;
  std::ostringstream out3, err3;
  CHECK(run_file(bad, data("ac_only.trs"), out3, err3) == 2);
}
