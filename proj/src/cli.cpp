#include "confluence/certificate.hpp"
#include "confluence/cli.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

namespace confluence {

std::optional<CriterionChoice> criterion_from_string(const std::string &s) {
  if (s == "auto") return CriterionChoice::Auto;
  if (s == "linear") return CriterionChoice::Linear;
  if (s == "parallel") return CriterionChoice::Parallel;
  if (s == "pcp") return CriterionChoice::Pcp;
  if (s == "huet") return CriterionChoice::Huet;
  if (s == "completion") return CriterionChoice::Completion;
  return std::nullopt;
}

void Config::validate() const {
  if (max_steps <= 0) throw std::invalid_argument("--max-steps must be positive");
  if (!(timeout_seconds > 0)) throw std::invalid_argument("--timeout must be positive");
  if (rev_k <= 0) throw std::invalid_argument("--rev-k must be positive");
  if (depth <= 0) throw std::invalid_argument("--depth must be positive");
}

namespace {

std::optional<Criterion> single_criterion(CriterionChoice c) {
  switch (c) {
  case CriterionChoice::Linear: return Criterion::Linear;
  case CriterionChoice::Parallel: return Criterion::Parallel;
  case CriterionChoice::Pcp: return Criterion::Pcp;
  case CriterionChoice::Huet: return Criterion::Huet;
  default: return std::nullopt;
  }
}

std::optional<std::string> read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

} // namespace

int run(const Config &cfg, std::string_view text, std::ostream &out) {
  cfg.validate();
  Trs r = parse_trs(text);
  CompletionOptions opt;
  opt.max_steps = cfg.max_steps;
  opt.timeout_seconds = cfg.timeout_seconds;
  opt.criteria.depth = cfg.depth;
  opt.criteria.rev_k = cfg.rev_k;
  opt.criteria.termination.external = cfg.ext_termination;
  opt.only = single_criterion(cfg.criterion);

  Certificate c = check_confluence(r, opt);
  bool yes = c.verdict == Verdict::Yes;
  out << (yes ? "YES" : "MAYBE") << "\n";
  if (yes) {
    out << "criterion: " << criterion_name(c.report->criterion) << ", P' "
        << prime_mode_name(c.report->prime) << "\n";
    out << "completion rounds: " << c.steps << ", checks: " << c.checks << "\n";
  } else {
    out << "reason: " << c.reason << ", checks: " << c.checks << "\n";
  }
  if (cfg.certificate) out << serialize_certificate(c);
  return yes ? 0 : 1;
}

int run_file(const Config &cfg, const std::string &path, std::ostream &out,
             std::ostream &err) {
  auto text = read_file(path);
  if (!text) {
    err << "error: cannot read " << path << "\n";
    return 2;
  }
  try {
    return run(cfg, *text, out);
  } catch (const ParseError &e) {
    err << path << ": " << e.what() << "\n";
  } catch (const std::exception &e) {
    err << "error: " << e.what() << "\n";
  }
  return 2;
}

int verify_file(const std::string &problem_path, const std::string &certificate_path,
                std::ostream &out, std::ostream &err) {
  auto problem = read_file(problem_path);
  auto cert = read_file(certificate_path);
  if (!problem || !cert) {
    err << "error: cannot read " << (problem ? certificate_path : problem_path) << "\n";
    return 2;
  }
  Trs r;
  try {
    r = parse_trs(*problem);
  } catch (const ParseError &e) {
    err << problem_path << ": " << e.what() << "\n";
    return 2;
  }
  std::string why;
  if (verify_text(*cert, r, &why)) {
    out << "VERIFIED\n";
    return 0;
  }
  out << "REJECTED: " << why << "\n";
  return 1;
}

} // namespace confluence
