#include "confluence/ars_oracle.hpp"
#include "confluence/cli.hpp"

#include "CLI11.hpp"

#include <iostream>

namespace {

int run_ars(unsigned seed, int instances) {
  confluence::ars::FuzzOptions opt;
  opt.seed = seed;
  opt.instances = instances;
  auto st = confluence::ars::fuzz(opt);
  std::cout << "instances: " << st.instances << ", CRM: " << st.crm << "\n";
  const auto &crits = confluence::ars::all_criteria();
  int bad = 0;
  for (std::size_t i = 0; i < crits.size(); ++i) {
    std::cout << confluence::ars::criterion_name(crits[i]) << ": hypotheses " << st.hypotheses[i]
              << ", unsound " << st.unsound[i];
    if (confluence::ars::necessary_and_sufficient(crits[i]))
      std::cout << ", CRM without hypotheses " << st.not_needed[i];
    std::cout << "\n";
    bad += st.unsound[i] + st.not_needed[i];
  }
  return bad == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Confluence prover for rewrite systems split into a terminating and a "
               "reversible part"};
  confluence::Config cfg;
  std::string criterion = "auto";
  std::string file;

  app.add_option("--criterion", criterion,
                 "auto, completion, linear, parallel, pcp or huet")
      ->check(CLI::IsMember({"auto", "completion", "linear", "parallel", "pcp", "huet"}));
  app.add_option("--max-steps", cfg.max_steps, "maximal completion rounds")
      ->check(CLI::PositiveNumber);
  app.add_option("--timeout", cfg.timeout_seconds, "wall-clock limit in seconds")
      ->check(CLI::PositiveNumber);
  app.add_option("--rev-k", cfg.rev_k, "step bound of the reversibility check")
      ->check(CLI::PositiveNumber);
  app.add_option("--depth", cfg.depth, "search depth for joins")->check(CLI::PositiveNumber);
  app.add_flag("--certificate", cfg.certificate, "print the certificate block");
  app.add_option("--ext-termination", cfg.ext_termination,
                 "external termination prover command");
  app.add_option("file", file, "problem file");

  unsigned seed = 20240917;
  int instances = 1000;
  auto *ars = app.add_subcommand("ars", "finite abstract reduction system oracle");
  ars->group("");
  ars->add_option("--seed", seed, "random seed");
  ars->add_option("--instances", instances, "number of random systems")
      ->check(CLI::PositiveNumber);

  std::string problem, cert;
  auto *verify = app.add_subcommand("verify", "check a certificate against a problem");
  verify->add_option("problem", problem, "problem file")->required();
  verify->add_option("certificate", cert, "certificate file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return 2;
  }

  if (ars->parsed()) return run_ars(seed, instances);
  if (verify->parsed()) return confluence::verify_file(problem, cert, std::cout, std::cerr);
  if (file.empty()) {
    std::cerr << "error: no problem file given\n" << app.help();
    return 2;
  }
  cfg.criterion = *confluence::criterion_from_string(criterion);
  return confluence::run_file(cfg, file, std::cout, std::cerr);
}
