// homchar: command-line front end for analyzing and verifying
// homomorphism-characterizing functional equations.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "homchar/errors.hpp"
#include "homchar/report.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw homchar::ValidationError("cannot read file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Analyze and verify functional equations sum s_i f_i^q_i(x^p_i) = 0"};
  app.require_subcommand(1);
  app.fallthrough();

  bool as_json = false;
  homchar::ReportOptions opts;
  unsigned k = 0;
  app.add_flag("--json", as_json, "Emit the JSON report instead of text");
  app.add_option("--seed", opts.seed, "Seed for random sampling")->capture_default_str();
  app.add_option("--samples", opts.samples, "Oracle sample points")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--tolerance", opts.tolerance, "Numeric constraint tolerance")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);

  auto* analyze = app.add_subcommand("analyze", "Full analysis of an equation");
  std::string equation;
  analyze->add_option("equation", equation, "Equation, e.g. \"f(x^4) + g^2(x^2) + h^4(x) = 0\"")->required();
  auto* k_opt = analyze->add_option("--k", k, "Number of homomorphisms in the constraint system (default n-1)")
                    ->check(CLI::PositiveNumber);
  analyze->add_flag("--real", opts.real, "Add the real-valued specialization note");

  auto* verify = app.add_subcommand("verify", "Check candidate solutions");
  std::string cand_path, mode = "symbolic", bindings;
  verify->add_option("equation", equation, "Equation")->required();
  verify->add_option("candidates", cand_path, "Candidate file (name = expression per line)")->required();
  verify->add_option("--mode", mode, "symbolic, oracle or both")
      ->check(CLI::IsMember({"symbolic", "oracle", "both"}))
      ->capture_default_str();
  verify->add_option("--bindings", bindings, "Bindings JSON text or @file");

  auto* oracle = app.add_subcommand("oracle", "Independent oracles");
  oracle->require_subcommand(1);
  oracle->fallthrough();
  auto* polar = oracle->add_subcommand("polarization", "Symbolic polarization identities of order n");
  unsigned n = 0;
  polar->add_option("n", n, "Order")->required();
  auto* brute = oracle->add_subcommand("bruteforce", "Enumerate S_N for a profile and pattern");
  std::string profile, pattern;
  brute->add_option("profile", profile, "Profile, e.g. \"[(2,2),(4,1)]\"")->required();
  brute->add_option("pattern", pattern, "Pattern, e.g. \"{x:1,y:1,1:2}\"")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : homchar::kExitInvalid;
  }

  homchar::CommandResult result;
  if (analyze->parsed()) {
    if (*k_opt) opts.k = k;
    result = homchar::run_guarded("analyze", [&] { return homchar::cmd_analyze(equation, opts); });
  } else if (verify->parsed()) {
    result = homchar::run_guarded("verify", [&] {
      auto vm = mode == "oracle" ? homchar::VerifyMode::Oracle
                : mode == "both" ? homchar::VerifyMode::Both
                                 : homchar::VerifyMode::Symbolic;
      std::optional<std::string> b;
      if (!bindings.empty()) b = bindings.front() == '@' ? read_file(bindings.substr(1)) : bindings;
      return homchar::cmd_verify(equation, read_file(cand_path), vm, b, opts);
    });
  } else if (polar->parsed()) {
    result = homchar::run_guarded("oracle polarization", [&] { return homchar::cmd_oracle_polarization(n); });
  } else {
    result = homchar::run_guarded("oracle bruteforce",
                                  [&] { return homchar::cmd_oracle_bruteforce(profile, pattern); });
  }

  if (as_json) {
    std::cout << homchar::dump_json(result.json);
  } else if (!result.json.contains("error")) {
    std::cout << result.text;
  } else {
    std::cerr << result.text;
  }
  return result.exit_code;
}
