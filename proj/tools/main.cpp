#include <iostream>

#include <CLI11.hpp>

#include "zid/cli.hpp"

int main(int argc, char** argv) {
  zid::RunConfig cfg;
  CLI::App app{
      "zid: decide whether a causal effect P(y|do(x)) is computable from "
      "observational data plus surrogate experiments, and print the estimand"};

  app.add_option("graph", cfg.graph_path,
                 "graph file (one edge per line: 'A -> B', 'A <-> B', "
                 "'node C', '#' comments)")
      ->required();
  app.add_option("-y,--outcome", cfg.outcome,
                 "outcome variable NAME[=value] (repeatable)");
  app.add_option("-x,--treatment", cfg.treatment,
                 "treatment variable NAME[=value] (repeatable)");
  app.add_option("-z,--surrogate", cfg.surrogate,
                 "variable experiments may be run on, NAME (repeatable)");
  app.add_option("--mode", cfg.mode, "idz | id | thm3 | pearl | cor2 | check-rule")
      ->capture_default_str();
  app.add_option("--format", cfg.format, "text | latex | json")
      ->capture_default_str();
  app.add_option("--verify-n", cfg.verify_n,
                 "check an identified estimand against N seeded oracle models");
  app.add_option("--seed", cfg.seed, "seed for oracle verification")
      ->capture_default_str();
  app.add_option("--card", cfg.cardinality,
                 "cardinality override NAME=K for oracle models (repeatable)");
  app.add_option("--rule", cfg.rule, "do-calculus rule number (check-rule mode)");
  app.add_option("--rule-z", cfg.rule_z, "rule set Z (check-rule mode)");
  app.add_option("--rule-w", cfg.rule_w,
                 "rule conditioning set W (check-rule mode)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help and friends exit 0; genuine flag problems are input errors.
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  return zid::run(cfg, std::cout, std::cerr);
}
