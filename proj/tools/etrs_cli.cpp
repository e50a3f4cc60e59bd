// Copyright 2026 The etrs Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end for the eTRS toolkit.

#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "etrs/cli.hpp"
#include "etrs/error.hpp"
#include "etrs/formulate.hpp"

int main(int argc, char** argv) {
  using etrs::cli::Command;
  using etrs::cli::Format;

  etrs::cli::RunConfig cfg;
  std::string kind = "socpsdp";
  double tol_feas = -1.0;
  double tol_opt = -1.0;

  CLI::App app{"extended trust-region subproblem solver"};
  app.require_subcommand(1);
  app.add_option("--tol-feas", tol_feas, "feasibility tolerance override");
  app.add_option("--tol-opt", tol_opt, "cross-path agreement tolerance (relative)");
  app.add_option("--seed", cfg.seed, "oracle seed");
  app.add_option("--budget", cfg.budget, "oracle sample budget");
  app.add_option("--format", cfg.format, "output format")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, Format>{{"human", Format::kHuman}, {"json", Format::kJson}},
          CLI::ignore_case).description("human|json"))
      ->type_name("FORMAT");

  auto with_input = [&](CLI::App* sub) {
    sub->add_option("input", cfg.input, "problem JSON file");
    sub->add_option("--example", cfg.example, "built-in fixture (example1..example4)");
  };
  CLI::App* solve = app.add_subcommand("solve", "solve a problem by both paths");
  with_input(solve);
  CLI::App* relax = app.add_subcommand("relax", "solve one conic relaxation");
  with_input(relax);
  relax->add_option("--kind", kind, "sdp | lmi | socpsdp")
      ->check(CLI::IsMember({"sdp", "lmi", "socpsdp"}));
  CLI::App* certify = app.add_subcommand("certify", "check an optimality certificate");
  with_input(certify);
  certify->add_option("--point", cfg.point, "JSON with x and optional multipliers")
      ->required();
  app.add_subcommand("examples", "reproduce the built-in examples");
  CLI::App* oracle = app.add_subcommand("oracle", "sampling minimizer");
  with_input(oracle);

  // Global flags are accepted after the subcommand as well.
  app.fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : etrs::cli::kExitInvalidInput;
  }

  if (*solve) cfg.command = Command::kSolve;
  if (*relax) cfg.command = Command::kRelax;
  if (*certify) cfg.command = Command::kCertify;
  if (app.got_subcommand("examples")) cfg.command = Command::kExamples;
  if (*oracle) cfg.command = Command::kOracle;
  cfg.kind = etrs::ParseRelaxation(kind);
  if (tol_feas >= 0.0) cfg.tol_feas = tol_feas;
  if (tol_opt >= 0.0) cfg.tol_opt = tol_opt;

  return etrs::cli::Run(cfg, std::cout, std::cerr);
}
