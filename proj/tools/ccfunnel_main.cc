// Copyright 2026 The ccfunnel Authors
//
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

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ccfunnel/cli.h"

int main(int argc, char** argv) {
  CLI::App app{"Constrained funnel control simulator"};
  app.require_subcommand(1);

  std::string scenario;
  std::string trace;
  std::string out_dir = "out";
  std::vector<std::string> overrides;

  auto* run = app.add_subcommand("run", "simulate a scenario and check it");
  run->add_option("scenario", scenario, "scenario file")->required();
  run->add_option("--set", overrides, "override, e.g. planner.k_c=0.3")
      ->expected(1)
      ->take_all();
  run->add_option("--out", out_dir, "output directory");

  auto* check = app.add_subcommand("check", "check an existing trace");
  check->add_option("trace", trace, "trace.csv")->required();
  check->add_option("scenario", scenario, "scenario file")->required();

  auto* validate = app.add_subcommand("validate", "static scenario checks");
  validate->add_option("scenario", scenario, "scenario file")->required();
  validate->add_option("--set", overrides, "override")->expected(1)->take_all();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : ccfunnel::kExitError;
  }

  if (*run) {
    return ccfunnel::cmd_run(scenario, overrides, out_dir, std::cout,
                             std::cerr);
  }
  if (*check) {
    return ccfunnel::cmd_check(trace, scenario, std::cout, std::cerr);
  }
  return ccfunnel::cmd_validate(scenario, overrides, std::cout, std::cerr);
}
