// SPDX-License-Identifier: Apache-2.0
//
// uavris: trajectory and reflection planning for active-RIS UAV SWIPT links
// Copyright (C) 2026 The uavris authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------
#include <CLI11.hpp>

#include <iostream>
#include <map>

#include "uavris/cli.hpp"

namespace {

const std::map<std::string, uavris::RisMode> kModes{{"active", uavris::RisMode::Active},
                                                      {"passive", uavris::RisMode::Passive}};

void add_common(CLI::App& cmd, std::string& scenario, std::optional<uavris::RisMode>& mode,
                std::optional<std::uint64_t>& seed) {
  cmd.add_option("scenario", scenario, "Scenario JSON file")->required();
  cmd.add_option("--mode", mode, "RIS mode")->transform(CLI::CheckedTransformer(kModes, CLI::ignore_case));
  cmd.add_option("--seed", seed, "Initialization seed (0 keeps the canonical start)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy-minimal hover planning for an RIS-assisted UAV power and data broadcast"};
  app.require_subcommand(1);

  std::string scenario, out_dir = "out";
  uavris::cli::Overrides flags;

  auto* optimize = app.add_subcommand("optimize", "Plan hover points, hover times and reflection vectors");
  add_common(*optimize, scenario, flags.mode, flags.seed);
  optimize->add_option("--elements", flags.elements, "Number of RIS elements M")->check(CLI::PositiveNumber);
  optimize->add_option("--out", out_dir, "Output directory")->capture_default_str();

  std::vector<int> elements;
  auto* sweep = app.add_subcommand("sweep", "Total energy against the number of RIS elements");
  add_common(*sweep, scenario, flags.mode, flags.seed);
  sweep->add_option("--elements", elements, "Comma-separated element counts")
      ->delimiter(',')
      ->required()
      ->check(CLI::PositiveNumber);
  sweep->add_option("--out", out_dir, "Output directory")->capture_default_str();

  long samples = 100000;
  std::uint64_t mc_seed = 1;
  auto* validate = app.add_subcommand("validate", "Closed forms against Monte Carlo and brute force");
  validate->add_option("scenario", scenario, "Scenario JSON file")->required();
  validate->add_option("--samples", samples, "Monte Carlo samples per quantity")->capture_default_str();
  validate->add_option("--seed", mc_seed, "Monte Carlo seed")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  if (*optimize) return uavris::cli::cmd_optimize(scenario, out_dir, flags, std::cerr);
  if (*sweep) return uavris::cli::cmd_sweep_elements(scenario, elements, out_dir, flags, std::cerr);
  return uavris::cli::cmd_validate(scenario, samples, mc_seed, std::cout);
}
