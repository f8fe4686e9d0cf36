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
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "uavris/montecarlo.hpp"
#include "uavris/optimizer.hpp"
#include "uavris/scenario.hpp"

namespace uavris::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kBadScenario = 2,
  kInsufficientSamples = 3,
};

/// Command-line overrides applied on top of the scenario file.
struct Overrides {
  std::optional<RisMode> mode;
  std::optional<int> elements;
  std::optional<std::uint64_t> seed;

  Scenario apply(Scenario sc) const;
};

std::string trajectory_csv(const FlightPlan& plan);
std::string phi_csv(const ReflectionPlan& phi);
std::string summary_text(const Scenario& sc, const optimizer::RunResult& run);

/// Writes trajectory.csv, phi.csv, trace.jsonl and summary.txt into out_dir.
void write_run(const std::string& out_dir, const Scenario& sc, const optimizer::RunResult& run);

int cmd_optimize(const std::string& scenario_path, const std::string& out_dir, const Overrides& flags,
                 std::ostream& log);

struct SweepCell {
  int elements = 0;
  RisMode mode = RisMode::Active;
  bool ok = false;
  double total_energy = 0.0;
  double mean_hover_distance = 0.0;
  std::string error;
};

/// Worker count for sweeps: PLANNER_THREADS when set to a positive integer, otherwise the
/// hardware concurrency, never more than the number of cells.
int sweep_threads(std::size_t cells);

/// One optimize run per (M, mode), in the order given. A failing cell is recorded and the
/// others still run. With a non-empty out_dir each cell writes its run files to
/// out_dir/M<m>_<mode>/.
std::vector<SweepCell> sweep_elements(const Scenario& base, const std::vector<int>& elements,
                                      const std::string& out_dir = {},
                                      const std::vector<RisMode>& modes = {RisMode::Active, RisMode::Passive});

/// Columns M, mode, total_energy_J; failed cells are written as NaN.
std::string fig2_csv(const std::vector<SweepCell>& cells);

int cmd_sweep_elements(const std::string& scenario_path, const std::vector<int>& elements, const std::string& out_dir,
                       const Overrides& flags, std::ostream& log);

struct ValidationRow {
  std::string quantity;
  double closed_form = 0.0;  // model value (for the oracle row: the SCA objective)
  double estimate = 0.0;     // Monte Carlo mean or grid optimum
  double se = 0.0;           // 0 for the oracle row
  long long n = 0;           // samples or grid points
  std::string check;         // "3se", "rel<=1%" or "report"
  bool hard = true;          // reported only when false
  bool pass = true;

  double z() const;
  double rel() const;  // (closed_form - estimate) / |estimate|
};

/// Closed form against Monte Carlo for every user at one hover point of the initial plan,
/// plus the rate approximation (reported) and a brute-force phase check on a one-user,
/// one-element reduction of the scenario.
std::vector<ValidationRow> validation_table(const Scenario& sc, long samples, std::uint64_t seed);

std::string format_validation(const std::vector<ValidationRow>& rows);

/// Exit 0 iff every hard row passes; 3 when samples < montecarlo::kMinSamples.
int cmd_validate(const std::string& scenario_path, long samples, std::uint64_t seed, std::ostream& out);

}  // namespace uavris::cli
