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
#include "uavris/cli.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <thread>

#include "uavris/energy.hpp"
#include "uavris/sca_phase.hpp"

namespace uavris::cli {

namespace fs = std::filesystem;

namespace {

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

Scenario single_user(const Scenario& sc, int k) {
  Scenario out = sc;
  const auto uk = static_cast<std::size_t>(k);
  out.users = {sc.users[uk]};
  out.tx_power = {sc.tx_power[uk]};
  out.sinr_threshold = {sc.sinr_threshold[uk]};
  out.energy_requirement = {sc.energy_requirement[uk]};
  return out;
}

std::string cell_dir(int elements, RisMode mode) { return fmt::format("M{}_{}", elements, to_string(mode)); }

}  // namespace

Scenario Overrides::apply(Scenario sc) const {
  if (mode) sc = sc.with_mode(*mode);
  if (elements) sc = sc.with_elements(*elements);
  if (seed) sc.algorithm.seed = *seed;
  sc.validate();
  return sc;
}

std::string trajectory_csv(const FlightPlan& plan) {
  // Rows 0 and L are the fixed start and end points; they carry no hover time.
  std::string out = "l,x_m,y_m,t_s\n";
  const int last = static_cast<int>(plan.positions.size()) - 1;
  for (int l = 0; l <= last; ++l) {
    const cplx q = plan.positions[static_cast<std::size_t>(l)];
    const double t = (l == 0 || l == last) ? 0.0 : plan.hover_times[static_cast<std::size_t>(l - 1)];
    out += fmt::format("{},{:.10g},{:.10g},{:.10g}\n", l, q.real(), q.imag(), t);
  }
  return out;
}

std::string phi_csv(const ReflectionPlan& phi) {
  std::string out = "l,m,amplitude,phase_rad\n";
  for (std::size_t l = 0; l < phi.phi.size(); ++l)
    for (std::size_t m = 0; m < phi.phi[l].size(); ++m)
      out += fmt::format("{},{},{:.10g},{:.10g}\n", l + 1, m + 1, std::abs(phi.phi[l][m]), std::arg(phi.phi[l][m]));
  return out;
}

std::string summary_text(const Scenario& sc, const optimizer::RunResult& run) {
  const auto uav = energy::uav_total_energy(sc, run.plan);
  const auto& e = run.energy;
  std::string out;
  out += fmt::format("mode: {}\n", to_string(sc.mode));
  out += fmt::format("elements: {}\n", sc.num_elements);
  out += fmt::format("hover_points: {}\n", run.plan.num_hover());
  out += fmt::format("total_energy_J: {:.6f}\n", e.total);
  out += fmt::format("uav_energy_J: {:.6f}\n", uav.total);
  out += fmt::format("flight_J: {:.6f}\n", e.flight);
  out += fmt::format("hover_J: {:.6f}\n", e.hover);
  out += fmt::format("radiated_J: {:.6f}\n", e.radiated);
  out += fmt::format("ris_J: {:.6f}\n", e.ris);
  out += fmt::format("initial_energy_J: {:.6f}\n", run.initial_energy);
  out += fmt::format("outer_iterations: {}\n", run.outer.size());
  out += fmt::format("objective_fluctuation: {:.6f}\n", run.fluctuation);
  out += fmt::format("repaired_fluctuation: {:.6f}\n", run.repaired_fluctuation);
  out += fmt::format("mean_hover_distance_to_ris_m: {:.6f}\n", optimizer::mean_hover_distance_to_ris(sc, run.plan));
  out += fmt::format("termination: {}\n", run.termination);
  return out;
}

void write_run(const std::string& out_dir, const Scenario& sc, const optimizer::RunResult& run) {
  const fs::path dir(out_dir);
  fs::create_directories(dir);
  write_file(dir / "trajectory.csv", trajectory_csv(run.plan));
  write_file(dir / "phi.csv", phi_csv(run.phi));
  write_file(dir / "trace.jsonl", optimizer::trace_jsonl(run));
  write_file(dir / "summary.txt", summary_text(sc, run));
}

int cmd_optimize(const std::string& scenario_path, const std::string& out_dir, const Overrides& flags,
                 std::ostream& log) {
  Scenario sc;
  try {
    sc = flags.apply(load_scenario_file(scenario_path));
  } catch (const ScenarioError& e) {
    log << "error: " << e.what() << '\n';
    return kBadScenario;
  }
  try {
    const auto run = optimizer::run_algorithm1(sc);
    write_run(out_dir, sc, run);
    log << fmt::format("total energy {:.3f} J after {} outer iterations ({})\n", run.energy.total, run.outer.size(),
                       run.termination);
    if (run.failed) {
      log << "error: " << run.termination << '\n';
      return kFailure;
    }
    return kOk;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return kFailure;
  }
}

int sweep_threads(std::size_t cells) {
  long n = static_cast<long>(std::thread::hardware_concurrency());
  if (const char* env = std::getenv("PLANNER_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) n = v;
  }
  return static_cast<int>(std::clamp<long>(n, 1, std::max<long>(1, static_cast<long>(cells))));
}

std::vector<SweepCell> sweep_elements(const Scenario& base, const std::vector<int>& elements,
                                      const std::string& out_dir, const std::vector<RisMode>& modes) {
  std::vector<SweepCell> cells;
  for (int m : elements)
    for (RisMode mode : modes) cells.push_back({m, mode, false, 0.0, 0.0, {}});
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < cells.size();) {
      auto& c = cells[i];
      try {
        const Scenario sc = base.with_mode(c.mode).with_elements(c.elements);
        const auto run = optimizer::run_algorithm1(sc);
        if (!out_dir.empty()) write_run((fs::path(out_dir) / cell_dir(c.elements, c.mode)).string(), sc, run);
        c.total_energy = run.energy.total;
        c.mean_hover_distance = optimizer::mean_hover_distance_to_ris(sc, run.plan);
        c.ok = !run.failed;
        if (run.failed) c.error = run.termination;
      } catch (const std::exception& e) {
        c.ok = false;
        c.error = e.what();
      }
    }
  };
  const int workers = sweep_threads(cells.size());
  {
    std::vector<std::jthread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
  }
  return cells;
}

std::string fig2_csv(const std::vector<SweepCell>& cells) {
  std::string out = "M,mode,total_energy_J\n";
  for (const auto& c : cells) {
    if (c.ok)
      out += fmt::format("{},{},{:.6f}\n", c.elements, to_string(c.mode), c.total_energy);
    else
      out += fmt::format("{},{},nan\n", c.elements, to_string(c.mode));
  }
  return out;
}

int cmd_sweep_elements(const std::string& scenario_path, const std::vector<int>& elements, const std::string& out_dir,
                       const Overrides& flags, std::ostream& log) {
  Scenario sc;
  try {
    Overrides base = flags;
    base.elements.reset();
    base.mode.reset();
    sc = base.apply(load_scenario_file(scenario_path));
  } catch (const ScenarioError& e) {
    log << "error: " << e.what() << '\n';
    return kBadScenario;
  }
  if (elements.empty()) {
    log << "error: no element counts given\n";
    return kFailure;
  }
  std::vector<RisMode> modes{RisMode::Active, RisMode::Passive};
  if (flags.mode) modes = {*flags.mode};
  const auto cells = sweep_elements(sc, elements, out_dir, modes);
  try {
    fs::create_directories(out_dir);
    write_file(fs::path(out_dir) / "fig2_data.csv", fig2_csv(cells));
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return kFailure;
  }
  bool all_ok = true;
  for (const auto& c : cells) {
    if (c.ok) {
      log << fmt::format("M={} {}: {:.3f} J, mean hover distance {:.3f} m\n", c.elements, to_string(c.mode),
                         c.total_energy, c.mean_hover_distance);
    } else {
      log << fmt::format("M={} {}: failed: {}\n", c.elements, to_string(c.mode), c.error);
      all_ok = false;
    }
  }
  return all_ok ? kOk : kFailure;
}

double ValidationRow::z() const {
  if (se > 0.0) return (closed_form - estimate) / se;
  return closed_form == estimate ? 0.0 : std::numeric_limits<double>::infinity();
}

double ValidationRow::rel() const {
  if (estimate == 0.0) return closed_form == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return (closed_form - estimate) / std::abs(estimate);
}

std::vector<ValidationRow> validation_table(const Scenario& sc, long samples, std::uint64_t seed) {
  if (samples < montecarlo::kMinSamples)
    throw montecarlo::InsufficientSamples("insufficient samples: " + std::to_string(samples) + " < " +
                                          std::to_string(montecarlo::kMinSamples));
  const auto init = optimizer::initialize(sc);
  const channel::ChannelStats stats(sc, init.plan);
  const int hov = init.plan.num_hover();
  std::vector<ValidationRow> rows;
  std::uint64_t stream = 0;
  auto mc_row = [&](std::string name, double closed, const montecarlo::McEstimate& e) {
    ValidationRow r{std::move(name), closed, e.mean, e.se, e.n, "3se"};
    r.pass = std::abs(r.z()) <= 3.0;
    rows.push_back(std::move(r));
  };

  for (int k = 0; k < sc.num_users(); ++k) {
    const int l = k % hov;
    const Eigen::VectorXcd phi = channel::to_eigen(init.phi.phi[static_cast<std::size_t>(l)]);
    const auto& link = stats.at(k, l);
    mc_row(fmt::format("E|g|^2 user {} hover {}", k + 1, l + 1), link.second_moment(phi),
           montecarlo::mc_second_moment(sc, k, init.plan.hover(l), phi, samples, seed + stream++));
    mc_row(fmt::format("RIS noise at user {}", k + 1), channel::ris_reflected_noise_power(sc, link.beta_r, phi),
           montecarlo::mc_ris_reflected_noise(sc, k, phi, samples, seed + stream++));
  }
  for (int l = 0; l < hov; ++l) {
    const Eigen::VectorXcd phi = channel::to_eigen(init.phi.phi[static_cast<std::size_t>(l)]);
    mc_row(fmt::format("RIS output power hover {}", l + 1), channel::ris_output_power(sc, stats.at(0, l).beta_t, phi),
           montecarlo::mc_ris_output_power(sc, init.plan.hover(l), phi, samples, seed + stream++));
  }
  for (int k = 0; k < sc.num_users(); ++k) {
    const int l = k % hov;
    const Eigen::VectorXcd phi = channel::to_eigen(init.phi.phi[static_cast<std::size_t>(l)]);
    const auto e = montecarlo::mc_ergodic_rate(sc, k, init.plan.hover(l), phi, samples, seed + stream++);
    ValidationRow r{fmt::format("rate user {} hover {}", k + 1, l + 1), std::log2(1.0 + channel::sinr(sc, stats, phi, k, l)),
                    e.mean, e.se, e.n, "report", false};
    rows.push_back(std::move(r));
  }

  // Phase SCA against exhaustive search on a one-user, one-element, one-hover reduction.
  {
    Scenario tiny = single_user(sc, 0).with_elements(1);
    tiny.num_segments = 2;
    FlightPlan plan{{tiny.uav_start, init.plan.hover(0), tiny.uav_end}, {init.plan.hover_times[0]}};
    const channel::ChannelStats ts(tiny, plan);
    const auto ph = phase::solve_phase_sca(tiny, ts, plan, phase::initial_reflection(tiny, ts, plan),
                                           phase::phase_options(tiny));
    montecarlo::OracleGrid grid;
    grid.refinements = 2;
    const auto oracle = montecarlo::brute_force_phase_oracle(tiny, plan, grid);
    ValidationRow r{"phase SCA vs grid, M=1 K=1", ph.objective, oracle.objective, 0.0, oracle.points, "rel<=1%"};
    r.pass = ph.feasible && std::abs(r.rel()) <= 0.01;
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string format_validation(const std::vector<ValidationRow>& rows) {
  std::string out = fmt::format("{:<30} {:>15} {:>15}   {:<11} {:>8} {:>10}  {}\n", "quantity", "closed-form", "MC mean",
                                "+- SE", "z", "rel", "check");
  for (const auto& r : rows) {
    const std::string verdict = !r.hard ? r.check : fmt::format("{} {}", r.check, r.pass ? "pass" : "FAIL");
    out += fmt::format("{:<30} {:>15.8g} {:>15.8g}   {:<11.3g} {:>8.3f} {:>10.2e}  {}\n", r.quantity, r.closed_form,
                       r.estimate, r.se, r.se > 0.0 ? r.z() : 0.0, r.rel(), verdict);
  }
  return out;
}

int cmd_validate(const std::string& scenario_path, long samples, std::uint64_t seed, std::ostream& out) {
  Scenario sc;
  try {
    sc = load_scenario_file(scenario_path);
  } catch (const ScenarioError& e) {
    out << "error: " << e.what() << '\n';
    return kBadScenario;
  }
  try {
    const auto rows = validation_table(sc, samples, seed);
    out << format_validation(rows);
    bool ok = true;
    for (const auto& r : rows) ok = ok && (!r.hard || r.pass);
    out << (ok ? "all hard checks passed\n" : "some hard checks failed\n");
    return ok ? kOk : kFailure;
  } catch (const montecarlo::InsufficientSamples& e) {
    out << "warning: " << e.what() << '\n';
    return kInsufficientSamples;
  } catch (const std::exception& e) {
    out << "error: " << e.what() << '\n';
    return kFailure;
  }
}

}  // namespace uavris::cli
