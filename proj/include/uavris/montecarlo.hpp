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
#include <stdexcept>
#include <string>

#include "uavris/channel.hpp"
#include "uavris/scenario.hpp"

namespace uavris::montecarlo {

/// Fewer samples than this are rejected by every estimator.
inline constexpr long kMinSamples = 1000;

class InsufficientSamples : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class OracleError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Counter-based generator: every draw is a pure function of (seed, stream, counter), so the
/// samples do not depend on how the work is split across threads.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t bits(std::uint64_t counter) const;
  /// Uniform on (0, 1].
  double uniform(std::uint64_t counter) const;
  /// Circularly symmetric complex Gaussian with unit variance; consumes counters 2c and 2c+1.
  cplx complex_normal(std::uint64_t counter) const;

 private:
  std::uint64_t key_;
};

struct McEstimate {
  double mean = 0.0;
  double se = 0.0;  // sample standard deviation / sqrt(n)
  long n = 0;
  std::uint64_t seed = 0;

  /// (value - mean) / se, 0 when se vanishes and value matches.
  double z_score(double value) const;
};

/// E|g_{k,l}|^2 for g = g_r^H diag(phi) g_t + g_d, sampling the Rician channels directly.
McEstimate mc_second_moment(const Scenario& sc, int k, cplx hover, const Eigen::VectorXcd& phi, long n,
                            std::uint64_t seed);

/// noise_ris * E||g_r^H diag(phi)||^2.
McEstimate mc_ris_reflected_noise(const Scenario& sc, int k, const Eigen::VectorXcd& phi, long n,
                                  std::uint64_t seed);

/// E||diag(phi) s||^2 with s = sum_k sqrt(p_k) g_t x_k + n_ris.
McEstimate mc_ris_output_power(const Scenario& sc, cplx hover, const Eigen::VectorXcd& phi, long n,
                               std::uint64_t seed);

/// E log2(1 + instantaneous SINR) of user k with the UAV hovering at `hover`.
McEstimate mc_ergodic_rate(const Scenario& sc, int k, cplx hover, const Eigen::VectorXcd& phi, long n,
                           std::uint64_t seed);

struct OracleGrid {
  int phases = 720;
  int amplitudes = 200;
  /// Extra passes, each a grid of the same size spanning one step of the previous grid on
  /// either side of its best point.
  int refinements = 0;
};

inline constexpr double kMaxOraclePoints = 1e7;

struct OracleResult {
  ReflectionPlan phi;
  double objective = 0.0;  // min_k of the exact harvest ratio
  long long points = 0;    // grid points evaluated, feasible or not
  long long feasible = 0;
};

/// Largest per-element amplitude allowed by the RIS budget at hover l:
/// sqrt(E_ris / (t (P beta_t + noise_ris))). Passive mode returns 1.
double amplitude_bound(const Scenario& sc, const channel::ChannelStats& stats, const FlightPlan& plan, int l);

/// Exhaustive max-min of the exact harvest ratio over phases x amplitudes per element, subject
/// to the exact SINR and RIS constraints. Only for (L-1) M <= 2 and at most 1e7 points per pass.
OracleResult brute_force_phase_oracle(const Scenario& sc, const FlightPlan& plan, const OracleGrid& grid = {});

}  // namespace uavris::montecarlo
