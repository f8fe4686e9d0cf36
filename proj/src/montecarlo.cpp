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
#include "uavris/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <thread>
#include <vector>

#include "uavris/sca_phase.hpp"

namespace uavris::montecarlo {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void require_samples(long n) {
  if (n < kMinSamples)
    throw InsufficientSamples("insufficient samples: " + std::to_string(n) + " < " + std::to_string(kMinSamples));
}

constexpr long kChunk = 4096;

struct Moments {
  double sum = 0.0;
  double sq = 0.0;
};

// Samples are reduced in fixed chunks and the chunk sums are added in order, so the estimate is
// identical for any thread count.
template <class Sample>
McEstimate estimate(long n, std::uint64_t seed, Sample&& sample) {
  require_samples(n);
  const long chunks = (n + kChunk - 1) / kChunk;
  std::vector<Moments> part(static_cast<std::size_t>(chunks));
  std::atomic<long> next{0};
  auto work = [&] {
    for (long c; (c = next.fetch_add(1)) < chunks;) {
      Moments m;
      for (long i = c * kChunk, end = std::min(n, (c + 1) * kChunk); i < end; ++i) {
        const double v = sample(static_cast<std::uint64_t>(i));
        m.sum += v;
        m.sq += v * v;
      }
      part[static_cast<std::size_t>(c)] = m;
    }
  };
  const long workers = std::clamp<long>(std::thread::hardware_concurrency(), 1, chunks);
  {
    std::vector<std::jthread> pool;
    for (long w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
  }
  Moments total;
  for (const auto& m : part) {
    total.sum += m.sum;
    total.sq += m.sq;
  }
  McEstimate e;
  e.n = n;
  e.seed = seed;
  e.mean = total.sum / static_cast<double>(n);
  const double var = std::max(0.0, (total.sq - total.sum * e.mean) / static_cast<double>(n - 1));
  e.se = std::sqrt(var / static_cast<double>(n));
  return e;
}

// Line-of-sight responses of the uniform linear array.
struct LosLink {
  cplx g_d;
  Eigen::VectorXcd g_t;
  Eigen::VectorXcd g_r;
  double beta_d, beta_t, beta_r;
};

Eigen::VectorXcd ula(const Scenario& sc, double dist, double cos_angle) {
  const double w = 2.0 * std::numbers::pi / sc.wavelength;
  Eigen::VectorXcd v(sc.num_elements);
  for (int m = 0; m < sc.num_elements; ++m) v[m] = std::polar(1.0, -w * (dist + m * sc.element_spacing * cos_angle));
  return v;
}

LosLink los_link(const Scenario& sc, int k, cplx hover) {
  const LinkGeometry g = link_distances(sc, hover, k);
  const auto& tau = sc.pathloss_exponent;
  LosLink s;
  s.g_d = std::polar(1.0, -2.0 * std::numbers::pi * g.d_direct / sc.wavelength);
  s.g_t = ula(sc, g.d_uav_ris, g.cos_aoa);
  s.g_r = ula(sc, g.d_ris_user, g.cos_aod);
  s.beta_d = channel::pathloss(sc.reference_gain, g.d_direct, tau.direct);
  s.beta_t = channel::pathloss(sc.reference_gain, g.d_uav_ris, tau.uav_ris);
  s.beta_r = channel::pathloss(sc.reference_gain, g.d_ris_user, tau.ris_user);
  return s;
}

// One Rician draw: sqrt(beta) (sqrt(mu/(mu+1)) los + sqrt(1/(mu+1)) nlos).
struct RicianSampler {
  const Scenario& sc;
  LosLink los;
  CounterRng rng;
  std::uint64_t width;

  RicianSampler(const Scenario& s, int k, cplx hover, std::uint64_t seed, std::uint64_t stream)
      : sc(s), los(los_link(s, k, hover)), rng(seed, stream),
        width(2 + 3 * static_cast<std::uint64_t>(s.num_elements) + static_cast<std::uint64_t>(s.num_users())) {}

  static double los_weight(double mu) { return std::sqrt(mu / (mu + 1.0)); }
  static double nlos_weight(double mu) { return std::sqrt(1.0 / (mu + 1.0)); }

  cplx direct(std::uint64_t i) const {
    const double mu = sc.rician.direct;
    return std::sqrt(los.beta_d) * (los_weight(mu) * los.g_d + nlos_weight(mu) * rng.complex_normal(i * width));
  }
  Eigen::VectorXcd uav_ris(std::uint64_t i) const {
    const double mu = sc.rician.uav_ris;
    Eigen::VectorXcd v = los_weight(mu) * los.g_t;
    for (int m = 0; m < sc.num_elements; ++m)
      v[m] += nlos_weight(mu) * rng.complex_normal(i * width + 1 + static_cast<std::uint64_t>(m));
    return std::sqrt(los.beta_t) * v;
  }
  Eigen::VectorXcd ris_user(std::uint64_t i) const {
    const double mu = sc.rician.ris_user;
    Eigen::VectorXcd v = los_weight(mu) * los.g_r;
    for (int m = 0; m < sc.num_elements; ++m)
      v[m] += nlos_weight(mu) *
              rng.complex_normal(i * width + 1 + static_cast<std::uint64_t>(sc.num_elements + m));
    return std::sqrt(los.beta_r) * v;
  }
  // Counters past the channel entries: K symbols, then M RIS noise entries.
  cplx extra(std::uint64_t i, int j) const {
    return rng.complex_normal(i * width + 1 + 2 * static_cast<std::uint64_t>(sc.num_elements) + static_cast<std::uint64_t>(j));
  }
};

cplx composite(const RicianSampler& s, const Eigen::VectorXcd& phi, std::uint64_t i) {
  const Eigen::VectorXcd gt = s.uav_ris(i), gr = s.ris_user(i);
  return gr.dot(phi.cwiseProduct(gt)) + s.direct(i);
}

void check_phi(const Scenario& sc, const Eigen::VectorXcd& phi) {
  if (phi.size() != sc.num_elements) throw std::invalid_argument("phi must have M entries");
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : key_(splitmix64(splitmix64(seed) ^ (stream * 0xd1b54a32d192ed03ULL))) {}

std::uint64_t CounterRng::bits(std::uint64_t counter) const { return splitmix64(key_ ^ splitmix64(counter)); }

double CounterRng::uniform(std::uint64_t counter) const {
  return (static_cast<double>(bits(counter) >> 11) + 1.0) * 0x1.0p-53;
}

cplx CounterRng::complex_normal(std::uint64_t counter) const {
  // Box-Muller with variance 1/2 per component.
  const double r = std::sqrt(-std::log(uniform(2 * counter)));
  const double a = 2.0 * std::numbers::pi * uniform(2 * counter + 1);
  return {r * std::cos(a), r * std::sin(a)};
}

double McEstimate::z_score(double value) const {
  if (se > 0.0) return (value - mean) / se;
  return value == mean ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), value - mean);
}

McEstimate mc_second_moment(const Scenario& sc, int k, cplx hover, const Eigen::VectorXcd& phi, long n,
                            std::uint64_t seed) {
  check_phi(sc, phi);
  const RicianSampler s(sc, k, hover, seed, 1);
  return estimate(n, seed, [&](std::uint64_t i) { return std::norm(composite(s, phi, i)); });
}

McEstimate mc_ris_reflected_noise(const Scenario& sc, int k, const Eigen::VectorXcd& phi, long n,
                                  std::uint64_t seed) {
  check_phi(sc, phi);
  // The RIS-user link does not depend on the UAV position.
  const RicianSampler s(sc, k, sc.ris_position, seed, 2);
  const double noise = sc.ris_noise();
  return estimate(n, seed, [&](std::uint64_t i) { return noise * s.ris_user(i).cwiseProduct(phi).squaredNorm(); });
}

McEstimate mc_ris_output_power(const Scenario& sc, cplx hover, const Eigen::VectorXcd& phi, long n,
                               std::uint64_t seed) {
  check_phi(sc, phi);
  const RicianSampler s(sc, 0, hover, seed, 3);
  const double noise_std = std::sqrt(sc.ris_noise());
  const int users = sc.num_users();
  return estimate(n, seed, [&](std::uint64_t i) {
    const Eigen::VectorXcd gt = s.uav_ris(i);
    cplx mix = 0.0;
    for (int k = 0; k < users; ++k) mix += std::sqrt(sc.tx_power[static_cast<std::size_t>(k)]) * s.extra(i, k);
    Eigen::VectorXcd x = gt * mix;
    for (int m = 0; m < sc.num_elements; ++m)
      x[m] += noise_std * s.extra(i, users + m);
    return x.cwiseProduct(phi).squaredNorm();
  });
}

McEstimate mc_ergodic_rate(const Scenario& sc, int k, cplx hover, const Eigen::VectorXcd& phi, long n,
                           std::uint64_t seed) {
  check_phi(sc, phi);
  const RicianSampler s(sc, k, hover, seed, 4);
  const double eta = sc.split_ratio;
  const double pk = sc.tx_power.at(static_cast<std::size_t>(k));
  const double others = sc.total_tx_power() - pk;
  const double noise_ris = sc.ris_noise();
  return estimate(n, seed, [&](std::uint64_t i) {
    const Eigen::VectorXcd gt = s.uav_ris(i), gr = s.ris_user(i);
    const double g2 = std::norm(gr.dot(phi.cwiseProduct(gt)) + s.direct(i));
    const double reflected = noise_ris * gr.cwiseProduct(phi).squaredNorm();
    return std::log2(1.0 + eta * pk * g2 / (eta * others * g2 + reflected + sc.noise_user));
  });
}

double amplitude_bound(const Scenario& sc, const channel::ChannelStats& stats, const FlightPlan& plan, int l) {
  if (sc.mode == RisMode::Passive) return 1.0;
  const double t = plan.hover_times.at(static_cast<std::size_t>(l));
  const double per_unit = sc.total_tx_power() * stats.at(0, l).beta_t + sc.ris_noise();
  return std::sqrt(sc.ris_energy_budget / (t * per_unit));
}

OracleResult brute_force_phase_oracle(const Scenario& sc, const FlightPlan& plan, const OracleGrid& grid) {
  const int hov = plan.num_hover(), m_el = sc.num_elements, users = sc.num_users();
  const int vars = hov * m_el;
  if (vars > 2) throw OracleError("brute-force oracle needs (L-1) M <= 2, got " + std::to_string(vars));
  if (grid.phases < 1 || grid.amplitudes < 2) throw OracleError("grid needs at least 1 phase and 2 amplitudes");
  const double per_var = static_cast<double>(grid.phases) * grid.amplitudes;
  const double total = std::pow(per_var, vars);
  if (total > kMaxOraclePoints) throw OracleError("grid too large: " + std::to_string(total) + " points");

  const channel::ChannelStats stats(sc, plan);
  std::vector<double> bound(static_cast<std::size_t>(hov)), weight(static_cast<std::size_t>(users), 0.0);
  for (int l = 0; l < hov; ++l) bound[static_cast<std::size_t>(l)] = amplitude_bound(sc, stats, plan, l);
  for (int k = 0; k < users; ++k) {
    const auto uk = static_cast<std::size_t>(k);
    if (sc.energy_requirement[uk] > 0.0)
      weight[uk] = (1.0 - sc.split_ratio) * sc.tx_power[uk] / sc.energy_requirement[uk];
  }

  // Per-variable search window: amplitude [lo, hi] and phase [start, start + span).
  struct Window {
    double amp_lo, amp_hi, phase_start, phase_span;
  };
  std::vector<Window> win;
  for (int v = 0; v < vars; ++v) win.push_back({0.0, bound[static_cast<std::size_t>(v / m_el)], 0.0, 2.0 * std::numbers::pi});

  OracleResult best;
  best.objective = -std::numeric_limits<double>::infinity();
  const long long count = static_cast<long long>(std::llround(total));
  const long long pv = static_cast<long long>(per_var);
  std::vector<Eigen::VectorXcd> phi(static_cast<std::size_t>(hov), Eigen::VectorXcd::Zero(m_el));
  std::vector<double> best_amp(static_cast<std::size_t>(vars), 0.0), best_phase(static_cast<std::size_t>(vars), 0.0);
  for (int pass = 0; pass <= grid.refinements; ++pass) {
    const bool full_circle = pass == 0;
    auto amp_of = [&](int v, long long cell) {
      const auto& w = win[static_cast<std::size_t>(v)];
      return w.amp_lo + (w.amp_hi - w.amp_lo) * static_cast<double>(cell / grid.phases) / (grid.amplitudes - 1);
    };
    auto phase_of = [&](int v, long long cell) {
      const auto& w = win[static_cast<std::size_t>(v)];
      const int steps = full_circle ? grid.phases : std::max(1, grid.phases - 1);
      return w.phase_start + w.phase_span * static_cast<double>(cell % grid.phases) / steps;
    };
    for (long long idx = 0; idx < count; ++idx) {
      long long rest = idx;
      for (int v = 0; v < vars; ++v) {
        const long long cell = rest % pv;
        rest /= pv;
        phi[static_cast<std::size_t>(v / m_el)][v % m_el] = std::polar(amp_of(v, cell), phase_of(v, cell));
      }
      ++best.points;
      bool ok = true;
      for (int l = 0; l < hov && ok; ++l) {
        const auto& p = phi[static_cast<std::size_t>(l)];
        const double b = bound[static_cast<std::size_t>(l)];
        if (p.squaredNorm() > b * b * (1.0 + 1e-12)) ok = false;
        for (int k = 0; k < users && ok; ++k)
          if (channel::sinr(sc, stats, p, k, l) < sc.sinr_threshold[static_cast<std::size_t>(k)]) ok = false;
      }
      if (!ok) continue;
      ++best.feasible;
      double worst = std::numeric_limits<double>::infinity();
      bool any = false;
      for (int k = 0; k < users; ++k) {
        if (weight[static_cast<std::size_t>(k)] == 0.0) continue;
        double h = 0.0;
        for (int l = 0; l < hov; ++l)
          h += plan.hover_times[static_cast<std::size_t>(l)] * stats.at(k, l).second_moment(phi[static_cast<std::size_t>(l)]);
        worst = std::min(worst, weight[static_cast<std::size_t>(k)] * h);
        any = true;
      }
      if (!any) worst = 0.0;
      if (worst > best.objective) {
        best.objective = worst;
        best.phi.phi.clear();
        for (const auto& p : phi) best.phi.phi.push_back(channel::from_eigen(p));
        for (int v = 0; v < vars; ++v) {
          const cplx c = phi[static_cast<std::size_t>(v / m_el)][v % m_el];
          best_amp[static_cast<std::size_t>(v)] = std::abs(c);
          best_phase[static_cast<std::size_t>(v)] = std::arg(c);
        }
      }
    }
    if (best.feasible == 0 || pass == grid.refinements) break;
    // Zoom: one previous step on each side of the best point.
    for (int v = 0; v < vars; ++v) {
      auto& w = win[static_cast<std::size_t>(v)];
      const double a_step = (w.amp_hi - w.amp_lo) / (grid.amplitudes - 1);
      const double p_step = w.phase_span / (full_circle ? grid.phases : std::max(1, grid.phases - 1));
      const double a = best_amp[static_cast<std::size_t>(v)], ph = best_phase[static_cast<std::size_t>(v)];
      const double cap = bound[static_cast<std::size_t>(v / m_el)];
      w = {std::max(0.0, a - a_step), std::min(cap, a + a_step), ph - p_step, 2.0 * p_step};
    }
  }
  if (best.feasible == 0) throw OracleError("no grid point satisfies the SINR and RIS constraints");
  return best;
}

}  // namespace uavris::montecarlo
