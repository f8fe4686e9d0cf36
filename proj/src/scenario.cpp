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
#include "uavris/scenario.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

namespace uavris {

using nlohmann::json;

namespace {

[[noreturn]] void parse_fail(const std::string& msg) { throw ScenarioError(ScenarioError::Kind::Parse, msg); }
[[noreturn]] void invalid(const std::string& msg) { throw ScenarioError(ScenarioError::Kind::Validation, msg); }

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

// Tracks which keys of a config block were consumed so typos surface as errors.
class Block {
 public:
  Block(const json& j, std::string name) : j_(j), name_(std::move(name)) {
    if (!j_.is_object()) parse_fail("block '" + name_ + "' must be an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  const json& raw(const std::string& key) {
    used_.insert(key);
    return j_.at(key);
  }

  double number(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_number()) parse_fail(name_ + "." + key + " must be a number");
    return v.get<double>();
  }

  int integer(const std::string& key, int fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_number_integer()) parse_fail(name_ + "." + key + " must be an integer");
    return v.get<int>();
  }

  cplx point(const std::string& key, cplx fallback) {
    if (!has(key)) return fallback;
    return to_point(raw(key), name_ + "." + key);
  }

  // Scalar (broadcast) or per-user array.
  std::optional<std::vector<double>> per_user(const std::string& key) {
    if (!has(key)) return std::nullopt;
    const json& v = raw(key);
    if (v.is_number()) return std::vector<double>{v.get<double>()};
    if (!v.is_array() || v.empty()) parse_fail(name_ + "." + key + " must be a number or non-empty array");
    std::vector<double> out;
    for (const auto& e : v) {
      if (!e.is_number()) parse_fail(name_ + "." + key + " entries must be numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }

  Block sub(const std::string& key) {
    used_.insert(key);
    return Block(j_.at(key), name_ + "." + key);
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!used_.count(it.key())) parse_fail("unknown key '" + name_ + "." + it.key() + "'");
    }
  }

  static cplx to_point(const json& v, const std::string& where) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
      parse_fail(where + " must be a [x, y] pair");
    return {v[0].get<double>(), v[1].get<double>()};
  }

 private:
  const json& j_;
  std::string name_;
  std::set<std::string> used_;
};

std::optional<std::vector<double>> either(Block& b, const std::string& linear_key, const std::string& log_key,
                                          double (*convert)(double)) {
  if (b.has(linear_key) && b.has(log_key)) parse_fail("both '" + linear_key + "' and '" + log_key + "' given");
  if (auto v = b.per_user(log_key)) {
    for (double& x : *v) x = convert(x);
    return v;
  }
  return b.per_user(linear_key);
}

double either_scalar(Block& b, const std::string& linear_key, const std::string& log_key, double (*convert)(double),
                     double fallback) {
  if (b.has(linear_key) && b.has(log_key)) parse_fail("both '" + linear_key + "' and '" + log_key + "' given");
  if (b.has(log_key)) return convert(b.number(log_key, 0.0));
  return b.number(linear_key, fallback);
}

std::vector<double> broadcast(std::optional<std::vector<double>> v, double fallback, int k, const std::string& key) {
  if (!v) return std::vector<double>(static_cast<std::size_t>(k), fallback);
  if (v->size() == 1) return std::vector<double>(static_cast<std::size_t>(k), v->front());
  if (static_cast<int>(v->size()) != k) parse_fail(key + " has " + std::to_string(v->size()) + " entries for " +
                                                   std::to_string(k) + " users");
  return *v;
}

LinkTriple triple(Block& parent, const std::string& key, LinkTriple fallback) {
  if (!parent.has(key)) return fallback;
  if (parent.raw(key).is_number()) {
    double v = parent.raw(key).get<double>();
    return {v, v, v};
  }
  Block b = parent.sub(key);
  LinkTriple t{b.number("direct", fallback.direct), b.number("uav_ris", fallback.uav_ris),
               b.number("ris_user", fallback.ris_user)};
  b.finish();
  return t;
}

json point_json(cplx p) { return json::array({p.real(), p.imag()}); }

}  // namespace

std::string to_string(RisMode mode) { return mode == RisMode::Active ? "active" : "passive"; }

RisMode ris_mode_from_string(const std::string& text) {
  if (text == "active") return RisMode::Active;
  if (text == "passive") return RisMode::Passive;
  parse_fail("ris_mode must be 'active' or 'passive', got '" + text + "'");
}

double Scenario::total_tx_power() const { return std::accumulate(tx_power.begin(), tx_power.end(), 0.0); }

double Scenario::uav_radiated_power() const { return radiated_power.value_or(total_tx_power()); }

void Scenario::validate() const {
  const int k = num_users();
  if (k < 1) invalid("at least one user required");
  if (num_elements < 1) invalid("num_elements must be >= 1");
  if (num_segments < 2) invalid("num_segments must be >= 2");
  if (!(ris_height > 0.0) || !(uav_height > 0.0)) invalid("heights must be positive");
  if (!(uav_height > ris_height)) invalid("uav_height must exceed ris_height");
  if (!(split_ratio >= 0.0 && split_ratio <= 1.0)) invalid("split_ratio out of [0,1]");
  if (!(wavelength > 0.0)) invalid("wavelength must be positive");
  if (!(element_spacing > 0.0 && element_spacing <= wavelength)) invalid("element_spacing out of (0, wavelength]");
  if (!(reference_gain > 0.0)) invalid("reference_gain must be positive");
  if (!(noise_user > 0.0) || !(noise_ris > 0.0)) invalid("noise powers must be positive");
  if (!(ris_energy_budget >= 0.0)) invalid("ris_energy_budget must be non-negative");
  if (!(cruise_speed > 0.0)) invalid("cruise_speed must be positive");
  if (radiated_power && !(*radiated_power >= 0.0)) invalid("radiated_power_w must be non-negative");
  for (double r : {rician.direct, rician.uav_ris, rician.ris_user})
    if (!(r >= 0.0) || !std::isfinite(r)) invalid("rician factors must be finite and non-negative");
  for (double t : {pathloss_exponent.direct, pathloss_exponent.uav_ris, pathloss_exponent.ris_user})
    if (!(t > 0.0)) invalid("pathloss exponents must be positive");
  auto sized = [k](const std::vector<double>& v) { return static_cast<int>(v.size()) == k; };
  if (!sized(tx_power) || !sized(sinr_threshold) || !sized(energy_requirement))
    invalid("per-user vectors must have one entry per user");
  for (int i = 0; i < k; ++i) {
    if (!(tx_power[i] > 0.0)) invalid("tx_power must be positive");
    if (!(sinr_threshold[i] > 0.0)) invalid("sinr threshold must be positive");
    if (!(energy_requirement[i] >= 0.0)) invalid("energy requirement must be non-negative");
    const double margin = tx_power[i] - sinr_threshold[i] * (total_tx_power() - tx_power[i]);
    if (!(margin > 0.0))
      invalid("sinr threshold of user " + std::to_string(i + 1) + " unreachable: p_k - gamma_k * sum_{j!=k} p_j <= 0");
  }
  const auto& a = algorithm;
  if (!(a.tolerance > 0.0) || a.max_outer < 1 || a.max_trajectory < 1 || a.max_phase < 1)
    invalid("algorithm iteration caps must be >= 1 and tolerance positive");
  if (!(a.solver_tol > 0.0) || a.solver_max_iter < 1) invalid("solver settings must be positive");
}

Scenario Scenario::with_elements(int m) const {
  Scenario s = *this;
  s.num_elements = m;
  s.validate();
  return s;
}

Scenario Scenario::with_mode(RisMode m) const {
  Scenario s = *this;
  s.mode = m;
  return s;
}

Scenario reference_scenario() {
  Scenario sc;
  const double r = 15.0 * std::sqrt(2.0);
  sc.users = {{-30.0, 0.0}, {-r, r}, {0.0, 30.0}, {30.0, 0.0}, {r / 2.0, r / 2.0}};
  sc.tx_power.assign(5, 0.2);
  sc.sinr_threshold.assign(5, db_to_linear(-10.0));
  sc.energy_requirement.assign(5, 0.04e-3);
  return sc;
}

Scenario load_scenario(const std::string& config_text) {
  json root;
  try {
    root = json::parse(config_text);
  } catch (const json::parse_error& e) {
    parse_fail(std::string("malformed scenario: ") + e.what());
  }
  Block top(root, "scenario");
  Scenario sc = reference_scenario();
  const Scenario ref = sc;

  if (top.has("geometry")) {
    Block g = top.sub("geometry");
    sc.ris_position = g.point("ris_position", sc.ris_position);
    sc.ris_height = g.number("ris_height", sc.ris_height);
    sc.uav_height = g.number("uav_height", sc.uav_height);
    sc.uav_start = g.point("uav_start", sc.uav_start);
    sc.uav_end = g.point("uav_end", sc.uav_end);
    sc.num_segments = g.integer("num_segments", sc.num_segments);
    if (g.has("users")) {
      const json& u = g.raw("users");
      if (!u.is_array()) parse_fail("geometry.users must be an array of [x, y] pairs");
      sc.users.clear();
      for (const auto& p : u) sc.users.push_back(Block::to_point(p, "geometry.users"));
    }
    g.finish();
  }
  const int k = sc.num_users();

  if (top.has("rf")) {
    Block r = top.sub("rf");
    sc.num_elements = r.integer("num_elements", sc.num_elements);
    sc.wavelength = r.number("wavelength_m", sc.wavelength);
    sc.element_spacing = r.number("element_spacing_m", sc.element_spacing);
    sc.rician = triple(r, "rician_factor", sc.rician);
    sc.pathloss_exponent = triple(r, "pathloss_exponent", sc.pathloss_exponent);
    sc.reference_gain = either_scalar(r, "reference_gain", "reference_gain_db", db_to_linear, sc.reference_gain);
    auto dbm = [](double v) { return db_to_linear(v - 30.0); };
    sc.noise_user = either_scalar(r, "noise_user_w", "noise_user_dbm", +dbm, sc.noise_user);
    sc.noise_ris = either_scalar(r, "noise_ris_w", "noise_ris_dbm", +dbm, sc.noise_ris);
    if (r.has("ris_mode")) {
      const json& m = r.raw("ris_mode");
      if (!m.is_string()) parse_fail("rf.ris_mode must be a string");
      sc.mode = ris_mode_from_string(m.get<std::string>());
    }
    r.finish();
  }

  std::optional<std::vector<double>> tx, gamma, ereq;
  if (top.has("power")) {
    Block p = top.sub("power");
    tx = p.per_user("tx_power_w");
    sc.split_ratio = p.number("split_ratio", sc.split_ratio);
    gamma = either(p, "gamma", "gamma_db", db_to_linear);
    ereq = either(p, "e_req_j", "e_req_mj", +[](double mj) { return mj * 1e-3; });
    sc.ris_energy_budget = p.number("ris_energy_budget_j", sc.ris_energy_budget);
    if (p.has("radiated_power_w")) sc.radiated_power = p.number("radiated_power_w", 0.0);
    sc.cruise_speed = p.number("cruise_speed_mps", sc.cruise_speed);
    if (p.has("propulsion")) {
      Block q = p.sub("propulsion");
      auto& pr = sc.propulsion;
      pr.blade_profile_power = q.number("blade_profile_power_w", pr.blade_profile_power);
      pr.induced_power = q.number("induced_power_w", pr.induced_power);
      pr.tip_speed = q.number("tip_speed_mps", pr.tip_speed);
      pr.mean_rotor_velocity = q.number("mean_rotor_velocity_mps", pr.mean_rotor_velocity);
      pr.fuselage_drag_ratio = q.number("fuselage_drag_ratio", pr.fuselage_drag_ratio);
      pr.air_density = q.number("air_density_kgm3", pr.air_density);
      pr.rotor_solidity = q.number("rotor_solidity", pr.rotor_solidity);
      pr.rotor_disc_area = q.number("rotor_disc_area_m2", pr.rotor_disc_area);
      q.finish();
    }
    p.finish();
  }
  sc.tx_power = broadcast(tx, ref.tx_power.front(), k, "power.tx_power_w");
  sc.sinr_threshold = broadcast(gamma, ref.sinr_threshold.front(), k, "power.gamma");
  sc.energy_requirement = broadcast(ereq, ref.energy_requirement.front(), k, "power.e_req");

  if (top.has("algorithm")) {
    Block a = top.sub("algorithm");
    auto& al = sc.algorithm;
    al.tolerance = a.number("sigma", al.tolerance);
    al.max_outer = a.integer("x_max", al.max_outer);
    al.max_trajectory = a.integer("n_max", al.max_trajectory);
    al.max_phase = a.integer("r_max", al.max_phase);
    al.solver_tol = a.number("solver_tol", al.solver_tol);
    al.solver_max_iter = a.integer("solver_max_iter", al.solver_max_iter);
    if (a.has("seed")) {
      const json& s = a.raw("seed");
      if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0))
        parse_fail("algorithm.seed must be a non-negative integer");
      al.seed = s.get<std::uint64_t>();
    }
    a.finish();
  }
  top.finish();
  sc.validate();
  return sc;
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) parse_fail("scenario not found: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_scenario(buf.str());
}

std::string serialize_scenario(const Scenario& sc) {
  json users = json::array();
  for (cplx u : sc.users) users.push_back(point_json(u));
  auto trip = [](const LinkTriple& t) { return json{{"direct", t.direct}, {"uav_ris", t.uav_ris}, {"ris_user", t.ris_user}}; };
  const auto& pr = sc.propulsion;
  json power{{"tx_power_w", sc.tx_power},
             {"split_ratio", sc.split_ratio},
             {"gamma", sc.sinr_threshold},
             {"e_req_j", sc.energy_requirement},
             {"ris_energy_budget_j", sc.ris_energy_budget},
             {"cruise_speed_mps", sc.cruise_speed},
             {"propulsion",
              {{"blade_profile_power_w", pr.blade_profile_power},
               {"induced_power_w", pr.induced_power},
               {"tip_speed_mps", pr.tip_speed},
               {"mean_rotor_velocity_mps", pr.mean_rotor_velocity},
               {"fuselage_drag_ratio", pr.fuselage_drag_ratio},
               {"air_density_kgm3", pr.air_density},
               {"rotor_solidity", pr.rotor_solidity},
               {"rotor_disc_area_m2", pr.rotor_disc_area}}}};
  if (sc.radiated_power) power["radiated_power_w"] = *sc.radiated_power;
  const auto& al = sc.algorithm;
  json root{{"geometry",
             {{"ris_position", point_json(sc.ris_position)},
              {"ris_height", sc.ris_height},
              {"users", users},
              {"uav_height", sc.uav_height},
              {"uav_start", point_json(sc.uav_start)},
              {"uav_end", point_json(sc.uav_end)},
              {"num_segments", sc.num_segments}}},
            {"rf",
             {{"num_elements", sc.num_elements},
              {"wavelength_m", sc.wavelength},
              {"element_spacing_m", sc.element_spacing},
              {"rician_factor", trip(sc.rician)},
              {"pathloss_exponent", trip(sc.pathloss_exponent)},
              {"reference_gain", sc.reference_gain},
              {"noise_user_w", sc.noise_user},
              {"noise_ris_w", sc.noise_ris},
              {"ris_mode", to_string(sc.mode)}}},
            {"power", power},
            {"algorithm",
             {{"sigma", al.tolerance},
              {"x_max", al.max_outer},
              {"n_max", al.max_trajectory},
              {"r_max", al.max_phase},
              {"solver_tol", al.solver_tol},
              {"solver_max_iter", al.solver_max_iter},
              {"seed", al.seed}}}};
  return root.dump(2);
}

void FlightPlan::check(const Scenario& sc) const {
  if (static_cast<int>(positions.size()) != sc.num_segments + 1 || num_hover() != sc.num_hover())
    invalid("flight plan shape does not match scenario");
  if (positions.front() != sc.uav_start || positions.back() != sc.uav_end)
    invalid("flight plan endpoints differ from scenario endpoints");
  for (double t : hover_times)
    if (!(t >= 0.0) || !std::isfinite(t)) invalid("hover times must be finite and non-negative");
  for (cplx p : positions)
    if (!std::isfinite(p.real()) || !std::isfinite(p.imag())) invalid("hover positions must be finite");
}

void ReflectionPlan::check(const Scenario& sc) const {
  if (static_cast<int>(phi.size()) != sc.num_hover()) invalid("reflection plan needs one vector per hover point");
  for (const auto& v : phi) {
    if (static_cast<int>(v.size()) != sc.num_elements) invalid("reflection vector length differs from num_elements");
    for (cplx e : v) {
      if (!std::isfinite(e.real()) || !std::isfinite(e.imag())) invalid("reflection coefficients must be finite");
      if (sc.mode == RisMode::Passive && std::abs(e) > 1.0 + 1e-9) invalid("passive reflection amplitude exceeds 1");
    }
  }
}

LinkGeometry link_distances(const Scenario& sc, cplx q, int k) {
  const cplx user = sc.users.at(static_cast<std::size_t>(k));
  const double dh = sc.uav_height - sc.ris_height;
  LinkGeometry g{};
  g.d_direct = std::sqrt(std::norm(q - user) + sc.uav_height * sc.uav_height);
  g.d_uav_ris = std::sqrt(std::norm(q - sc.ris_position) + dh * dh);
  g.d_ris_user = std::sqrt(std::norm(user - sc.ris_position) + sc.ris_height * sc.ris_height);
  g.cos_aoa = (sc.ris_position.real() - q.real()) / g.d_uav_ris;
  g.cos_aod = (user.real() - sc.ris_position.real()) / g.d_ris_user;
  return g;
}

}  // namespace uavris
