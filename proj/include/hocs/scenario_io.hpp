#pragma once

// JSON scenario files. The layout is documented in docs/scenario_schema.md.

#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "hocs/model.hpp"

namespace hocs {

using nlohmann::json;

inline void to_json(json& j, const GridPoint& p) { j = json::array({p.x, p.y}); }
inline void from_json(const json& j, GridPoint& p) {
  if (!j.is_array() || j.size() != 2) throw std::invalid_argument("location must be an [x, y] array");
  p.x = j.at(0).get<double>();
  p.y = j.at(1).get<double>();
}

inline void to_json(json& j, const UniformRange& r) { j = json::array({r.lo, r.hi}); }
inline void from_json(const json& j, UniformRange& r) {
  if (j.is_number()) {
    r.lo = r.hi = j.get<double>();
    return;
  }
  if (!j.is_array() || j.size() != 2) throw std::invalid_argument("range must be a number or a [lo, hi] array");
  r.lo = j.at(0).get<double>();
  r.hi = j.at(1).get<double>();
}

inline void to_json(json& j, const Uav& u) {
  j = {{"id", u.id},         {"loc", u.loc},       {"speed", u.speed},      {"full_power", u.full_power},
       {"power", u.power},   {"uptime", u.uptime}, {"downtime", u.downtime}};
}
inline void from_json(const json& j, Uav& u) {
  u.id = j.at("id").get<int>();
  u.loc = j.at("loc").get<GridPoint>();
  u.speed = j.value("speed", 1.0);
  u.full_power = j.value("full_power", 30.0);
  u.power = j.value("power", u.full_power);
  u.uptime = j.at("uptime").get<double>();
  u.downtime = j.at("downtime").get<double>();
}

inline void to_json(json& j, const Worker& w) {
  j = {{"id", w.id}, {"loc", w.loc}, {"speed", w.speed}, {"uptime", w.uptime}, {"downtime", w.downtime}};
}
inline void from_json(const json& j, Worker& w) {
  w.id = j.at("id").get<int>();
  w.loc = j.at("loc").get<GridPoint>();
  w.speed = j.value("speed", 0.5);
  w.uptime = j.at("uptime").get<double>();
  w.downtime = j.at("downtime").get<double>();
}

inline void to_json(json& j, const Vehicle& v) {
  j = {{"id", v.id},         {"loc", v.loc},       {"speed", v.speed},
       {"charge_power", v.charge_power}, {"uptime", v.uptime}, {"downtime", v.downtime}};
}
inline void from_json(const json& j, Vehicle& v) {
  v.id = j.at("id").get<int>();
  v.loc = j.at("loc").get<GridPoint>();
  v.speed = j.value("speed", 1.0);
  v.charge_power = j.value("charge_power", 10.0);
  v.uptime = j.at("uptime").get<double>();
  v.downtime = j.at("downtime").get<double>();
}

inline void to_json(json& j, const Task& t) {
  j = {{"id", t.id}, {"loc", t.loc}, {"cost_power", t.cost_power}, {"completed", t.completed}};
}
inline void from_json(const json& j, Task& t) {
  t.id = j.at("id").get<int>();
  t.loc = j.at("loc").get<GridPoint>();
  t.cost_power = j.value("cost_power", 3.0);
  t.completed = j.value("completed", false);
}

inline void to_json(json& j, const ChargePoint& c) { j = {{"id", c.id}, {"loc", c.loc}}; }
inline void from_json(const json& j, ChargePoint& c) {
  c.id = j.at("id").get<int>();
  c.loc = j.at("loc").get<GridPoint>();
}

inline void to_json(json& j, const PerturbationConfig& p) {
  j = json::object();
  if (p.wind) j["wind"] = *p.wind;
  if (p.comms_cost) j["comms_cost"] = *p.comms_cost;
  if (p.failure_prob) j["failure_prob"] = *p.failure_prob;
  if (p.match_loss_prob) j["match_loss_prob"] = *p.match_loss_prob;
}
inline void from_json(const json& j, PerturbationConfig& p) {
  p = {};
  if (j.contains("wind") && !j["wind"].is_null()) p.wind = j["wind"].get<UniformRange>();
  if (j.contains("comms_cost") && !j["comms_cost"].is_null()) p.comms_cost = j["comms_cost"].get<UniformRange>();
  if (j.contains("failure_prob") && !j["failure_prob"].is_null()) p.failure_prob = j["failure_prob"].get<double>();
  if (j.contains("match_loss_prob") && !j["match_loss_prob"].is_null())
    p.match_loss_prob = j["match_loss_prob"].get<double>();
}

inline void to_json(json& j, const Scenario& s) {
  j = {{"format", "hocs-scenario"},
       {"version", 1},
       {"area", json::array({s.area.width, s.area.height})},
       {"interval", s.interval},
       {"limit_time", s.limit_time},
       {"weight_mode", to_string(s.weight_mode)},
       {"seed", s.seed},
       {"perturbations", s.perturbations},
       {"uavs", s.uavs},
       {"workers", s.workers},
       {"vehicles", s.vehicles},
       {"tasks", s.tasks},
       {"charges", s.charges}};
}

inline void from_json(const json& j, Scenario& s) {
  if (j.contains("format") && j["format"] != "hocs-scenario") throw std::invalid_argument("not a hocs-scenario document");
  if (j.value("version", 1) != 1) throw std::invalid_argument("unsupported scenario version");
  const auto& area = j.at("area");
  if (!area.is_array() || area.size() != 2) throw std::invalid_argument("area must be a [width, height] array");
  s.area = {area[0].get<double>(), area[1].get<double>()};
  s.interval = j.value("interval", 10.0);
  s.limit_time = j.value("limit_time", 180.0);
  s.weight_mode = parse_weight_mode(j.value("weight_mode", std::string("hierarchical")));
  s.seed = j.value("seed", std::uint64_t{0});
  s.perturbations = j.contains("perturbations") ? j["perturbations"].get<PerturbationConfig>() : PerturbationConfig{};
  s.uavs = j.value("uavs", std::vector<Uav>{});
  s.workers = j.value("workers", std::vector<Worker>{});
  s.vehicles = j.value("vehicles", std::vector<Vehicle>{});
  s.tasks = j.value("tasks", std::vector<Task>{});
  s.charges = j.value("charges", std::vector<ChargePoint>{});
}

/// Parses and validates; throws std::invalid_argument listing every problem.
inline Scenario scenario_from_json(const json& j) {
  Scenario s;
  try {
    s = j.get<Scenario>();
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed scenario: ") + e.what());
  }
  if (const auto v = validate_scenario(s); !v.empty()) {
    std::string msg = "invalid scenario:";
    for (const auto& e : v) msg += " " + e.str() + ";";
    throw std::invalid_argument(msg);
  }
  return s;
}

inline Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
  return scenario_from_json(j);
}

inline void save_scenario(const std::filesystem::path& path, const Scenario& s) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << json(s).dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace hocs
