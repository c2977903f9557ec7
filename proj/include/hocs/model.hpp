#pragma once

// Domain types for the crowdsensing scheduling problem: agents, tasks,
// charging points and the scenario that bundles them, plus the distance,
// time-quantization and energy-feasibility predicates every other module
// builds on.
//
// Units: positions and energy are in kilometres (1 km of flight costs one
// unit of power), times in minutes, speeds in km per minute.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hocs {

struct GridPoint {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const GridPoint&, const GridPoint&) = default;
};

struct Area {
  double width = 0.0;
  double height = 0.0;

  bool contains(const GridPoint& p) const {
    return p.x >= 0.0 && p.y >= 0.0 && p.x <= width && p.y <= height;
  }
};

struct Uav {
  int id = 0;
  GridPoint loc;
  double speed = 1.0;        // km / min
  double full_power = 30.0;  // km of range when fully charged
  double power = 30.0;       // km of range left
  double uptime = 0.0;
  double downtime = 0.0;
};

struct Worker {
  int id = 0;
  GridPoint loc;
  double speed = 0.5;
  double uptime = 0.0;
  double downtime = 0.0;
};

struct Vehicle {
  int id = 0;
  GridPoint loc;
  double speed = 1.0;
  double charge_power = 10.0;  // km of range restored per minute
  double uptime = 0.0;
  double downtime = 0.0;
};

struct Task {
  int id = 0;
  GridPoint loc;
  double cost_power = 3.0;
  bool completed = false;
};

struct ChargePoint {
  int id = 0;
  GridPoint loc;
};

enum class WeightMode { hierarchical, uniform };

inline const char* to_string(WeightMode m) {
  return m == WeightMode::hierarchical ? "hierarchical" : "uniform";
}

inline WeightMode parse_weight_mode(const std::string& s) {
  if (s == "hierarchical") return WeightMode::hierarchical;
  if (s == "uniform") return WeightMode::uniform;
  throw std::invalid_argument("unknown weight mode: " + s);
}

/// Inclusive [lo, hi] range for uniformly drawn perturbation magnitudes.
struct UniformRange {
  double lo = 0.0;
  double hi = 0.0;

  friend bool operator==(const UniformRange&, const UniformRange&) = default;
};

struct PerturbationConfig {
  std::optional<UniformRange> wind;        // extra energy per km flown
  std::optional<UniformRange> comms_cost;  // energy drained per UAV per epoch
  std::optional<double> failure_prob;      // per agent, per epoch, permanent
  std::optional<double> match_loss_prob;   // per committed joint action

  bool any() const {
    return wind || comms_cost || failure_prob || match_loss_prob;
  }

  friend bool operator==(const PerturbationConfig&, const PerturbationConfig&) = default;
};

struct Scenario {
  Area area;
  std::vector<Uav> uavs;
  std::vector<Worker> workers;
  std::vector<Vehicle> vehicles;
  std::vector<Task> tasks;
  std::vector<ChargePoint> charges;
  double interval = 10.0;
  double limit_time = 180.0;
  WeightMode weight_mode = WeightMode::hierarchical;
  PerturbationConfig perturbations;
  std::uint64_t seed = 0;
};

/// Euclidean distance in km.
inline double distance(const GridPoint& a, const GridPoint& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

/// Smallest positive multiple of `interval` that is >= t. A zero duration
/// still occupies one full interval so the per-interval benefit ratios never
/// divide by zero.
inline double ceil_to_interval(double t, double interval) {
  if (!(interval > 0.0)) throw std::invalid_argument("ceil_to_interval: interval must be positive");
  if (t < 0.0) throw std::invalid_argument("ceil_to_interval: negative duration");
  const double n = std::ceil(t / interval);
  return std::max(1.0, n) * interval;
}

inline double travel_time(const GridPoint& from, const GridPoint& to, double speed) {
  return distance(from, to) / speed;
}

/// Shortest distance from p to any charging point; +inf when there are none.
inline double nearest_charge_distance(const GridPoint& p, std::span<const ChargePoint> charges) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& c : charges) best = std::min(best, distance(p, c.loc));
  return best;
}

/// The UAV can fly to the task, execute it and still reach some charging
/// point on its remaining power.
inline bool task_feasible(const Uav& u, const Task& task, std::span<const ChargePoint> charges) {
  if (charges.empty()) return false;
  const double need = distance(u.loc, task.loc) + task.cost_power + nearest_charge_distance(task.loc, charges);
  return need <= u.power;
}

inline bool charge_feasible(const Uav& u, const ChargePoint& c) {
  return distance(u.loc, c.loc) <= u.power;
}

/// One failed check of validate_scenario.
struct Violation {
  std::string path;
  std::string message;

  std::string str() const { return path.empty() ? message : path + ": " + message; }
};

inline std::vector<Violation> validate_scenario(const Scenario& s) {
  std::vector<Violation> out;
  auto fail = [&out](std::string path, std::string msg) { out.push_back({std::move(path), std::move(msg)}); };
  auto where = [](const char* kind, std::size_t i) { return std::string(kind) + "[" + std::to_string(i) + "]"; };

  if (!(s.area.width > 0.0) || !(s.area.height > 0.0)) fail("area", "area must have positive width and height");
  if (!(s.interval > 0.0)) {
    fail("interval", "interval must be positive");
  } else if (!(s.limit_time > 0.0)) {
    fail("limit_time", "limit_time must be positive");
  } else {
    const double k = s.limit_time / s.interval;
    if (std::abs(k - std::round(k)) > 1e-9) fail("limit_time", "limit_time must be a multiple of interval");
  }

  auto window = [&](const std::string& p, double up, double down) {
    if (!(up < down)) fail(p, "uptime must be before downtime");
    if (up < 0.0) fail(p, "uptime must be nonnegative");
  };
  auto located = [&](const std::string& p, const GridPoint& g) {
    if (!s.area.contains(g)) fail(p, "location outside area");
  };

  for (std::size_t i = 0; i < s.uavs.size(); ++i) {
    const auto& u = s.uavs[i];
    const auto p = where("uavs", i);
    if (u.id != static_cast<int>(i)) fail(p, "id must equal its index");
    located(p, u.loc);
    window(p, u.uptime, u.downtime);
    if (!(u.speed > 0.0)) fail(p, "speed must be positive");
    if (!(u.full_power > 0.0)) fail(p, "full_power must be positive");
    if (u.power < 0.0) fail(p, "power must be nonnegative");
    if (u.power > u.full_power) fail(p, "power exceeds full_power");
  }
  for (std::size_t i = 0; i < s.workers.size(); ++i) {
    const auto& w = s.workers[i];
    const auto p = where("workers", i);
    if (w.id != static_cast<int>(i)) fail(p, "id must equal its index");
    located(p, w.loc);
    window(p, w.uptime, w.downtime);
    if (!(w.speed > 0.0)) fail(p, "speed must be positive");
  }
  for (std::size_t i = 0; i < s.vehicles.size(); ++i) {
    const auto& v = s.vehicles[i];
    const auto p = where("vehicles", i);
    if (v.id != static_cast<int>(i)) fail(p, "id must equal its index");
    located(p, v.loc);
    window(p, v.uptime, v.downtime);
    if (!(v.speed > 0.0)) fail(p, "speed must be positive");
    if (!(v.charge_power > 0.0)) fail(p, "charge_power must be positive");
  }
  for (std::size_t i = 0; i < s.tasks.size(); ++i) {
    const auto& t = s.tasks[i];
    const auto p = where("tasks", i);
    if (t.id != static_cast<int>(i)) fail(p, "id must equal its index");
    located(p, t.loc);
    if (t.cost_power < 0.0) fail(p, "cost_power must be nonnegative");
  }
  for (std::size_t i = 0; i < s.charges.size(); ++i) {
    const auto p = where("charges", i);
    if (s.charges[i].id != static_cast<int>(i)) fail(p, "id must equal its index");
    located(p, s.charges[i].loc);
  }

  const auto& pc = s.perturbations;
  auto range = [&](const char* p, const std::optional<UniformRange>& r) {
    if (r && (r->lo < 0.0 || r->hi < r->lo)) fail(p, "range must satisfy 0 <= lo <= hi");
  };
  auto prob = [&](const char* p, const std::optional<double>& q) {
    if (q && (*q < 0.0 || *q > 1.0)) fail(p, "probability must lie in [0, 1]");
  };
  range("perturbations.wind", pc.wind);
  range("perturbations.comms_cost", pc.comms_cost);
  prob("perturbations.failure_prob", pc.failure_prob);
  prob("perturbations.match_loss_prob", pc.match_loss_prob);
  return out;
}

}  // namespace hocs
