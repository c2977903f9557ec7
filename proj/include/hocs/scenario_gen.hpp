#pragma once

// Random scenario generation over a rectangular area.
//
// Tasks and agents are placed uniformly at random; charging points occupy
// distinct unit-cell centres. Each agent is online for a window of fixed
// length starting uniformly in [0, limit_time - online].

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hocs/model.hpp"
#include "hocs/random.hpp"

namespace hocs {

struct GenParams {
  double width = 30.0;
  double height = 30.0;
  int tasks_n = 120;
  int charges_n = 20;
  int workers_n = 50;
  int uavs_n = 30;
  int vehicles_n = 20;
  std::optional<double> online_minutes = 60.0;  // unset: online for the whole horizon
  UniformRange task_cost{3.0, 3.0};
  UniformRange charge_power{10.0, 10.0};
  double interval = 10.0;
  double limit_time = 180.0;
  double uav_speed = 1.0;
  double worker_speed = 0.5;
  double vehicle_speed = 1.0;
  double full_power = 30.0;
  std::uint64_t seed = 0;
};

/// Problems with the parameters; empty when generate() will succeed.
inline std::vector<Violation> check_gen_params(const GenParams& p) {
  std::vector<Violation> out;
  auto fail = [&out](std::string path, std::string msg) { out.push_back({std::move(path), std::move(msg)}); };
  if (!(p.width > 0.0) || !(p.height > 0.0)) fail("area", "area must have positive width and height");
  if (p.tasks_n < 0 || p.charges_n < 0 || p.workers_n < 0 || p.uavs_n < 0 || p.vehicles_n < 0)
    fail("counts", "counts must be nonnegative");
  const double cells = std::floor(p.width) * std::floor(p.height);
  if (p.charges_n > cells) fail("charges_n", "area too small for distinct charging points");
  if (!(p.interval > 0.0)) fail("interval", "interval must be positive");
  if (!(p.limit_time > 0.0)) fail("limit_time", "limit_time must be positive");
  if (p.online_minutes && (!(*p.online_minutes > 0.0) || *p.online_minutes > p.limit_time))
    fail("online_minutes", "online_minutes must lie in (0, limit_time]");
  auto range = [&](const char* path, const UniformRange& r, bool positive) {
    if (r.hi < r.lo) fail(path, "range must satisfy lo <= hi");
    if (positive ? !(r.lo > 0.0) : r.lo < 0.0) fail(path, positive ? "range must be positive" : "range must be nonnegative");
  };
  range("task_cost", p.task_cost, false);
  range("charge_power", p.charge_power, true);
  if (!(p.uav_speed > 0.0) || !(p.worker_speed > 0.0) || !(p.vehicle_speed > 0.0)) fail("speed", "speeds must be positive");
  if (!(p.full_power > 0.0)) fail("full_power", "full_power must be positive");
  return out;
}

inline Scenario generate(const GenParams& p) {
  if (const auto v = check_gen_params(p); !v.empty()) {
    std::string msg = "generate:";
    for (const auto& e : v) msg += " " + e.str() + ";";
    throw std::invalid_argument(msg);
  }
  Rng rng = Rng::stream(p.seed, "scenario");
  Scenario s;
  s.area = {p.width, p.height};
  s.interval = p.interval;
  s.limit_time = p.limit_time;
  s.seed = p.seed;

  auto point = [&] { return GridPoint{rng.uniform(0.0, p.width), rng.uniform(0.0, p.height)}; };
  auto draw = [&](const UniformRange& r) { return r.lo == r.hi ? r.lo : rng.uniform(r.lo, r.hi); };
  const double online = p.online_minutes.value_or(p.limit_time);
  auto window = [&](auto& agent) {
    agent.uptime = rng.uniform(0.0, p.limit_time - online);
    agent.downtime = agent.uptime + online;
  };

  for (int i = 0; i < p.tasks_n; ++i) s.tasks.push_back(Task{i, point(), draw(p.task_cost), false});

  const int cols = static_cast<int>(std::floor(p.width));
  const int rows = static_cast<int>(std::floor(p.height));
  std::vector<int> cells(static_cast<std::size_t>(cols) * rows);
  for (std::size_t c = 0; c < cells.size(); ++c) cells[c] = static_cast<int>(c);
  const auto picked = rng.sample(cells, static_cast<std::size_t>(p.charges_n));
  for (int y = 0; y < p.charges_n; ++y) {
    const int c = picked[y];
    s.charges.push_back(ChargePoint{y, {c % cols + 0.5, c / cols + 0.5}});
  }

  for (int j = 0; j < p.workers_n; ++j) {
    Worker w{j, point(), p.worker_speed};
    window(w);
    s.workers.push_back(w);
  }
  for (int i = 0; i < p.uavs_n; ++i) {
    Uav u{i, point(), p.uav_speed, p.full_power, p.full_power};
    window(u);
    s.uavs.push_back(u);
  }
  for (int k = 0; k < p.vehicles_n; ++k) {
    Vehicle v{k, point(), p.vehicle_speed, draw(p.charge_power)};
    window(v);
    s.vehicles.push_back(v);
  }
  return s;
}

}  // namespace hocs
