#pragma once

// Node weight evaluation.
//
// A node's weight is its expected benefit per decision interval. Joint
// actions that complete a task or charge a UAV carry a base term (100 and
// 10 in hierarchical mode) that separates them from plain moves by an order
// of magnitude; every node also earns the relative drop in expected matching
// cost that the move buys its agents, squashed through softplus and divided
// by the quantized travel time.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "hocs/model.hpp"

namespace hocs {

/// The world as seen by one decision epoch: online idle agents with their
/// current position and energy, and the tasks still open for assignment.
struct Snapshot {
  double now = 0.0;
  double interval = 10.0;
  double limit_time = 180.0;
  std::vector<Uav> uavs;
  std::vector<Worker> workers;
  std::vector<Vehicle> vehicles;
  std::vector<Task> tasks;
  std::vector<ChargePoint> charges;

  /// Value used in place of an expected cost whose candidate set is empty.
  double sentinel() const { return limit_time; }
};

/// Latest time by which an action of this agent must have finished.
template <class Agent>
double window_end(const Agent& a, const Snapshot& s) {
  return std::min(a.downtime, s.limit_time);
}

/// Per-target expected matching costs, indexed like Snapshot::tasks and
/// Snapshot::charges.
struct CostTables {
  std::vector<double> du_tl;   // task matched by a UAV
  std::vector<double> dw_tl;   // task matched by a worker
  std::vector<double> du_chl;  // charging point matched by a UAV
  std::vector<double> dv_chl;  // charging point matched by a vehicle
};

/// ln(1 + e^x) without overflow for large x or cancellation for small x.
inline double softplus(double x) {
  if (x > 0.0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

namespace detail {
inline const double kAffinityNorm = 1.0 - std::exp(-1.0);

inline void require_full_power(const Uav& u) {
  if (!(u.full_power > 0.0)) throw std::invalid_argument("affinity: full_power must be positive");
}
}  // namespace detail

/// How ready a UAV is to take on a task, from its charge level. Strictly
/// increasing and concave in power; 0 when empty, 1 when full.
inline double task_affinity(const Uav& u) {
  detail::require_full_power(u);
  return (1.0 - std::exp(-u.power / u.full_power)) / detail::kAffinityNorm;
}

/// How urgently a UAV wants charging; task_affinity mirrored around half charge.
inline double charge_affinity(const Uav& u) {
  detail::require_full_power(u);
  return (1.0 - std::exp(-(1.0 - u.power / u.full_power))) / detail::kAffinityNorm;
}

/// Softmax over negated quantized travel times from origin to each target.
/// Empty when there are no targets.
inline std::vector<double> choice_distribution(const GridPoint& origin, double speed,
                                               std::span<const GridPoint> targets, double interval) {
  std::vector<double> p(targets.size());
  if (targets.empty()) return p;
  double lowest = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < targets.size(); ++i) {
    p[i] = ceil_to_interval(travel_time(origin, targets[i], speed), interval);
    lowest = std::min(lowest, p[i]);
  }
  // softmax(-t) == softmax(lowest - t); the shift keeps every exponent <= 0.
  double total = 0.0;
  for (double& v : p) {
    v = std::exp(lowest - v);
    total += v;
  }
  for (double& v : p) v /= total;
  return p;
}

namespace detail {

template <class Pred>
std::vector<std::size_t> task_candidates(const Snapshot& s, Pred&& keep) {
  std::vector<std::size_t> idx;
  for (std::size_t x = 0; x < s.tasks.size(); ++x)
    if (keep(s.tasks[x])) idx.push_back(x);
  return idx;
}

template <class Pred>
std::vector<std::size_t> charge_candidates(const Snapshot& s, Pred&& keep) {
  std::vector<std::size_t> idx;
  for (std::size_t y = 0; y < s.charges.size(); ++y)
    if (keep(s.charges[y])) idx.push_back(y);
  return idx;
}

/// Probability-weighted cost over the candidate targets as chosen from
/// `origin`; nullopt when there are no candidates.
template <class Targets>
std::optional<double> expected_cost(const GridPoint& origin, double speed, const Targets& targets,
                                    std::span<const std::size_t> candidates, std::span<const double> cost,
                                    double interval) {
  if (candidates.empty()) return std::nullopt;
  std::vector<GridPoint> locs;
  locs.reserve(candidates.size());
  for (std::size_t i : candidates) locs.push_back(targets[i].loc);
  const auto p = choice_distribution(origin, speed, locs, interval);
  double e = 0.0;
  for (std::size_t k = 0; k < candidates.size(); ++k) e += p[k] * cost[candidates[k]];
  return e;
}

/// softplus(relative cost reduction) per quantized interval of travel.
inline double relative_gain(std::optional<double> before, std::optional<double> after, double sentinel,
                            double move_ceil) {
  if (!before || !(*before > 0.0)) return 0.0;
  const double e_after = after.value_or(sentinel);
  return softplus((*before - e_after) / *before) / move_ceil;
}

}  // namespace detail

/// Mean over constraint-(6)-feasible UAVs of ceil(travel) / task affinity.
/// A UAV with zero affinity contributes the sentinel.
inline double expected_task_uav_cost(const Task& task, const Snapshot& s) {
  double sum = 0.0;
  int n = 0;
  for (const auto& u : s.uavs) {
    if (!task_feasible(u, task, s.charges)) continue;
    const double aff = task_affinity(u);
    sum += aff > 0.0 ? ceil_to_interval(travel_time(u.loc, task.loc, u.speed), s.interval) / aff : s.sentinel();
    ++n;
  }
  return n == 0 ? s.sentinel() : sum / n;
}

inline double expected_task_worker_cost(const Task& task, const Snapshot& s) {
  if (s.workers.empty()) return s.sentinel();
  double sum = 0.0;
  for (const auto& w : s.workers) sum += ceil_to_interval(travel_time(w.loc, task.loc, w.speed), s.interval);
  return sum / static_cast<double>(s.workers.size());
}

/// Fully charged UAVs (charge affinity 0) never seek a charger and
/// contribute the sentinel instead of dividing by zero.
inline double expected_charge_uav_cost(const ChargePoint& c, const Snapshot& s) {
  double sum = 0.0;
  int n = 0;
  for (const auto& u : s.uavs) {
    if (!charge_feasible(u, c)) continue;
    const double aff = charge_affinity(u);
    sum += aff > 0.0 ? ceil_to_interval(travel_time(u.loc, c.loc, u.speed), s.interval) / aff : s.sentinel();
    ++n;
  }
  return n == 0 ? s.sentinel() : sum / n;
}

inline double expected_charge_vehicle_cost(const ChargePoint& c, const Snapshot& s) {
  if (s.vehicles.empty()) return s.sentinel();
  double sum = 0.0;
  for (const auto& v : s.vehicles) sum += ceil_to_interval(travel_time(v.loc, c.loc, v.speed), s.interval);
  return sum / static_cast<double>(s.vehicles.size());
}

inline CostTables compute_cost_tables(const Snapshot& s) {
  CostTables t;
  t.du_tl.reserve(s.tasks.size());
  t.dw_tl.reserve(s.tasks.size());
  for (const auto& task : s.tasks) {
    t.du_tl.push_back(expected_task_uav_cost(task, s));
    t.dw_tl.push_back(expected_task_worker_cost(task, s));
  }
  t.du_chl.reserve(s.charges.size());
  t.dv_chl.reserve(s.charges.size());
  for (const auto& c : s.charges) {
    t.du_chl.push_back(expected_charge_uav_cost(c, s));
    t.dv_chl.push_back(expected_charge_vehicle_cost(c, s));
  }
  return t;
}

/// Benefit per interval of moving worker w to new_loc (icmWj).
inline double worker_move_gain(const Worker& w, const GridPoint& new_loc, const CostTables& t, const Snapshot& s) {
  const auto all = detail::task_candidates(s, [](const Task&) { return true; });
  const auto before = detail::expected_cost(w.loc, w.speed, s.tasks, all, t.du_tl, s.interval);
  const auto after = detail::expected_cost(new_loc, w.speed, s.tasks, all, t.du_tl, s.interval);
  const double move = ceil_to_interval(travel_time(w.loc, new_loc, w.speed), s.interval);
  return detail::relative_gain(before, after, s.sentinel(), move);
}

/// Benefit per interval of moving UAV u to new_loc with respect to tasks
/// (icmUiT). Candidate tasks are those satisfying the task feasibility
/// constraint at each endpoint, with the power left after the move at the
/// new one.
inline double uav_task_gain(const Uav& u, const GridPoint& new_loc, const CostTables& t, const Snapshot& s) {
  Uav moved = u;
  moved.loc = new_loc;
  moved.power = u.power - distance(u.loc, new_loc);
  const auto here = detail::task_candidates(s, [&](const Task& x) { return task_feasible(u, x, s.charges); });
  const auto there = moved.power < 0.0 ? std::vector<std::size_t>{}
                                       : detail::task_candidates(s, [&](const Task& x) {
                                           return task_feasible(moved, x, s.charges);
                                         });
  const auto before = detail::expected_cost(u.loc, u.speed, s.tasks, here, t.dw_tl, s.interval);
  const auto after = detail::expected_cost(new_loc, u.speed, s.tasks, there, t.dw_tl, s.interval);
  const double move = ceil_to_interval(travel_time(u.loc, new_loc, u.speed), s.interval);
  return detail::relative_gain(before, after, s.sentinel(), move);
}

/// Benefit per interval of moving UAV u to new_loc with respect to charging
/// points reachable on its power (icmUiC).
inline double uav_charge_gain(const Uav& u, const GridPoint& new_loc, const CostTables& t, const Snapshot& s) {
  Uav moved = u;
  moved.loc = new_loc;
  moved.power = u.power - distance(u.loc, new_loc);
  const auto here = detail::charge_candidates(s, [&](const ChargePoint& c) { return charge_feasible(u, c); });
  const auto there = moved.power < 0.0 ? std::vector<std::size_t>{}
                                       : detail::charge_candidates(s, [&](const ChargePoint& c) {
                                           return charge_feasible(moved, c);
                                         });
  const auto before = detail::expected_cost(u.loc, u.speed, s.charges, here, t.dv_chl, s.interval);
  const auto after = detail::expected_cost(new_loc, u.speed, s.charges, there, t.dv_chl, s.interval);
  const double move = ceil_to_interval(travel_time(u.loc, new_loc, u.speed), s.interval);
  return detail::relative_gain(before, after, s.sentinel(), move);
}

/// Task and charge gains blended by the power left after the move (icmUi).
inline double uav_combined_gain(const Uav& u, const GridPoint& new_loc, const CostTables& t, const Snapshot& s) {
  const double left = u.power - distance(u.loc, new_loc);
  if (left < 0.0) throw std::invalid_argument("uav_combined_gain: move exceeds remaining power");
  const double share = left / u.full_power;
  return share * uav_task_gain(u, new_loc, t, s) + (1.0 - share) * uav_charge_gain(u, new_loc, t, s);
}

/// Benefit per interval of moving vehicle v to new_loc (icmVk).
inline double vehicle_move_gain(const Vehicle& v, const GridPoint& new_loc, const CostTables& t,
                                const Snapshot& s) {
  const auto all = detail::charge_candidates(s, [](const ChargePoint&) { return true; });
  const auto before = detail::expected_cost(v.loc, v.speed, s.charges, all, t.du_chl, s.interval);
  const auto after = detail::expected_cost(new_loc, v.speed, s.charges, all, t.du_chl, s.interval);
  const double move = ceil_to_interval(travel_time(v.loc, new_loc, v.speed), s.interval);
  return detail::relative_gain(before, after, s.sentinel(), move);
}

/// The gains above for many (agent, target) pairs of one snapshot. Results
/// are bit-identical to the free functions; what an agent faces at its
/// current position, each task's nearest charger, and the worker and
/// vehicle costs at every target are computed once and reused.
class GainEvaluator {
public:
  GainEvaluator(const Snapshot& s, const CostTables& t) : s_(&s), t_(&t) {
    near_.reserve(s.tasks.size());
    for (const auto& x : s.tasks) near_.push_back(nearest_charge_distance(x.loc, s.charges));
    all_tasks_.resize(s.tasks.size());
    for (std::size_t x = 0; x < all_tasks_.size(); ++x) all_tasks_[x] = x;
    all_charges_.resize(s.charges.size());
    for (std::size_t y = 0; y < all_charges_.size(); ++y) all_charges_[y] = y;
  }

  double worker(const Worker& w, std::size_t task) {
    const auto& per = at_targets(worker_after_, w.speed, s_->tasks, all_tasks_, t_->du_tl);
    const auto before = at_origin(worker_before_, w.loc, w.speed, s_->tasks, all_tasks_, t_->du_tl);
    return gain(w.loc, w.speed, s_->tasks[task].loc, before, per[task]);
  }

  double vehicle(const Vehicle& v, std::size_t charge) {
    const auto& per = at_targets(vehicle_after_, v.speed, s_->charges, all_charges_, t_->du_chl);
    const auto before = at_origin(vehicle_before_, v.loc, v.speed, s_->charges, all_charges_, t_->du_chl);
    return gain(v.loc, v.speed, s_->charges[charge].loc, before, per[charge]);
  }

  /// uav_combined_gain for u moving to dest.
  double uav(const Uav& u, const GridPoint& dest) {
    const double left = u.power - distance(u.loc, dest);
    if (left < 0.0) throw std::invalid_argument("uav_combined_gain: move exceeds remaining power");
    const double share = left / u.full_power;
    const double moved_power = left;
    std::vector<std::size_t> here, there;
    for (std::size_t x = 0; x < s_->tasks.size(); ++x) {
      if (task_fits(u.loc, u.power, x)) here.push_back(x);
      if (moved_power >= 0.0 && task_fits(dest, moved_power, x)) there.push_back(x);
    }
    const double task_gain =
        gain(u.loc, u.speed, dest, detail::expected_cost(u.loc, u.speed, s_->tasks, here, t_->dw_tl, s_->interval),
             detail::expected_cost(dest, u.speed, s_->tasks, there, t_->dw_tl, s_->interval));
    here.clear();
    there.clear();
    for (std::size_t y = 0; y < s_->charges.size(); ++y) {
      if (distance(u.loc, s_->charges[y].loc) <= u.power) here.push_back(y);
      if (moved_power >= 0.0 && distance(dest, s_->charges[y].loc) <= moved_power) there.push_back(y);
    }
    const double charge_gain = gain(
        u.loc, u.speed, dest, detail::expected_cost(u.loc, u.speed, s_->charges, here, t_->dv_chl, s_->interval),
        detail::expected_cost(dest, u.speed, s_->charges, there, t_->dv_chl, s_->interval));
    return share * task_gain + (1.0 - share) * charge_gain;
  }

private:
  // Same arithmetic as task_feasible, with the nearest charger looked up.
  bool task_fits(const GridPoint& at, double power, std::size_t x) const {
    if (s_->charges.empty()) return false;
    return distance(at, s_->tasks[x].loc) + s_->tasks[x].cost_power + near_[x] <= power;
  }

  double gain(const GridPoint& from, double speed, const GridPoint& to, std::optional<double> before,
              std::optional<double> after) const {
    const double move = ceil_to_interval(travel_time(from, to, speed), s_->interval);
    return detail::relative_gain(before, after, s_->sentinel(), move);
  }

  struct Origin {
    GridPoint loc;
    double speed = 0.0;
    std::optional<double> cost;
    bool valid = false;
  };

  // Expected cost from the agent's own position; calls come grouped by agent.
  template <class Targets>
  std::optional<double> at_origin(Origin& last, const GridPoint& loc, double speed, const Targets& targets,
                                  std::span<const std::size_t> all, std::span<const double> cost) const {
    if (!last.valid || last.loc != loc || last.speed != speed)
      last = {loc, speed, detail::expected_cost(loc, speed, targets, all, cost, s_->interval), true};
    return last.cost;
  }

  // Expected cost as seen from every target, per agent speed.
  template <class Targets>
  const std::vector<std::optional<double>>& at_targets(
      std::vector<std::pair<double, std::vector<std::optional<double>>>>& cache, double speed, const Targets& targets,
      std::span<const std::size_t> all, std::span<const double> cost) {
    for (const auto& [sp, v] : cache)
      if (sp == speed) return v;
    std::vector<std::optional<double>> v;
    v.reserve(targets.size());
    for (const auto& target : targets) v.push_back(detail::expected_cost(target.loc, speed, targets, all, cost, s_->interval));
    cache.emplace_back(speed, std::move(v));
    return cache.back().second;
  }

  const Snapshot* s_;
  const CostTables* t_;
  std::vector<double> near_;
  std::vector<std::size_t> all_tasks_, all_charges_;
  std::vector<std::pair<double, std::vector<std::optional<double>>>> worker_after_, vehicle_after_;
  Origin worker_before_, vehicle_before_;
};

/// First term of the task-pair weight: the base benefit spread over the
/// slower participant's quantized travel time.
inline double task_pair_base(double ceil_u, double ceil_w, WeightMode mode) {
  const double base = mode == WeightMode::hierarchical ? 100.0 : 1.0;
  return softplus(base) / std::max(ceil_u, ceil_w);
}

/// First term of the charge-pair weight; grows as the UAV's charge drops.
inline double charge_pair_base(const Uav& u, double ceil_u, double ceil_v, WeightMode mode) {
  const double urgency = std::exp(1.0 - u.power / u.full_power);
  const double arg = mode == WeightMode::hierarchical ? 10.0 + urgency : urgency / std::exp(1.0);
  return softplus(arg) / std::max(ceil_u, ceil_v);
}

/// Weight of UAV u and worker w meeting at task (icmUiWj).
inline double pair_task_weight(const Uav& u, const Task& task, const Worker& w, const CostTables& t,
                               const Snapshot& s, WeightMode mode) {
  if (!task_feasible(u, task, s.charges)) throw std::invalid_argument("pair_task_weight: infeasible UAV-task pair");
  const double cu = ceil_to_interval(travel_time(u.loc, task.loc, u.speed), s.interval);
  const double cw = ceil_to_interval(travel_time(w.loc, task.loc, w.speed), s.interval);
  return task_pair_base(cu, cw, mode) + worker_move_gain(w, task.loc, t, s) + uav_combined_gain(u, task.loc, t, s);
}

/// Weight of UAV u and vehicle v meeting at charging point c (icmUiVk).
inline double pair_charge_weight(const Uav& u, const ChargePoint& c, const Vehicle& v, const CostTables& t,
                                 const Snapshot& s, WeightMode mode) {
  if (!charge_feasible(u, c)) throw std::invalid_argument("pair_charge_weight: charging point out of range");
  const double cu = ceil_to_interval(travel_time(u.loc, c.loc, u.speed), s.interval);
  const double cv = ceil_to_interval(travel_time(v.loc, c.loc, v.speed), s.interval);
  return charge_pair_base(u, cu, cv, mode) + vehicle_move_gain(v, c.loc, t, s) + uav_combined_gain(u, c.loc, t, s);
}

}  // namespace hocs
