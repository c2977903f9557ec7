#pragma once

// Reference schedulers working on the same snapshots as the graph solvers.
//
// greedy_step moves every agent to the reachable position closest (in summed
// distance) to the work it cares about, and turns co-locations at a task or
// charging point into joint actions. kwta_step keeps each agent's k best
// targets and matches UAVs with workers (or vehicles) that share one.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "hocs/action.hpp"
#include "hocs/graph.hpp"
#include "hocs/model.hpp"
#include "hocs/weights.hpp"

namespace hocs {

namespace detail {

/// Positions an agent may pick this epoch: where it stands, then the cell
/// centres, then task locations, then charging points, each filtered to
/// those reachable within one interval. The order fixes tie-breaking.
template <class Agent>
std::vector<GridPoint> reachable_positions(const Agent& a, const Snapshot& s, double width, double height) {
  const double reach = a.speed * s.interval;
  std::vector<GridPoint> out{a.loc};
  auto consider = [&](const GridPoint& p) {
    if (p != a.loc && distance(a.loc, p) <= reach && move_fits(a, p, s)) out.push_back(p);
  };
  const int x0 = std::max(0, static_cast<int>(std::floor(a.loc.x - reach)));
  const int x1 = std::min(static_cast<int>(std::ceil(width)) - 1, static_cast<int>(std::ceil(a.loc.x + reach)));
  const int y0 = std::max(0, static_cast<int>(std::floor(a.loc.y - reach)));
  const int y1 = std::min(static_cast<int>(std::ceil(height)) - 1, static_cast<int>(std::ceil(a.loc.y + reach)));
  for (int cy = y0; cy <= y1; ++cy)
    for (int cx = x0; cx <= x1; ++cx) {
      const GridPoint c{cx + 0.5, cy + 0.5};
      if (c.x <= width && c.y <= height) consider(c);
    }
  for (const auto& t : s.tasks) consider(t.loc);
  for (const auto& c : s.charges) consider(c.loc);
  return out;
}

template <class Cost>
std::size_t argmin(const std::vector<GridPoint>& options, Cost&& cost) {
  std::size_t best = 0;
  double best_cost = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < options.size(); ++i) {
    const double c = cost(options[i]);
    if (c < best_cost) {
      best_cost = c;
      best = i;
    }
  }
  return best;
}

inline double summed_distance(const GridPoint& p, const std::vector<GridPoint>& targets) {
  double sum = 0.0;
  for (const auto& t : targets) sum += distance(p, t);
  return sum;
}

}  // namespace detail

/// One greedy epoch over the snapshot. `width` and `height` bound the grid
/// of candidate cell centres.
inline Schedule greedy_step(const Snapshot& s, double width, double height) {
  std::vector<GridPoint> task_locs;
  for (const auto& t : s.tasks) task_locs.push_back(t.loc);

  // UAVs: pending-task distance sum over positions from which a charging
  // point stays reachable; without any feasible task, head for the nearest
  // charging point instead.
  std::vector<GridPoint> uav_pos;
  for (const auto& u : s.uavs) {
    auto options = detail::reachable_positions(u, s, width, height);
    std::erase_if(options, [&](const GridPoint& p) {
      return p != u.loc && distance(u.loc, p) + nearest_charge_distance(p, s.charges) > u.power;
    });
    if (options.empty()) options.push_back(u.loc);
    const bool can_work = std::any_of(s.tasks.begin(), s.tasks.end(),
                                      [&](const Task& x) { return task_feasible(u, x, s.charges); });
    if (can_work) {
      uav_pos.push_back(options[detail::argmin(options, [&](const GridPoint& p) {
        return detail::summed_distance(p, task_locs);
      })]);
    } else if (!s.charges.empty()) {
      const ChargePoint* nearest = &s.charges.front();
      for (const auto& c : s.charges)
        if (distance(u.loc, c.loc) < distance(u.loc, nearest->loc)) nearest = &c;
      uav_pos.push_back(options[detail::argmin(options, [&](const GridPoint& p) { return distance(p, nearest->loc); })]);
    } else {
      uav_pos.push_back(u.loc);
    }
  }

  std::vector<GridPoint> worker_pos;
  for (const auto& w : s.workers) {
    if (task_locs.empty()) {
      worker_pos.push_back(w.loc);
      continue;
    }
    const auto options = detail::reachable_positions(w, s, width, height);
    worker_pos.push_back(options[detail::argmin(options, [&](const GridPoint& p) {
      return detail::summed_distance(p, task_locs);
    })]);
  }

  std::vector<GridPoint> vehicle_pos;
  for (const auto& v : s.vehicles) {
    if (uav_pos.empty()) {
      vehicle_pos.push_back(v.loc);
      continue;
    }
    const auto options = detail::reachable_positions(v, s, width, height);
    vehicle_pos.push_back(options[detail::argmin(options, [&](const GridPoint& p) {
      return detail::summed_distance(p, uav_pos);
    })]);
  }

  Schedule out;
  std::vector<char> uav_done(s.uavs.size(), 0), worker_done(s.workers.size(), 0), vehicle_done(s.vehicles.size(), 0);
  std::vector<char> task_done(s.tasks.size(), 0);
  for (std::size_t i = 0; i < s.uavs.size(); ++i) {
    const auto& u = s.uavs[i];
    for (std::size_t x = 0; x < s.tasks.size() && !uav_done[i]; ++x) {
      const auto& task = s.tasks[x];
      if (task_done[x] || uav_pos[i] != task.loc || !task_feasible(u, task, s.charges)) continue;
      for (std::size_t j = 0; j < s.workers.size(); ++j) {
        if (worker_done[j] || worker_pos[j] != task.loc || !task_pair_fits(u, s.workers[j], task, s)) continue;
        out.push_back(make_joint_task(u, s.workers[j], task));
        uav_done[i] = worker_done[j] = task_done[x] = 1;
        break;
      }
    }
    for (std::size_t y = 0; y < s.charges.size() && !uav_done[i]; ++y) {
      const auto& c = s.charges[y];
      if (uav_pos[i] != c.loc || !charge_feasible(u, c)) continue;
      for (std::size_t k = 0; k < s.vehicles.size(); ++k) {
        if (vehicle_done[k] || vehicle_pos[k] != c.loc || !charge_pair_fits(u, s.vehicles[k], c, s)) continue;
        out.push_back(make_joint_charge(u, s.vehicles[k], c));
        uav_done[i] = vehicle_done[k] = 1;
        break;
      }
    }
  }

  for (std::size_t i = 0; i < s.uavs.size(); ++i)
    if (!uav_done[i] && uav_pos[i] != s.uavs[i].loc) out.push_back(make_move({.uav = s.uavs[i].id}, uav_pos[i]));
  for (std::size_t j = 0; j < s.workers.size(); ++j)
    if (!worker_done[j] && worker_pos[j] != s.workers[j].loc)
      out.push_back(make_move({.worker = s.workers[j].id}, worker_pos[j]));
  for (std::size_t k = 0; k < s.vehicles.size(); ++k)
    if (!vehicle_done[k] && vehicle_pos[k] != s.vehicles[k].loc)
      out.push_back(make_move({.vehicle = s.vehicles[k].id}, vehicle_pos[k]));
  return out;
}

struct KwtaParams {
  std::size_t k = 5;
  /// UAVs at or above this fraction of full power work on tasks, the rest
  /// seek charging. Unset: a UAV works on tasks iff some task is feasible.
  std::optional<double> power_split_threshold;
};

namespace detail {

/// Indices of the k best-scoring targets (score descending, index ascending).
inline std::vector<std::size_t> top_k(const std::vector<double>& score, const std::vector<char>& allowed,
                                      std::size_t k) {
  std::vector<std::size_t> idx;
  for (std::size_t t = 0; t < score.size(); ++t)
    if (allowed[t]) idx.push_back(t);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return score[a] != score[b] ? score[a] > score[b] : a < b;
  });
  if (idx.size() > k) idx.resize(k);
  return idx;
}

/// Pairs each lead agent (in order) with a partner over a shared target.
/// First choice: the first free partner, in order, whose top-k list meets
/// the lead's; the target is the lead's best-scoring one in the overlap.
/// Otherwise the lead's retained targets are tried in descending score,
/// each with the best-scoring free partner for it.
struct Match {
  std::size_t lead, partner, target;
};

template <class Fits>
std::vector<Match> kwta_match(const std::vector<std::vector<std::size_t>>& lead_top,
                              const std::vector<std::vector<double>>& partner_score,
                              const std::vector<std::vector<std::size_t>>& partner_top, bool exclusive_targets,
                              std::size_t target_count, Fits&& fits) {
  std::vector<Match> out;
  std::vector<char> partner_used(partner_score.size(), 0), target_used(target_count, 0);
  auto open = [&](std::size_t t) { return !exclusive_targets || !target_used[t]; };
  auto take = [&](std::size_t a, std::size_t b, std::size_t t) {
    out.push_back({a, b, t});
    partner_used[b] = 1;
    if (exclusive_targets) target_used[t] = 1;
  };
  for (std::size_t a = 0; a < lead_top.size(); ++a) {
    bool matched = false;
    for (std::size_t b = 0; b < partner_top.size() && !matched; ++b) {
      if (partner_used[b]) continue;
      std::optional<std::size_t> best;
      for (std::size_t t : lead_top[a]) {
        if (!open(t) || std::find(partner_top[b].begin(), partner_top[b].end(), t) == partner_top[b].end()) continue;
        if (!fits(a, b, t)) continue;
        best = t;  // lead_top is score-descending, so the first hit is the best
        break;
      }
      if (best) {
        take(a, b, *best);
        matched = true;
      }
    }
    for (std::size_t t : lead_top[a]) {
      if (matched) break;
      if (!open(t)) continue;
      std::optional<std::size_t> best_b;
      for (std::size_t b = 0; b < partner_score.size(); ++b) {
        if (partner_used[b] || !fits(a, b, t)) continue;
        if (!best_b || partner_score[b][t] > partner_score[*best_b][t]) best_b = b;
      }
      if (best_b) {
        take(a, *best_b, t);
        matched = true;
      }
    }
  }
  return out;
}

}  // namespace detail

inline Schedule kwta_step(const Snapshot& s, const KwtaParams& params = {}) {
  if (params.k == 0) throw std::invalid_argument("kwta_step: k must be at least 1");
  std::vector<std::size_t> task_uavs, charge_uavs;
  for (std::size_t i = 0; i < s.uavs.size(); ++i) {
    const auto& u = s.uavs[i];
    bool works;
    if (params.power_split_threshold) {
      works = u.power >= *params.power_split_threshold * u.full_power;
    } else {
      works = std::any_of(s.tasks.begin(), s.tasks.end(), [&](const Task& x) { return task_feasible(u, x, s.charges); });
    }
    (works ? task_uavs : charge_uavs).push_back(i);
  }

  Schedule out;
  const std::size_t nt = s.tasks.size(), nc = s.charges.size();
  {
    std::vector<std::vector<double>> ws;
    std::vector<std::vector<std::size_t>> ut, wt;
    for (std::size_t i : task_uavs) {
      const auto& u = s.uavs[i];
      std::vector<double> sc(nt);
      std::vector<char> ok(nt);
      for (std::size_t x = 0; x < nt; ++x) {
        sc[x] = -travel_time(u.loc, s.tasks[x].loc, u.speed);
        ok[x] = task_feasible(u, s.tasks[x], s.charges);
      }
      ut.push_back(detail::top_k(sc, ok, params.k));
    }
    for (const auto& w : s.workers) {
      std::vector<double> sc(nt);
      for (std::size_t x = 0; x < nt; ++x) sc[x] = -travel_time(w.loc, s.tasks[x].loc, w.speed);
      wt.push_back(detail::top_k(sc, std::vector<char>(nt, 1), params.k));
      ws.push_back(std::move(sc));
    }
    const auto matches = detail::kwta_match(ut, ws, wt, true, nt, [&](std::size_t a, std::size_t b, std::size_t x) {
      return task_pair_fits(s.uavs[task_uavs[a]], s.workers[b], s.tasks[x], s);
    });
    for (const auto& m : matches) out.push_back(make_joint_task(s.uavs[task_uavs[m.lead]], s.workers[m.partner], s.tasks[m.target]));
  }
  {
    std::vector<std::vector<double>> vs;
    std::vector<std::vector<std::size_t>> ut, vt;
    for (std::size_t i : charge_uavs) {
      const auto& u = s.uavs[i];
      std::vector<double> sc(nc);
      std::vector<char> ok(nc);
      for (std::size_t y = 0; y < nc; ++y) {
        sc[y] = -travel_time(u.loc, s.charges[y].loc, u.speed);
        ok[y] = charge_feasible(u, s.charges[y]);
      }
      ut.push_back(detail::top_k(sc, ok, params.k));
    }
    for (const auto& v : s.vehicles) {
      std::vector<double> sc(nc);
      for (std::size_t y = 0; y < nc; ++y) sc[y] = -travel_time(v.loc, s.charges[y].loc, v.speed);
      vt.push_back(detail::top_k(sc, std::vector<char>(nc, 1), params.k));
      vs.push_back(std::move(sc));
    }
    const auto matches = detail::kwta_match(ut, vs, vt, false, nc, [&](std::size_t a, std::size_t b, std::size_t y) {
      return charge_pair_fits(s.uavs[charge_uavs[a]], s.vehicles[b], s.charges[y], s);
    });
    for (const auto& m : matches)
      out.push_back(make_joint_charge(s.uavs[charge_uavs[m.lead]], s.vehicles[m.partner], s.charges[m.target]));
  }
  return out;
}

}  // namespace hocs
