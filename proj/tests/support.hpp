#pragma once

// Shared test fixtures: an exhaustive MWIS oracle, random graphs whose edges
// come from resource sharing (like the real conflict graphs), and a few
// hand-made scenarios.

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "hocs/graph.hpp"
#include "hocs/ils.hpp"
#include "hocs/model.hpp"
#include "hocs/random.hpp"
#include "hocs/weights.hpp"

namespace hocs::test {

/// Exact maximum weight independent set by enumerating all subsets.
/// Feasible up to ~22 nodes.
template <class G>
double brute_force_mwis(const G& g, std::vector<NodeId>* best_set = nullptr) {
  const std::size_t n = g.size();
  if (n > 24) throw std::invalid_argument("brute_force_mwis: graph too large");
  std::vector<std::uint32_t> nb(n, 0);
  for (NodeId v = 0; v < n; ++v) detail::for_each_neighbor(g, v, [&](NodeId m) { nb[v] |= 1u << m; });
  double best = 0.0;
  std::uint32_t arg = 0;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    bool ok = true;
    double w = 0.0;
    for (std::uint32_t rest = mask; rest && ok; rest &= rest - 1) {
      const int v = std::countr_zero(rest);
      ok = (nb[v] & mask) == 0;
      w += g.weight(static_cast<NodeId>(v));
    }
    if (ok && w > best) {
      best = w;
      arg = mask;
    }
  }
  if (best_set) {
    best_set->clear();
    for (NodeId v = 0; v < n; ++v)
      if (arg >> v & 1u) best_set->push_back(v);
  }
  return best;
}

/// A random node set drawn from the nine kinds over a small pool of agents
/// and targets, weighted on the hierarchical scale (pairs ~ 10, charge pairs
/// ~ 1.5, the rest below 1). Edges follow has_conflict.
inline WeightedGraph random_conflict_graph(std::uint64_t seed, std::size_t max_nodes = 18) {
  Rng rng = Rng::stream(seed, "conflict-graph");
  const int uavs = 1 + static_cast<int>(rng.below(4));
  const int workers = 1 + static_cast<int>(rng.below(4));
  const int vehicles = 1 + static_cast<int>(rng.below(3));
  const int tasks = 1 + static_cast<int>(rng.below(5));
  const int charges = 1 + static_cast<int>(rng.below(3));
  const std::size_t n = 4 + rng.below(max_nodes - 3);
  std::vector<GraphNode> nodes;
  for (std::size_t i = 0; i < n; ++i) {
    const auto kind = static_cast<NodeKind>(rng.below(9));
    Participants p;
    double w = 0.0;
    auto pick = [&rng](int k) { return static_cast<int>(rng.below(static_cast<std::size_t>(k))); };
    switch (kind) {
      case NodeKind::Ui: p.uav = pick(uavs); w = softplus(0.0); break;
      case NodeKind::Wj: p.worker = pick(workers); w = softplus(0.0); break;
      case NodeKind::Vk: p.vehicle = pick(vehicles); w = softplus(0.0); break;
      case NodeKind::UiTx: p.uav = pick(uavs); p.task = pick(tasks); w = rng.uniform(0.05, 1.0); break;
      case NodeKind::WjTx: p.worker = pick(workers); p.task = pick(tasks); w = rng.uniform(0.05, 1.0); break;
      case NodeKind::UiCy: p.uav = pick(uavs); p.charge = pick(charges); w = rng.uniform(0.05, 1.0); break;
      case NodeKind::VkCy: p.vehicle = pick(vehicles); p.charge = pick(charges); w = rng.uniform(0.05, 1.0); break;
      case NodeKind::UiTxWj:
        p.uav = pick(uavs); p.worker = pick(workers); p.task = pick(tasks);
        w = 100.0 / (10.0 * (1 + rng.below(3))) + rng.uniform(0.0, 0.3);
        break;
      case NodeKind::UiCyVk:
        p.uav = pick(uavs); p.vehicle = pick(vehicles); p.charge = pick(charges);
        w = softplus(10.0 + rng.uniform(1.0, 2.718)) / (10.0 * (1 + rng.below(3))) + rng.uniform(0.0, 0.3);
        break;
    }
    nodes.push_back(GraphNode{static_cast<NodeId>(i), kind, p, w, node_level(kind)});
  }
  WeightedGraph g(std::move(nodes));
  g.connect();
  return g;
}

/// Random weights and Erdos-Renyi edges, levels uniform in {0,1,2}.
inline SimpleGraph random_simple_graph(std::uint64_t seed, std::size_t n, double edge_p) {
  Rng rng = Rng::stream(seed, "simple-graph");
  SimpleGraph g;
  for (std::size_t i = 0; i < n; ++i) {
    const int level = static_cast<int>(rng.below(3));
    g.add_node(rng.uniform(0.1, 10.0) * (level == 2 ? 10.0 : 1.0), level);
  }
  for (NodeId a = 0; a < n; ++a)
    for (NodeId b = a + 1; b < n; ++b)
      if (rng.bernoulli(edge_p)) g.add_edge(a, b);
  return g;
}

/// Two UAVs, two workers, one vehicle, three tasks and two charging points,
/// all close together so every combination is feasible.
inline Snapshot small_snapshot(int tasks = 3) {
  Snapshot s;
  s.now = 0.0;
  s.interval = 10.0;
  s.limit_time = 180.0;
  for (int i = 0; i < 2; ++i) s.uavs.push_back(Uav{i, {1.0 + i, 1.0}, 1.0, 30.0, 30.0, 0.0, 180.0});
  for (int j = 0; j < 2; ++j) s.workers.push_back(Worker{j, {1.0, 2.0 + j}, 0.5, 0.0, 180.0});
  s.vehicles.push_back(Vehicle{0, {2.0, 2.0}, 1.0, 10.0, 0.0, 180.0});
  for (int x = 0; x < tasks; ++x) s.tasks.push_back(Task{x, {3.0 + x, 3.0}, 3.0, false});
  s.charges.push_back(ChargePoint{0, {0.5, 0.5}});
  s.charges.push_back(ChargePoint{1, {4.5, 0.5}});
  return s;
}

/// A scenario with the same entities as small_snapshot.
inline Scenario small_scenario() {
  const Snapshot s = small_snapshot();
  Scenario sc;
  sc.area = {6.0, 6.0};
  sc.uavs = s.uavs;
  sc.workers = s.workers;
  sc.vehicles = s.vehicles;
  sc.tasks = s.tasks;
  sc.charges = s.charges;
  sc.interval = 10.0;
  sc.limit_time = 180.0;
  return sc;
}

}  // namespace hocs::test
