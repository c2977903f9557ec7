#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "hocs/graph.hpp"
#include "hocs/scenario_gen.hpp"
#include "support.hpp"

using namespace hocs;

namespace {

WeightedGraph small_graph(int tasks = 3) {
  const Snapshot s = test::small_snapshot(tasks);
  return build_graph(s, compute_cost_tables(s), WeightMode::hierarchical);
}

// Snapshot of the first epoch of a generated scenario in which everybody is
// online from the start.
Snapshot generated_snapshot(std::uint64_t seed, int tasks = 30) {
  GenParams p;
  p.seed = seed;
  p.tasks_n = tasks;
  p.workers_n = 8;
  p.uavs_n = 5;
  p.vehicles_n = 3;
  p.charges_n = 6;
  p.online_minutes.reset();
  const Scenario sc = generate(p);
  Snapshot s;
  s.interval = sc.interval;
  s.limit_time = sc.limit_time;
  s.uavs = sc.uavs;
  s.workers = sc.workers;
  s.vehicles = sc.vehicles;
  s.tasks = sc.tasks;
  s.charges = sc.charges;
  return s;
}

}  // namespace

TEST(BuildGraph, SmallInstanceHasThirtyNineNodes) {
  const auto g = small_graph();
  EXPECT_EQ(g.size(), 39u);
  EXPECT_EQ(count_kinds(g), worst_case_counts(2, 2, 1, 3, 2));
}

TEST(BuildGraph, FourTaskVariant) {
  // 5 + 2*4 + 2*4 + 2*2 + 2 + 2*4*2 + 2*2 = 47
  EXPECT_EQ(small_graph(4).size(), 47u);
}

TEST(BuildGraph, NoAgentsNoNodes) {
  Snapshot s = test::small_snapshot();
  s.uavs.clear();
  s.workers.clear();
  s.vehicles.clear();
  EXPECT_EQ(build_graph(s, compute_cost_tables(s), WeightMode::hierarchical).size(), 0u);
}

TEST(BuildGraph, EmptyUavKeepsOnlyStayAndZeroDistanceCharging) {
  Snapshot s = test::small_snapshot();
  s.uavs.resize(1);
  s.uavs[0].power = 0;
  s.uavs[0].loc = s.charges[0].loc;
  const auto g = build_graph(s, compute_cost_tables(s), WeightMode::hierarchical);
  const auto c = count_kinds(g);
  EXPECT_EQ(c[static_cast<int>(NodeKind::Ui)], 1u);
  EXPECT_EQ(c[static_cast<int>(NodeKind::UiTx)], 0u);
  EXPECT_EQ(c[static_cast<int>(NodeKind::UiTxWj)], 0u);
  EXPECT_EQ(c[static_cast<int>(NodeKind::UiCy)], 0u);  // already there: the stay node covers it
  EXPECT_EQ(c[static_cast<int>(NodeKind::UiCyVk)], 1u);
  for (const auto& n : g.nodes())
    if (n.kind == NodeKind::UiCyVk) EXPECT_EQ(n.who.charge, 0);
}

TEST(BuildGraph, StayNodesWeighSoftplusZero) {
  for (const auto& n : small_graph().nodes())
    if (n.kind == NodeKind::Ui || n.kind == NodeKind::Wj || n.kind == NodeKind::Vk)
      EXPECT_EQ(n.weight, softplus(0.0));
}

TEST(BuildGraph, EveryNodeSatisfiesItsConstraint) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Snapshot s = generated_snapshot(seed);
    const auto g = build_nodes(s, compute_cost_tables(s), WeightMode::hierarchical);
    const auto bound = worst_case_counts(s.uavs.size(), s.workers.size(), s.vehicles.size(), s.tasks.size(),
                                         s.charges.size());
    const auto got = count_kinds(g);
    for (std::size_t k = 0; k < got.size(); ++k) EXPECT_LE(got[k], bound[k]);
    for (const auto& n : g.nodes()) {
      EXPECT_EQ(n.level, node_level(n.kind));
      EXPECT_TRUE(std::isfinite(n.weight));
      switch (n.kind) {
        case NodeKind::UiTx:
          EXPECT_TRUE(task_feasible(s.uavs[n.who.uav], s.tasks[n.who.task], s.charges));
          break;
        case NodeKind::UiTxWj:
          EXPECT_TRUE(task_feasible(s.uavs[n.who.uav], s.tasks[n.who.task], s.charges));
          EXPECT_TRUE(task_pair_fits(s.uavs[n.who.uav], s.workers[n.who.worker], s.tasks[n.who.task], s));
          break;
        case NodeKind::UiCy:
          EXPECT_TRUE(charge_feasible(s.uavs[n.who.uav], s.charges[n.who.charge]));
          break;
        case NodeKind::UiCyVk:
          EXPECT_TRUE(charge_feasible(s.uavs[n.who.uav], s.charges[n.who.charge]));
          EXPECT_TRUE(charge_pair_fits(s.uavs[n.who.uav], s.vehicles[n.who.vehicle], s.charges[n.who.charge], s));
          break;
        default:
          break;
      }
    }
  }
}

TEST(BuildGraph, PairsRespectDowntime) {
  Snapshot s = test::small_snapshot();
  s.workers[0].downtime = 1.0;  // cannot reach any task in time
  const auto g = build_graph(s, compute_cost_tables(s), WeightMode::hierarchical);
  for (const auto& n : g.nodes())
    if (n.kind == NodeKind::UiTxWj || n.kind == NodeKind::WjTx) EXPECT_NE(n.who.worker, 0);
}

TEST(BuildGraph, Deterministic) {
  const Snapshot s = generated_snapshot(9);
  const auto a = build_graph(s, compute_cost_tables(s), WeightMode::hierarchical);
  const auto b = build_graph(s, compute_cost_tables(s), WeightMode::hierarchical);
  ASSERT_EQ(a.size(), b.size());
  for (NodeId v = 0; v < a.size(); ++v) {
    EXPECT_EQ(a.node(v).who, b.node(v).who);
    EXPECT_EQ(a.weight(v), b.weight(v));
    ASSERT_EQ(a.neighbors(v).size(), b.neighbors(v).size());
  }
}

TEST(BuildGraph, CanonicalOrderByKindThenParticipants) {
  const auto g = small_graph();
  for (NodeId v = 1; v < g.size(); ++v) EXPECT_LE(g.node(v - 1).kind, g.node(v).kind);
}

TEST(HasConflict, SharedUav) {
  EXPECT_TRUE(has_conflict(Participants{.uav = 0, .worker = 0, .task = 1}, Participants{.uav = 0, .vehicle = 0, .charge = 0}));
}

TEST(HasConflict, SharedTask) {
  EXPECT_TRUE(has_conflict(Participants{.uav = 0, .worker = 0, .task = 1}, Participants{.uav = 1, .worker = 1, .task = 1}));
}

TEST(HasConflict, SharedChargePointIsFine) {
  EXPECT_FALSE(
      has_conflict(Participants{.uav = 0, .vehicle = 0, .charge = 0}, Participants{.uav = 1, .vehicle = 1, .charge = 0}));
}

TEST(NodeLevel, Mapping) {
  EXPECT_EQ(node_level(NodeKind::UiTxWj), 2);
  EXPECT_EQ(node_level(NodeKind::UiCyVk), 1);
  EXPECT_EQ(node_level(NodeKind::WjTx), 0);
  EXPECT_EQ(node_level(NodeKind::Ui), 0);
}

TEST(WorstCase, Counts) {
  const auto c = worst_case_counts(2, 2, 1, 3, 2);
  EXPECT_EQ(c[static_cast<int>(NodeKind::UiTxWj)], 12u);
  EXPECT_EQ(worst_case_counts(0, 0, 0, 0, 0), KindCounts{});
  EXPECT_EQ(worst_case_counts(30, 50, 20, 120, 20)[static_cast<int>(NodeKind::UiTxWj)], 180000u);
}

TEST(Adjacency, MatchesPairwiseConflictTest) {
  const Snapshot s = generated_snapshot(3, 12);
  WeightedGraph g = build_nodes(s, compute_cost_tables(s), WeightMode::hierarchical);
  WeightedGraph lazy = g;
  lazy.index_cliques();
  g.connect();
  std::size_t edges = 0;
  for (NodeId a = 0; a < g.size(); ++a) {
    std::set<NodeId> row(g.neighbors(a).begin(), g.neighbors(a).end());
    std::set<NodeId> lazy_row;
    lazy.for_each_neighbor(a, [&](NodeId m) { EXPECT_TRUE(lazy_row.insert(m).second) << "duplicate neighbour"; });
    EXPECT_EQ(row, lazy_row);
    for (NodeId b = 0; b < g.size(); ++b) {
      const bool want = a != b && has_conflict(g.node(a), g.node(b));
      EXPECT_EQ(row.count(b) == 1, want);
      EXPECT_EQ(g.adjacent(a, b), want);
      EXPECT_EQ(lazy.adjacent(a, b), want);
    }
    edges += row.size();
  }
  EXPECT_EQ(edges / 2, g.edge_count());
}

TEST(Adjacency, SymmetricAndIrreflexive) {
  const auto g = small_graph();
  for (NodeId a = 0; a < g.size(); ++a)
    for (NodeId b : g.neighbors(a)) {
      EXPECT_NE(a, b);
      EXPECT_TRUE(g.adjacent(b, a));
    }
}

TEST(Adjacency, EveryAgentInducesAClique) {
  const auto g = small_graph();
  for (NodeId a = 0; a < g.size(); ++a)
    for (NodeId b = a + 1; b < g.size(); ++b) {
      const auto& p = g.node(a).who;
      const auto& q = g.node(b).who;
      if ((p.uav >= 0 && p.uav == q.uav) || (p.worker >= 0 && p.worker == q.worker) ||
          (p.vehicle >= 0 && p.vehicle == q.vehicle))
        EXPECT_TRUE(g.adjacent(a, b));
    }
}

TEST(Adjacency, MissingRelationThrows) {
  const Snapshot s = test::small_snapshot();
  const auto g = build_nodes(s, compute_cost_tables(s), WeightMode::hierarchical);
  EXPECT_FALSE(g.has_relation());
  EXPECT_THROW(g.neighbors(0), std::logic_error);
  EXPECT_THROW(g.edge_count(), std::logic_error);
}

TEST(EdgeList, RoundTrip) {
  const auto g = small_graph();
  std::stringstream ss;
  write_edge_list(ss, g);
  const auto back = read_edge_list(ss);
  ASSERT_EQ(back.size(), g.size());
  EXPECT_EQ(back.edge_count(), g.edge_count());
  for (NodeId v = 0; v < g.size(); ++v) {
    EXPECT_EQ(back.node(v).kind, g.node(v).kind);
    EXPECT_EQ(back.node(v).who, g.node(v).who);
    EXPECT_EQ(back.weight(v), g.weight(v));
    EXPECT_EQ(back.level(v), g.level(v));
    ASSERT_EQ(back.neighbors(v).size(), g.neighbors(v).size());
  }
}

TEST(EdgeList, RejectsGarbage) {
  std::stringstream bad("hocs-graph 2\nnodes 0\nedges 0\n");
  EXPECT_THROW(read_edge_list(bad), std::runtime_error);
  std::stringstream truncated("hocs-graph 1\nnodes 2\n0 Ui 0.5 0 0 -1 -1 -1 -1\n");
  EXPECT_THROW(read_edge_list(truncated), std::runtime_error);
}
