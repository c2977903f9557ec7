#pragma once

// Per-epoch conflict graph.
//
// Every node is one candidate action for the idle online agents of a
// snapshot; two nodes are adjacent when they would use the same UAV,
// worker, vehicle or task. An independent set is therefore a conflict-free
// schedule. All nodes that touch one resource form a clique, which is what
// connect() exploits: adjacency is assembled clique by clique instead of by
// testing all node pairs.

#include <algorithm>
#include <array>
#include <cstdio>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hocs/model.hpp"
#include "hocs/weights.hpp"

namespace hocs {

using NodeId = std::uint32_t;

/// Agents and targets an action touches; -1 means "not involved".
struct Participants {
  int uav = -1;
  int worker = -1;
  int vehicle = -1;
  int task = -1;
  int charge = -1;

  friend bool operator==(const Participants&, const Participants&) = default;
};

/// Shared agent or shared task. A shared charging point alone is not a
/// conflict: vehicles serve the UAVs waiting there first come, first served.
inline bool has_conflict(const Participants& a, const Participants& b) {
  return (a.uav >= 0 && a.uav == b.uav) || (a.worker >= 0 && a.worker == b.worker) ||
         (a.vehicle >= 0 && a.vehicle == b.vehicle) || (a.task >= 0 && a.task == b.task);
}

enum class NodeKind : std::uint8_t { Ui, Wj, Vk, UiTx, WjTx, UiCy, VkCy, UiTxWj, UiCyVk };

inline constexpr std::array<std::string_view, 9> kNodeKindNames = {"Ui",   "Wj",   "Vk",     "UiTx",  "WjTx",
                                                                   "UiCy", "VkCy", "UiTxWj", "UiCyVk"};

inline std::string_view to_string(NodeKind k) { return kNodeKindNames[static_cast<std::size_t>(k)]; }

inline NodeKind parse_node_kind(std::string_view s) {
  for (std::size_t i = 0; i < kNodeKindNames.size(); ++i)
    if (kNodeKindNames[i] == s) return static_cast<NodeKind>(i);
  throw std::invalid_argument("unknown node kind: " + std::string(s));
}

/// 2 for task pairs, 1 for charge pairs, 0 for everything else.
inline int node_level(NodeKind k) {
  switch (k) {
    case NodeKind::UiTxWj:
      return 2;
    case NodeKind::UiCyVk:
      return 1;
    default:
      return 0;
  }
}

struct GraphNode {
  NodeId id = 0;
  NodeKind kind = NodeKind::Ui;
  Participants who;
  double weight = 0.0;
  int level = 0;
};

inline int node_level(const GraphNode& n) { return node_level(n.kind); }

inline bool has_conflict(const GraphNode& a, const GraphNode& b) { return has_conflict(a.who, b.who); }

/// Node list plus a symmetric, irreflexive conflict relation.
///
/// The relation is available in one of two forms. connect() materializes
/// compressed adjacency rows, which neighbors() exposes. index_cliques() only
/// records, per agent and per task, the nodes that use it; neighbours are then
/// enumerated on demand through for_each_neighbor(). The second form costs
/// memory linear in the node count, where the first grows with the square of
/// the clique sizes. A graph returned by build_nodes() carries neither.
class WeightedGraph {
public:
  WeightedGraph() = default;
  explicit WeightedGraph(std::vector<GraphNode> nodes) : nodes_(std::move(nodes)) {}

  std::size_t size() const { return nodes_.size(); }
  const GraphNode& node(NodeId v) const { return nodes_[v]; }
  const std::vector<GraphNode>& nodes() const { return nodes_; }
  double weight(NodeId v) const { return nodes_[v].weight; }
  int level(NodeId v) const { return nodes_[v].level; }

  /// Adjacency rows are materialized.
  bool has_edges() const { return offsets_.size() == nodes_.size() + 1; }
  /// Either form of the conflict relation is available.
  bool has_relation() const { return has_edges() || clique_indexed_; }
  std::size_t edge_count() const {
    if (!has_edges()) throw std::logic_error("WeightedGraph: adjacency not built");
    return targets_.size() / 2;
  }

  std::span<const NodeId> neighbors(NodeId v) const {
    if (!has_edges()) throw std::logic_error("WeightedGraph: adjacency not built");
    return {targets_.data() + offsets_[v], targets_.data() + offsets_[v + 1]};
  }

  /// Calls f once for every neighbour of v.
  template <class F>
  void for_each_neighbor(NodeId v, F&& f) const {
    if (has_edges()) {
      for (NodeId m : neighbors(v)) f(m);
      return;
    }
    if (!clique_indexed_) throw std::logic_error("WeightedGraph: adjacency not built");
    const Participants& p = nodes_[v].who;
    for (int r = 0; r < kResources; ++r) {
      const int k = resource_key(p, r);
      if (k < 0) continue;
      for (NodeId m : clique(r, k)) {
        if (m == v) continue;
        // Already reported through an earlier shared resource?
        const Participants& q = nodes_[m].who;
        bool seen = false;
        for (int e = 0; e < r && !seen; ++e) {
          const int ke = resource_key(p, e);
          seen = ke >= 0 && ke == resource_key(q, e);
        }
        if (!seen) f(m);
      }
    }
  }

  bool adjacent(NodeId a, NodeId b) const {
    if (!has_relation()) throw std::logic_error("WeightedGraph: adjacency not built");
    if (a == b) return false;
    if (from_conflicts_) return has_conflict(nodes_[a].who, nodes_[b].who);
    const auto row = neighbors(a);
    return std::binary_search(row.begin(), row.end(), b);
  }

  /// Records the nodes using each agent and task, which defines the
  /// conflict relation without materializing it.
  void index_cliques() {
    for (int r = 0; r < kResources; ++r) {
      int top = -1;
      for (const auto& n : nodes_) top = std::max(top, resource_key(n.who, r));
      auto& off = clique_offsets_[r];
      auto& mem = clique_members_[r];
      off.assign(static_cast<std::size_t>(top + 2), 0);
      for (const auto& n : nodes_)
        if (const int k = resource_key(n.who, r); k >= 0) ++off[k + 1];
      for (std::size_t i = 1; i < off.size(); ++i) off[i] += off[i - 1];
      mem.assign(off.empty() ? 0 : off.back(), 0);
      std::vector<std::size_t> fill(off.begin(), off.end());
      for (NodeId v = 0; v < nodes_.size(); ++v)
        if (const int k = resource_key(nodes_[v].who, r); k >= 0) mem[fill[k]++] = v;
    }
    clique_indexed_ = true;
    from_conflicts_ = true;
  }

  /// Materializes adjacency rows from has_conflict.
  void connect() {
    if (!clique_indexed_) index_cliques();
    offsets_.assign(nodes_.size() + 1, 0);
    targets_.clear();
    const std::size_t n = nodes_.size();
    for (NodeId v = 0; v < n; ++v) {
      // The row of v is not built yet, so for_each_neighbor takes the clique path.
      offsets_.resize(v + 1);
      for_each_neighbor(v, [this](NodeId m) { targets_.push_back(m); });
      offsets_.push_back(targets_.size());
    }
    offsets_.resize(n + 1, targets_.size());
  }

  /// Builds adjacency from an explicit undirected edge list.
  void set_edges(std::span<const std::pair<NodeId, NodeId>> edges) {
    std::vector<std::vector<NodeId>> adj(nodes_.size());
    for (auto [a, b] : edges) {
      if (a == b || a >= nodes_.size() || b >= nodes_.size()) throw std::invalid_argument("set_edges: bad edge");
      adj[a].push_back(b);
      adj[b].push_back(a);
    }
    offsets_.assign(nodes_.size() + 1, 0);
    targets_.clear();
    for (std::size_t v = 0; v < adj.size(); ++v) {
      std::sort(adj[v].begin(), adj[v].end());
      adj[v].erase(std::unique(adj[v].begin(), adj[v].end()), adj[v].end());
      targets_.insert(targets_.end(), adj[v].begin(), adj[v].end());
      offsets_[v + 1] = targets_.size();
    }
    clique_indexed_ = false;
    from_conflicts_ = false;
  }

private:
  static constexpr int kResources = 4;  // uav, worker, vehicle, task

  static int resource_key(const Participants& p, int r) {
    switch (r) {
      case 0: return p.uav;
      case 1: return p.worker;
      case 2: return p.vehicle;
      default: return p.task;
    }
  }

  std::span<const NodeId> clique(int r, int k) const {
    const auto& off = clique_offsets_[r];
    return {clique_members_[r].data() + off[k], clique_members_[r].data() + off[k + 1]};
  }

  std::vector<GraphNode> nodes_;
  std::vector<std::size_t> offsets_;
  std::vector<NodeId> targets_;
  std::array<std::vector<std::size_t>, kResources> clique_offsets_;
  std::array<std::vector<NodeId>, kResources> clique_members_;
  bool clique_indexed_ = false;
  bool from_conflicts_ = false;  // adjacency == has_conflict on participants
};

// ---------------------------------------------------------------------------
// Action timing shared by graph construction, the simulator and baselines.

/// Completion time of a UAV and worker meeting at a task and executing it.
inline double task_action_end(const Uav& u, const Worker& w, const Task& x, double now) {
  return now + std::max(travel_time(u.loc, x.loc, u.speed), travel_time(w.loc, x.loc, w.speed)) +
         x.cost_power / u.speed;
}

/// Completion time of a UAV and vehicle meeting at a charging point and
/// charging the UAV to full.
inline double charge_action_end(const Uav& u, const Vehicle& v, const ChargePoint& c, double now) {
  const double arrive = std::max(travel_time(u.loc, c.loc, u.speed), travel_time(v.loc, c.loc, v.speed));
  const double left = u.power - distance(u.loc, c.loc);
  return now + arrive + (u.full_power - left) / v.charge_power;
}

template <class Agent>
double move_end(const Agent& a, const GridPoint& dest, double now) {
  return now + travel_time(a.loc, dest, a.speed);
}

inline bool task_pair_fits(const Uav& u, const Worker& w, const Task& x, const Snapshot& s) {
  const double end = task_action_end(u, w, x, s.now);
  return end <= window_end(u, s) && end <= window_end(w, s);
}

inline bool charge_pair_fits(const Uav& u, const Vehicle& v, const ChargePoint& c, const Snapshot& s) {
  const double end = charge_action_end(u, v, c, s.now);
  return end <= window_end(u, s) && end <= window_end(v, s);
}

template <class Agent>
bool move_fits(const Agent& a, const GridPoint& dest, const Snapshot& s) {
  return move_end(a, dest, s.now) <= window_end(a, s);
}

// ---------------------------------------------------------------------------

/// Instantiates every node type for the snapshot, weighted, without edges.
/// Ordering is canonical: by kind, then by participant ids.
inline WeightedGraph build_nodes(const Snapshot& s, const CostTables& t, WeightMode mode) {
  std::vector<GraphNode> nodes;
  auto add = [&nodes](NodeKind kind, Participants who, double w) {
    nodes.push_back(GraphNode{static_cast<NodeId>(nodes.size()), kind, who, w, node_level(kind)});
  };
  const double stay = softplus(0.0);

  for (const auto& u : s.uavs) add(NodeKind::Ui, {.uav = u.id}, stay);
  for (const auto& w : s.workers) add(NodeKind::Wj, {.worker = w.id}, stay);
  for (const auto& v : s.vehicles) add(NodeKind::Vk, {.vehicle = v.id}, stay);

  // icmUi and icmWj at each task / charging point are shared between the
  // single-agent move node and every pair node at that target.
  const std::size_t nt = s.tasks.size(), nc = s.charges.size();
  GainEvaluator gains(s, t);
  std::vector<std::vector<char>> uav_task_ok(s.uavs.size(), std::vector<char>(nt, 0));
  std::vector<std::vector<double>> icm_ui_task(s.uavs.size(), std::vector<double>(nt, 0.0));
  std::vector<std::vector<double>> icm_ui_charge(s.uavs.size(), std::vector<double>(nc, 0.0));
  std::vector<std::vector<char>> uav_charge_ok(s.uavs.size(), std::vector<char>(nc, 0));
  for (std::size_t i = 0; i < s.uavs.size(); ++i) {
    const auto& u = s.uavs[i];
    for (std::size_t x = 0; x < nt; ++x) {
      if (!task_feasible(u, s.tasks[x], s.charges)) continue;
      uav_task_ok[i][x] = 1;
      icm_ui_task[i][x] = gains.uav(u, s.tasks[x].loc);
    }
    for (std::size_t y = 0; y < nc; ++y) {
      if (!charge_feasible(u, s.charges[y])) continue;
      uav_charge_ok[i][y] = 1;
      icm_ui_charge[i][y] = gains.uav(u, s.charges[y].loc);
    }
  }
  std::vector<std::vector<double>> icm_wj(s.workers.size(), std::vector<double>(nt, 0.0));
  for (std::size_t j = 0; j < s.workers.size(); ++j)
    for (std::size_t x = 0; x < nt; ++x) icm_wj[j][x] = gains.worker(s.workers[j], x);
  std::vector<std::vector<double>> icm_vk(s.vehicles.size(), std::vector<double>(nc, 0.0));
  for (std::size_t k = 0; k < s.vehicles.size(); ++k)
    for (std::size_t y = 0; y < nc; ++y) icm_vk[k][y] = gains.vehicle(s.vehicles[k], y);

  for (std::size_t i = 0; i < s.uavs.size(); ++i) {
    const auto& u = s.uavs[i];
    for (std::size_t x = 0; x < nt; ++x) {
      const auto& task = s.tasks[x];
      if (uav_task_ok[i][x] && task.loc != u.loc && move_fits(u, task.loc, s))
        add(NodeKind::UiTx, {.uav = u.id, .task = task.id}, icm_ui_task[i][x]);
    }
  }
  for (std::size_t j = 0; j < s.workers.size(); ++j) {
    const auto& w = s.workers[j];
    for (std::size_t x = 0; x < nt; ++x) {
      const auto& task = s.tasks[x];
      if (task.loc != w.loc && move_fits(w, task.loc, s))
        add(NodeKind::WjTx, {.worker = w.id, .task = task.id}, icm_wj[j][x]);
    }
  }
  for (std::size_t i = 0; i < s.uavs.size(); ++i) {
    const auto& u = s.uavs[i];
    for (std::size_t y = 0; y < nc; ++y) {
      const auto& c = s.charges[y];
      if (uav_charge_ok[i][y] && c.loc != u.loc && move_fits(u, c.loc, s))
        add(NodeKind::UiCy, {.uav = u.id, .charge = c.id}, icm_ui_charge[i][y]);
    }
  }
  for (std::size_t k = 0; k < s.vehicles.size(); ++k) {
    const auto& v = s.vehicles[k];
    for (std::size_t y = 0; y < nc; ++y) {
      const auto& c = s.charges[y];
      if (c.loc != v.loc && move_fits(v, c.loc, s))
        add(NodeKind::VkCy, {.vehicle = v.id, .charge = c.id}, icm_vk[k][y]);
    }
  }
  for (std::size_t i = 0; i < s.uavs.size(); ++i) {
    const auto& u = s.uavs[i];
    for (std::size_t x = 0; x < nt; ++x) {
      if (!uav_task_ok[i][x]) continue;
      const auto& task = s.tasks[x];
      const double cu = ceil_to_interval(travel_time(u.loc, task.loc, u.speed), s.interval);
      for (std::size_t j = 0; j < s.workers.size(); ++j) {
        const auto& w = s.workers[j];
        if (!task_pair_fits(u, w, task, s)) continue;
        const double cw = ceil_to_interval(travel_time(w.loc, task.loc, w.speed), s.interval);
        add(NodeKind::UiTxWj, {.uav = u.id, .worker = w.id, .task = task.id},
            task_pair_base(cu, cw, mode) + icm_wj[j][x] + icm_ui_task[i][x]);
      }
    }
  }
  for (std::size_t i = 0; i < s.uavs.size(); ++i) {
    const auto& u = s.uavs[i];
    for (std::size_t y = 0; y < nc; ++y) {
      if (!uav_charge_ok[i][y]) continue;
      const auto& c = s.charges[y];
      const double cu = ceil_to_interval(travel_time(u.loc, c.loc, u.speed), s.interval);
      for (std::size_t k = 0; k < s.vehicles.size(); ++k) {
        const auto& v = s.vehicles[k];
        if (!charge_pair_fits(u, v, c, s)) continue;
        const double cv = ceil_to_interval(travel_time(v.loc, c.loc, v.speed), s.interval);
        add(NodeKind::UiCyVk, {.uav = u.id, .vehicle = v.id, .charge = c.id},
            charge_pair_base(u, cu, cv, mode) + icm_vk[k][y] + icm_ui_charge[i][y]);
      }
    }
  }
  return WeightedGraph(std::move(nodes));
}

inline WeightedGraph build_graph(const Snapshot& s, const CostTables& t, WeightMode mode) {
  auto g = build_nodes(s, t, mode);
  g.connect();
  return g;
}

/// Upper bound on the node count of each kind, indexed by NodeKind.
using KindCounts = std::array<std::size_t, 9>;

inline KindCounts worst_case_counts(std::size_t uavs, std::size_t workers, std::size_t vehicles,
                                    std::size_t tasks, std::size_t charges) {
  return {uavs,           workers,          vehicles,
          uavs * tasks,   workers * tasks,  uavs * charges,
          vehicles * charges, uavs * tasks * workers, uavs * charges * vehicles};
}

inline KindCounts worst_case_counts(const Scenario& s) {
  return worst_case_counts(s.uavs.size(), s.workers.size(), s.vehicles.size(), s.tasks.size(), s.charges.size());
}

inline KindCounts count_kinds(const WeightedGraph& g) {
  KindCounts c{};
  for (const auto& n : g.nodes()) ++c[static_cast<std::size_t>(n.kind)];
  return c;
}

// ---------------------------------------------------------------------------
// Edge-list debug format:
//
//   hocs-graph 1
//   nodes <N>
//   <id> <kind> <weight> <level> <uav> <worker> <vehicle> <task> <charge>
//   edges <E>
//   <a> <b>            (a < b, one line per undirected edge)

inline void write_edge_list(std::ostream& os, const WeightedGraph& g) {
  os << "hocs-graph 1\n";
  os << "nodes " << g.size() << '\n';
  char buf[64];
  for (const auto& n : g.nodes()) {
    std::snprintf(buf, sizeof buf, "%.17g", n.weight);
    os << n.id << ' ' << to_string(n.kind) << ' ' << buf << ' ' << n.level << ' ' << n.who.uav << ' '
       << n.who.worker << ' ' << n.who.vehicle << ' ' << n.who.task << ' ' << n.who.charge << '\n';
  }
  os << "edges " << (g.has_edges() ? g.edge_count() : 0) << '\n';
  if (!g.has_edges()) return;
  for (NodeId v = 0; v < g.size(); ++v)
    for (NodeId m : g.neighbors(v))
      if (v < m) os << v << ' ' << m << '\n';
}

inline WeightedGraph read_edge_list(std::istream& is) {
  auto expect = [&is](std::string_view word) {
    std::string tok;
    if (!(is >> tok) || tok != word) throw std::runtime_error("edge list: expected '" + std::string(word) + "'");
  };
  expect("hocs-graph");
  int version = 0;
  if (!(is >> version) || version != 1) throw std::runtime_error("edge list: unsupported version");
  expect("nodes");
  std::size_t n = 0;
  if (!(is >> n)) throw std::runtime_error("edge list: missing node count");
  std::vector<GraphNode> nodes(n);
  for (std::size_t i = 0; i < n; ++i) {
    GraphNode g;
    std::string kind;
    if (!(is >> g.id >> kind >> g.weight >> g.level >> g.who.uav >> g.who.worker >> g.who.vehicle >> g.who.task >>
          g.who.charge))
      throw std::runtime_error("edge list: truncated node table");
    if (g.id != i) throw std::runtime_error("edge list: node ids must be dense and ordered");
    g.kind = parse_node_kind(kind);
    nodes[i] = g;
  }
  expect("edges");
  std::size_t e = 0;
  if (!(is >> e)) throw std::runtime_error("edge list: missing edge count");
  std::vector<std::pair<NodeId, NodeId>> edges(e);
  for (auto& [a, b] : edges)
    if (!(is >> a >> b)) throw std::runtime_error("edge list: truncated edge table");
  WeightedGraph g(std::move(nodes));
  g.set_edges(edges);
  return g;
}

}  // namespace hocs
