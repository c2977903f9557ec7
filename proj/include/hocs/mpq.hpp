#pragma once

// Multi-priority-queue acceleration of the ILS solver.
//
// Nodes are split into one queue per agent. Each round pulls the K heaviest
// remaining nodes from every queue into a growing subgraph and re-solves it
// with ILS, warm-started from the previous answer. A round that does not
// raise the weight doubles K. The loop ends once every agent takes part in
// the solution or nothing is left to extract, so only a small, high-weight
// slice of the full graph is ever searched.

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "hocs/graph.hpp"
#include "hocs/ils.hpp"

namespace hocs {

enum class AgentType : std::uint8_t { uav, worker, vehicle };

inline std::string_view to_string(AgentType t) {
  switch (t) {
    case AgentType::uav: return "uav";
    case AgentType::worker: return "worker";
    default: return "vehicle";
  }
}

struct AgentRef {
  AgentType type = AgentType::uav;
  int id = 0;

  friend bool operator==(const AgentRef&, const AgentRef&) = default;
  friend auto operator<=>(const AgentRef&, const AgentRef&) = default;
};

/// The agent whose queue holds a node: its UAV if any, else its worker,
/// else its vehicle.
inline AgentRef queue_owner(const GraphNode& n) {
  if (n.who.uav >= 0) return {AgentType::uav, n.who.uav};
  if (n.who.worker >= 0) return {AgentType::worker, n.who.worker};
  if (n.who.vehicle >= 0) return {AgentType::vehicle, n.who.vehicle};
  throw std::invalid_argument("queue_owner: node involves no agent");
}

/// One queue per agent, each a weight-descending (id-ascending) list
/// consumed from the front.
class AgentQueues {
public:
  std::size_t queue_count() const { return agents_.size(); }
  const AgentRef& agent(std::size_t q) const { return agents_[q]; }
  std::optional<std::size_t> find(AgentRef a) const {
    auto it = std::lower_bound(agents_.begin(), agents_.end(), a);
    if (it == agents_.end() || *it != a) return std::nullopt;
    return static_cast<std::size_t>(it - agents_.begin());
  }

  /// Nodes still queued for agent q, heaviest first.
  std::span<const NodeId> pending(std::size_t q) const {
    return std::span<const NodeId>(entries_[q]).subspan(head_[q]);
  }
  bool empty(std::size_t q) const { return head_[q] == entries_[q].size(); }
  bool all_empty() const {
    for (std::size_t q = 0; q < agents_.size(); ++q)
      if (!empty(q)) return false;
    return true;
  }
  std::size_t total_pending() const {
    std::size_t n = 0;
    for (std::size_t q = 0; q < agents_.size(); ++q) n += entries_[q].size() - head_[q];
    return n;
  }

  /// Pops up to k entries from the front of queue q.
  std::span<const NodeId> pop(std::size_t q, std::size_t k) {
    const std::size_t from = head_[q];
    head_[q] = std::min(entries_[q].size(), from + k);
    return std::span<const NodeId>(entries_[q]).subspan(from, head_[q] - from);
  }

  friend AgentQueues build_queues(const WeightedGraph& g);

private:
  std::vector<AgentRef> agents_;  // sorted: uavs, workers, vehicles, each by id
  std::vector<std::vector<NodeId>> entries_;
  std::vector<std::size_t> head_;
};

inline AgentQueues build_queues(const WeightedGraph& g) {
  AgentQueues qs;
  for (const auto& n : g.nodes()) qs.agents_.push_back(queue_owner(n));
  std::sort(qs.agents_.begin(), qs.agents_.end());
  qs.agents_.erase(std::unique(qs.agents_.begin(), qs.agents_.end()), qs.agents_.end());
  qs.entries_.resize(qs.agents_.size());
  qs.head_.assign(qs.agents_.size(), 0);
  for (const auto& n : g.nodes()) qs.entries_[*qs.find(queue_owner(n))].push_back(n.id);
  for (auto& e : qs.entries_) {
    std::sort(e.begin(), e.end(), [&g](NodeId a, NodeId b) {
      return g.weight(a) != g.weight(b) ? g.weight(a) > g.weight(b) : a < b;
    });
  }
  return qs;
}

/// Up to k of the heaviest remaining nodes from every queue, in queue order.
inline std::vector<NodeId> extract_top_k(AgentQueues& qs, std::size_t k) {
  if (k == 0) throw std::invalid_argument("extract_top_k: K must be at least 1");
  std::vector<NodeId> out;
  for (std::size_t q = 0; q < qs.queue_count(); ++q) {
    const auto got = qs.pop(q, k);
    out.insert(out.end(), got.begin(), got.end());
  }
  return out;
}

struct MpqRound {
  int round = 0;
  std::size_t k = 0;              // extraction count used this round
  std::size_t subgraph_size = 0;  // after extraction
  double best_weight = 0.0;       // after this round
  bool improved = false;
};

struct MpqTrace {
  std::vector<MpqRound> rounds;
};

struct MpqParams {
  IlsParams ils{.max_iter = 100};
  std::size_t initial_k = 1;
};

/// Trace as text: a header comment, then one line per round.
inline void write_mpq_trace(std::ostream& os, const MpqTrace& t) {
  os << "# round k subgraph_size best_weight improved\n";
  char buf[64];
  for (const auto& r : t.rounds) {
    std::snprintf(buf, sizeof buf, "%.17g", r.best_weight);
    os << r.round << ' ' << r.k << ' ' << r.subgraph_size << ' ' << buf << ' ' << (r.improved ? 1 : 0) << '\n';
  }
}

namespace detail {

/// Node-induced subgraph of a WeightedGraph that grows by appending nodes.
/// Edges among members come from the parent's adjacency when it has one,
/// otherwise from has_conflict.
class GrowingSubgraph {
public:
  explicit GrowingSubgraph(const WeightedGraph& parent)
      : parent_(&parent), local_(parent.size(), kAbsent) {}

  const SimpleGraph& graph() const { return sub_; }
  NodeId to_parent(NodeId local) const { return to_parent_[local]; }
  std::size_t size() const { return sub_.size(); }

  void add(NodeId v) {
    if (local_[v] != kAbsent) return;
    const NodeId me = sub_.add_node(parent_->weight(v), parent_->level(v));
    local_[v] = me;
    to_parent_.push_back(v);
    if (parent_->has_relation()) {
      parent_->for_each_neighbor(v, [&](NodeId m) {
        if (local_[m] != kAbsent) sub_.add_edge(me, local_[m]);
      });
    } else {
      const auto& who = parent_->node(v).who;
      const int keys[] = {who.uav, who.worker, who.vehicle, who.task};
      for (int r = 0; r < 4; ++r) {
        if (keys[r] < 0) continue;
        auto& bucket = buckets_[r];
        if (bucket.size() <= static_cast<std::size_t>(keys[r])) bucket.resize(keys[r] + 1);
        for (NodeId other : bucket[keys[r]]) sub_.add_edge(me, other);
        bucket[keys[r]].push_back(me);
      }
    }
  }

private:
  static constexpr NodeId kAbsent = static_cast<NodeId>(-1);
  const WeightedGraph* parent_;
  SimpleGraph sub_;
  std::vector<NodeId> local_;
  std::vector<NodeId> to_parent_;
  std::array<std::vector<std::vector<NodeId>>, 4> buckets_;  // subgraph ids per uav, worker, vehicle, task
};

}  // namespace detail

/// Runs the queue-driven search over g. The graph needs no adjacency; edges
/// among extracted nodes are derived as they enter the subgraph. The returned
/// solution uses g's node ids.
inline Solution solve_mpq(const WeightedGraph& g, const MpqParams& params = {}, MpqTrace* trace = nullptr) {
  if (params.initial_k == 0) throw std::invalid_argument("solve_mpq: initial K must be at least 1");
  AgentQueues queues = build_queues(g);
  detail::GrowingSubgraph sub(g);
  Solution current;  // in subgraph ids
  std::size_t k = params.initial_k;

  auto everyone_represented = [&] {
    std::vector<char> seen(queues.queue_count(), 0);
    for (NodeId local : current.members) {
      const auto& who = g.node(sub.to_parent(local)).who;
      if (who.uav >= 0) seen[*queues.find({AgentType::uav, who.uav})] = 1;
      if (who.worker >= 0)
        if (auto q = queues.find({AgentType::worker, who.worker})) seen[*q] = 1;
      if (who.vehicle >= 0)
        if (auto q = queues.find({AgentType::vehicle, who.vehicle})) seen[*q] = 1;
    }
    for (std::size_t q = 0; q < queues.queue_count(); ++q)
      if (!seen[q] && !queues.empty(q)) return false;
    return true;
  };

  for (int round = 1; !queues.all_empty(); ++round) {
    for (NodeId v : extract_top_k(queues, k)) sub.add(v);
    IlsParams ils = params.ils;
    ils.rng_seed = params.ils.rng_seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(round);
    Solution found = solve_ils(sub.graph(), ils, current);
    const bool improved = found.total_weight > current.total_weight + kGainEpsilon;
    if (trace) {
      trace->rounds.push_back(MpqRound{round, k, sub.size(), improved ? found.total_weight : current.total_weight,
                                       improved});
    }
    if (improved) {
      current = std::move(found);
    } else {
      k *= 2;
    }
    if (everyone_represented()) break;
  }

  std::vector<NodeId> members;
  members.reserve(current.size());
  for (NodeId local : current.members) members.push_back(sub.to_parent(local));
  return make_solution(g, std::move(members));
}

}  // namespace hocs
