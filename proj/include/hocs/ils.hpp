#pragma once

// Iterated local search for maximum weight independent set.
//
// The search alternates a gain-driven local search with a perturbation that
// works on one weight level at a time and re-fills the gap with neighbours of
// a different level, so the next local search cannot simply undo it. Mildly
// worse solutions are accepted while the acceptance threshold (0.95 at the
// start, decaying by 1% per iteration once the search stagnates) allows it.
//
// Everything here is templated on the graph, which only needs to expose
// size(), weight(v), level(v) and either neighbors(v) or for_each_neighbor(v, f).

#include <algorithm>
#include <array>
#include <concepts>
#include <cstdint>
#include <functional>
#include <optional>
#include <queue>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "hocs/graph.hpp"
#include "hocs/random.hpp"

namespace hocs {

template <class G>
concept MwisGraph = requires(const G& g, NodeId v) {
  { g.size() } -> std::convertible_to<std::size_t>;
  { g.weight(v) } -> std::convertible_to<double>;
  { g.level(v) } -> std::convertible_to<int>;
} && (requires(const G& g, NodeId v) { g.for_each_neighbor(v, [](NodeId) {}); } ||
      requires(const G& g, NodeId v) {
        { *std::ranges::begin(g.neighbors(v)) } -> std::convertible_to<NodeId>;
      });

namespace detail {

template <class G, class F>
void for_each_neighbor(const G& g, NodeId v, F&& f) {
  if constexpr (requires { g.for_each_neighbor(v, f); }) {
    g.for_each_neighbor(v, f);
  } else {
    for (NodeId m : g.neighbors(v)) f(m);
  }
}

template <class G>
bool adjacent(const G& g, NodeId a, NodeId b) {
  if constexpr (requires { { g.adjacent(a, b) } -> std::convertible_to<bool>; }) {
    return g.adjacent(a, b);
  } else {
    bool hit = false;
    for_each_neighbor(g, a, [&](NodeId m) { hit = hit || m == b; });
    return hit;
  }
}

}  // namespace detail

/// Adjacency-list graph with sorted rows, for hand-built instances and
/// solver subproblems.
class SimpleGraph {
public:
  SimpleGraph() = default;
  explicit SimpleGraph(std::vector<double> weights, std::vector<int> levels = {})
      : weights_(std::move(weights)), levels_(std::move(levels)), adj_(weights_.size()) {
    if (levels_.empty()) levels_.assign(weights_.size(), 0);
    if (levels_.size() != weights_.size()) throw std::invalid_argument("SimpleGraph: levels and weights differ in size");
  }

  NodeId add_node(double weight, int level = 0) {
    weights_.push_back(weight);
    levels_.push_back(level);
    adj_.emplace_back();
    return static_cast<NodeId>(weights_.size() - 1);
  }

  /// Adds the undirected edge {a, b}; repeated edges are ignored.
  void add_edge(NodeId a, NodeId b) {
    if (a == b || a >= size() || b >= size()) throw std::invalid_argument("SimpleGraph: bad edge");
    if (insert_sorted(adj_[a], b)) {
      insert_sorted(adj_[b], a);
      ++edges_;
    }
  }

  std::size_t size() const { return weights_.size(); }
  std::size_t edge_count() const { return edges_; }
  double weight(NodeId v) const { return weights_[v]; }
  int level(NodeId v) const { return levels_[v]; }
  std::span<const NodeId> neighbors(NodeId v) const { return adj_[v]; }
  bool adjacent(NodeId a, NodeId b) const { return std::binary_search(adj_[a].begin(), adj_[a].end(), b); }

private:
  static bool insert_sorted(std::vector<NodeId>& row, NodeId v) {
    auto it = std::lower_bound(row.begin(), row.end(), v);
    if (it != row.end() && *it == v) return false;
    row.insert(it, v);
    return true;
  }

  std::vector<double> weights_;
  std::vector<int> levels_;
  std::vector<std::vector<NodeId>> adj_;
  std::size_t edges_ = 0;
};

/// Gains at or below this are treated as zero.
inline constexpr double kGainEpsilon = 1e-9;

struct Solution {
  std::vector<NodeId> members;  // ascending
  double total_weight = 0.0;

  bool contains(NodeId v) const { return std::binary_search(members.begin(), members.end(), v); }
  std::size_t size() const { return members.size(); }
};

template <MwisGraph G>
Solution make_solution(const G& g, std::vector<NodeId> members) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  Solution s{std::move(members), 0.0};
  for (NodeId v : s.members) s.total_weight += g.weight(v);
  return s;
}

template <MwisGraph G>
bool is_independent(const G& g, const Solution& s) {
  std::vector<char> in(g.size(), 0);
  for (NodeId v : s.members) in[v] = 1;
  bool clash = false;
  for (NodeId v : s.members) detail::for_each_neighbor(g, v, [&](NodeId m) { clash = clash || in[m]; });
  return !clash;
}

struct IlsParams {
  int max_iter = 1000;
  double accept_threshold_init = 0.95;
  double threshold_decay = 0.99;
  double stagnation_fraction = 0.25;
  std::uint64_t rng_seed = 0;
};

/// One row of the optional per-iteration trace.
struct IlsStep {
  int iter = 0;
  double current_weight = 0.0;
  double best_weight = 0.0;
  double threshold = 0.0;
  bool accepted = false;
};

/// Nodes removed from and added to a solution by one perturbation round.
struct PerturbReport {
  int tier = -1;  // level the removals were drawn from; -1 when nothing was removed
  std::vector<NodeId> removed;
  std::vector<NodeId> added;
};

namespace detail {

/// Mutable independent set with, for every node, the total weight of its
/// neighbours currently in the set. sigma(v) = w(v) - that total.
template <MwisGraph G>
class SearchState {
public:
  explicit SearchState(const G& g)
      : g_(&g), in_(g.size(), 0), pos_(g.size(), 0), conflict_(g.size(), 0.0), tight_(g.size(), 0) {}

  SearchState(const G& g, const Solution& s) : SearchState(g) {
    for (NodeId v : s.members) add(v);
  }

  const G& graph() const { return *g_; }
  bool contains(NodeId v) const { return in_[v] != 0; }
  double weight() const { return weight_; }
  std::size_t size() const { return members_.size(); }
  const std::vector<NodeId>& members() const { return members_; }
  double sigma(NodeId v) const { return g_->weight(v) - conflict_[v]; }
  /// Number of members adjacent to v.
  int tightness(NodeId v) const { return tight_[v]; }

  bool blocked(NodeId v) const { return tight_[v] > 0; }

  void add(NodeId v) {
    in_[v] = 1;
    pos_[v] = members_.size();
    members_.push_back(v);
    weight_ += g_->weight(v);
    const double w = g_->weight(v);
    for_each_neighbor(*g_, v, [this, w](NodeId m) {
      conflict_[m] += w;
      ++tight_[m];
    });
  }

  template <class OnRaise>
  void remove(NodeId v, OnRaise&& on_raise) {
    in_[v] = 0;
    const std::size_t p = pos_[v];
    members_[p] = members_.back();
    pos_[members_[p]] = p;
    members_.pop_back();
    weight_ -= g_->weight(v);
    const double w = g_->weight(v);
    for_each_neighbor(*g_, v, [&](NodeId m) {
      conflict_[m] -= w;
      --tight_[m];
      on_raise(m);
    });
  }

  void remove(NodeId v) {
    remove(v, [](NodeId) {});
  }

  Solution to_solution() const { return make_solution(*g_, members_); }

private:
  const G* g_;
  std::vector<char> in_;
  std::vector<std::size_t> pos_;
  std::vector<double> conflict_;
  std::vector<int> tight_;
  std::vector<NodeId> members_;
  double weight_ = 0.0;
};

template <MwisGraph G>
void greedy_fill(SearchState<G>& st) {
  const G& g = st.graph();
  std::vector<NodeId> order(g.size());
  for (NodeId v = 0; v < order.size(); ++v) order[v] = v;
  std::sort(order.begin(), order.end(), [&g](NodeId a, NodeId b) {
    if (g.weight(a) != g.weight(b)) return g.weight(a) > g.weight(b);
    if (g.level(a) != g.level(b)) return g.level(a) > g.level(b);
    return a < b;
  });
  for (NodeId v : order)
    if (!st.contains(v) && !st.blocked(v)) st.add(v);
}

/// Pair checks allowed per member in one (1,2)-swap attempt.
inline constexpr int kSwapPairBudget = 256;

/// Looks for two non-adjacent outside nodes whose only member neighbour is x
/// and whose weights together exceed w(x). Returns them, or nothing.
template <MwisGraph G>
std::optional<std::pair<NodeId, NodeId>> find_two_for_one(const SearchState<G>& st, NodeId x,
                                                          std::vector<NodeId>& buf) {
  const G& g = st.graph();
  buf.clear();
  for_each_neighbor(g, x, [&](NodeId m) {
    if (!st.contains(m) && st.tightness(m) == 1 && g.weight(m) > 0.0) buf.push_back(m);
  });
  if (buf.size() < 2) return std::nullopt;
  std::sort(buf.begin(), buf.end(), [&g](NodeId a, NodeId b) {
    return g.weight(a) != g.weight(b) ? g.weight(a) > g.weight(b) : a < b;
  });
  const double target = g.weight(x) + kGainEpsilon;
  int budget = kSwapPairBudget;
  for (std::size_t i = 0; i + 1 < buf.size(); ++i) {
    if (g.weight(buf[i]) + g.weight(buf[i + 1]) <= target) break;
    for (std::size_t j = i + 1; j < buf.size(); ++j) {
      if (g.weight(buf[i]) + g.weight(buf[j]) <= target) break;
      if (!adjacent(g, buf[i], buf[j])) return std::pair{buf[i], buf[j]};
      if (--budget == 0) return std::nullopt;
    }
  }
  return std::nullopt;
}

/// Two phases, repeated until neither applies: insert the highest-sigma
/// outside node while any sigma is positive (max-queue, lazily invalidated:
/// an entry is live only while its key equals the node's current sigma),
/// then try (1,2)-swaps on every member.
template <MwisGraph G>
void local_search(SearchState<G>& st) {
  using Entry = std::pair<double, NodeId>;
  auto worse = [](const Entry& a, const Entry& b) {
    if (a.first != b.first) return a.first < b.first;
    return a.second > b.second;
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(worse)> queue(worse);
  const G& g = st.graph();
  for (NodeId v = 0; v < g.size(); ++v)
    if (!st.contains(v) && st.sigma(v) > kGainEpsilon) queue.emplace(st.sigma(v), v);

  auto push_if_gainful = [&](NodeId m) {
    if (!st.contains(m) && st.sigma(m) > kGainEpsilon) queue.emplace(st.sigma(m), m);
  };
  std::vector<NodeId> evict, members, buf;
  for (;;) {
    while (!queue.empty()) {
      const auto [key, v] = queue.top();
      queue.pop();
      if (st.contains(v) || key != st.sigma(v) || key <= kGainEpsilon) continue;
      evict.clear();
      for_each_neighbor(g, v, [&](NodeId m) {
        if (st.contains(m)) evict.push_back(m);
      });
      for (NodeId m : evict) st.remove(m, push_if_gainful);
      st.add(v);
    }
    members = st.members();
    std::sort(members.begin(), members.end());
    bool swapped = false;
    for (NodeId x : members) {
      if (!st.contains(x)) continue;
      const auto pair = find_two_for_one(st, x, buf);
      if (!pair) continue;
      st.remove(x, push_if_gainful);
      st.add(pair->first);
      st.add(pair->second);
      swapped = true;
    }
    if (!swapped) return;
  }
}

template <MwisGraph G>
PerturbReport perturb(SearchState<G>& st, int strength, int iter, Rng& rng) {
  const G& g = st.graph();
  std::array<std::vector<NodeId>, 3> tiers;
  for (NodeId v : st.members()) {
    const int l = std::clamp(g.level(v), 0, 2);
    tiers[l].push_back(v);
  }
  for (auto& t : tiers) std::sort(t.begin(), t.end());

  PerturbReport report;
  const int tier = iter % 3;
  const auto& pool = tiers[tier];
  if (pool.empty()) return report;
  const std::size_t k = std::max(strength, 1);
  const std::size_t take = tier == 2 ? std::min<std::size_t>(std::max<std::size_t>(1, k / 2), pool.size())
                                     : std::min(k, pool.size());
  report.tier = tier;
  report.removed = rng.sample(pool, take);

  std::vector<NodeId> candidates;
  std::vector<char> seen(g.size(), 0);
  for (NodeId r : report.removed) {
    for_each_neighbor(g, r, [&](NodeId m) {
      if (seen[m] || st.contains(m) || g.level(m) == g.level(r)) return;
      seen[m] = 1;
      candidates.push_back(m);
    });
  }
  for (NodeId r : report.removed) st.remove(r);
  rng.shuffle(candidates);
  for (NodeId c : candidates) {
    if (st.blocked(c)) continue;
    st.add(c);
    report.added.push_back(c);
  }
  return report;
}

}  // namespace detail

/// Gain of inserting n into s: its weight minus the weight of the members
/// it would evict.
template <MwisGraph G>
double sigma(const G& g, NodeId n, const Solution& s) {
  if (s.contains(n)) throw std::invalid_argument("sigma: node already in the solution");
  double evicted = 0.0;
  detail::for_each_neighbor(g, n, [&](NodeId m) {
    if (s.contains(m)) evicted += g.weight(m);
  });
  return g.weight(n) - evicted;
}

/// Greedy maximal independent set by descending (weight, level), id ascending.
template <MwisGraph G>
Solution initial_solution(const G& g) {
  detail::SearchState<G> st(g);
  detail::greedy_fill(st);
  return st.to_solution();
}

/// Repeatedly inserts the highest-gain outside node (evicting its
/// neighbours) and trades single members for heavier non-adjacent pairs,
/// until neither move improves the weight. On return no outside node has
/// positive gain.
template <MwisGraph G>
Solution local_search(const G& g, const Solution& s) {
  detail::SearchState<G> st(g, s);
  detail::local_search(st);
  return st.to_solution();
}

/// One stratified perturbation round; `iter` selects the tier (iter mod 3).
template <MwisGraph G>
Solution perturb(const G& g, const Solution& s, int strength, int iter, Rng& rng, PerturbReport* report = nullptr) {
  detail::SearchState<G> st(g, s);
  auto r = detail::perturb(st, strength, iter, rng);
  if (report) *report = std::move(r);
  return st.to_solution();
}

/// Perturbation strength grows by one every ten rejected iterations, capped
/// at a quarter of the solution (but at least 2).
inline int adapt_strength(std::size_t solution_size, int no_improve_count) {
  const int cap = std::max<int>(2, static_cast<int>((solution_size + 3) / 4));
  return std::min(1 + no_improve_count / 10, cap);
}

/// Accepts improvements outright, and worse candidates whose weight is still
/// at least threshold times the current one.
inline bool accept(double current_weight, double candidate_weight, double threshold) {
  if (candidate_weight > current_weight) return true;
  return candidate_weight >= threshold * current_weight;
}

template <MwisGraph G>
Solution solve_ils(const G& g, const IlsParams& params, const std::optional<Solution>& warm_start = std::nullopt,
                   const std::function<void(const IlsStep&)>& observer = {}) {
  if (params.max_iter < 0) throw std::invalid_argument("solve_ils: max_iter must be nonnegative");
  Rng rng(params.rng_seed);
  detail::SearchState<G> current(g);
  if (warm_start) {
    for (NodeId v : warm_start->members) current.add(v);
  } else {
    detail::greedy_fill(current);
  }
  detail::local_search(current);
  Solution best = current.to_solution();
  double best_weight = current.weight();

  int no_improve = 0;
  double threshold = params.accept_threshold_init;
  const double stagnation_limit = params.max_iter * params.stagnation_fraction;
  for (int iter = 1; iter <= params.max_iter; ++iter) {
    detail::SearchState<G> candidate = current;
    const int strength = adapt_strength(current.size(), no_improve);
    detail::perturb(candidate, strength, iter, rng);
    detail::local_search(candidate);
    const bool accepted = accept(current.weight(), candidate.weight(), threshold);
    if (accepted) {
      current = std::move(candidate);
      if (current.weight() > best_weight + kGainEpsilon) {
        best = current.to_solution();
        best_weight = current.weight();
      }
    } else {
      ++no_improve;
    }
    if (no_improve > stagnation_limit) threshold *= params.threshold_decay;
    if (observer) observer(IlsStep{iter, current.weight(), best.total_weight, threshold, accepted});
  }
  return best;
}

}  // namespace hocs
