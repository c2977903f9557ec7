#pragma once

// Committed actions: what a scheduler hands to the simulator for one epoch.

#include <optional>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "hocs/graph.hpp"
#include "hocs/model.hpp"

namespace hocs {

enum class ActionKind : std::uint8_t { stay, move, joint_task, joint_charge };

inline std::string_view to_string(ActionKind k) {
  switch (k) {
    case ActionKind::stay: return "stay";
    case ActionKind::move: return "move";
    case ActionKind::joint_task: return "joint_task";
    default: return "joint_charge";
  }
}

/// A move carries exactly one agent; a joint task a UAV, a worker and a
/// task; a joint charge a UAV, a vehicle and a charging point.
struct Action {
  ActionKind kind = ActionKind::stay;
  Participants who;
  GridPoint dest;

  bool is_joint() const { return kind == ActionKind::joint_task || kind == ActionKind::joint_charge; }
};

using Schedule = std::vector<Action>;

inline Action make_stay(Participants who) { return {ActionKind::stay, who, {}}; }

inline Action make_move(Participants who, GridPoint dest) { return {ActionKind::move, who, dest}; }

inline Action make_joint_task(const Uav& u, const Worker& w, const Task& x) {
  return {ActionKind::joint_task, {.uav = u.id, .worker = w.id, .task = x.id}, x.loc};
}

inline Action make_joint_charge(const Uav& u, const Vehicle& v, const ChargePoint& c) {
  return {ActionKind::joint_charge, {.uav = u.id, .vehicle = v.id, .charge = c.id}, c.loc};
}

/// The action a graph node stands for. Target locations are looked up by id
/// in the given task and charge lists.
inline Action action_from_node(const GraphNode& n, std::span<const Task> tasks, std::span<const ChargePoint> charges) {
  auto task_loc = [&](int id) {
    if (id < 0 || static_cast<std::size_t>(id) >= tasks.size()) throw std::out_of_range("action_from_node: task id");
    return tasks[id].loc;
  };
  auto charge_loc = [&](int id) {
    if (id < 0 || static_cast<std::size_t>(id) >= charges.size()) throw std::out_of_range("action_from_node: charge id");
    return charges[id].loc;
  };
  switch (n.kind) {
    case NodeKind::Ui:
    case NodeKind::Wj:
    case NodeKind::Vk:
      return make_stay(n.who);
    case NodeKind::UiTx:
    case NodeKind::WjTx:
      return make_move(n.who, task_loc(n.who.task));
    case NodeKind::UiCy:
    case NodeKind::VkCy:
      return make_move(n.who, charge_loc(n.who.charge));
    case NodeKind::UiTxWj:
      return {ActionKind::joint_task, n.who, task_loc(n.who.task)};
    case NodeKind::UiCyVk:
      return {ActionKind::joint_charge, n.who, charge_loc(n.who.charge)};
  }
  throw std::logic_error("action_from_node: unknown kind");
}

/// Actions for every node of an independent set.
template <class Members>
Schedule schedule_from_nodes(const WeightedGraph& g, const Members& members, std::span<const Task> tasks,
                             std::span<const ChargePoint> charges) {
  Schedule out;
  for (NodeId v : members) out.push_back(action_from_node(g.node(v), tasks, charges));
  return out;
}

}  // namespace hocs
