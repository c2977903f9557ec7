#pragma once

// Event-driven world simulation.
//
// Decisions happen at epochs t * interval. Between epochs the engine replays
// committed actions as timed events: arrivals (travel energy is paid on
// arrival), task completions, and charging sessions served first come, first
// served at each vehicle. Agents become schedulable again at the first epoch
// after their action ends.
//
// Optional perturbations:
//   wind        - a UAV action consumes (1 + d) per km, d drawn per action;
//                 planning still assumes 1.
//   comms_cost  - every online UAV loses d power per epoch (floored at 0).
//   failure     - each idle online agent drops out for good with prob. p
//                 per epoch.
//   match loss  - each committed joint action is voided with prob. q; its
//                 agents stay put for the epoch.
// When wind or comms drains leave a UAV short of the energy an action needs,
// it spends what it has, the action fails and the UAV is stranded (offline).
// Without those two modes a shortfall is a bug and raises InvariantViolation.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hocs/action.hpp"
#include "hocs/baselines.hpp"
#include "hocs/graph.hpp"
#include "hocs/ils.hpp"
#include "hocs/model.hpp"
#include "hocs/mpq.hpp"
#include "hocs/random.hpp"
#include "hocs/weights.hpp"

namespace hocs {

class InvariantViolation : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class ActivityStatus : std::uint8_t { idle, traveling, executing, charging, waiting_fcfs, offline };

inline std::string_view to_string(ActivityStatus s) {
  switch (s) {
    case ActivityStatus::idle: return "idle";
    case ActivityStatus::traveling: return "traveling";
    case ActivityStatus::executing: return "executing";
    case ActivityStatus::charging: return "charging";
    case ActivityStatus::waiting_fcfs: return "waiting_fcfs";
    default: return "offline";
  }
}

struct AgentActivity {
  ActivityStatus status = ActivityStatus::idle;
  std::optional<Action> action;
  double busy_until = 0.0;
  std::optional<GridPoint> destination;
  bool failed = false;  // dropped out (failure draw or stranded)
};

/// Where one UAV's energy went. The books balance when
/// initial - travel - task - drain + charged equals the current power.
struct EnergyLedger {
  double initial = 0.0;
  double travel = 0.0;   // nominal flight distance
  double task = 0.0;     // nominal task execution cost
  double drain = 0.0;    // wind surcharge and comms drain
  double charged = 0.0;  // restored by vehicles

  double expected_power() const { return initial - travel - task - drain + charged; }
};

/// First-come, first-served charging line at one vehicle.
class ChargeQueue {
public:
  struct Request {
    int job = -1;
    int uav = -1;
    double ready = 0.0;
  };

  /// Requests must arrive in non-decreasing ready time.
  void arrive(Request r) {
    if (!line_.empty() && r.ready < line_.back().ready) throw std::logic_error("ChargeQueue: out-of-order arrival");
    line_.push_back(r);
  }
  bool serving() const { return serving_; }
  bool empty() const { return line_.empty(); }
  std::size_t waiting() const { return line_.size(); }

  /// Starts serving the earliest waiting request, if the vehicle is free.
  std::optional<Request> start_next() {
    if (serving_ || line_.empty()) return std::nullopt;
    serving_ = true;
    Request r = line_.front();
    line_.pop_front();
    return r;
  }
  void finish() { serving_ = false; }

private:
  std::deque<Request> line_;
  bool serving_ = false;
};

struct EpisodeAudit {
  int conflicting_pairs = 0;
  int negative_power_events = 0;
  int double_completions = 0;
  int infeasible_commits = 0;
  double max_ledger_error = 0.0;
};

struct PerturbationStats {
  int wind_actions = 0;
  double comms_drained = 0.0;
  int failures = 0;
  int match_losses = 0;
  int shortfalls = 0;
};

class WorldState {
public:
  WorldState(const Scenario& scenario, std::uint64_t seed)
      : sc_(scenario),
        uav_(scenario.uavs.size()),
        worker_(scenario.workers.size()),
        vehicle_(scenario.vehicles.size()),
        reserved_(scenario.tasks.size(), 0),
        completions_(scenario.tasks.size(), 0),
        ledger_(scenario.uavs.size()),
        queues_(scenario.vehicles.size()),
        wind_rng_(Rng::stream(seed, "wind")),
        comms_rng_(Rng::stream(seed, "comms")),
        failure_rng_(Rng::stream(seed, "failure")),
        match_rng_(Rng::stream(seed, "match_loss")) {
    if (const auto v = validate_scenario(scenario); !v.empty())
      throw std::invalid_argument("WorldState: invalid scenario: " + v.front().str());
    for (std::size_t i = 0; i < sc_.uavs.size(); ++i) ledger_[i].initial = sc_.uavs[i].power;
  }

  double now() const { return now_; }
  const Scenario& scenario() const { return sc_; }
  const AgentActivity& uav_activity(int id) const { return uav_.at(id); }
  const AgentActivity& worker_activity(int id) const { return worker_.at(id); }
  const AgentActivity& vehicle_activity(int id) const { return vehicle_.at(id); }
  const EnergyLedger& ledger(int uav) const { return ledger_.at(uav); }
  const std::vector<int>& completed_tasks() const { return completed_ids_; }
  const EpisodeAudit& audit() const { return audit_; }
  const PerturbationStats& perturbation_stats() const { return pstats_; }
  bool energy_perturbed() const { return sc_.perturbations.wind || sc_.perturbations.comms_cost; }

  /// Largest |power - ledger balance| over all UAVs.
  double ledger_error() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < sc_.uavs.size(); ++i)
      worst = std::max(worst, std::abs(sc_.uavs[i].power - ledger_[i].expected_power()));
    return worst;
  }

  /// Epoch-start bookkeeping: downtime and failure dropouts, comms drain.
  void begin_epoch() {
    const auto& pc = sc_.perturbations;
    auto retire = [&](auto& agents, auto& acts) {
      for (std::size_t i = 0; i < agents.size(); ++i) {
        auto& act = acts[i];
        if (act.status != ActivityStatus::idle) continue;
        if (now_ >= agents[i].downtime) {
          act.status = ActivityStatus::offline;
          continue;
        }
        if (pc.failure_prob && now_ >= agents[i].uptime && failure_rng_.bernoulli(*pc.failure_prob)) {
          act.status = ActivityStatus::offline;
          act.failed = true;
          ++pstats_.failures;
        }
      }
    };
    retire(sc_.uavs, uav_);
    retire(sc_.workers, worker_);
    retire(sc_.vehicles, vehicle_);

    if (pc.comms_cost) {
      for (std::size_t i = 0; i < sc_.uavs.size(); ++i) {
        auto& u = sc_.uavs[i];
        if (uav_[i].status == ActivityStatus::offline || !(u.uptime <= now_ && now_ < u.downtime)) continue;
        const double d = std::min(comms_rng_.uniform(pc.comms_cost->lo, pc.comms_cost->hi), u.power);
        u.power -= d;
        ledger_[i].drain += d;
        pstats_.comms_drained += d;
      }
    }
  }

  /// Idle online agents and the tasks nobody is working on.
  Snapshot snapshot() const {
    Snapshot s;
    s.now = now_;
    s.interval = sc_.interval;
    s.limit_time = sc_.limit_time;
    for (std::size_t i = 0; i < sc_.uavs.size(); ++i)
      if (schedulable(sc_.uavs[i], uav_[i])) s.uavs.push_back(sc_.uavs[i]);
    for (std::size_t j = 0; j < sc_.workers.size(); ++j)
      if (schedulable(sc_.workers[j], worker_[j])) s.workers.push_back(sc_.workers[j]);
    for (std::size_t k = 0; k < sc_.vehicles.size(); ++k)
      if (schedulable(sc_.vehicles[k], vehicle_[k])) s.vehicles.push_back(sc_.vehicles[k]);
    for (std::size_t x = 0; x < sc_.tasks.size(); ++x)
      if (!sc_.tasks[x].completed && !reserved_[x]) s.tasks.push_back(sc_.tasks[x]);
    s.charges = sc_.charges;
    return s;
  }

  /// Starts the schedule's actions at the current time. Agents the schedule
  /// leaves out stay put. Returns the number of moves and joint actions that
  /// went ahead (match losses excluded).
  int commit(const Schedule& schedule) {
    for (std::size_t a = 0; a < schedule.size(); ++a)
      for (std::size_t b = a + 1; b < schedule.size(); ++b)
        if (has_conflict(schedule[a].who, schedule[b].who)) ++audit_.conflicting_pairs;
    if (audit_.conflicting_pairs > 0) throw std::logic_error("commit: an agent or task is assigned twice");

    for (const auto& act : schedule) check_commit(act);

    const auto& pc = sc_.perturbations;
    int started = 0;
    for (const auto& act : schedule) {
      if (act.kind == ActionKind::stay) continue;
      if (act.is_joint() && pc.match_loss_prob && match_rng_.bernoulli(*pc.match_loss_prob)) {
        ++pstats_.match_losses;
        continue;
      }
      start(act);
      ++started;
    }
    for (std::size_t i = 0; i < uav_.size(); ++i) hold(sc_.uavs[i], uav_[i]);
    for (std::size_t j = 0; j < worker_.size(); ++j) hold(sc_.workers[j], worker_[j]);
    for (std::size_t k = 0; k < vehicle_.size(); ++k) hold(sc_.vehicles[k], vehicle_[k]);
    return started;
  }

  /// Processes every event up to and including time `to`.
  void advance(double to) {
    if (to < now_) throw std::invalid_argument("advance: time runs backwards");
    while (!events_.empty() && events_.top().time <= to) {
      const Event e = events_.top();
      events_.pop();
      handle(e);
    }
    now_ = to;
  }

private:
  enum class EventType : std::uint8_t { arrive, task_done, charge_done };

  struct Event {
    double time = 0.0;
    std::uint64_t seq = 0;
    EventType type = EventType::arrive;
    int job = -1;
    AgentType role = AgentType::uav;
  };
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      return a.time != b.time ? a.time > b.time : a.seq > b.seq;
    }
  };

  struct Job {
    Action action;
    double wind = 1.0;
    int arrived = 0;
    bool done = false;
    double charge_amount = 0.0;
  };

  template <class Agent>
  bool schedulable(const Agent& a, const AgentActivity& act) const {
    return act.status == ActivityStatus::idle && act.busy_until <= now_ && a.uptime <= now_ && now_ < a.downtime;
  }

  template <class Agent>
  void hold(const Agent& a, AgentActivity& act) {
    if (schedulable(a, act)) act.busy_until = now_ + sc_.interval;
  }

  void check_commit(const Action& act) {
    const auto& w = act.who;
    auto idle_uav = [&](int id) {
      return id >= 0 && static_cast<std::size_t>(id) < uav_.size() && schedulable(sc_.uavs[id], uav_[id]);
    };
    auto idle_worker = [&](int id) {
      return id >= 0 && static_cast<std::size_t>(id) < worker_.size() && schedulable(sc_.workers[id], worker_[id]);
    };
    auto idle_vehicle = [&](int id) {
      return id >= 0 && static_cast<std::size_t>(id) < vehicle_.size() && schedulable(sc_.vehicles[id], vehicle_[id]);
    };
    auto reject = [&](const std::string& why) {
      ++audit_.infeasible_commits;
      throw InvariantViolation("commit: " + std::string(to_string(act.kind)) + ": " + why);
    };
    const int agents = (w.uav >= 0) + (w.worker >= 0) + (w.vehicle >= 0);
    switch (act.kind) {
      case ActionKind::stay:
      case ActionKind::move: {
        if (agents != 1) reject("needs exactly one agent");
        if (w.uav >= 0 && !idle_uav(w.uav)) reject("UAV not available");
        if (w.worker >= 0 && !idle_worker(w.worker)) reject("worker not available");
        if (w.vehicle >= 0 && !idle_vehicle(w.vehicle)) reject("vehicle not available");
        if (act.kind == ActionKind::move) {
          if (!sc_.area.contains(act.dest)) reject("destination outside area");
          if (w.uav >= 0 && distance(sc_.uavs[w.uav].loc, act.dest) > sc_.uavs[w.uav].power) reject("beyond UAV range");
        }
        break;
      }
      case ActionKind::joint_task: {
        if (!idle_uav(w.uav) || !idle_worker(w.worker) || w.vehicle >= 0) reject("needs an idle UAV and worker");
        if (w.task < 0 || static_cast<std::size_t>(w.task) >= sc_.tasks.size()) reject("unknown task");
        const auto& x = sc_.tasks[w.task];
        if (x.completed || reserved_[w.task]) reject("task not pending");
        if (!task_feasible(sc_.uavs[w.uav], x, sc_.charges)) reject("task infeasible for the UAV");
        break;
      }
      case ActionKind::joint_charge: {
        if (!idle_uav(w.uav) || !idle_vehicle(w.vehicle) || w.worker >= 0) reject("needs an idle UAV and vehicle");
        if (w.charge < 0 || static_cast<std::size_t>(w.charge) >= sc_.charges.size()) reject("unknown charging point");
        if (!charge_feasible(sc_.uavs[w.uav], sc_.charges[w.charge])) reject("charging point out of range");
        break;
      }
    }
  }

  void push(double time, EventType type, int job, AgentType role) {
    events_.push(Event{time, seq_++, type, job, role});
  }

  void start(const Action& act) {
    const int id = static_cast<int>(jobs_.size());
    Job job{act};
    if (act.who.uav >= 0 && sc_.perturbations.wind) {
      job.wind = 1.0 + wind_rng_.uniform(sc_.perturbations.wind->lo, sc_.perturbations.wind->hi);
      ++pstats_.wind_actions;
    }
    jobs_.push_back(job);
    const auto& w = act.who;
    GridPoint dest = act.dest;
    if (act.kind == ActionKind::joint_task) dest = sc_.tasks[w.task].loc;
    if (act.kind == ActionKind::joint_charge) dest = sc_.charges[w.charge].loc;
    jobs_[id].action.dest = dest;

    double planned_end = now_;
    switch (act.kind) {
      case ActionKind::move:
        if (w.uav >= 0) planned_end = move_end(sc_.uavs[w.uav], dest, now_);
        if (w.worker >= 0) planned_end = move_end(sc_.workers[w.worker], dest, now_);
        if (w.vehicle >= 0) planned_end = move_end(sc_.vehicles[w.vehicle], dest, now_);
        break;
      case ActionKind::joint_task:
        planned_end = task_action_end(sc_.uavs[w.uav], sc_.workers[w.worker], sc_.tasks[w.task], now_);
        reserved_[w.task] = 1;
        break;
      case ActionKind::joint_charge:
        planned_end = charge_action_end(sc_.uavs[w.uav], sc_.vehicles[w.vehicle], sc_.charges[w.charge], now_);
        break;
      case ActionKind::stay:
        break;
    }
    auto depart = [&](auto& agent, AgentActivity& act_rec, AgentType role) {
      act_rec.status = ActivityStatus::traveling;
      act_rec.action = act;
      act_rec.busy_until = std::max(planned_end, now_);
      act_rec.destination = dest;
      push(move_end(agent, dest, now_), EventType::arrive, id, role);
    };
    if (w.uav >= 0) depart(sc_.uavs[w.uav], uav_[w.uav], AgentType::uav);
    if (w.worker >= 0) depart(sc_.workers[w.worker], worker_[w.worker], AgentType::worker);
    if (w.vehicle >= 0) depart(sc_.vehicles[w.vehicle], vehicle_[w.vehicle], AgentType::vehicle);
  }

  AgentActivity& activity(AgentType role, int id) {
    switch (role) {
      case AgentType::uav: return uav_[id];
      case AgentType::worker: return worker_[id];
      default: return vehicle_[id];
    }
  }

  void release(AgentType role, int id, double t) {
    auto& a = activity(role, id);
    if (a.status == ActivityStatus::offline) return;
    a.status = ActivityStatus::idle;
    a.action.reset();
    a.destination.reset();
    a.busy_until = t;
  }

  /// Takes `nominal * wind` from the UAV. False when it ran dry first.
  bool consume(int uav, double nominal, double wind, double EnergyLedger::*bucket) {
    auto& u = sc_.uavs[uav];
    auto& book = ledger_[uav];
    const double need = nominal * wind;
    if (need <= u.power) {
      u.power -= need;
      book.*bucket += nominal;
      book.drain += need - nominal;
      return true;
    }
    if (!energy_perturbed()) {
      // Exact-boundary rounding may overshoot by an ulp or so.
      if (need - u.power <= 1e-9) {
        book.*bucket += u.power;
        u.power = 0.0;
        return true;
      }
      ++audit_.negative_power_events;
      throw InvariantViolation("UAV " + std::to_string(uav) + " power would go negative");
    }
    const double spent = u.power;
    const double base = std::min(nominal, spent);
    book.*bucket += base;
    book.drain += spent - base;
    u.power = 0.0;
    ++pstats_.shortfalls;
    return false;
  }

  /// The UAV ran out of power mid-action: the action fails and its partner
  /// is released where it stands.
  void strand(int job_id, double t) {
    Job& job = jobs_[job_id];
    job.done = true;
    const auto& w = job.action.who;
    auto& ua = uav_[w.uav];
    ua.status = ActivityStatus::offline;
    ua.failed = true;
    ua.busy_until = t;
    if (job.action.kind == ActionKind::joint_task) reserved_[w.task] = 0;
    if (w.worker >= 0) release(AgentType::worker, w.worker, t);
    if (w.vehicle >= 0) release(AgentType::vehicle, w.vehicle, t);
  }

  void handle(const Event& e) {
    Job& job = jobs_[e.job];
    const auto& w = job.action.who;
    const GridPoint dest = job.action.dest;
    switch (e.type) {
      case EventType::arrive: {
        if (job.done) return;
        if (e.role == AgentType::uav) {
          auto& u = sc_.uavs[w.uav];
          if (!consume(w.uav, distance(u.loc, dest), job.wind, &EnergyLedger::travel)) {
            strand(e.job, e.time);
            return;
          }
          u.loc = dest;
        } else if (e.role == AgentType::worker) {
          sc_.workers[w.worker].loc = dest;
        } else {
          sc_.vehicles[w.vehicle].loc = dest;
        }
        if (job.action.kind == ActionKind::move) {
          job.done = true;
          release(e.role, e.role == AgentType::uav ? w.uav : e.role == AgentType::worker ? w.worker : w.vehicle, e.time);
          return;
        }
        ++job.arrived;
        if (job.action.kind == ActionKind::joint_task) {
          activity(e.role, e.role == AgentType::uav ? w.uav : w.worker).status = ActivityStatus::executing;
          if (job.arrived == 2) {
            const double run = sc_.tasks[w.task].cost_power / sc_.uavs[w.uav].speed;
            push(e.time + run, EventType::task_done, e.job, AgentType::uav);
          }
        } else {
          activity(e.role, e.role == AgentType::uav ? w.uav : w.vehicle).status = ActivityStatus::waiting_fcfs;
          if (job.arrived == 2) {
            queues_[w.vehicle].arrive({e.job, w.uav, e.time});
            serve(w.vehicle, e.time);
          }
        }
        return;
      }
      case EventType::task_done: {
        auto& x = sc_.tasks[w.task];
        if (!consume(w.uav, x.cost_power, job.wind, &EnergyLedger::task)) {
          strand(e.job, e.time);
          return;
        }
        if (x.completed) {
          ++audit_.double_completions;
          throw InvariantViolation("task " + std::to_string(x.id) + " completed twice");
        }
        x.completed = true;
        ++completions_[w.task];
        completed_ids_.push_back(x.id);
        reserved_[w.task] = 0;
        job.done = true;
        release(AgentType::uav, w.uav, e.time);
        release(AgentType::worker, w.worker, e.time);
        return;
      }
      case EventType::charge_done: {
        auto& u = sc_.uavs[w.uav];
        ledger_[w.uav].charged += job.charge_amount;
        u.power += job.charge_amount;
        if (std::abs(u.power - u.full_power) <= 1e-9) u.power = u.full_power;
        job.done = true;
        release(AgentType::uav, w.uav, e.time);
        queues_[w.vehicle].finish();
        if (queues_[w.vehicle].empty()) release(AgentType::vehicle, w.vehicle, e.time);
        serve(w.vehicle, e.time);
        return;
      }
    }
  }

  void serve(int vehicle, double t) {
    const auto next = queues_[vehicle].start_next();
    if (!next) return;
    Job& job = jobs_[next->job];
    const auto& u = sc_.uavs[next->uav];
    job.charge_amount = u.full_power - u.power;
    uav_[next->uav].status = ActivityStatus::charging;
    vehicle_[vehicle].status = ActivityStatus::charging;
    push(t + job.charge_amount / sc_.vehicles[vehicle].charge_power, EventType::charge_done, next->job,
         AgentType::uav);
  }

  Scenario sc_;
  double now_ = 0.0;
  std::vector<AgentActivity> uav_, worker_, vehicle_;
  std::vector<char> reserved_;
  std::vector<int> completions_;
  std::vector<int> completed_ids_;
  std::vector<EnergyLedger> ledger_;
  std::vector<ChargeQueue> queues_;
  std::vector<Job> jobs_;
  std::priority_queue<Event, std::vector<Event>, Later> events_;
  std::uint64_t seq_ = 0;
  Rng wind_rng_, comms_rng_, failure_rng_, match_rng_;
  EpisodeAudit audit_;
  PerturbationStats pstats_;
};

// ---------------------------------------------------------------------------
// Episodes

enum class SchedulerKind : std::uint8_t { mpq, ils, greedy, kwta };

inline std::string_view to_string(SchedulerKind k) {
  switch (k) {
    case SchedulerKind::mpq: return "mpq";
    case SchedulerKind::ils: return "ils";
    case SchedulerKind::greedy: return "greedy";
    default: return "kwta";
  }
}

inline SchedulerKind parse_scheduler(std::string_view s) {
  if (s == "mpq") return SchedulerKind::mpq;
  if (s == "ils") return SchedulerKind::ils;
  if (s == "greedy") return SchedulerKind::greedy;
  if (s == "kwta") return SchedulerKind::kwta;
  throw std::invalid_argument("unknown scheduler: " + std::string(s));
}

struct RunOptions {
  SchedulerKind scheduler = SchedulerKind::mpq;
  std::uint64_t seed = 0;
  IlsParams ils{};  // standalone ILS; its rng_seed is replaced per epoch
  MpqParams mpq{};
  KwtaParams kwta{};
  std::vector<MpqTrace>* mpq_traces = nullptr;  // one entry per MPQ epoch, when set
};

struct EpochRecord {
  double epoch_min = 0.0;
  double decision_ms = 0.0;
  int committed = 0;
  int cumulative_completed = 0;
  std::size_t graph_nodes = 0;  // 0 for the baselines
};

struct EpisodeResult {
  SchedulerKind scheduler = SchedulerKind::mpq;
  std::uint64_t seed = 0;
  std::vector<EpochRecord> epochs;
  std::vector<int> completed_task_ids;
  int total_tasks = 0;
  double completion_rate = 0.0;
  bool no_tasks = false;  // completion_rate reported as 1
  EpisodeAudit audit;
  PerturbationStats perturbations;

  double mean_decision_ms() const {
    if (epochs.empty()) return 0.0;
    double s = 0.0;
    for (const auto& e : epochs) s += e.decision_ms;
    return s / static_cast<double>(epochs.size());
  }
  double max_decision_ms() const {
    double m = 0.0;
    for (const auto& e : epochs) m = std::max(m, e.decision_ms);
    return m;
  }
};

/// The scheduler's choice for one snapshot.
inline Schedule decide(const Scenario& sc, const Snapshot& snap, const RunOptions& opt, std::uint64_t solver_seed,
                       std::size_t* graph_nodes = nullptr, MpqTrace* trace = nullptr) {
  switch (opt.scheduler) {
    case SchedulerKind::greedy:
      return greedy_step(snap, sc.area.width, sc.area.height);
    case SchedulerKind::kwta:
      return kwta_step(snap, opt.kwta);
    case SchedulerKind::mpq:
    case SchedulerKind::ils: {
      const auto tables = compute_cost_tables(snap);
      WeightedGraph g = build_nodes(snap, tables, sc.weight_mode);
      if (graph_nodes) *graph_nodes = g.size();
      Solution sol;
      if (opt.scheduler == SchedulerKind::mpq) {
        MpqParams p = opt.mpq;
        p.ils.rng_seed = solver_seed;
        sol = solve_mpq(g, p, trace);
      } else {
        g.index_cliques();
        IlsParams p = opt.ils;
        p.rng_seed = solver_seed;
        sol = solve_ils(g, p);
      }
      return schedule_from_nodes(g, sol.members, sc.tasks, sc.charges);
    }
  }
  throw std::logic_error("decide: unknown scheduler");
}

inline EpisodeResult run_episode(const Scenario& scenario, const RunOptions& opt) {
  WorldState world(scenario, opt.seed);
  EpisodeResult out;
  out.scheduler = opt.scheduler;
  out.seed = opt.seed;
  out.total_tasks = static_cast<int>(scenario.tasks.size());
  const int epochs = static_cast<int>(std::lround(scenario.limit_time / scenario.interval));
  for (int e = 0; e < epochs; ++e) {
    const double t = e * scenario.interval;
    world.advance(t);
    world.begin_epoch();
    const Snapshot snap = world.snapshot();
    std::size_t nodes = 0;
    MpqTrace trace;
    const std::uint64_t solver_seed = Rng::stream(opt.seed, "solver", static_cast<std::uint64_t>(e))();
    const auto t0 = std::chrono::steady_clock::now();
    const Schedule schedule = decide(world.scenario(), snap, opt, solver_seed, &nodes, &trace);
    const auto t1 = std::chrono::steady_clock::now();
    const int committed = world.commit(schedule);
    if (opt.mpq_traces && opt.scheduler == SchedulerKind::mpq) opt.mpq_traces->push_back(std::move(trace));
    world.advance(t + scenario.interval);
    out.epochs.push_back(EpochRecord{t, std::chrono::duration<double, std::milli>(t1 - t0).count(), committed,
                                     static_cast<int>(world.completed_tasks().size()), nodes});
  }
  out.completed_task_ids = world.completed_tasks();
  out.no_tasks = scenario.tasks.empty();
  out.completion_rate = out.no_tasks ? 1.0
                                     : static_cast<double>(out.completed_task_ids.size()) /
                                           static_cast<double>(scenario.tasks.size());
  out.audit = world.audit();
  out.audit.max_ledger_error = world.ledger_error();
  out.perturbations = world.perturbation_stats();
  return out;
}

}  // namespace hocs
