#pragma once

// Episode output: the per-epoch CSV and aggregate summaries over seeds.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hocs/sim.hpp"

namespace hocs {

inline constexpr const char* kEpochCsvHeader = "epoch_min,decision_ms,committed,cumulative_completed";

inline void write_epoch_csv(std::ostream& os, const EpisodeResult& r) {
  os << kEpochCsvHeader << '\n';
  char buf[128];
  for (const auto& e : r.epochs) {
    std::snprintf(buf, sizeof buf, "%g,%.3f,%d,%d\n", e.epoch_min, e.decision_ms, e.committed, e.cumulative_completed);
    os << buf;
  }
}

/// One scheduler over several seeds.
struct Summary {
  std::string scheduler;
  std::vector<std::uint64_t> seeds;
  std::vector<double> rates;
  double mean_rate = 0.0;
  double stddev_rate = 0.0;  // population
  double mean_decision_ms = 0.0;
  double max_decision_ms = 0.0;
};

inline Summary summarize(std::span<const EpisodeResult> runs) {
  Summary s;
  if (runs.empty()) return s;
  s.scheduler = std::string(to_string(runs.front().scheduler));
  double ms_sum = 0.0;
  std::size_t epochs = 0;
  for (const auto& r : runs) {
    s.seeds.push_back(r.seed);
    s.rates.push_back(r.completion_rate);
    for (const auto& e : r.epochs) {
      ms_sum += e.decision_ms;
      s.max_decision_ms = std::max(s.max_decision_ms, e.decision_ms);
    }
    epochs += r.epochs.size();
  }
  for (double x : s.rates) s.mean_rate += x;
  s.mean_rate /= static_cast<double>(s.rates.size());
  double var = 0.0;
  for (double x : s.rates) var += (x - s.mean_rate) * (x - s.mean_rate);
  s.stddev_rate = std::sqrt(var / static_cast<double>(s.rates.size()));
  s.mean_decision_ms = epochs ? ms_sum / static_cast<double>(epochs) : 0.0;
  return s;
}

inline nlohmann::json summary_json(const Summary& s) {
  return {{"scheduler", s.scheduler},
          {"seeds", s.seeds},
          {"completion_rates", s.rates},
          {"completion_rate_mean", s.mean_rate},
          {"completion_rate_stddev", s.stddev_rate},
          {"decision_ms_mean", s.mean_decision_ms},
          {"decision_ms_max", s.max_decision_ms}};
}

/// Fixed-width comparison table, one row per scheduler.
inline void write_comparison_table(std::ostream& os, std::span<const Summary> rows) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-8s %10s %10s %14s %14s\n", "sched", "rate_mean", "rate_sd", "decision_ms", "max_ms");
  os << buf;
  for (const auto& s : rows) {
    std::snprintf(buf, sizeof buf, "%-8s %10.4f %10.4f %14.3f %14.3f\n", s.scheduler.c_str(), s.mean_rate,
                  s.stddev_rate, s.mean_decision_ms, s.max_decision_ms);
    os << buf;
  }
}

}  // namespace hocs
