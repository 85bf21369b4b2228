/*
 * Copyright 2026 The mahood Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

// Grid runner producing the results table: one row per reducer
// configuration with AUROC, AUPR, FPR at the TPR target and the
// covariance-inversion time. Stochastic reducers are repeated over seeded
// trials and reported as mean (+-SD).

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "mahood/csv.hpp"
#include "mahood/pipeline.hpp"

namespace mahood {

struct SweepInput {
  std::vector<EmbeddingTensor> train;
  std::vector<EmbeddingTensor> test;
  std::vector<Label> test_labels;
};

struct SweepConfig {
  std::vector<ReducerSpec> grid;
  PipelineOptions pipeline;
  int trials = 0;  // 0: 10 for stochastic reducers, 1 otherwise
  std::uint64_t seed = 0;
  int jobs = 1;
  bool report_timing = true;
};

inline constexpr int kDefaultStochasticTrials = 10;

struct SweepRow {
  std::string experiment;
  bool stochastic = false;
  int trials = 1;
  std::optional<TrialSummary> metrics;
  double seconds_mean = 0.0;
  double seconds_sd = 0.0;
  std::string error;  // empty on success

  bool ok() const { return error.empty(); }
};

/// Pooling (2D and 3D over the five (j, k) pairs), PCA over n = 2..256 and
/// t-SNE; optionally preceded by the full-dimension baseline.
inline std::vector<ReducerSpec> default_grid(bool with_baseline = false) {
  std::vector<ReducerSpec> grid;
  if (with_baseline) grid.emplace_back(IdentityReducer{});
  for (int dims : {2, 3}) {
    for (auto [j, k] : {std::pair{2, 1}, {2, 2}, {3, 1}, {3, 2}, {4, 1}}) {
      grid.emplace_back(PoolingSpec{dims, static_cast<std::size_t>(j), static_cast<std::size_t>(k)});
    }
  }
  for (int n = 2; n <= 256; n *= 2) grid.emplace_back(PcaReducer{n});
  grid.emplace_back(TsneConfig{});
  return grid;
}

inline int trials_for(const ReducerSpec& spec, int requested) {
  if (requested < 0) throw ConfigError("trials must be >= 1");
  if (!is_stochastic(spec)) return 1;
  return requested == 0 ? kDefaultStochasticTrials : requested;
}

namespace sweep_detail {

/// Runs task(i) for i in [0, n) on up to `jobs` threads. Tasks must not throw.
inline void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& task) {
  const auto workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(jobs, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) task(i);
    });
  }
}

struct TrialOutcome {
  MetricsTriple metrics;
  double seconds = 0.0;
  std::string error;
};

inline std::string fixed4(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

}  // namespace sweep_detail

/// Rows come back in grid order whatever the completion order.
inline std::vector<SweepRow> run_sweep(const SweepInput& input, const SweepConfig& config) {
  if (config.jobs < 1) throw ConfigError("jobs must be >= 1");
  struct Task {
    std::size_t row;
    int trial;
  };
  std::vector<SweepRow> rows(config.grid.size());
  std::vector<Task> tasks;
  for (std::size_t r = 0; r < config.grid.size(); ++r) {
    rows[r].experiment = reducer_label(config.grid[r]);
    rows[r].stochastic = is_stochastic(config.grid[r]);
    rows[r].trials = trials_for(config.grid[r], config.trials);
    for (int t = 0; t < rows[r].trials; ++t) tasks.push_back({r, t});
  }

  PipelineOptions options = config.pipeline;
  options.time_inversion = config.report_timing;
  std::vector<sweep_detail::TrialOutcome> outcomes(tasks.size());
  sweep_detail::parallel_for(tasks.size(), config.jobs, [&](std::size_t i) {
    const auto& task = tasks[i];
    auto& out = outcomes[i];
    try {
      const auto r = run_pipeline(input.train, input.test, input.test_labels,
                                  config.grid[task.row], options,
                                  config.seed + static_cast<std::uint64_t>(task.trial));
      out.metrics = r.metrics;
      out.seconds = r.inversion_seconds;
    } catch (const std::exception& e) {
      out.error = e.what();
    }
  });

  std::size_t i = 0;
  for (auto& row : rows) {
    std::vector<MetricsTriple> triples;
    std::vector<double> seconds;
    for (int t = 0; t < row.trials; ++t, ++i) {
      if (!outcomes[i].error.empty()) {
        if (row.error.empty()) row.error = outcomes[i].error;
        continue;
      }
      triples.push_back(outcomes[i].metrics);
      seconds.push_back(outcomes[i].seconds);
    }
    if (!row.ok()) continue;
    row.metrics = aggregate_trials(triples);
    const double n = static_cast<double>(seconds.size());
    for (double s : seconds) row.seconds_mean += s / n;
    for (double s : seconds) row.seconds_sd += (s - row.seconds_mean) * (s - row.seconds_mean) / n;
    row.seconds_sd = std::sqrt(row.seconds_sd);
  }
  return rows;
}

/// Header and formatted cells of the results table, shared by both writers.
struct SweepTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> cells;
  std::vector<std::vector<bool>> best;  // per row, per column
};

inline std::string fpr_column_name(double tpr_target) {
  const long pct = std::lround(tpr_target * 100.0);
  if (std::abs(tpr_target * 100.0 - static_cast<double>(pct)) < 1e-9) {
    return "FPR" + std::to_string(pct);
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "FPR@TPR%g", tpr_target);
  return buf;
}

inline SweepTable format_sweep(const std::vector<SweepRow>& rows, double tpr_target,
                               bool report_timing) {
  using sweep_detail::fixed4;
  SweepTable table;
  table.header = {"Experiment", "AUROC", "AUPR", fpr_column_name(tpr_target), "ComputationTime"};
  // Rounded means decide the best flags so displayed ties are flagged alike.
  std::vector<std::array<double, 3>> shown(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& row = rows[r];
    std::vector<std::string> line{row.experiment};
    if (!row.ok()) {
      line.insert(line.end(), 4, "ERROR");
    } else {
      const auto& m = *row.metrics;
      const std::array<double, 3> mean{m.mean.auroc, m.mean.aupr, m.mean.fpr_at_tpr};
      const std::array<double, 3> sd{m.sd.auroc, m.sd.aupr, m.sd.fpr_at_tpr};
      for (int c = 0; c < 3; ++c) {
        const std::string text = fixed4(mean[c]);
        shown[r][c] = std::stod(text);
        line.push_back(row.stochastic ? text + " (±" + fixed4(sd[c]) + ")" : text);
      }
      if (!report_timing) {
        line.emplace_back("NA");
      } else {
        line.push_back(row.stochastic
                           ? fixed4(row.seconds_mean) + " (±" + fixed4(row.seconds_sd) + ")"
                           : fixed4(row.seconds_mean));
      }
    }
    table.cells.push_back(std::move(line));
  }
  table.best.assign(rows.size(), std::vector<bool>(5, false));
  for (int c = 0; c < 3; ++c) {
    const bool lower_is_better = c == 2;
    std::optional<double> best;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (!rows[r].ok()) continue;
      const double v = shown[r][c];
      if (!best || (lower_is_better ? v < *best : v > *best)) best = v;
    }
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].ok() && shown[r][c] == *best) table.best[r][c + 1] = true;
    }
  }
  return table;
}

/// Plain CSV: no emphasis markup, so every cell stays machine-readable.
inline void write_sweep_csv(std::ostream& out, const SweepTable& table) {
  csv::write_row(out, table.header);
  for (const auto& line : table.cells) csv::write_row(out, line);
}

/// Markdown with the best value per metric column in bold; failed rows are
/// listed under the table.
inline void write_sweep_markdown(std::ostream& out, const SweepTable& table,
                                 const std::vector<SweepRow>& rows) {
  auto emit = [&](const std::vector<std::string>& cells, const std::vector<bool>* bold) {
    out << '|';
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const bool b = bold && (*bold)[c];
      out << ' ' << (b ? "**" : "") << cells[c] << (b ? "**" : "") << " |";
    }
    out << '\n';
  };
  emit(table.header, nullptr);
  out << "|---|---:|---:|---:|---:|\n";
  for (std::size_t r = 0; r < table.cells.size(); ++r) emit(table.cells[r], &table.best[r]);
  bool any_error = false;
  for (const auto& row : rows) {
    if (row.ok()) continue;
    if (!any_error) out << "\nErrors:\n\n";
    any_error = true;
    out << "- " << row.experiment << ": " << row.error << '\n';
  }
}

}  // namespace mahood
