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

#include <regex>
#include <sstream>

#include <gtest/gtest.h>

#include "mahood/sweep.hpp"
#include "mahood/synthetic.hpp"

namespace mahood {
namespace {

SweepInput small_input(std::uint64_t seed = 0) {
  SyntheticSpec spec;
  spec.ambient_shape = Shape4{{8, 4, 4, 4}};
  spec.n_train = 60;
  spec.n_id_test = 20;
  spec.n_ood_test = 20;
  spec.seed = seed;
  const auto ds = generate(spec);
  SweepInput in;
  in.train = ds.train;
  in.test = ds.id_test;
  in.test.insert(in.test.end(), ds.ood_test.begin(), ds.ood_test.end());
  in.test_labels.assign(ds.id_test.size(), Label::kId);
  in.test_labels.resize(in.test.size(), Label::kOod);
  return in;
}

TsneConfig quick_tsne() {
  TsneConfig t;
  t.perplexity = 5.0;
  t.n_iter = 120;
  t.exaggeration_iters = 50;
  return t;
}

std::string render(const std::vector<SweepRow>& rows, bool timing) {
  const auto table = format_sweep(rows, 0.75, timing);
  std::ostringstream out;
  write_sweep_csv(out, table);
  write_sweep_markdown(out, table, rows);
  return out.str();
}

TEST(SweepTest, DefaultGridCardinality) {
  const auto grid = default_grid();
  ASSERT_EQ(grid.size(), 19u);
  int pooling = 0, pca = 0, tsne = 0;
  for (const auto& g : grid) {
    pooling += std::holds_alternative<PoolingSpec>(g);
    pca += std::holds_alternative<PcaReducer>(g);
    tsne += std::holds_alternative<TsneConfig>(g);
  }
  EXPECT_EQ(pooling, 10);
  EXPECT_EQ(pca, 8);
  EXPECT_EQ(tsne, 1);
  EXPECT_EQ(reducer_label(grid.front()), "AveragePool2D(2, 1)");
  EXPECT_EQ(reducer_label(grid[9]), "AveragePool3D(4, 1)");
  EXPECT_EQ(reducer_label(grid[17]), "PCA(256)");
  EXPECT_EQ(default_grid(true).size(), 20u);
  EXPECT_EQ(reducer_label(default_grid(true).front()), "Baseline");
}

TEST(SweepTest, TrialRule) {
  EXPECT_EQ(trials_for(PcaReducer{2}, 0), 1);
  EXPECT_EQ(trials_for(PcaReducer{2}, 7), 1);
  EXPECT_EQ(trials_for(TsneConfig{}, 0), 10);
  EXPECT_EQ(trials_for(TsneConfig{}, 3), 3);
  EXPECT_THROW(trials_for(TsneConfig{}, -1), ConfigError);
}

TEST(SweepTest, RowsFollowGridAndErrorsStayInRow) {
  SweepConfig config;
  config.grid = {PoolingSpec{3, 2, 2}, PcaReducer{2}, PcaReducer{500}, quick_tsne()};
  config.trials = 3;
  config.report_timing = false;
  const auto rows = run_sweep(small_input(), config);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0].experiment, "AveragePool3D(2, 2)");
  EXPECT_TRUE(rows[1].ok());
  EXPECT_FALSE(rows[2].ok());
  EXPECT_NE(rows[2].error.find("min(n_train - 1, d)"), std::string::npos) << rows[2].error;
  EXPECT_TRUE(rows[3].ok());
  EXPECT_EQ(rows[3].trials, 3);
  EXPECT_EQ(rows[3].metrics->n_trials, 3);
  EXPECT_GT(rows[3].metrics->sd.auroc, 0.0);

  const auto text = render(rows, false);
  EXPECT_NE(text.find("PCA(500),ERROR,ERROR,ERROR,ERROR"), std::string::npos) << text;
  EXPECT_NE(text.find("- PCA(500): "), std::string::npos);
}

TEST(SweepTest, TableSchemaAndFormatting) {
  SweepConfig config;
  config.grid = {PoolingSpec{2, 2, 1}, PcaReducer{2}, PcaReducer{4}, quick_tsne()};
  config.trials = 2;
  const auto rows = run_sweep(small_input(), config);
  const auto table = format_sweep(rows, 0.75, true);
  EXPECT_EQ(table.header,
            (std::vector<std::string>{"Experiment", "AUROC", "AUPR", "FPR75", "ComputationTime"}));
  const std::regex plain(R"(\d\.\d{4})");
  const std::regex stochastic(R"(\d\.\d{4} \(±\d\.\d{4}\))");
  for (std::size_t r = 0; r < 3; ++r) {
    for (std::size_t c = 1; c < 5; ++c) EXPECT_TRUE(std::regex_match(table.cells[r][c], plain));
  }
  for (std::size_t c = 1; c < 5; ++c) {
    EXPECT_TRUE(std::regex_match(table.cells[3][c], stochastic)) << table.cells[3][c];
  }
  // Exactly the best rounded value per metric column is flagged.
  for (std::size_t c = 1; c <= 3; ++c) {
    double best = c == 3 ? 2.0 : -1.0;
    for (const auto& line : table.cells) {
      const double v = std::stod(line[c]);
      best = c == 3 ? std::min(best, v) : std::max(best, v);
    }
    int flagged = 0;
    for (std::size_t r = 0; r < table.cells.size(); ++r) {
      EXPECT_EQ(table.best[r][c], std::stod(table.cells[r][c]) == best);
      flagged += table.best[r][c];
    }
    EXPECT_GE(flagged, 1);
  }
  std::ostringstream md;
  write_sweep_markdown(md, table, rows);
  EXPECT_NE(md.str().find("| Experiment | AUROC | AUPR | FPR75 | ComputationTime |"),
            std::string::npos);
  EXPECT_NE(md.str().find("**"), std::string::npos);
}

TEST(SweepTest, DeterministicAcrossJobCounts) {
  SweepConfig config;
  config.grid = {PoolingSpec{2, 2, 2}, PcaReducer{2}, PcaReducer{8}, quick_tsne()};
  config.trials = 3;
  config.report_timing = false;
  config.seed = 11;
  const auto input = small_input(4);
  const auto serial = render(run_sweep(input, config), false);
  config.jobs = 3;
  const auto parallel = render(run_sweep(input, config), false);
  EXPECT_EQ(serial, parallel);
  EXPECT_NE(serial.find(",NA\n"), std::string::npos);
}

TEST(SweepTest, FprColumnName) {
  EXPECT_EQ(fpr_column_name(0.75), "FPR75");
  EXPECT_EQ(fpr_column_name(0.9), "FPR90");
  EXPECT_EQ(fpr_column_name(0.875), "FPR@TPR0.875");
}

}  // namespace
}  // namespace mahood
