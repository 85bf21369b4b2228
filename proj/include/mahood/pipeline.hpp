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

// One end-to-end run: reduce, fit a Gaussian on train, score test by
// Mahalanobis distance, evaluate.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mahood/dataset.hpp"
#include "mahood/gaussian.hpp"
#include "mahood/metrics.hpp"
#include "mahood/reducer.hpp"

namespace mahood {

struct PipelineOptions {
  EpsilonPolicy policy = EpsilonPolicy::relative(1e-6);
  GaussianOptions gaussian;
  double tpr_target = kDefaultTprTarget;
  bool time_inversion = true;
};

struct PipelineResult {
  Vector test_scores;
  MetricsTriple metrics;
  double inversion_seconds = 0.0;  // 0 when timing is off
  Eigen::Index dim_before = 0;
  Eigen::Index dim_after = 0;
  double epsilon = 0.0;
};

/// `test_labels[i]` labels `test[i]`. A t-SNE spec uses `seed` in place of its own.
inline PipelineResult run_pipeline(std::span<const EmbeddingTensor> train,
                                   std::span<const EmbeddingTensor> test,
                                   std::span<const Label> test_labels, ReducerSpec spec,
                                   const PipelineOptions& options, std::uint64_t seed = 0) {
  if (test.size() != test_labels.size()) {
    throw DimensionError("test tensors and labels differ in count");
  }
  if (auto* t = std::get_if<TsneConfig>(&spec)) t->seed = seed;
  const auto reduced = reduce_dataset(train, test, spec);
  const auto model = fit_gaussian(reduced.train, options.policy, options.gaussian);

  PipelineResult r;
  r.dim_before = static_cast<Eigen::Index>(train.front().size());
  r.dim_after = reduced.train.cols();
  r.epsilon = model.epsilon;
  if (options.time_inversion) r.inversion_seconds = invert_covariance_timed(model).seconds;
  r.test_scores = mahalanobis_batch(model, reduced.test);
  const auto samples = make_samples(std::span<const double>(r.test_scores.data(),
                                                            static_cast<std::size_t>(r.test_scores.size())),
                                    test_labels);
  r.metrics = evaluate(samples, options.tpr_target);
  return r;
}

}  // namespace mahood
