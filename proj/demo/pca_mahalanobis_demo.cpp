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

// Fit a Gaussian to PCA-reduced synthetic embeddings, score held-out ID and
// OOD samples, and print the metrics. Pass a path to also write an SVG.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include "mahood/gaussian.hpp"
#include "mahood/metrics.hpp"
#include "mahood/plot.hpp"
#include "mahood/reducer.hpp"
#include "mahood/synthetic.hpp"

int main(int argc, char** argv) {
  using namespace mahood;
  try {
    SyntheticSpec spec;
    spec.shift = 4.0;
    spec.seed = 7;
    const SyntheticDataset ds = generate(spec);

    std::vector<EmbeddingTensor> test = ds.id_test;
    test.insert(test.end(), ds.ood_test.begin(), ds.ood_test.end());
    std::vector<Label> labels(ds.id_test.size(), Label::kId);
    labels.resize(test.size(), Label::kOod);
    std::vector<std::string> test_ids = ds.id_ids;
    test_ids.insert(test_ids.end(), ds.ood_ids.begin(), ds.ood_ids.end());

    const ReducedData reduced = reduce_dataset(ds.train, test, PcaReducer{2});
    const GaussianModel model = fit_gaussian(reduced.train);
    const Vector scores = mahalanobis_batch(model, reduced.test);

    const auto samples = make_samples(
        std::span<const double>(scores.data(), static_cast<std::size_t>(scores.size())), labels);
    const MetricsTriple m = evaluate(samples);
    std::printf("features %zu -> %td, epsilon %.3g\n", reduced.reducer.input_shape.size(), reduced.train.cols(),
                model.epsilon);
    std::printf("mean distance: ID %.3f, OOD %.3f\n", scores.head(100).mean(), scores.tail(100).mean());
    std::printf("AUROC %.4f  AUPR %.4f  FPR75 %.4f\n", m.auroc, m.aupr, m.fpr_at_tpr);

    const Ellipse e = covariance_ellipse(model, 1.0);
    std::printf("1-SD ellipse: center (%.3f, %.3f), semi-axes %.3f x %.3f, angle %.1f deg\n",
                e.center[0], e.center[1], e.semi_axes[0], e.semi_axes[1], e.angle * 180.0 / M_PI);

    if (argc > 1) {
      std::vector<PlotPoint> points;
      for (Eigen::Index i = 0; i < reduced.train.rows(); ++i) {
        points.push_back({ds.train_ids[static_cast<std::size_t>(i)], reduced.train(i, 0),
                          reduced.train(i, 1), Split::kTrain, std::nullopt, ""});
      }
      for (Eigen::Index i = 0; i < reduced.test.rows(); ++i) {
        const auto k = static_cast<std::size_t>(i);
        points.push_back({test_ids[k], reduced.test(i, 0), reduced.test(i, 1), Split::kTest,
                          labels[k], ""});
      }
      std::ofstream out(argv[1]);
      write_plot_svg(out, model, points);
      std::printf("wrote %s\n", argv[1]);
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return e.exit_code();
  }
  return EXIT_SUCCESS;
}
