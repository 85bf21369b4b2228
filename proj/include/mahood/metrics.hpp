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

// Threshold-free detection metrics with OOD as the positive class and higher
// scores meaning "more OOD". Thresholds are the distinct observed scores, so
// tied samples always change confusion cells together and the results do not
// depend on sample order.

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "mahood/dataset.hpp"
#include "mahood/errors.hpp"

namespace mahood {

struct ScoredSample {
  std::string sample_id;
  double score = 0.0;
  Label label = Label::kId;
};

struct MetricsTriple {
  double auroc = 0.0;
  double aupr = 0.0;
  double fpr_at_tpr = 0.0;
  double tpr_target = 0.75;
};

struct TrialSummary {
  MetricsTriple mean;
  MetricsTriple sd;
  int n_trials = 0;
};

inline constexpr double kDefaultTprTarget = 0.75;

namespace metrics_detail {

/// Score-tied group of samples.
struct Group {
  double score;
  std::size_t positives;  // OOD
  std::size_t negatives;  // ID
};

/// Distinct-score groups in descending score order, plus class totals.
struct Groups {
  std::vector<Group> groups;
  std::size_t positives = 0;
  std::size_t negatives = 0;
};

inline Groups group_scores(std::span<const ScoredSample> samples) {
  std::vector<std::pair<double, bool>> v;
  v.reserve(samples.size());
  for (const auto& s : samples) {
    if (!std::isfinite(s.score)) {
      throw DataError("non-finite score for sample '" + s.sample_id + "'");
    }
    v.emplace_back(s.score, s.label == Label::kOod);
  }
  std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  Groups g;
  for (const auto& [score, pos] : v) {
    if (g.groups.empty() || g.groups.back().score != score) g.groups.push_back({score, 0, 0});
    if (pos) {
      ++g.groups.back().positives;
      ++g.positives;
    } else {
      ++g.groups.back().negatives;
      ++g.negatives;
    }
  }
  return g;
}

inline void require_both(const Groups& g, const char* metric) {
  if (g.positives == 0 || g.negatives == 0) {
    throw DegenerateInputError(std::string(metric) + " needs both OOD and ID samples (got " +
                               std::to_string(g.positives) + " OOD, " +
                               std::to_string(g.negatives) + " ID)");
  }
}

}  // namespace metrics_detail

/// Mann-Whitney form: P(score_OOD > score_ID) + 0.5 P(tie).
inline double auroc(std::span<const ScoredSample> samples) {
  const auto g = metrics_detail::group_scores(samples);
  metrics_detail::require_both(g, "AUROC");
  // Walk from the highest score down; negatives_below counts ID samples
  // strictly below the current group.
  double wins = 0.0;
  std::size_t negatives_seen = 0;
  for (const auto& grp : g.groups) {
    negatives_seen += grp.negatives;
    const double below = static_cast<double>(g.negatives - negatives_seen);
    wins += static_cast<double>(grp.positives) *
            (below + 0.5 * static_cast<double>(grp.negatives));
  }
  return wins / (static_cast<double>(g.positives) * static_cast<double>(g.negatives));
}

/// Average precision: sum over thresholds of (R_k - R_{k-1}) * P_k, written
/// as sum(dTP_k * P_k) / positives with a long double accumulator.
inline double aupr(std::span<const ScoredSample> samples) {
  const auto g = metrics_detail::group_scores(samples);
  if (g.positives == 0) throw DegenerateInputError("AUPR needs at least one OOD sample");
  long double sum = 0.0L;
  std::size_t tp = 0;
  std::size_t fp = 0;
  for (const auto& grp : g.groups) {
    tp += grp.positives;
    fp += grp.negatives;
    if (grp.positives == 0) continue;
    sum += static_cast<long double>(grp.positives) * static_cast<long double>(tp) /
           static_cast<long double>(tp + fp);
  }
  return static_cast<double>(sum / static_cast<long double>(g.positives));
}

/// Smallest FPR over thresholds whose TPR reaches `tpr_target`.
inline double fpr_at_tpr(std::span<const ScoredSample> samples,
                         double tpr_target = kDefaultTprTarget) {
  if (!(tpr_target > 0.0 && tpr_target <= 1.0)) {
    throw ConfigError("TPR target must lie in (0, 1], got " + std::to_string(tpr_target));
  }
  const auto g = metrics_detail::group_scores(samples);
  metrics_detail::require_both(g, "FPR@TPR");
  std::size_t tp = 0;
  std::size_t fp = 0;
  // Lowering the threshold never lowers FPR, so the first threshold that
  // reaches the target is optimal. The lowest threshold has TPR = 1.
  for (const auto& grp : g.groups) {
    tp += grp.positives;
    fp += grp.negatives;
    if (static_cast<double>(tp) >= tpr_target * static_cast<double>(g.positives) - 1e-9) {
      return static_cast<double>(fp) / static_cast<double>(g.negatives);
    }
  }
  return 1.0;
}

inline MetricsTriple evaluate(std::span<const ScoredSample> samples,
                              double tpr_target = kDefaultTprTarget) {
  return {auroc(samples), aupr(samples), fpr_at_tpr(samples, tpr_target), tpr_target};
}

/// Fieldwise mean and population standard deviation.
inline TrialSummary aggregate_trials(std::span<const MetricsTriple> triples) {
  if (triples.empty()) throw DegenerateInputError("cannot aggregate zero trials");
  TrialSummary s;
  s.n_trials = static_cast<int>(triples.size());
  const double n = static_cast<double>(triples.size());
  const double target = triples.front().tpr_target;
  for (const auto& t : triples) {
    if (t.tpr_target != target) {
      throw DataError("cannot aggregate trials with different TPR targets");
    }
    s.mean.auroc += t.auroc / n;
    s.mean.aupr += t.aupr / n;
    s.mean.fpr_at_tpr += t.fpr_at_tpr / n;
  }
  for (const auto& t : triples) {
    s.sd.auroc += (t.auroc - s.mean.auroc) * (t.auroc - s.mean.auroc) / n;
    s.sd.aupr += (t.aupr - s.mean.aupr) * (t.aupr - s.mean.aupr) / n;
    s.sd.fpr_at_tpr += (t.fpr_at_tpr - s.mean.fpr_at_tpr) * (t.fpr_at_tpr - s.mean.fpr_at_tpr) / n;
  }
  s.sd.auroc = std::sqrt(s.sd.auroc);
  s.sd.aupr = std::sqrt(s.sd.aupr);
  s.sd.fpr_at_tpr = std::sqrt(s.sd.fpr_at_tpr);
  s.mean.tpr_target = target;
  s.sd.tpr_target = 0.0;
  return s;
}

/// Pair scores with labels by position.
inline std::vector<ScoredSample> make_samples(std::span<const double> scores,
                                              std::span<const Label> labels) {
  if (scores.size() != labels.size()) {
    throw DimensionError("score and label counts differ");
  }
  std::vector<ScoredSample> out(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    out[i] = {std::to_string(i), scores[i], labels[i]};
  }
  return out;
}

}  // namespace mahood
