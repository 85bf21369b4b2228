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

#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "mahood/errors.hpp"
#include "mahood/pca.hpp"
#include "mahood/pooling.hpp"
#include "mahood/tensor.hpp"
#include "mahood/tsne.hpp"

namespace mahood {

/// Flatten only: the full-dimension baseline.
struct IdentityReducer {};

struct PcaReducer {
  int n_components = 2;
};

using ReducerSpec = std::variant<IdentityReducer, PoolingSpec, PcaReducer, TsneConfig>;

inline bool is_stochastic(const ReducerSpec& spec) {
  return std::holds_alternative<TsneConfig>(spec);
}

/// Row label in result tables.
inline std::string reducer_label(const ReducerSpec& spec) {
  struct {
    std::string operator()(const IdentityReducer&) const { return "Baseline"; }
    std::string operator()(const PoolingSpec& p) const { return p.label(); }
    std::string operator()(const PcaReducer& p) const {
      return "PCA(" + std::to_string(p.n_components) + ")";
    }
    std::string operator()(const TsneConfig& t) const {
      return t.n_components == 2 ? "t-SNE" : "t-SNE(" + std::to_string(t.n_components) + ")";
    }
  } visitor;
  return std::visit(visitor, spec);
}

namespace reducer_detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string::npos) return out;
    start = pos + 1;
  }
}

inline long parse_int(const std::string& s, const std::string& context) {
  try {
    std::size_t used = 0;
    const long v = std::stol(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError(context + ": expected an integer, got '" + s + "'");
}

}  // namespace reducer_detail

/// "identity", "pool2d:j,k", "pool3d:j,k", "pca:n", "tsne" or "tsne:n".
inline ReducerSpec parse_reducer(const std::string& text) {
  using reducer_detail::parse_int;
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  const std::string args = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (head == "identity" || head == "baseline") {
    if (!args.empty()) throw ConfigError("identity reducer takes no arguments");
    return IdentityReducer{};
  }
  if (head == "pool2d" || head == "pool3d") {
    const auto parts = reducer_detail::split(args, ',');
    if (parts.size() != 2) throw ConfigError(head + " expects 'j,k', got '" + args + "'");
    const long j = parse_int(parts[0], head);
    const long k = parse_int(parts[1], head);
    if (j < 1 || k < 1) throw ConfigError(head + ": kernel and stride must be >= 1");
    PoolingSpec p{head == "pool2d" ? 2 : 3, static_cast<std::size_t>(j),
                  static_cast<std::size_t>(k)};
    return p;
  }
  if (head == "pca") {
    const long n = parse_int(args, "pca");
    if (n < 1) throw ConfigError("pca: n must be >= 1");
    return PcaReducer{static_cast<int>(n)};
  }
  if (head == "tsne") {
    TsneConfig t;
    if (!args.empty()) t.n_components = static_cast<int>(parse_int(args, "tsne"));
    if (t.n_components < 1) throw ConfigError("tsne: n must be >= 1");
    return t;
  }
  throw ConfigError("unknown reducer '" + text +
                    "' (expected identity, pool2d:j,k, pool3d:j,k, pca:n or tsne[:n])");
}

inline std::string reducer_token(const ReducerSpec& spec) {
  struct {
    std::string operator()(const IdentityReducer&) const { return "identity"; }
    std::string operator()(const PoolingSpec& p) const {
      return "pool" + std::to_string(p.dims) + "d:" + std::to_string(p.kernel) + "," +
             std::to_string(p.stride);
    }
    std::string operator()(const PcaReducer& p) const {
      return "pca:" + std::to_string(p.n_components);
    }
    std::string operator()(const TsneConfig& t) const {
      return "tsne:" + std::to_string(t.n_components);
    }
  } visitor;
  return std::visit(visitor, spec);
}

/// A reducer after fitting. Only PCA carries learned state; t-SNE keeps the
/// joint embedding it produced because it has no out-of-sample transform.
struct FittedReducer {
  ReducerSpec spec;
  Shape4 input_shape;
  std::optional<PcaModel> pca;
  std::optional<TsneResult> tsne;
};

struct ReducedData {
  FeatureMatrix train;
  FeatureMatrix test;
  FittedReducer reducer;
};

namespace reducer_detail {

inline void check_uniform(std::span<const EmbeddingTensor> a, std::span<const EmbeddingTensor> b,
                          const Shape4& shape) {
  for (auto set : {a, b}) {
    for (const auto& t : set) {
      if (t.shape() != shape) {
        throw SizeError("non-uniform tensor shapes " + shape.str() + " and " + t.shape().str());
      }
    }
  }
}

inline FeatureMatrix pool_rows(std::span<const EmbeddingTensor> tensors, const PoolingSpec& p) {
  std::vector<EmbeddingTensor> pooled;
  pooled.reserve(tensors.size());
  for (const auto& t : tensors) pooled.push_back(average_pool(t, p));
  return stack_rows(pooled);
}

}  // namespace reducer_detail

/// Apply a fitted reducer to new tensors. Not available for t-SNE.
inline FeatureMatrix apply_reducer(const FittedReducer& fitted,
                                   std::span<const EmbeddingTensor> tensors) {
  for (const auto& t : tensors) {
    if (t.shape() != fitted.input_shape) {
      throw SizeError("reducer was fitted on shape " + fitted.input_shape.str() + ", got " +
                      t.shape().str());
    }
  }
  if (std::holds_alternative<IdentityReducer>(fitted.spec)) return stack_rows(tensors);
  if (const auto* p = std::get_if<PoolingSpec>(&fitted.spec)) {
    return reducer_detail::pool_rows(tensors, *p);
  }
  if (std::holds_alternative<PcaReducer>(fitted.spec)) {
    return apply_pca(*fitted.pca, stack_rows(tensors));
  }
  throw ConfigError("t-SNE has no out-of-sample transform; embed all samples jointly");
}

/// Reduce both splits. PCA is fitted on train only; t-SNE embeds train and
/// test jointly and splits the rows back by origin.
inline ReducedData reduce_dataset(std::span<const EmbeddingTensor> train,
                                  std::span<const EmbeddingTensor> test, const ReducerSpec& spec) {
  if (train.empty()) throw SampleSizeError("no training tensors");
  const Shape4 shape = train.front().shape();
  reducer_detail::check_uniform(train, test, shape);

  ReducedData out;
  out.reducer.spec = spec;
  out.reducer.input_shape = shape;
  if (const auto* t = std::get_if<TsneConfig>(&spec)) {
    const auto n_train = static_cast<Eigen::Index>(train.size());
    const auto n_test = static_cast<Eigen::Index>(test.size());
    FeatureMatrix joint(n_train + n_test, static_cast<Eigen::Index>(shape.size()));
    joint.topRows(n_train) = stack_rows(train);
    if (n_test > 0) joint.bottomRows(n_test) = stack_rows(test);
    auto result = tsne_embed(joint, *t);
    out.train = result.embedding.topRows(n_train);
    out.test = result.embedding.bottomRows(n_test);
    out.reducer.tsne = std::move(result);
    return out;
  }
  if (const auto* p = std::get_if<PcaReducer>(&spec)) {
    const FeatureMatrix flat = stack_rows(train);
    out.reducer.pca = fit_pca(flat, p->n_components);
    out.train = apply_pca(*out.reducer.pca, flat);
    out.test = test.empty() ? FeatureMatrix(0, p->n_components)
                            : apply_pca(*out.reducer.pca, stack_rows(test));
    return out;
  }
  out.train = apply_reducer(out.reducer, train);
  out.test = test.empty() ? FeatureMatrix(0, out.train.cols()) : apply_reducer(out.reducer, test);
  return out;
}

/// reducer.json plus pca/ for PCA models.
inline void save_reducer(const FittedReducer& fitted, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  nlohmann::ordered_json j;
  j["reducer"] = reducer_token(fitted.spec);
  j["input_shape"] = fitted.input_shape.dims;
  if (const auto* t = std::get_if<TsneConfig>(&fitted.spec)) {
    j["tsne"] = {{"n_components", t->n_components},   {"perplexity", t->perplexity},
                 {"n_iter", t->n_iter},               {"learning_rate", t->learning_rate},
                 {"early_exaggeration", t->early_exaggeration},
                 {"exaggeration_iters", t->exaggeration_iters},
                 {"seed", t->seed}};
  }
  std::ofstream out(dir / "reducer.json");
  out << j.dump(2) << '\n';
  if (!out) throw IoError("write failure on " + (dir / "reducer.json").string());
  if (fitted.pca) save_pca(*fitted.pca, dir / "pca");
}

inline FittedReducer load_reducer(const std::filesystem::path& dir) {
  std::ifstream in(dir / "reducer.json");
  if (!in) throw IoError("cannot open " + (dir / "reducer.json").string());
  const auto j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.contains("reducer") || !j.contains("input_shape")) {
    throw DataError((dir / "reducer.json").string() + ": malformed reducer description");
  }
  FittedReducer f;
  f.spec = parse_reducer(j["reducer"].get<std::string>());
  f.input_shape.dims = j["input_shape"].get<std::array<std::size_t, 4>>();
  if (auto* t = std::get_if<TsneConfig>(&f.spec); t && j.contains("tsne")) {
    const auto& c = j["tsne"];
    t->n_components = c.value("n_components", t->n_components);
    t->perplexity = c.value("perplexity", t->perplexity);
    t->n_iter = c.value("n_iter", t->n_iter);
    t->learning_rate = c.value("learning_rate", t->learning_rate);
    t->early_exaggeration = c.value("early_exaggeration", t->early_exaggeration);
    t->exaggeration_iters = c.value("exaggeration_iters", t->exaggeration_iters);
    t->seed = c.value("seed", t->seed);
  }
  if (std::holds_alternative<PcaReducer>(f.spec)) f.pca = load_pca(dir / "pca");
  return f;
}

}  // namespace mahood
