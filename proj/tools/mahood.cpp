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

// Command-line front end: synth, fit, score, eval, sweep, plot.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <new>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mahood/csv.hpp"
#include "mahood/dataset.hpp"
#include "mahood/gaussian.hpp"
#include "mahood/log.hpp"
#include "mahood/metrics.hpp"
#include "mahood/plot.hpp"
#include "mahood/reducer.hpp"
#include "mahood/sweep.hpp"
#include "mahood/synthetic.hpp"

namespace fs = std::filesystem;
using namespace mahood;

namespace {

struct Shared {
  std::string out = ".";
  std::uint64_t seed = 0;
  int jobs = 1;
};

struct GaussianFlags {
  std::string epsilon = "relative:1e-6";
  bool pseudo_inverse = false;
  double max_covariance_gib = 8.0;

  GaussianOptions options() const {
    if (!(max_covariance_gib > 0.0)) throw ConfigError("--max-covariance-gib must be positive");
    GaussianOptions o;
    o.solver = pseudo_inverse ? CovarianceSolver::kPseudoInverse : CovarianceSolver::kCholesky;
    o.max_covariance_bytes = static_cast<std::size_t>(max_covariance_gib * (1ULL << 30));
    return o;
  }

  void add_to(CLI::App* sub) {
    sub->add_option("--epsilon", epsilon, "Ridge policy: none, absolute:X or relative:X")
        ->capture_default_str();
    sub->add_flag("--pseudo-inverse", pseudo_inverse,
                  "Score through the covariance pseudo-inverse instead of a Cholesky factor");
    sub->add_option("--max-covariance-gib", max_covariance_gib,
                    "Refuse covariances larger than this")
        ->capture_default_str();
  }
};

std::string g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Shape4 parse_shape(const std::string& text) {
  Shape4 s;
  std::stringstream in(text);
  std::string part;
  std::size_t i = 0;
  while (std::getline(in, part, ',')) {
    if (i == 4) throw ConfigError("shape needs exactly 4 extents, got '" + text + "'");
    try {
      std::size_t used = 0;
      const long v = std::stol(part, &used);
      if (used != part.size() || v < 1) throw std::invalid_argument(part);
      s.dims[i++] = static_cast<std::size_t>(v);
    } catch (const std::exception&) {
      throw ConfigError("bad shape extent '" + part + "' in '" + text + "'");
    }
  }
  if (i != 4) throw ConfigError("shape needs exactly 4 extents, got '" + text + "'");
  return s;
}

void write_json(const fs::path& path, const nlohmann::ordered_json& j) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << j.dump(2) << '\n';
  if (!out) throw IoError("write failure on " + path.string());
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

std::vector<Label> labels_for(const std::vector<const ManifestEntry*>& entries,
                              const std::unordered_map<std::string, Label>& labels) {
  std::vector<Label> out;
  out.reserve(entries.size());
  for (const auto* e : entries) {
    const auto it = labels.find(e->sample_id);
    if (it == labels.end()) throw DataError("no label for sample '" + e->sample_id + "'");
    out.push_back(it->second);
  }
  return out;
}

// t-SNE models keep the joint embedding of every manifest sample.
constexpr const char* kEmbeddingFile = "embedding.csv";

void write_embedding(const fs::path& path, const std::vector<const ManifestEntry*>& entries,
                     const FeatureMatrix& y) {
  auto out = open_out(path);
  std::vector<std::string> header{"sample_id", "split"};
  for (Eigen::Index c = 0; c < y.cols(); ++c) header.push_back("comp" + std::to_string(c + 1));
  csv::write_row(out, header);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    std::vector<std::string> row{entries[i]->sample_id, to_string(entries[i]->split)};
    for (Eigen::Index c = 0; c < y.cols(); ++c) row.push_back(g17(y(static_cast<Eigen::Index>(i), c)));
    csv::write_row(out, row);
  }
}

FeatureMatrix lookup_embedding(const fs::path& path,
                               const std::vector<const ManifestEntry*>& entries) {
  const auto table = csv::read(path);
  const auto id_col = table.column("sample_id");
  if (!id_col) throw DataError(path.string() + ": missing sample_id column");
  std::vector<std::size_t> comp_cols;
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    if (table.header[c].rfind("comp", 0) == 0) comp_cols.push_back(c);
  }
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t r = 0; r < table.rows.size(); ++r) index.emplace(table.rows[r][*id_col], r);
  FeatureMatrix m(static_cast<Eigen::Index>(entries.size()),
                  static_cast<Eigen::Index>(comp_cols.size()));
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto it = index.find(entries[i]->sample_id);
    if (it == index.end()) {
      throw DataError("sample '" + entries[i]->sample_id +
                      "' is not in the t-SNE embedding; t-SNE has no out-of-sample transform, "
                      "refit with it in the manifest");
    }
    for (std::size_t c = 0; c < comp_cols.size(); ++c) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) =
          csv::parse_double(table.rows[it->second][comp_cols[c]], path.string());
    }
  }
  return m;
}

/// Reduced features of `entries` under a fitted model directory.
FeatureMatrix reduce_entries(const fs::path& model_dir, const FittedReducer& reducer,
                             const std::vector<const ManifestEntry*>& entries) {
  if (std::holds_alternative<TsneConfig>(reducer.spec)) {
    return lookup_embedding(model_dir / kEmbeddingFile, entries);
  }
  const auto tensors = load_tensors(entries);
  return apply_reducer(reducer, tensors);
}

std::vector<const ManifestEntry*> select_split(const Manifest& m, const std::string& which) {
  if (which == "all") {
    std::vector<const ManifestEntry*> out;
    for (const auto& e : m.entries) out.push_back(&e);
    return out;
  }
  return m.select(parse_split(which));
}

// ---------------------------------------------------------------- synth

struct SynthArgs {
  int latent_dim = 8;
  std::string shape = "16,8,4,4";
  int n_train = 300;
  int n_id = 100;
  int n_ood = 100;
  double shift = 3.0;
  double noise = 0.1;
};

void cmd_synth(const Shared& shared, const SynthArgs& a) {
  SyntheticSpec spec;
  spec.latent_dim = a.latent_dim;
  spec.ambient_shape = parse_shape(a.shape);
  spec.n_train = a.n_train;
  spec.n_id_test = a.n_id;
  spec.n_ood_test = a.n_ood;
  spec.shift = a.shift;
  spec.noise_sigma = a.noise;
  spec.seed = shared.seed;
  const auto ds = generate(spec);
  write_dataset(ds, shared.out);
  std::cout << "wrote " << ds.train.size() << " train, " << ds.id_test.size() << " ID test and "
            << ds.ood_test.size() << " OOD test tensors of shape " << spec.ambient_shape.str()
            << " to " << shared.out << '\n';
}

// ---------------------------------------------------------------- fit

struct FitArgs {
  std::string manifest;
  std::string reducer = "pca:2";
  GaussianFlags gaussian;
  bool no_timing = false;
};

void cmd_fit(const Shared& shared, const FitArgs& a) {
  const auto manifest = load_manifest(a.manifest);
  auto spec = parse_reducer(a.reducer);
  if (auto* t = std::get_if<TsneConfig>(&spec)) t->seed = shared.seed;
  const auto train_entries = manifest.select(Split::kTrain);
  if (train_entries.empty()) throw DataError(a.manifest + ": no train rows");
  const auto train = load_tensors(train_entries);

  std::vector<const ManifestEntry*> joint_entries = train_entries;
  std::vector<EmbeddingTensor> test;
  if (is_stochastic(spec)) {
    // t-SNE cannot place unseen points: embed the test split now.
    const auto test_entries = manifest.select(Split::kTest);
    test = load_tensors(test_entries);
    joint_entries.insert(joint_entries.end(), test_entries.begin(), test_entries.end());
  }
  const auto reduced = reduce_dataset(train, test, spec);
  const auto policy = EpsilonPolicy::parse(a.gaussian.epsilon);
  const auto model = fit_gaussian(reduced.train, policy, a.gaussian.options());

  nlohmann::ordered_json inversion = nullptr;
  if (!a.no_timing) {
    try {
      inversion = invert_covariance_timed(model).seconds;
    } catch (const NumericalError& e) {
      warn(std::string("covariance inverse not timed: ") + e.what());
    }
  }

  const fs::path out = shared.out;
  fs::create_directories(out);
  save_reducer(reduced.reducer, out / "reducer");
  save_gaussian(model, out / "gaussian");
  if (reduced.reducer.tsne) {
    FeatureMatrix joint(reduced.train.rows() + reduced.test.rows(), reduced.train.cols());
    joint << reduced.train, reduced.test;
    write_embedding(out / kEmbeddingFile, joint_entries, joint);
  }

  nlohmann::ordered_json report;
  report["reducer"] = reducer_label(spec);
  report["reducer_token"] = reducer_token(spec);
  report["n_train"] = train.size();
  report["input_shape"] = manifest.shape.dims;
  report["dim_before"] = manifest.shape.size();
  report["dim_after"] = reduced.train.cols();
  report["epsilon_policy"] = policy.str();
  report["epsilon"] = model.epsilon;
  report["solver"] = a.gaussian.pseudo_inverse ? "pseudo-inverse" : "cholesky";
  report["inversion_seconds"] = inversion;
  if (reduced.reducer.tsne) {
    report["tsne_kl_after_exaggeration"] = reduced.reducer.tsne->kl_after_exaggeration;
    report["tsne_kl_final"] = reduced.reducer.tsne->kl_final;
  }
  write_json(out / "fit_report.json", report);
  std::cout << "fitted " << reducer_label(spec) << ": d " << manifest.shape.size() << " -> "
            << reduced.train.cols() << ", epsilon " << g17(model.epsilon) << ", model in "
            << out.string() << '\n';
}

// ---------------------------------------------------------------- score

struct ScoreArgs {
  std::string model;
  std::string manifest;
  std::string split = "test";
};

void cmd_score(const Shared& shared, const ScoreArgs& a) {
  const fs::path model_dir = a.model;
  const auto reducer = load_reducer(model_dir / "reducer");
  const auto gaussian = load_gaussian(model_dir / "gaussian");
  const auto manifest = load_manifest(a.manifest);
  const auto entries = select_split(manifest, a.split);
  if (entries.empty()) throw DataError(a.manifest + ": no rows in split '" + a.split + "'");
  const FeatureMatrix features = reduce_entries(model_dir, reducer, entries);
  const Vector d = mahalanobis_batch(gaussian, features);

  fs::create_directories(shared.out);
  const fs::path path = fs::path(shared.out) / "scores.csv";
  auto out = open_out(path);
  csv::write_row(out, {"sample_id", "distance", "split"});
  std::map<std::string, std::pair<double, std::size_t>> per_split;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const double v = d[static_cast<Eigen::Index>(i)];
    csv::write_row(out, {entries[i]->sample_id, g17(v), to_string(entries[i]->split)});
    auto& acc = per_split[to_string(entries[i]->split)];
    acc.first += v;
    ++acc.second;
  }
  if (!out) throw IoError("write failure on " + path.string());
  for (const auto& [split, acc] : per_split) {
    std::cout << split << ": " << acc.second << " samples, mean distance "
              << g17(acc.first / static_cast<double>(acc.second)) << '\n';
  }
  std::cout << "scores in " << path.string() << '\n';
}

// ---------------------------------------------------------------- eval

struct EvalArgs {
  std::string scores;
  std::string labels;
  double dsc_threshold = kDefaultDscThreshold;
  double tpr_target = kDefaultTprTarget;
};

void cmd_eval(const Shared& shared, const EvalArgs& a) {
  const auto table = csv::read(a.scores);
  const auto id_col = table.column("sample_id");
  auto score_col = table.column("distance");
  if (!score_col) score_col = table.column("score");
  if (!id_col || !score_col) {
    throw DataError(a.scores + ": header needs sample_id and a distance or score column");
  }
  const auto labels = resolve_labels(load_labels(a.labels), a.dsc_threshold);
  std::vector<ScoredSample> samples;
  std::size_t n_id = 0;
  std::size_t n_ood = 0;
  for (const auto& row : table.rows) {
    const auto& id = row[*id_col];
    const auto it = labels.find(id);
    if (it == labels.end()) throw DataError("no label for scored sample '" + id + "'");
    samples.push_back({id, csv::parse_double(row[*score_col], a.scores + " score of '" + id + "'"),
                       it->second});
    ++(it->second == Label::kOod ? n_ood : n_id);
  }
  const auto m = evaluate(samples, a.tpr_target);
  nlohmann::ordered_json j;
  j["auroc"] = m.auroc;
  j["aupr"] = m.aupr;
  j["fpr75"] = m.fpr_at_tpr;
  j["tpr_target"] = m.tpr_target;
  j["n_id"] = n_id;
  j["n_ood"] = n_ood;
  fs::create_directories(shared.out);
  write_json(fs::path(shared.out) / "metrics.json", j);
  std::cout << j.dump(2) << '\n';
}

// ---------------------------------------------------------------- sweep

struct SweepArgs {
  std::string manifest;
  std::string labels;
  std::vector<std::string> grid;
  bool baseline = false;
  int trials = 0;
  GaussianFlags gaussian;
  double dsc_threshold = kDefaultDscThreshold;
  double tpr_target = kDefaultTprTarget;
  bool no_timing = false;
};

void cmd_sweep(const Shared& shared, const SweepArgs& a) {
  SweepConfig config;
  if (a.grid.empty()) {
    config.grid = default_grid(a.baseline);
  } else {
    if (a.baseline) config.grid.emplace_back(IdentityReducer{});
    for (const auto& token : a.grid) config.grid.push_back(parse_reducer(token));
  }
  config.pipeline.policy = EpsilonPolicy::parse(a.gaussian.epsilon);
  config.pipeline.gaussian = a.gaussian.options();
  config.pipeline.tpr_target = a.tpr_target;
  if (!(a.tpr_target > 0.0 && a.tpr_target <= 1.0)) {
    throw ConfigError("--tpr-target must lie in (0, 1]");
  }
  if (a.trials < 0) throw ConfigError("--trials must be >= 1");
  config.trials = a.trials;
  config.seed = shared.seed;
  config.jobs = shared.jobs;
  config.report_timing = !a.no_timing;

  const auto manifest = load_manifest(a.manifest);
  const auto labels = resolve_labels(load_labels(a.labels), a.dsc_threshold);
  const auto test_entries = manifest.select(Split::kTest);
  SweepInput input;
  input.test_labels = labels_for(test_entries, labels);
  input.train = load_tensors(manifest.select(Split::kTrain));
  input.test = load_tensors(test_entries);

  const auto rows = run_sweep(input, config);
  const auto table = format_sweep(rows, a.tpr_target, config.report_timing);
  fs::create_directories(shared.out);
  {
    auto out = open_out(fs::path(shared.out) / "sweep.csv");
    write_sweep_csv(out, table);
  }
  {
    auto out = open_out(fs::path(shared.out) / "sweep.md");
    write_sweep_markdown(out, table, rows);
  }
  write_sweep_markdown(std::cout, table, rows);
  for (const auto& row : rows) {
    if (!row.ok()) std::cerr << "error: " << row.experiment << ": " << row.error << '\n';
  }
}

// ---------------------------------------------------------------- plot

struct PlotArgs {
  std::string model;
  std::string manifest;
  std::string labels;
  std::string tags;
  std::string title = "Mahalanobis projection";
  double dsc_threshold = kDefaultDscThreshold;
  bool no_timestamp = false;
};

void cmd_plot(const Shared& shared, const PlotArgs& a) {
  const fs::path model_dir = a.model;
  const auto reducer = load_reducer(model_dir / "reducer");
  const auto gaussian = load_gaussian(model_dir / "gaussian");
  if (gaussian.dim() != 2) {
    throw DimensionError("plot needs a 2-D model, this one has d=" +
                         std::to_string(gaussian.dim()) + "; refit with --reducer pca:2");
  }
  const auto manifest = load_manifest(a.manifest);
  std::vector<const ManifestEntry*> entries;
  for (const auto& e : manifest.entries) entries.push_back(&e);
  const FeatureMatrix xy = reduce_entries(model_dir, reducer, entries);

  std::unordered_map<std::string, Label> labels;
  if (!a.labels.empty()) labels = resolve_labels(load_labels(a.labels), a.dsc_threshold);
  std::unordered_map<std::string, std::string> tags;
  if (!a.tags.empty()) {
    const auto t = csv::read(a.tags);
    const auto id_col = t.column("sample_id");
    const auto tag_col = t.column("tag");
    if (!id_col || !tag_col) throw DataError(a.tags + ": header needs sample_id and tag");
    for (const auto& row : t.rows) tags[row[*id_col]] = row[*tag_col];
  }

  std::vector<PlotPoint> points;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    PlotPoint p;
    p.sample_id = entries[i]->sample_id;
    p.x = xy(static_cast<Eigen::Index>(i), 0);
    p.y = xy(static_cast<Eigen::Index>(i), 1);
    p.split = entries[i]->split;
    if (p.split == Split::kTest) {
      const auto it = labels.find(p.sample_id);
      if (it == labels.end()) {
        throw DataError("no label for test sample '" + p.sample_id + "' (pass --labels)");
      }
      p.label = it->second;
    } else if (const auto it = tags.find(p.sample_id); it != tags.end()) {
      p.tag = it->second;
    }
    points.push_back(std::move(p));
  }

  PlotOptions opt;
  opt.title = a.title;
  opt.timestamp = !a.no_timestamp;
  fs::create_directories(shared.out);
  {
    auto out = open_out(fs::path(shared.out) / "plot.svg");
    write_plot_svg(out, gaussian, points, opt);
  }
  {
    auto out = open_out(fs::path(shared.out) / "plot.csv");
    write_plot_csv(out, points);
  }
  for (const auto& [series, c] : count_inside_one_sd(gaussian, points)) {
    std::cout << series_name(series) << ": " << c.inside << " inside, " << c.outside
              << " outside the 1-SD ellipse\n";
  }
}

int run(int argc, char** argv) {
  CLI::App app{"Mahalanobis out-of-distribution detection on reduced embeddings"};
  app.set_config("--config", "", "TOML file with default option values");
  app.require_subcommand(1);
  app.fallthrough();

  Shared shared;
  app.add_option("--out", shared.out, "Output directory")->capture_default_str();
  app.add_option("--seed", shared.seed, "Random seed")->capture_default_str();
  app.add_option("--jobs", shared.jobs, "Worker threads for sweeps")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  SynthArgs synth;
  auto* s = app.add_subcommand("synth", "Generate a synthetic dataset (NPY + manifest + labels)");
  s->add_option("--latent-dim", synth.latent_dim, "Latent dimension")->capture_default_str();
  s->add_option("--shape", synth.shape, "Ambient tensor shape C,D,H,W")->capture_default_str();
  s->add_option("--n-train", synth.n_train, "Train samples")->capture_default_str();
  s->add_option("--n-id", synth.n_id, "ID test samples")->capture_default_str();
  s->add_option("--n-ood", synth.n_ood, "OOD test samples")->capture_default_str();
  s->add_option("--shift", synth.shift, "OOD mean offset in latent units")->capture_default_str();
  s->add_option("--noise", synth.noise, "Ambient noise sigma")->capture_default_str();
  s->callback([&] { cmd_synth(shared, synth); });

  FitArgs fit;
  auto* f = app.add_subcommand("fit", "Fit a reducer and a Gaussian on the train split");
  f->add_option("--manifest", fit.manifest, "CSV with sample_id,file_path,split")->required();
  f->add_option("--reducer", fit.reducer, "identity, pool2d:j,k, pool3d:j,k, pca:n or tsne")
      ->capture_default_str();
  fit.gaussian.add_to(f);
  f->add_flag("--no-timing", fit.no_timing, "Omit the covariance-inversion time");
  f->callback([&] { cmd_fit(shared, fit); });

  ScoreArgs score;
  auto* sc = app.add_subcommand("score", "Mahalanobis distances for manifest samples");
  sc->add_option("--model", score.model, "Directory written by fit")->required();
  sc->add_option("--manifest", score.manifest, "CSV with sample_id,file_path,split")->required();
  sc->add_option("--split", score.split, "test, train or all")
      ->check(CLI::IsMember({"test", "train", "all"}))
      ->capture_default_str();
  sc->callback([&] { cmd_score(shared, score); });

  EvalArgs eval;
  auto* e = app.add_subcommand("eval", "AUROC, AUPR and FPR at a TPR target");
  e->add_option("--scores", eval.scores, "CSV written by score")->required();
  e->add_option("--labels", eval.labels, "CSV with sample_id and label or dsc")->required();
  e->add_option("--dsc-threshold", eval.dsc_threshold, "DSC at or above this is ID when no label is given")->capture_default_str();
  e->add_option("--tpr-target", eval.tpr_target, "TPR at which the FPR is read")->capture_default_str();
  e->callback([&] { cmd_eval(shared, eval); });

  SweepArgs sweep;
  auto* sw = app.add_subcommand("sweep", "Results table over a grid of reducers");
  sw->add_option("--manifest", sweep.manifest, "CSV with sample_id,file_path,split")->required();
  sw->add_option("--labels", sweep.labels, "CSV with sample_id and label or dsc")->required();
  sw->add_option("--grid", sweep.grid, "Reducer tokens (default: pooling, PCA and t-SNE grid)");
  sw->add_flag("--baseline", sweep.baseline, "Prepend the full-dimension baseline row");
  sw->add_option("--trials", sweep.trials, "Trials per stochastic row (default 10)");
  sweep.gaussian.add_to(sw);
  sw->add_option("--dsc-threshold", sweep.dsc_threshold, "DSC at or above this is ID when no label is given")->capture_default_str();
  sw->add_option("--tpr-target", sweep.tpr_target, "TPR at which the FPR is read")->capture_default_str();
  sw->add_flag("--no-timing", sweep.no_timing, "Write NA in ComputationTime");
  sw->callback([&] { cmd_sweep(shared, sweep); });

  PlotArgs plot;
  auto* p = app.add_subcommand("plot", "SVG scatter of a 2-D model with covariance ellipses");
  p->add_option("--model", plot.model, "Directory written by fit")->required();
  p->add_option("--manifest", plot.manifest, "CSV with sample_id,file_path,split")->required();
  p->add_option("--labels", plot.labels, "Needed when the manifest has test rows");
  p->add_option("--tags", plot.tags, "CSV sample_id,tag to color train points");
  p->add_option("--title", plot.title, "Plot title")->capture_default_str();
  p->add_option("--dsc-threshold", plot.dsc_threshold, "DSC at or above this is ID when no label is given")->capture_default_str();
  p->add_flag("--no-timestamp", plot.no_timestamp, "Omit the generation-time comment");
  p->callback([&] { cmd_plot(shared, plot); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int rc = app.exit(err);
    return rc == 0 ? 0 : static_cast<int>(ErrorClass::kUsage);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const mahood::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::bad_alloc&) {
    std::cerr << "error: out of memory\n";
    return static_cast<int>(ErrorClass::kNumerical);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(ErrorClass::kData);
  }
}
