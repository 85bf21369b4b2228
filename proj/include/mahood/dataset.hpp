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

// Manifests (which embedding files make up a dataset) and label tables
// (DSC values and ID/OOD labels).

#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "mahood/csv.hpp"
#include "mahood/errors.hpp"
#include "mahood/npy.hpp"
#include "mahood/tensor.hpp"

namespace mahood {

enum class Split { kTrain, kTest };

inline const char* to_string(Split s) { return s == Split::kTrain ? "train" : "test"; }

inline Split parse_split(const std::string& token) {
  if (token == "train") return Split::kTrain;
  if (token == "test") return Split::kTest;
  throw DataError("unknown split token '" + token + "' (expected train or test)");
}

struct ManifestEntry {
  std::string sample_id;
  std::filesystem::path file_path;  // resolved against the manifest's directory
  Split split = Split::kTrain;
};

struct Manifest {
  std::vector<ManifestEntry> entries;
  Shape4 shape;

  std::vector<const ManifestEntry*> select(Split split) const {
    std::vector<const ManifestEntry*> out;
    for (const auto& e : entries) {
      if (e.split == split) out.push_back(&e);
    }
    return out;
  }
};

/// Parse and validate a manifest CSV (sample_id,file_path,split). Every
/// referenced tensor is read once here so bad files fail before any work.
/// Relative file paths are resolved against the manifest's directory.
inline Manifest load_manifest(const std::filesystem::path& path) {
  const auto table = csv::read(path);
  const auto id_col = table.column("sample_id");
  const auto file_col = table.column("file_path");
  const auto split_col = table.column("split");
  if (!id_col || !file_col || !split_col) {
    throw DataError(path.string() + ": manifest header must contain sample_id,file_path,split");
  }
  Manifest m;
  std::unordered_set<std::string> seen;
  std::optional<std::pair<Shape4, std::string>> first;
  const auto base = path.parent_path();
  for (const auto& row : table.rows) {
    ManifestEntry e;
    e.sample_id = row[*id_col];
    if (!seen.insert(e.sample_id).second) {
      throw DataError(path.string() + ": duplicate sample_id '" + e.sample_id + "'");
    }
    e.file_path = row[*file_col];
    if (e.file_path.is_relative()) e.file_path = base / e.file_path;
    e.split = parse_split(row[*split_col]);
    if (!std::filesystem::exists(e.file_path)) {
      throw IoError(path.string() + ": sample '" + e.sample_id + "' references missing file " +
                    e.file_path.string());
    }
    const auto t = read_array(e.file_path);
    if (!first) {
      first.emplace(t.shape(), e.sample_id);
    } else if (t.shape() != first->first) {
      throw DataError(path.string() + ": shape mismatch: '" + first->second + "' is " +
                      first->first.str() + " but '" + e.sample_id + "' is " + t.shape().str());
    }
    m.entries.push_back(std::move(e));
  }
  if (first) m.shape = first->first;
  return m;
}

inline std::vector<EmbeddingTensor> load_tensors(std::span<const ManifestEntry* const> entries) {
  std::vector<EmbeddingTensor> out;
  out.reserve(entries.size());
  for (const auto* e : entries) out.push_back(read_array(e->file_path));
  return out;
}

inline void write_manifest(const std::filesystem::path& path,
                           std::span<const ManifestEntry> entries) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  csv::write_row(out, {"sample_id", "file_path", "split"});
  for (const auto& e : entries) {
    csv::write_row(out, {e.sample_id, e.file_path.generic_string(), to_string(e.split)});
  }
  if (!out) throw IoError("write failure on " + path.string());
}

enum class Label { kId, kOod };

inline const char* to_string(Label l) { return l == Label::kId ? "ID" : "OOD"; }

inline Label parse_label(const std::string& token) {
  if (token == "ID") return Label::kId;
  if (token == "OOD") return Label::kOod;
  throw DataError("unknown label token '" + token + "' (expected ID or OOD)");
}

struct LabelRow {
  std::string sample_id;
  std::optional<double> dsc;
  std::optional<Label> label;
};

struct LabelTable {
  std::vector<LabelRow> rows;

  std::unordered_map<std::string, Label> label_map() const {
    std::unordered_map<std::string, Label> out;
    for (const auto& r : rows) {
      if (r.label) out.emplace(r.sample_id, *r.label);
    }
    return out;
  }
};

inline constexpr double kDefaultDscThreshold = 0.95;

/// ID when dsc >= threshold, OOD otherwise. Existing labels are overwritten.
inline LabelTable label_from_dsc(const LabelTable& table,
                                 double threshold = kDefaultDscThreshold) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw ConfigError("DSC threshold must lie in [0,1], got " + std::to_string(threshold));
  }
  LabelTable out = table;
  for (auto& r : out.rows) {
    if (!r.dsc) throw DataError("sample '" + r.sample_id + "' has no DSC value to label from");
    r.label = *r.dsc >= threshold ? Label::kId : Label::kOod;
  }
  return out;
}

/// Explicit labels win; rows without one are labelled from their DSC.
inline std::unordered_map<std::string, Label> resolve_labels(
    const LabelTable& table, double threshold = kDefaultDscThreshold) {
  std::unordered_map<std::string, Label> out;
  for (const auto& r : table.rows) {
    if (r.label) {
      out.emplace(r.sample_id, *r.label);
    } else {
      out.emplace(r.sample_id, *label_from_dsc(LabelTable{{r}}, threshold).rows.front().label);
    }
  }
  return out;
}

/// Label CSV: sample_id,dsc,label. Empty cells are absent values; either
/// value column may be missing from the header entirely.
inline LabelTable load_labels(const std::filesystem::path& path) {
  const auto table = csv::read(path);
  const auto id_col = table.column("sample_id");
  const auto dsc_col = table.column("dsc");
  const auto label_col = table.column("label");
  if (!id_col || (!dsc_col && !label_col)) {
    throw DataError(path.string() + ": label header must contain sample_id and dsc and/or label");
  }
  LabelTable out;
  std::unordered_set<std::string> seen;
  for (const auto& row : table.rows) {
    LabelRow r;
    r.sample_id = row[*id_col];
    if (!seen.insert(r.sample_id).second) {
      throw DataError(path.string() + ": duplicate sample_id '" + r.sample_id + "'");
    }
    if (dsc_col && !row[*dsc_col].empty()) {
      r.dsc = csv::parse_double(row[*dsc_col], path.string() + " dsc of '" + r.sample_id + "'");
      if (!(*r.dsc >= 0.0 && *r.dsc <= 1.0)) {
        throw DataError(path.string() + ": dsc of '" + r.sample_id + "' outside [0,1]");
      }
    }
    if (label_col && !row[*label_col].empty()) r.label = parse_label(row[*label_col]);
    if (!r.dsc && !r.label) {
      throw DataError(path.string() + ": sample '" + r.sample_id + "' has neither dsc nor label");
    }
    out.rows.push_back(std::move(r));
  }
  return out;
}

inline void write_labels(const std::filesystem::path& path, const LabelTable& table) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  csv::write_row(out, {"sample_id", "dsc", "label"});
  for (const auto& r : table.rows) {
    std::string dsc;
    if (r.dsc) {
      std::ostringstream s;
      s.precision(17);
      s << *r.dsc;
      dsc = s.str();
    }
    csv::write_row(out, {r.sample_id, dsc, r.label ? to_string(*r.label) : ""});
  }
  if (!out) throw IoError("write failure on " + path.string());
}

}  // namespace mahood
