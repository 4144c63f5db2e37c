/*
 * Copyright 2026 The manifest-ig Authors.
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

#ifndef MANIFESTIG_DATASET_HPP
#define MANIFESTIG_DATASET_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "manifestig/errors.hpp"
#include "manifestig/manifest.hpp"

namespace manifestig {

// Exactly two classes everywhere in this toolkit.
enum class ClassLabel : std::uint8_t { Malware = 0, Benign = 1 };
inline constexpr std::size_t kClassCount = 2;

inline const char* to_string(ClassLabel label) { return label == ClassLabel::Malware ? "malware" : "benign"; }

inline std::optional<ClassLabel> class_label_from(std::string_view s) {
  if (s == "malware") return ClassLabel::Malware;
  if (s == "benign") return ClassLabel::Benign;
  return std::nullopt;
}

enum class FeatureCategory : std::uint8_t { Permission = 0, Intent = 1 };

inline const char* to_string(FeatureCategory c) { return c == FeatureCategory::Permission ? "permission" : "intent"; }

// Human tables use the plural labels.
inline const char* display_name(FeatureCategory c) {
  return c == FeatureCategory::Permission ? "Permissions" : "Intents";
}

inline std::optional<FeatureCategory> feature_category_from(std::string_view s) {
  if (s == "permission" || s == "permissions") return FeatureCategory::Permission;
  if (s == "intent" || s == "intents") return FeatureCategory::Intent;
  return std::nullopt;
}

struct VocabularyEntry {
  std::string name;
  FeatureCategory category = FeatureCategory::Permission;
  bool operator==(const VocabularyEntry&) const = default;
};

// The distinct feature names of a corpus, sorted ascending by name so vector
// layouts are reproducible. A name belongs to exactly one category.
class FeatureVocabulary {
 public:
  FeatureVocabulary() = default;

  explicit FeatureVocabulary(std::vector<VocabularyEntry> entries) : entries_(std::move(entries)) {
    std::sort(entries_.begin(), entries_.end(),
              [](const VocabularyEntry& a, const VocabularyEntry& b) { return a.name < b.name; });
    for (std::size_t j = 0; j < entries_.size(); ++j) {
      auto [it, inserted] = index_.emplace(entries_[j].name, j);
      if (!inserted) {
        throw Error(Errc::NameCollisionAcrossCategories, "duplicate vocabulary name '" + entries_[j].name + "'");
      }
    }
  }

  std::size_t size() const { return entries_.size(); }
  const std::vector<VocabularyEntry>& entries() const { return entries_; }
  const VocabularyEntry& entry(std::size_t j) const { return entries_[j]; }

  std::optional<std::size_t> index_of(std::string_view name) const {
    auto it = index_.find(std::string(name));
    return it == index_.end() ? std::nullopt : std::optional<std::size_t>(it->second);
  }

  bool operator==(const FeatureVocabulary& other) const { return entries_ == other.entries_; }

 private:
  std::vector<VocabularyEntry> entries_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Union of every distinct permission and intent name in the records. A string
// seen in both categories signals corrupt extraction; with namespace_categories
// set, names get a category prefix instead and can never collide.
inline FeatureVocabulary build_vocabulary(std::span<const ManifestFeatures> records,
                                          bool namespace_categories = false) {
  std::map<std::string, FeatureCategory> names;
  auto add = [&](const std::string& name, FeatureCategory category) {
    std::string key = namespace_categories ? std::string(to_string(category)) + ":" + name : name;
    auto [it, inserted] = names.emplace(std::move(key), category);
    if (!inserted && it->second != category) {
      throw Error(Errc::NameCollisionAcrossCategories,
                  "'" + name + "' appears as both a permission and an intent");
    }
  };
  for (const auto& rec : records) {
    for (const auto& p : rec.permissions) add(p, FeatureCategory::Permission);
    for (const auto& i : rec.intents) add(i, FeatureCategory::Intent);
  }
  std::vector<VocabularyEntry> entries;
  entries.reserve(names.size());
  for (auto& [name, category] : names) entries.push_back(VocabularyEntry{name, category});
  return FeatureVocabulary(std::move(entries));
}

// One labeled app: identity, class, and its presence/absence bits.
struct Instance {
  std::string sha256;
  ClassLabel label = ClassLabel::Malware;
  std::vector<std::uint8_t> bits;  // bits.size() == vocabulary size, values 0/1
};

// The per-feature value assignment across the dataset.
struct FeatureColumn {
  std::size_t feature_index = 0;
  std::vector<std::uint8_t> values;  // one 0/1 per instance
};

// Turns one app's feature sets into a bit vector over the vocabulary.
// Features the vocabulary does not know are tallied, not an error.
inline Instance vectorize(const ManifestFeatures& features, const FeatureVocabulary& vocab, ClassLabel label,
                          std::string sha256 = {}, std::size_t* out_of_vocabulary = nullptr,
                          bool namespace_categories = false) {
  Instance inst;
  inst.sha256 = std::move(sha256);
  inst.label = label;
  inst.bits.assign(vocab.size(), 0);
  auto mark = [&](const std::string& name, FeatureCategory category) {
    const std::string key = namespace_categories ? std::string(to_string(category)) + ":" + name : name;
    if (auto j = vocab.index_of(key)) {
      inst.bits[*j] = 1;
    } else if (out_of_vocabulary != nullptr) {
      ++*out_of_vocabulary;
    }
  };
  for (const auto& p : features.permissions) mark(p, FeatureCategory::Permission);
  for (const auto& i : features.intents) mark(i, FeatureCategory::Intent);
  return inst;
}

struct LabeledRecord {
  ManifestFeatures features;
  ClassLabel label = ClassLabel::Malware;
  std::string sha256;
};

// The labeled collection D: shared vocabulary, instances, and class counts.
struct Dataset {
  FeatureVocabulary vocabulary;
  std::vector<Instance> instances;
  std::array<std::uint64_t, kClassCount> class_counts{};

  std::uint64_t total() const { return class_counts[0] + class_counts[1]; }

  FeatureColumn column(std::size_t j) const {
    FeatureColumn col;
    col.feature_index = j;
    col.values.reserve(instances.size());
    for (const auto& inst : instances) col.values.push_back(inst.bits[j]);
    return col;
  }
};

struct AssembledDataset {
  Dataset dataset;
  std::size_t oov_count = 0;
};

struct AssembleOptions {
  bool namespace_categories = false;
  // When set, vectors align to this vocabulary instead of one built from the
  // records themselves (cross-dataset comparison).
  std::optional<FeatureVocabulary> vocabulary;
};

// Builds the dataset: vocabulary over all records, one vectorized instance per
// record, class counts from a recount. Re-occurring content digests are
// rejected so re-downloaded duplicates cannot bias the frequency counts.
inline AssembledDataset assemble_dataset(std::span<const LabeledRecord> records, const AssembleOptions& options = {}) {
  AssembledDataset out;
  if (options.vocabulary.has_value()) {
    out.dataset.vocabulary = *options.vocabulary;
  } else {
    std::vector<ManifestFeatures> feature_records;
    feature_records.reserve(records.size());
    for (const auto& rec : records) feature_records.push_back(rec.features);
    out.dataset.vocabulary = build_vocabulary(feature_records, options.namespace_categories);
  }

  std::unordered_set<std::string> seen;
  seen.reserve(records.size());
  for (const auto& rec : records) {
    if (!rec.sha256.empty() && !seen.insert(rec.sha256).second) {
      throw Error(Errc::DuplicateSample, "sha256 " + rec.sha256 + " appears more than once");
    }
    out.dataset.instances.push_back(vectorize(rec.features, out.dataset.vocabulary, rec.label, rec.sha256,
                                              &out.oov_count, options.namespace_categories));
    ++out.dataset.class_counts[static_cast<std::size_t>(rec.label)];
  }
  return out;
}

// Drops features below a support threshold and, optionally, outside one
// category. Instances are re-projected onto the surviving vocabulary.
inline Dataset filter_dataset(const Dataset& input, std::uint64_t min_support,
                              std::optional<FeatureCategory> category = std::nullopt) {
  std::vector<std::size_t> keep;
  for (std::size_t j = 0; j < input.vocabulary.size(); ++j) {
    if (category.has_value() && input.vocabulary.entry(j).category != *category) continue;
    if (min_support > 0) {
      std::uint64_t support = 0;
      for (const auto& inst : input.instances) support += inst.bits[j];
      if (support < min_support) continue;
    }
    keep.push_back(j);
  }

  Dataset out;
  std::vector<VocabularyEntry> entries;
  entries.reserve(keep.size());
  for (std::size_t j : keep) entries.push_back(input.vocabulary.entry(j));
  out.vocabulary = FeatureVocabulary(std::move(entries));
  out.class_counts = input.class_counts;
  out.instances.reserve(input.instances.size());
  for (const auto& inst : input.instances) {
    Instance projected;
    projected.sha256 = inst.sha256;
    projected.label = inst.label;
    projected.bits.reserve(keep.size());
    for (std::size_t j : keep) projected.bits.push_back(inst.bits[j]);
    out.instances.push_back(std::move(projected));
  }
  return out;
}

}  // namespace manifestig

#endif  // MANIFESTIG_DATASET_HPP
