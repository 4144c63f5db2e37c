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

#ifndef MANIFESTIG_IG_HPP
#define MANIFESTIG_IG_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "manifestig/dataset.hpp"
#include "manifestig/errors.hpp"

namespace manifestig {

// Frequency count of the class label over some set of instances.
struct ClassDistribution {
  std::array<std::uint64_t, kClassCount> counts{};

  std::uint64_t total() const { return counts[0] + counts[1]; }

  void add(ClassLabel label) { ++counts[static_cast<std::size_t>(label)]; }
};

inline ClassDistribution class_distribution(const Dataset& dataset) {
  return ClassDistribution{dataset.class_counts};
}

// Shannon entropy of the class label in bits: -sum_i p_i * log2(p_i), with
// the 0 * log2(0) term defined as 0.
inline double entropy_bits(const ClassDistribution& dist) {
  const std::uint64_t total = dist.total();
  if (total == 0) throw Error(Errc::ZeroTotal, "entropy of an empty distribution");
  double e = 0.0;
  for (std::uint64_t count : dist.counts) {
    if (count == 0) continue;
    const double p = static_cast<double>(count) / static_cast<double>(total);
    e -= p * std::log2(p);
  }
  return e;
}

// H(D|v): split D by the column's value x in {0,1}, take the class entropy of
// each part weighted by |D_x| / |D|. Empty parts contribute nothing.
inline double conditional_entropy_bits(const Dataset& dataset, const FeatureColumn& column) {
  if (column.values.size() != dataset.instances.size()) {
    throw Error(Errc::LengthMismatch, "column has " + std::to_string(column.values.size()) + " values for " +
                                          std::to_string(dataset.instances.size()) + " instances");
  }
  std::array<ClassDistribution, 2> split;
  for (std::size_t i = 0; i < column.values.size(); ++i) {
    split[column.values[i] ? 1 : 0].add(dataset.instances[i].label);
  }
  const double total = static_cast<double>(dataset.instances.size());
  double h = 0.0;
  for (const auto& part : split) {
    if (part.total() == 0) continue;
    h += (static_cast<double>(part.total()) / total) * entropy_bits(part);
  }
  return h;
}

// A feature's information gain together with the terms that produced it.
struct FeatureScore {
  std::string feature;
  FeatureCategory category = FeatureCategory::Permission;
  double h_dataset = 0.0;
  double h_conditional = 0.0;
  double ig = 0.0;

  bool operator==(const FeatureScore&) const = default;
};

// IG(D, v) = H(D) - H(D | v).
inline FeatureScore information_gain(const Dataset& dataset, const FeatureColumn& column) {
  const auto& entry = dataset.vocabulary.entry(column.feature_index);
  FeatureScore score;
  score.feature = entry.name;
  score.category = entry.category;
  score.h_dataset = entropy_bits(class_distribution(dataset));
  score.h_conditional = conditional_entropy_bits(dataset, column);
  score.ig = score.h_dataset - score.h_conditional;
  return score;
}

// Scores every vocabulary entry, ordered by ig descending, ties broken by
// feature name ascending. Output is deterministic for a given dataset.
inline std::vector<FeatureScore> rank_features(const Dataset& dataset) {
  if (dataset.vocabulary.size() == 0) throw Error(Errc::EmptyVocabulary, "dataset has no features to rank");
  if (dataset.instances.empty()) throw Error(Errc::ZeroTotal, "dataset has no instances");

  // H(D) is shared by every feature; compute once.
  const double h_dataset = entropy_bits(class_distribution(dataset));
  std::vector<FeatureScore> scores;
  scores.reserve(dataset.vocabulary.size());
  for (std::size_t j = 0; j < dataset.vocabulary.size(); ++j) {
    const auto& entry = dataset.vocabulary.entry(j);
    FeatureScore score;
    score.feature = entry.name;
    score.category = entry.category;
    score.h_dataset = h_dataset;
    score.h_conditional = conditional_entropy_bits(dataset, dataset.column(j));
    score.ig = h_dataset - score.h_conditional;
    scores.push_back(std::move(score));
  }
  std::sort(scores.begin(), scores.end(), [](const FeatureScore& a, const FeatureScore& b) {
    if (a.ig != b.ig) return a.ig > b.ig;
    return a.feature < b.feature;
  });
  return scores;
}

// Unweighted arithmetic mean of ig over all scores of each category present,
// not just the top of the ranking. Empty categories stay absent.
inline std::map<FeatureCategory, double> category_means(std::span<const FeatureScore> scores) {
  std::map<FeatureCategory, double> sums;
  std::map<FeatureCategory, std::size_t> counts;
  for (const auto& s : scores) {
    sums[s.category] += s.ig;
    ++counts[s.category];
  }
  std::map<FeatureCategory, double> means;
  for (const auto& [category, sum] : sums) {
    means[category] = sum / static_cast<double>(counts[category]);
  }
  return means;
}

}  // namespace manifestig

#endif  // MANIFESTIG_IG_HPP
