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

#include <doctest.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "manifestig/ig.hpp"

#include "../support/oracle.hpp"

using namespace manifestig;
using testsupport::column_digits;
using testsupport::label_digits;
using testsupport::make_dataset;

namespace {

// Frozen with the brute-force oracle before the library existed.
constexpr double kEntropy31 = 0.8112781244591328;      // H({3,1})
constexpr double kCondEntropy1110 = 0.6887218755408672;  // H(D|v), labels MMBB, column 1110
constexpr double kIg1110 = 0.3112781244591328;           // 1 - kCondEntropy1110

ClassDistribution dist(std::uint64_t malware, std::uint64_t benign) {
  ClassDistribution d;
  d.counts = {malware, benign};
  return d;
}

}  // namespace

TEST_SUITE("entropy") {
  TEST_CASE("uniform binary is exactly one bit") { CHECK(entropy_bits(dist(2, 2)) == 1.0); }

  TEST_CASE("single class is exactly zero") {
    CHECK(entropy_bits(dist(4, 0)) == 0.0);
    CHECK(entropy_bits(dist(0, 7)) == 0.0);
  }

  TEST_CASE("3:1 split matches the oracle-frozen value") {
    CHECK(std::abs(entropy_bits(dist(3, 1)) - kEntropy31) < 1e-12);
    CHECK(std::abs(entropy_bits(dist(3, 1)) - static_cast<double>(oracle::label_entropy({0, 0, 0, 1}))) < 1e-15);
  }

  TEST_CASE("empty distribution throws") {
    try {
      entropy_bits(dist(0, 0));
      FAIL("expected ZeroTotal");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::ZeroTotal);
    }
  }
}

TEST_SUITE("conditional entropy") {
  TEST_CASE("perfect separator leaves nothing") {
    Dataset ds = make_dataset("MMBB", {"1100"});
    CHECK(conditional_entropy_bits(ds, ds.column(0)) == 0.0);
  }

  TEST_CASE("constant feature keeps H(D)") {
    Dataset ds = make_dataset("MMBB", {"1111"});
    CHECK(conditional_entropy_bits(ds, ds.column(0)) == 1.0);
  }

  TEST_CASE("3/4 vs 1/4 split matches the oracle-frozen value") {
    Dataset ds = make_dataset("MMBB", {"1110"});
    CHECK(std::abs(conditional_entropy_bits(ds, ds.column(0)) - kCondEntropy1110) < 1e-12);
  }

  TEST_CASE("column length must match the dataset") {
    Dataset ds = make_dataset("MMBB", {"1110"});
    FeatureColumn bad{0, {1, 0}};
    try {
      conditional_entropy_bits(ds, bad);
      FAIL("expected LengthMismatch");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::LengthMismatch);
    }
  }
}

TEST_SUITE("information gain") {
  TEST_CASE("perfect separator gains the full dataset entropy") {
    Dataset ds = make_dataset("MMBB", {"1100"});
    FeatureScore score = information_gain(ds, ds.column(0));
    CHECK(score.ig == 1.0);
    CHECK(score.h_dataset == 1.0);
    CHECK(score.h_conditional == 0.0);
  }

  TEST_CASE("constant feature gains exactly zero") {
    Dataset ds = make_dataset("MMBB", {"1111"});
    CHECK(information_gain(ds, ds.column(0)).ig == 0.0);
  }

  TEST_CASE("the 1110 column matches the oracle-frozen value") {
    Dataset ds = make_dataset("MMBB", {"1110"});
    FeatureScore score = information_gain(ds, ds.column(0));
    CHECK(std::abs(score.ig - kIg1110) < 1e-12);
    CHECK(std::abs(score.ig - (score.h_dataset - score.h_conditional)) < 1e-12);
  }

  TEST_CASE("score terms always satisfy ig = H(D) - H(D|v)") {
    std::mt19937_64 gen(99);
    for (int round = 0; round < 200; ++round) {
      const std::size_t n = 1 + gen() % 12;
      std::string labels, column;
      for (std::size_t i = 0; i < n; ++i) {
        labels.push_back(gen() % 2 ? 'M' : 'B');
        column.push_back(gen() % 2 ? '1' : '0');
      }
      Dataset ds = make_dataset(labels, {column});
      FeatureScore score = information_gain(ds, ds.column(0));
      CHECK(std::abs(score.ig - (score.h_dataset - score.h_conditional)) < 1e-12);
      CHECK(score.ig >= -1e-12);
      CHECK(score.ig <= score.h_dataset + 1e-12);
    }
  }
}

TEST_SUITE("oracle equivalence") {
  TEST_CASE("random small datasets agree with brute force") {
    std::mt19937_64 gen(20260101);
    for (int round = 0; round < 300; ++round) {
      const std::size_t n = 1 + gen() % 12;
      const std::size_t features = 1 + gen() % 8;
      std::string labels;
      for (std::size_t i = 0; i < n; ++i) labels.push_back(gen() % 2 ? 'M' : 'B');
      std::vector<std::string> columns(features);
      for (auto& col : columns) {
        for (std::size_t i = 0; i < n; ++i) col.push_back(gen() % 2 ? '1' : '0');
      }
      Dataset ds = make_dataset(labels, columns);
      for (std::size_t j = 0; j < features; ++j) {
        const auto col = ds.column(j);
        const double mine = information_gain(ds, col).ig;
        const double brute = static_cast<double>(oracle::information_gain(label_digits(ds), column_digits(col)));
        CHECK(std::abs(mine - brute) < 1e-12);
      }
    }
  }

  TEST_CASE("label swap and column complement leave IG unchanged") {
    std::mt19937_64 gen(77);
    for (int round = 0; round < 200; ++round) {
      const std::size_t n = 1 + gen() % 12;
      std::string labels, swapped, column, complement;
      for (std::size_t i = 0; i < n; ++i) {
        const bool m = gen() % 2;
        labels.push_back(m ? 'M' : 'B');
        swapped.push_back(m ? 'B' : 'M');
        const bool one = gen() % 2;
        column.push_back(one ? '1' : '0');
        complement.push_back(one ? '0' : '1');
      }
      Dataset base = make_dataset(labels, {column});
      const double ig_base = information_gain(base, base.column(0)).ig;

      Dataset swapped_ds = make_dataset(swapped, {column});
      CHECK(std::abs(information_gain(swapped_ds, swapped_ds.column(0)).ig - ig_base) < 1e-12);

      Dataset complement_ds = make_dataset(labels, {complement});
      CHECK(std::abs(information_gain(complement_ds, complement_ds.column(0)).ig - ig_base) < 1e-12);
    }
  }
}

TEST_SUITE("ranking") {
  TEST_CASE("separator outranks a constant") {
    Dataset ds = make_dataset("MMBB", {"1100", "1111"},
                              {VocabularyEntry{"A", FeatureCategory::Permission},
                               VocabularyEntry{"B", FeatureCategory::Permission}});
    auto scores = rank_features(ds);
    REQUIRE(scores.size() == 2);
    CHECK(scores[0].feature == "A");
    CHECK(scores[0].ig == 1.0);
    CHECK(scores[1].feature == "B");
    CHECK(scores[1].ig == 0.0);
  }

  TEST_CASE("identical columns tie and break lexicographically") {
    Dataset ds = make_dataset("MMBB", {"1010", "1010"},
                              {VocabularyEntry{"zeta", FeatureCategory::Permission},
                               VocabularyEntry{"alpha", FeatureCategory::Intent}});
    auto scores = rank_features(ds);
    REQUIRE(scores.size() == 2);
    CHECK(scores[0].ig == scores[1].ig);
    CHECK(scores[0].feature == "alpha");
    CHECK(scores[1].feature == "zeta");
  }

  TEST_CASE("single-feature dataset carries the oracle value") {
    Dataset ds = make_dataset("MMBB", {"1110"});
    auto scores = rank_features(ds);
    REQUIRE(scores.size() == 1);
    CHECK(std::abs(scores[0].ig - kIg1110) < 1e-12);
  }

  TEST_CASE("empty vocabulary is an error") {
    Dataset ds = make_dataset("MB", {});
    try {
      rank_features(ds);
      FAIL("expected EmptyVocabulary");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::EmptyVocabulary);
    }
  }

  TEST_CASE("instance order does not change the ranking") {
    std::mt19937_64 gen(123);
    std::vector<std::pair<char, std::vector<char>>> rows;
    for (int i = 0; i < 14; ++i) {
      std::vector<char> bits;
      for (int f = 0; f < 5; ++f) bits.push_back(gen() % 2 ? '1' : '0');
      rows.emplace_back(gen() % 2 ? 'M' : 'B', bits);
    }
    auto build = [&] {
      std::string labels;
      std::vector<std::string> columns(5, "");
      for (const auto& [label, bits] : rows) {
        labels.push_back(label);
        for (int f = 0; f < 5; ++f) columns[f].push_back(bits[f]);
      }
      return make_dataset(labels, columns);
    };
    auto reference = rank_features(build());
    for (int round = 0; round < 6; ++round) {
      std::shuffle(rows.begin(), rows.end(), gen);
      auto shuffled = rank_features(build());
      REQUIRE(shuffled.size() == reference.size());
      for (std::size_t i = 0; i < reference.size(); ++i) {
        CHECK(shuffled[i].feature == reference[i].feature);
        CHECK(shuffled[i].ig == doctest::Approx(reference[i].ig).epsilon(1e-15));
      }
    }
  }
}

TEST_SUITE("category means") {
  TEST_CASE("plain arithmetic over each category") {
    std::vector<FeatureScore> scores{
        {"p1", FeatureCategory::Permission, 1.0, 0.6, 0.4},
        {"p2", FeatureCategory::Permission, 1.0, 0.8, 0.2},
        {"i1", FeatureCategory::Intent, 1.0, 0.7, 0.3},
    };
    auto means = category_means(scores);
    REQUIRE(means.size() == 2);
    CHECK(means.at(FeatureCategory::Permission) == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(means.at(FeatureCategory::Intent) == doctest::Approx(0.3).epsilon(1e-15));
  }

  TEST_CASE("absent categories are absent from the map") {
    std::vector<FeatureScore> scores{{"p1", FeatureCategory::Permission, 1.0, 0.6, 0.4}};
    auto means = category_means(scores);
    CHECK(means.size() == 1);
    CHECK(means.contains(FeatureCategory::Permission));
    CHECK(!means.contains(FeatureCategory::Intent));
  }

  TEST_CASE("single oracle-valued score") {
    std::vector<FeatureScore> scores{{"p", FeatureCategory::Permission, 1.0, kCondEntropy1110, kIg1110}};
    auto means = category_means(scores);
    CHECK(means.at(FeatureCategory::Permission) == doctest::Approx(kIg1110).epsilon(1e-15));
  }
}
