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

#ifndef MANIFESTIG_REPORT_HPP
#define MANIFESTIG_REPORT_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "manifestig/dataset.hpp"
#include "manifestig/errors.hpp"
#include "manifestig/ig.hpp"

namespace manifestig {

inline constexpr int kReportSchemaVersion = 1;

enum class TableFormat { Plain, Markdown, Csv };

inline std::optional<TableFormat> table_format_from(std::string_view s) {
  if (s == "plain") return TableFormat::Plain;
  if (s == "markdown") return TableFormat::Markdown;
  if (s == "csv") return TableFormat::Csv;
  return std::nullopt;
}

struct Diagnostics {
  std::uint64_t skipped_files = 0;
  std::uint64_t oov_count = 0;
  std::vector<std::string> warnings;

  bool operator==(const Diagnostics&) const = default;
};

// Everything one analysis run produced: corpus metadata, the full ranking,
// category means, and run diagnostics.
struct AnalysisReport {
  std::string corpus;
  std::string generated_at;
  std::string date_range;
  std::uint64_t seed = 0;
  std::array<std::uint64_t, kClassCount> class_counts{};
  std::uint64_t vocabulary_size = 0;
  int top_n = 10;
  std::vector<FeatureScore> scores;  // in rank order
  std::map<FeatureCategory, double> category_means;
  Diagnostics diagnostics;

  bool operator==(const AnalysisReport&) const = default;
};

namespace detail {

inline std::string format_score(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", value);
  // IG within tolerance of zero may carry a stray sign.
  return std::string(buf) == "-0.0000" ? "0.0000" : buf;
}

inline std::string csv_quote(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out.push_back('"');
  return out;
}

struct TextTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string render(TableFormat format) const {
    std::string out;
    switch (format) {
      case TableFormat::Csv: {
        for (std::size_t c = 0; c < header.size(); ++c) {
          if (c > 0) out.push_back(',');
          out += csv_quote(header[c]);
        }
        out.push_back('\n');
        for (const auto& row : rows) {
          for (std::size_t c = 0; c < row.size(); ++c) {
            if (c > 0) out.push_back(',');
            out += csv_quote(row[c]);
          }
          out.push_back('\n');
        }
        return out;
      }
      case TableFormat::Markdown: {
        out += "|";
        for (const auto& h : header) out += " " + h + " |";
        out += "\n|";
        for (std::size_t c = 0; c < header.size(); ++c) {
          (void)c;
          out += " --- |";
        }
        out.push_back('\n');
        for (const auto& row : rows) {
          out += "|";
          for (const auto& cell : row) out += " " + cell + " |";
          out.push_back('\n');
        }
        return out;
      }
      case TableFormat::Plain: {
        std::vector<std::size_t> widths(header.size());
        for (std::size_t c = 0; c < header.size(); ++c) widths[c] = header[c].size();
        for (const auto& row : rows) {
          for (std::size_t c = 0; c < row.size(); ++c) widths[c] = std::max(widths[c], row[c].size());
        }
        auto emit = [&](const std::vector<std::string>& cells) {
          for (std::size_t c = 0; c < cells.size(); ++c) {
            out += cells[c];
            if (c + 1 < cells.size()) out.append(widths[c] - cells[c].size() + 2, ' ');
          }
          out.push_back('\n');
        };
        emit(header);
        for (const auto& row : rows) emit(row);
        return out;
      }
    }
    return out;
  }
};

}  // namespace detail

// The ranking table: IG score to 4 decimals, feature, category.
inline std::string render_top_table(const AnalysisReport& report, int n, TableFormat format) {
  detail::TextTable table;
  table.header = format == TableFormat::Csv ? std::vector<std::string>{"ig", "feature", "category"}
                                            : std::vector<std::string>{"IG Score", "Feature", "Category"};
  const std::size_t limit = std::min<std::size_t>(report.scores.size(), n < 0 ? 0 : static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < limit; ++i) {
    const auto& s = report.scores[i];
    table.rows.push_back({detail::format_score(s.ig), s.feature, display_name(s.category)});
  }
  return table.render(format);
}

// Corpus-by-category grid of mean IG plus the Permissions minus Intents
// delta, ready for external plotting. Missing categories render as n/a.
inline std::string render_category_comparison(std::span<const AnalysisReport> reports, TableFormat format) {
  detail::TextTable table;
  table.header = format == TableFormat::Csv
                     ? std::vector<std::string>{"corpus", "permissions_mean", "intents_mean", "delta"}
                     : std::vector<std::string>{"Corpus", "Permissions", "Intents", "Delta (P - I)"};
  for (const auto& report : reports) {
    auto cell = [&](FeatureCategory c) -> std::string {
      auto it = report.category_means.find(c);
      return it == report.category_means.end() ? "n/a" : detail::format_score(it->second);
    };
    std::string delta = "n/a";
    auto p = report.category_means.find(FeatureCategory::Permission);
    auto i = report.category_means.find(FeatureCategory::Intent);
    if (p != report.category_means.end() && i != report.category_means.end()) {
      delta = detail::format_score(p->second - i->second);
    }
    table.rows.push_back(
        {report.corpus, cell(FeatureCategory::Permission), cell(FeatureCategory::Intent), delta});
  }
  return table.render(format);
}

namespace detail {

inline nlohmann::ordered_json report_to_json(const AnalysisReport& report) {
  nlohmann::ordered_json j;
  j["schema_version"] = kReportSchemaVersion;
  j["corpus"] = report.corpus;
  j["generated_at"] = report.generated_at;
  j["date_range"] = report.date_range;
  j["seed"] = report.seed;
  j["class_counts"] = {{"malware", report.class_counts[0]}, {"benign", report.class_counts[1]}};
  j["vocabulary_size"] = report.vocabulary_size;
  j["top_n"] = report.top_n;
  auto scores = nlohmann::ordered_json::array();
  for (const auto& s : report.scores) {
    scores.push_back({{"feature", s.feature},
                      {"category", to_string(s.category)},
                      {"ig", s.ig},
                      {"h_dataset", s.h_dataset},
                      {"h_conditional", s.h_conditional}});
  }
  j["scores"] = std::move(scores);
  auto means = nlohmann::ordered_json::object();
  for (const auto& [category, mean] : report.category_means) means[to_string(category)] = mean;
  j["category_means"] = std::move(means);
  j["diagnostics"] = {{"skipped_files", report.diagnostics.skipped_files},
                      {"oov_count", report.diagnostics.oov_count},
                      {"warnings", report.diagnostics.warnings}};
  return j;
}

inline AnalysisReport report_from_json(const nlohmann::json& j, const std::string& origin) {
  if (!j.is_object() || !j.contains("schema_version")) {
    throw Error(Errc::BadReport, origin + ": not a report document");
  }
  if (const int version = j.at("schema_version").get<int>(); version != kReportSchemaVersion) {
    throw Error(Errc::BadReport, origin + ": schema version " + std::to_string(version) + ", expected " +
                                     std::to_string(kReportSchemaVersion));
  }
  AnalysisReport report;
  try {
    report.corpus = j.at("corpus").get<std::string>();
    report.generated_at = j.at("generated_at").get<std::string>();
    report.date_range = j.at("date_range").get<std::string>();
    report.seed = j.at("seed").get<std::uint64_t>();
    report.class_counts[0] = j.at("class_counts").at("malware").get<std::uint64_t>();
    report.class_counts[1] = j.at("class_counts").at("benign").get<std::uint64_t>();
    report.vocabulary_size = j.at("vocabulary_size").get<std::uint64_t>();
    report.top_n = j.at("top_n").get<int>();
    for (const auto& s : j.at("scores")) {
      FeatureScore score;
      score.feature = s.at("feature").get<std::string>();
      auto category = feature_category_from(s.at("category").get<std::string>());
      if (!category) throw Error(Errc::BadReport, origin + ": unknown category in scores");
      score.category = *category;
      score.ig = s.at("ig").get<double>();
      score.h_dataset = s.at("h_dataset").get<double>();
      score.h_conditional = s.at("h_conditional").get<double>();
      report.scores.push_back(std::move(score));
    }
    for (const auto& [key, value] : j.at("category_means").items()) {
      auto category = feature_category_from(key);
      if (!category) throw Error(Errc::BadReport, origin + ": unknown category '" + key + "' in category_means");
      report.category_means[*category] = value.get<double>();
    }
    const auto& d = j.at("diagnostics");
    report.diagnostics.skipped_files = d.at("skipped_files").get<std::uint64_t>();
    report.diagnostics.oov_count = d.at("oov_count").get<std::uint64_t>();
    report.diagnostics.warnings = d.at("warnings").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::BadReport, origin + ": " + e.what());
  }
  return report;
}

}  // namespace detail

// Serializes the full report; reading it back yields an equal report (doubles
// survive the round trip at full precision).
inline void write_report(const AnalysisReport& report, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::IoFailure, "cannot write '" + path.string() + "'");
  out << detail::report_to_json(report).dump(2) << '\n';
  out.flush();
  if (!out) throw Error(Errc::IoFailure, "write failed on '" + path.string() + "'");
}

inline AnalysisReport read_report(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoFailure, "cannot read '" + path.string() + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::BadReport, path.string() + ": " + e.what());
  }
  return detail::report_from_json(j, path.string());
}

}  // namespace manifestig

#endif  // MANIFESTIG_REPORT_HPP
