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

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "manifestig/errors.hpp"
#include "manifestig/pipeline.hpp"

namespace {

using manifestig::RunConfig;

// Shared flag wiring; extract uses a subset, analyze all of it.
struct CliOptions {
  RunConfig config;
  std::string n_per_class = "all";
  std::string format = "plain";
  std::string category;

  void finalize() {
    if (n_per_class != "all") {
      try {
        std::size_t pos = 0;
        const long long n = std::stoll(n_per_class, &pos);
        if (pos != n_per_class.size() || n < 1) throw std::invalid_argument(n_per_class);
        config.n_per_class = static_cast<std::uint64_t>(n);
      } catch (const std::exception&) {
        throw CLI::ValidationError("--n-per-class", "expected a positive integer or 'all'");
      }
    }
    if (auto f = manifestig::table_format_from(format)) {
      config.format = *f;
    } else {
      throw CLI::ValidationError("--format", "expected plain, markdown, or csv");
    }
    if (!category.empty()) {
      if (auto c = manifestig::feature_category_from(category)) {
        config.category_filter = *c;
      } else {
        throw CLI::ValidationError("--category", "expected permissions or intents");
      }
    }
  }
};

void add_corpus_flags(CLI::App& cmd, CliOptions& opt) {
  cmd.add_option("--malware-dir", opt.config.malware_dir, "Directory of malware samples (APKs or manifests)");
  cmd.add_option("--benign-dir", opt.config.benign_dir, "Directory of benign samples (APKs or manifests)");
  cmd.add_option("--cache", opt.config.cache_path, "Feature cache file (JSON lines, appended to)")
      ->envname("MANIFEST_IG_CACHE");
  cmd.add_option("--jobs", opt.config.jobs, "Extraction worker threads (0 = auto)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ranks Android manifest permission and intent features by information gain"};
  app.require_subcommand(1);

  CliOptions opt;
  std::vector<std::filesystem::path> report_paths;

  CLI::App* extract = app.add_subcommand("extract", "Scan corpora and cache per-app manifest features");
  add_corpus_flags(*extract, opt);

  CLI::App* analyze = app.add_subcommand("analyze", "Sample, rank features, and write a report");
  add_corpus_flags(*analyze, opt);
  analyze->add_option("--n-per-class", opt.n_per_class, "Samples per class, or 'all'")->capture_default_str();
  analyze->add_option("--seed", opt.config.seed, "Sampling seed")->capture_default_str();
  analyze->add_option("--top", opt.config.top_n, "Rows in the printed table")->check(CLI::PositiveNumber)
      ->capture_default_str();
  analyze->add_option("--format", opt.format, "Table format: plain, markdown, csv")->capture_default_str();
  analyze->add_option("--min-support", opt.config.min_support, "Drop features seen in fewer than N apps");
  analyze->add_option("--category", opt.category, "Restrict to one category: permissions or intents");
  analyze->add_flag("--namespace-categories", opt.config.namespace_categories,
                    "Prefix feature names with their category");
  analyze->add_flag("--features-from-cache-only", opt.config.cache_only,
                    "Use cached records only; do not scan directories");
  analyze->add_option("--out", opt.config.out_path, "Write the full report (JSON) here");
  analyze->add_option("--vocab-from", opt.config.vocab_from, "Align the vocabulary to an existing report");
  analyze->add_option("--corpus-name", opt.config.corpus_name, "Corpus label used in the report")
      ->capture_default_str();
  analyze->add_option("--date-range", opt.config.date_range, "Corpus date range recorded in the report");

  CLI::App* compare = app.add_subcommand("compare", "Render the category-mean grid across reports");
  compare->add_option("reports", report_paths, "Report files written by analyze")->required();
  compare->add_option("--format", opt.format, "Table format: plain, markdown, csv")->capture_default_str();

  try {
    app.parse(argc, argv);
    opt.finalize();
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    app.exit(e);
    return 1;
  }

  try {
    if (extract->parsed()) {
      if (opt.config.malware_dir.empty() && opt.config.benign_dir.empty()) {
        std::cerr << "error: extract needs --malware-dir and/or --benign-dir\n";
        return 1;
      }
      if (opt.config.cache_path.empty()) {
        std::cerr << "error: extract needs --cache (or MANIFEST_IG_CACHE)\n";
        return 1;
      }
      manifestig::cmd_extract(opt.config, std::cerr);
    } else if (analyze->parsed()) {
      if (opt.config.cache_only && opt.config.cache_path.empty()) {
        std::cerr << "error: --features-from-cache-only needs --cache (or MANIFEST_IG_CACHE)\n";
        return 1;
      }
      if (opt.config.malware_dir.empty() && opt.config.benign_dir.empty() && opt.config.cache_path.empty()) {
        std::cerr << "error: analyze needs corpus directories and/or a cache\n";
        return 1;
      }
      manifestig::cmd_analyze(opt.config, std::cout, std::cerr);
    } else if (compare->parsed()) {
      std::cout << manifestig::cmd_compare(report_paths, opt.config.format);
    }
  } catch (const manifestig::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return manifestig::exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
