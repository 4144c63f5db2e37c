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

#ifndef MANIFESTIG_PIPELINE_HPP
#define MANIFESTIG_PIPELINE_HPP

#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <thread>
#include <unordered_set>
#include <utility>
#include <vector>

#include "manifestig/apk.hpp"
#include "manifestig/axml.hpp"
#include "manifestig/cache.hpp"
#include "manifestig/dataset.hpp"
#include "manifestig/errors.hpp"
#include "manifestig/ig.hpp"
#include "manifestig/manifest.hpp"
#include "manifestig/report.hpp"
#include "manifestig/sampling.hpp"

namespace manifestig {

// Everything one run needs. Defaults mirror the CLI defaults.
struct RunConfig {
  std::filesystem::path malware_dir;
  std::filesystem::path benign_dir;
  std::filesystem::path cache_path;
  std::optional<std::uint64_t> n_per_class;  // nullopt = all
  std::uint64_t seed = 0;
  int top_n = 10;
  std::uint64_t min_support = 0;
  TableFormat format = TableFormat::Plain;
  std::optional<FeatureCategory> category_filter;
  bool namespace_categories = false;
  bool cache_only = false;  // --features-from-cache-only
  unsigned jobs = 0;        // 0 = hardware concurrency
  std::filesystem::path out_path;
  std::filesystem::path vocab_from;
  std::string corpus_name = "corpus";
  std::string date_range;
};

// Deterministic by design: wall-clock time would break byte-identical reruns,
// so the stamp comes from SOURCE_DATE_EPOCH when set and is "n/a" otherwise.
inline std::string report_timestamp() {
  const char* epoch_env = std::getenv("SOURCE_DATE_EPOCH");
  if (epoch_env == nullptr || *epoch_env == '\0') return "n/a";
  char* end = nullptr;
  const long long epoch = std::strtoll(epoch_env, &end, 10);
  if (end == epoch_env || *end != '\0') return "n/a";
  const std::time_t t = static_cast<std::time_t>(epoch);
  std::tm tm_utc{};
  gmtime_r(&t, &tm_utc);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

namespace detail {

struct CorpusFile {
  std::filesystem::path path;
  ClassLabel label = ClassLabel::Malware;
};

inline std::vector<CorpusFile> list_corpus_files(const std::filesystem::path& dir, ClassLabel label) {
  std::vector<CorpusFile> files;
  std::error_code ec;
  auto it = std::filesystem::recursive_directory_iterator(dir, ec);
  if (ec) throw Error(Errc::IoFailure, "cannot walk '" + dir.string() + "': " + ec.message());
  for (const auto& entry : it) {
    if (entry.is_regular_file()) files.push_back(CorpusFile{entry.path(), label});
  }
  return files;
}

struct FileOutcome {
  CacheRecord record;
  std::vector<std::string> warnings;
  bool cache_hit = false;
};

// One file end to end: hash, container sniff, manifest decode, extraction.
// ZIPs go through the APK route; anything else is treated as manifest bytes
// directly (binary or plain text), which is how pre-decompiled corpora and
// fixture manifests enter the pipeline.
inline FileOutcome extract_file(const std::filesystem::path& path, ClassLabel label,
                                const std::unordered_set<std::string>& known_sha256) {
  FileOutcome outcome;
  std::vector<std::uint8_t> bytes;
  try {
    bytes = read_file_bytes(path);
  } catch (const Error& e) {
    outcome.record.parse_status = to_string(e.code());
    outcome.record.label = label;
    outcome.record.source_path = path.string();
    return outcome;
  }
  const std::string sha = sha256_hex(bytes);
  if (known_sha256.contains(sha)) {
    outcome.cache_hit = true;
    outcome.record.sha256 = sha;
    outcome.record.label = label;
    outcome.record.source_path = path.string();
    return outcome;
  }
  try {
    std::vector<std::uint8_t> manifest_bytes;
    if (looks_like_zip(bytes)) {
      manifest_bytes = open_apk_bytes(path, std::move(bytes)).bytes;
    } else {
      manifest_bytes = std::move(bytes);
    }
    XmlTree tree = decode_manifest(manifest_bytes);
    for (const auto& w : tree.warnings) outcome.warnings.push_back(path.string() + ": " + w);
    outcome.record = make_cache_record(extract_features(tree), label, sha, path.string());
  } catch (const Error& e) {
    outcome.record = CacheRecord{};
    outcome.record.sha256 = sha;
    outcome.record.label = label;
    outcome.record.parse_status = to_string(e.code());
    outcome.record.source_path = path.string();
  } catch (const std::exception&) {
    // Nothing typed may escape a worker thread; treat it as a bad file.
    outcome.record = CacheRecord{};
    outcome.record.sha256 = sha;
    outcome.record.label = label;
    outcome.record.parse_status = to_string(Errc::IoFailure);
    outcome.record.source_path = path.string();
  }
  return outcome;
}

}  // namespace detail

struct ExtractSummary {
  std::size_t scanned = 0;
  std::size_t ok = 0;
  std::size_t skipped = 0;     // parse failures, recorded with their kind
  std::size_t cache_hits = 0;  // content digest already known
  std::map<std::string, std::size_t> by_error;
  std::vector<CacheRecord> new_records;  // in canonical (path-sorted) order
  std::vector<std::string> warnings;

  void print(std::ostream& os) const {
    os << "scanned " << scanned << " files: " << ok << " ok, " << cache_hits << " cache hits, " << skipped
       << " skipped";
    if (!by_error.empty()) {
      os << " (";
      bool first = true;
      for (const auto& [kind, count] : by_error) {
        if (!first) os << ", ";
        os << kind << ": " << count;
        first = false;
      }
      os << ")";
    }
    os << "\n";
  }
};

// Walks the corpus directories, extracts features from every file not already
// cached, and appends the results to the cache. Output order is canonical
// (sorted by path) no matter how many workers run, so artifacts are
// byte-stable under --jobs.
inline ExtractSummary cmd_extract(const RunConfig& config, std::ostream& diag) {
  std::unordered_set<std::string> known;
  if (!config.cache_path.empty() && std::filesystem::exists(config.cache_path)) {
    for (const auto& rec : load_cache(config.cache_path)) {
      if (!rec.sha256.empty()) known.insert(rec.sha256);
    }
  }

  std::vector<detail::CorpusFile> files;
  if (!config.malware_dir.empty()) {
    auto m = detail::list_corpus_files(config.malware_dir, ClassLabel::Malware);
    files.insert(files.end(), m.begin(), m.end());
  }
  if (!config.benign_dir.empty()) {
    auto b = detail::list_corpus_files(config.benign_dir, ClassLabel::Benign);
    files.insert(files.end(), b.begin(), b.end());
  }
  std::sort(files.begin(), files.end(), [](const detail::CorpusFile& a, const detail::CorpusFile& b) {
    return a.path.generic_string() < b.path.generic_string();
  });

  std::vector<detail::FileOutcome> outcomes(files.size());
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(files.size(), config.jobs == 0 ? hw : config.jobs));
  std::atomic<std::size_t> done{0};
  std::mutex diag_mutex;
  auto note_progress = [&] {
    const std::size_t d = done.fetch_add(1) + 1;
    if (d % 1000 == 0 && d < files.size()) {
      std::lock_guard<std::mutex> lock(diag_mutex);
      diag << "processed " << d << "/" << files.size() << " files\n";
    }
  };
  if (workers > 1) {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      threads.emplace_back([&] {
        while (true) {
          const std::size_t i = next.fetch_add(1);
          if (i >= files.size()) return;
          outcomes[i] = detail::extract_file(files[i].path, files[i].label, known);
          note_progress();
        }
      });
    }
    for (auto& t : threads) t.join();
  } else {
    for (std::size_t i = 0; i < files.size(); ++i) {
      outcomes[i] = detail::extract_file(files[i].path, files[i].label, known);
      note_progress();
    }
  }

  ExtractSummary summary;
  summary.scanned = files.size();
  std::unordered_set<std::string> seen_this_run;
  for (auto& outcome : outcomes) {
    if (outcome.cache_hit) {
      ++summary.cache_hits;
      continue;
    }
    const std::string& sha = outcome.record.sha256;
    if (!sha.empty() && (known.contains(sha) || !seen_this_run.insert(sha).second)) {
      ++summary.cache_hits;  // duplicate content inside this run
      continue;
    }
    for (auto& w : outcome.warnings) summary.warnings.push_back(std::move(w));
    if (outcome.record.ok()) {
      ++summary.ok;
    } else {
      ++summary.skipped;
      ++summary.by_error[outcome.record.parse_status];
    }
    summary.new_records.push_back(std::move(outcome.record));
  }

  if (!config.cache_path.empty() && !summary.new_records.empty()) {
    append_cache(config.cache_path, summary.new_records);
  }
  summary.print(diag);
  return summary;
}

namespace detail {

inline FeatureVocabulary vocabulary_from_report(const std::filesystem::path& path) {
  const AnalysisReport report = read_report(path);
  std::vector<VocabularyEntry> entries;
  entries.reserve(report.scores.size());
  for (const auto& s : report.scores) entries.push_back(VocabularyEntry{s.feature, s.category});
  return FeatureVocabulary(std::move(entries));
}

}  // namespace detail

// The full analysis: load (or extract) features, sample, assemble, rank,
// report. Returns the report; also writes it to config.out_path when set and
// prints the top-N table to `out`.
inline AnalysisReport cmd_analyze(const RunConfig& config, std::ostream& out, std::ostream& diag) {
  std::vector<CacheRecord> records;
  Diagnostics diagnostics;

  if (config.cache_only) {
    if (config.cache_path.empty()) {
      throw Error(Errc::BadCache, "--features-from-cache-only needs a cache path");
    }
    records = load_cache(config.cache_path);
  } else if (!config.malware_dir.empty() || !config.benign_dir.empty()) {
    ExtractSummary summary = cmd_extract(config, diag);
    if (!config.cache_path.empty() && std::filesystem::exists(config.cache_path)) {
      records = load_cache(config.cache_path);
    } else {
      records = std::move(summary.new_records);
    }
    diagnostics.warnings = std::move(summary.warnings);
  } else if (!config.cache_path.empty()) {
    records = load_cache(config.cache_path);
  } else {
    throw Error(Errc::IoFailure, "nothing to analyze: no corpus directories and no cache");
  }

  // Pools keyed by content digest, one entry per distinct sample.
  std::vector<const CacheRecord*> pools[kClassCount];
  std::unordered_set<std::string> seen;
  for (const auto& rec : records) {
    if (!rec.ok()) {
      ++diagnostics.skipped_files;
      continue;
    }
    if (!seen.insert(rec.sha256).second) continue;
    pools[static_cast<std::size_t>(rec.label)].push_back(&rec);
  }
  for (auto& pool : pools) {
    std::sort(pool.begin(), pool.end(),
              [](const CacheRecord* a, const CacheRecord* b) { return a->sha256 < b->sha256; });
  }

  std::vector<LabeledRecord> selected;
  if (config.n_per_class.has_value()) {
    const std::size_t n = static_cast<std::size_t>(*config.n_per_class);
    for (std::size_t c = 0; c < kClassCount; ++c) {
      if (pools[c].size() < n) {
        throw Error(Errc::PoolTooSmall, std::string(to_string(static_cast<ClassLabel>(c))) + " pool has " +
                                            std::to_string(pools[c].size()) + " samples, need " + std::to_string(n));
      }
    }
    // Same recipe as sample_balanced: one mt19937_64 stream, malware first.
    std::mt19937_64 gen(config.seed);
    for (std::size_t c = 0; c < kClassCount; ++c) {
      for (std::size_t i : sample_pool_indices(pools[c].size(), n, gen)) {
        const CacheRecord* rec = pools[c][i];
        selected.push_back(LabeledRecord{rec->features(), rec->label, rec->sha256});
      }
    }
  } else {
    for (auto& pool : pools) {
      for (const CacheRecord* rec : pool) {
        selected.push_back(LabeledRecord{rec->features(), rec->label, rec->sha256});
      }
    }
  }
  if (selected.empty()) throw Error(Errc::EmptyVocabulary, "no usable records to analyze");

  AssembleOptions options;
  options.namespace_categories = config.namespace_categories;
  if (!config.vocab_from.empty()) options.vocabulary = detail::vocabulary_from_report(config.vocab_from);
  AssembledDataset assembled = assemble_dataset(selected, options);
  diagnostics.oov_count = assembled.oov_count;

  Dataset dataset = (config.min_support > 0 || config.category_filter.has_value())
                        ? filter_dataset(assembled.dataset, config.min_support, config.category_filter)
                        : std::move(assembled.dataset);

  AnalysisReport report;
  report.corpus = config.corpus_name;
  report.generated_at = report_timestamp();
  report.date_range = config.date_range;
  report.seed = config.seed;
  report.class_counts = dataset.class_counts;
  report.vocabulary_size = dataset.vocabulary.size();
  report.top_n = config.top_n;
  report.scores = rank_features(dataset);
  report.category_means = category_means(report.scores);
  report.diagnostics = std::move(diagnostics);

  if (!config.out_path.empty()) write_report(report, config.out_path);
  out << render_top_table(report, config.top_n, config.format);
  return report;
}

// Loads previously written reports and renders the corpus-by-category grid.
inline std::string cmd_compare(std::span<const std::filesystem::path> report_paths, TableFormat format) {
  std::vector<AnalysisReport> reports;
  reports.reserve(report_paths.size());
  for (const auto& path : report_paths) reports.push_back(read_report(path));
  return render_category_comparison(reports, format);
}

}  // namespace manifestig

#endif  // MANIFESTIG_PIPELINE_HPP
