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

#ifndef MANIFESTIG_CACHE_HPP
#define MANIFESTIG_CACHE_HPP

#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "manifestig/dataset.hpp"
#include "manifestig/errors.hpp"
#include "manifestig/manifest.hpp"

namespace manifestig {

// One extraction result. Lines are self-contained JSON objects so cache files
// can be concatenated; permissions and intents are stored sorted.
struct CacheRecord {
  std::string sha256;
  ClassLabel label = ClassLabel::Malware;
  std::string package;
  std::vector<std::string> permissions;
  std::vector<std::string> intents;
  std::string parse_status = "ok";  // "ok" or an error kind name
  std::string source_path;

  bool ok() const { return parse_status == "ok"; }

  ManifestFeatures features() const {
    ManifestFeatures f;
    f.app_id = package;
    f.permissions.insert(permissions.begin(), permissions.end());
    f.intents.insert(intents.begin(), intents.end());
    return f;
  }

  bool operator==(const CacheRecord&) const = default;
};

inline CacheRecord make_cache_record(const ManifestFeatures& features, ClassLabel label, const std::string& sha256,
                                     const std::string& source_path) {
  CacheRecord rec;
  rec.sha256 = sha256;
  rec.label = label;
  rec.package = features.app_id;
  rec.permissions.assign(features.permissions.begin(), features.permissions.end());
  rec.intents.assign(features.intents.begin(), features.intents.end());
  rec.source_path = source_path;
  return rec;
}

inline std::string cache_line(const CacheRecord& rec) {
  nlohmann::ordered_json j;
  j["sha256"] = rec.sha256;
  j["label"] = to_string(rec.label);
  j["package"] = rec.package;
  j["permissions"] = rec.permissions;
  j["intents"] = rec.intents;
  j["parse_status"] = rec.parse_status;
  j["source_path"] = rec.source_path;
  return j.dump();
}

inline CacheRecord parse_cache_line(const std::string& line, const std::string& origin) {
  CacheRecord rec;
  try {
    const auto j = nlohmann::json::parse(line);
    rec.sha256 = j.at("sha256").get<std::string>();
    const auto label = class_label_from(j.at("label").get<std::string>());
    if (!label) throw Error(Errc::BadCache, origin + ": unknown label");
    rec.label = *label;
    rec.package = j.at("package").get<std::string>();
    rec.permissions = j.at("permissions").get<std::vector<std::string>>();
    rec.intents = j.at("intents").get<std::vector<std::string>>();
    rec.parse_status = j.at("parse_status").get<std::string>();
    rec.source_path = j.at("source_path").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::BadCache, origin + ": " + e.what());
  }
  return rec;
}

inline std::vector<CacheRecord> load_cache(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoFailure, "cannot read cache '" + path.string() + "'");
  std::vector<CacheRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    records.push_back(parse_cache_line(line, path.string() + ":" + std::to_string(line_no)));
  }
  return records;
}

// Appends records; existing lines are never touched.
inline void append_cache(const std::filesystem::path& path, std::span<const CacheRecord> records) {
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) throw Error(Errc::IoFailure, "cannot write cache '" + path.string() + "'");
  for (const auto& rec : records) out << cache_line(rec) << '\n';
  out.flush();
  if (!out) throw Error(Errc::IoFailure, "write failed on cache '" + path.string() + "'");
}

}  // namespace manifestig

#endif  // MANIFESTIG_CACHE_HPP
