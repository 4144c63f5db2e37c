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

#ifndef MANIFESTIG_ERRORS_HPP
#define MANIFESTIG_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace manifestig {

// Every failure the library raises carries one of these kinds. Per-file kinds
// (NotAZip .. NotManifest) double as the parse_status written to the feature
// cache, so their spellings are part of the cache format.
enum class Errc {
  NotAZip,
  NoManifestEntry,
  DecompressionFailure,
  TruncatedChunk,
  StringIndexOutOfRange,
  NotXml,
  NotManifest,
  NameCollisionAcrossCategories,
  DuplicateSample,
  PoolTooSmall,
  LengthMismatch,
  ZeroTotal,
  EmptyVocabulary,
  BadCache,
  BadReport,
  IoFailure,
};

inline const char* to_string(Errc code) {
  switch (code) {
    case Errc::NotAZip: return "NotAZip";
    case Errc::NoManifestEntry: return "NoManifestEntry";
    case Errc::DecompressionFailure: return "DecompressionFailure";
    case Errc::TruncatedChunk: return "TruncatedChunk";
    case Errc::StringIndexOutOfRange: return "StringIndexOutOfRange";
    case Errc::NotXml: return "NotXml";
    case Errc::NotManifest: return "NotManifest";
    case Errc::NameCollisionAcrossCategories: return "NameCollisionAcrossCategories";
    case Errc::DuplicateSample: return "DuplicateSample";
    case Errc::PoolTooSmall: return "PoolTooSmall";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::ZeroTotal: return "ZeroTotal";
    case Errc::EmptyVocabulary: return "EmptyVocabulary";
    case Errc::BadCache: return "BadCache";
    case Errc::BadReport: return "BadReport";
    case Errc::IoFailure: return "IoFailure";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), message_(message) {}

  Errc code() const { return code_; }

  // The message without the kind prefix, for re-wrapping with more context.
  const std::string& message() const { return message_; }

 private:
  Errc code_;
  std::string message_;
};

// Process exit codes used by the CLI: 0 success, 1 usage, 2 data, 3 I/O.
inline int exit_code_for(Errc code) {
  return code == Errc::IoFailure ? 3 : 2;
}

}  // namespace manifestig

#endif  // MANIFESTIG_ERRORS_HPP
