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

#ifndef MANIFESTIG_APK_HPP
#define MANIFESTIG_APK_HPP

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include "manifestig/errors.hpp"
#include "manifestig/sha256.hpp"
#include "manifestig/zip.hpp"

namespace manifestig {

// Identity of one sample: where it came from and what its bytes hash to.
struct ApkSource {
  std::filesystem::path path;
  std::string sha256;
  std::uint64_t size_bytes = 0;

  bool operator==(const ApkSource&) const = default;
};

struct RawManifest {
  std::vector<std::uint8_t> bytes;
  ApkSource source;
};

// Real manifests top out in the hundreds of KiB; a ZIP entry claiming far
// more is a decompression bomb, not an app.
inline constexpr std::uint32_t kManifestEntryLimit = 16u * 1024 * 1024;

inline std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoFailure, "cannot open '" + path.string() + "'");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(Errc::IoFailure, "read error on '" + path.string() + "'");
  return bytes;
}

inline ApkSource identify_source(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  return ApkSource{path, sha256_hex(bytes), bytes.size()};
}

inline bool looks_like_zip(std::span<const std::uint8_t> bytes) {
  return bytes.size() >= 4 && bytes[0] == 'P' && bytes[1] == 'K' &&
         ((bytes[2] == 0x03 && bytes[3] == 0x04) || (bytes[2] == 0x05 && bytes[3] == 0x06));
}

// Pulls the exact AndroidManifest.xml payload out of an APK already in memory.
inline RawManifest open_apk_bytes(const std::filesystem::path& path, std::vector<std::uint8_t> file_bytes) {
  ApkSource source = identify_source(path, file_bytes);
  if (!looks_like_zip(file_bytes)) {
    throw Error(Errc::NotAZip, "'" + path.string() + "' has no ZIP magic");
  }
  try {
    ZipReader zip{std::span<const std::uint8_t>(file_bytes)};
    const ZipEntry* entry = zip.find("AndroidManifest.xml");
    if (entry == nullptr) {
      throw Error(Errc::NoManifestEntry, "'" + path.string() + "' contains no AndroidManifest.xml");
    }
    if (entry->uncompressed_size > kManifestEntryLimit) {
      throw Error(Errc::DecompressionFailure, "manifest entry claims " + std::to_string(entry->uncompressed_size) +
                                                  " bytes, over the " + std::to_string(kManifestEntryLimit) +
                                                  " byte limit");
    }
    return RawManifest{zip.read(*entry), std::move(source)};
  } catch (const Error& e) {
    if (e.message().find(path.string()) != std::string::npos) throw;
    throw Error(e.code(), "'" + path.string() + "': " + e.message());
  }
}

inline RawManifest open_apk(const std::filesystem::path& path) {
  return open_apk_bytes(path, read_file_bytes(path));
}

}  // namespace manifestig

#endif  // MANIFESTIG_APK_HPP
